"""Term kernel for the calculus of adaptable processes.

Terms are immutable and carry a precomputed serialization key; equality and
hashing go through that key.  Parallel composition built with `par` is kept
flattened and sorted, so terms produced by the library are canonical.
"""

from __future__ import annotations

from functools import lru_cache

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
KAPPA_RE = re.compile(r"k\$[A-Za-z0-9_]+")
ERR = "err"


class TermError(ValueError):
    pass


def check_name(name: str, encoded: bool = False) -> str:
    """Validate a channel or location name.

    With encoded=True the reserved name and the kappa names produced by the
    static-to-dynamic encoding are accepted too.
    """
    if NAME_RE.fullmatch(name):
        if name == ERR and not encoded:
            raise TermError("name 'err' is reserved")
        return name
    if encoded and KAPPA_RE.fullmatch(name):
        return name
    raise TermError(f"invalid name {name!r}")


# -- prefixes ---------------------------------------------------------------

class Prefix:
    __slots__ = ("name", "key")

    def __eq__(self, other):
        return isinstance(other, Prefix) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"{type(self).__name__}({self.key})"


class In(Prefix):
    __slots__ = ()

    def __init__(self, name: str):
        self.name = name
        self.key = "i" + name


class Out(Prefix):
    __slots__ = ()

    def __init__(self, name: str):
        self.name = name
        self.key = "o" + name


class Update(Prefix):
    __slots__ = ("pattern",)

    def __init__(self, name: str, pattern: "Term"):
        self.name = name
        self.pattern = pattern
        self.key = "u" + name + "{" + pattern.key + "}"


# -- terms ------------------------------------------------------------------

class Term:
    __slots__ = ("key", "_hash")

    def __eq__(self, other):
        return isinstance(other, Term) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        from .syntax import render
        return f"<{render(self)}>"

    def _seal(self, key: str):
        self.key = key
        self._hash = hash(key)


class Nil(Term):
    __slots__ = ()

    def __init__(self):
        self._seal("0")


class Hole(Term):
    __slots__ = ()

    def __init__(self):
        self._seal("@")


NIL = Nil()
HOLE = Hole()


class Par(Term):
    __slots__ = ("children",)

    def __init__(self, children: Iterable[Term]):
        children = tuple(children)
        if len(children) < 2:
            raise TermError("Par needs at least two children")
        self.children = children
        self._seal("P(" + ",".join(c.key for c in children) + ")")


class Loc(Term):
    __slots__ = ("name", "body")

    def __init__(self, name: str, body: Term):
        self.name = name
        self.body = body
        self._seal("L" + name + "[" + body.key + "]")


class Sum(Term):
    __slots__ = ("branches",)

    def __init__(self, branches: Iterable[tuple[Prefix, Term]]):
        branches = tuple(branches)
        if not branches:
            raise TermError("Sum needs at least one branch; use NIL")
        self.branches = branches
        self._seal("S(" + ",".join(p.key + "." + t.key for p, t in branches) + ")")


class Repl(Term):
    __slots__ = ("prefix", "body")

    def __init__(self, prefix: Prefix, body: Term):
        self.prefix = prefix
        self.body = body
        self._seal("R(" + prefix.key + "." + body.key + ")")


# -- smart constructors -----------------------------------------------------

def components(t: Term) -> tuple[Term, ...]:
    return t.children if isinstance(t, Par) else (t,)


def par(*items) -> Term:
    """Canonical parallel composition; accepts terms or iterables of terms."""
    flat = []
    for it in items:
        if isinstance(it, Term):
            flat.extend(components(it))
        else:
            for t in it:
                flat.extend(components(t))
    if not flat:
        return NIL
    if len(flat) == 1:
        return flat[0]
    flat.sort(key=lambda t: t.key)
    return Par(flat)


def choice(branches) -> Term:
    branches = tuple(branches)
    return Sum(branches) if branches else NIL


def pre(prefix: Prefix, cont: Term = NIL) -> Term:
    return Sum(((prefix, cont),))


def inp(a, cont=NIL):
    return pre(In(a), cont)


def out(a, cont=NIL):
    return pre(Out(a), cont)


def upd(a, pattern, cont=NIL):
    return pre(Update(a, pattern), cont)


def repl(prefix: Prefix, body: Term = NIL) -> Term:
    return Repl(prefix, body)


def loc(a, body) -> Term:
    return Loc(a, body)


def is_seq(t: Term) -> bool:
    """Sequential terms: the leaves of tree denotations."""
    return isinstance(t, (Sum, Repl, Nil))


# -- canonical forms --------------------------------------------------------

def _canon_prefix(p: Prefix) -> Prefix:
    if isinstance(p, Update):
        return Update(p.name, canonicalize(p.pattern))
    return p


@lru_cache(maxsize=1 << 18)
def canonicalize(t: Term) -> Term:
    if isinstance(t, Par):
        return par(canonicalize(c) for c in t.children)
    if isinstance(t, Loc):
        return Loc(t.name, canonicalize(t.body))
    if isinstance(t, Sum):
        return Sum((_canon_prefix(p), canonicalize(c)) for p, c in t.branches)
    if isinstance(t, Repl):
        return Repl(_canon_prefix(t.prefix), canonicalize(t.body))
    return t


def congruent(p: Term, q: Term) -> bool:
    return canonicalize(p) == canonicalize(q)


# -- hole filling and counts ------------------------------------------------

def fill(u: Term, q: Term) -> Term:
    """Replace every hole of u that is not inside an update payload by q."""
    if isinstance(u, Hole):
        return q
    if isinstance(u, Par):
        return par(fill(c, q) for c in u.children)
    if isinstance(u, Loc):
        return Loc(u.name, fill(u.body, q))
    if isinstance(u, Sum):
        return Sum((p, fill(c, q)) for p, c in u.branches)
    if isinstance(u, Repl):
        return Repl(u.prefix, fill(u.body, q))
    return u


def numap(u: Term) -> int:
    if isinstance(u, Loc):
        return 1 + numap(u.body)
    if isinstance(u, Par):
        return sum(numap(c) for c in u.children)
    return 0


def numholes(u: Term) -> int:
    if isinstance(u, Hole):
        return 1
    if isinstance(u, Par):
        return sum(numholes(c) for c in u.children)
    if isinstance(u, Loc):
        return numholes(u.body)
    if isinstance(u, Sum):
        return sum(numholes(c) for _, c in u.branches)
    if isinstance(u, Repl):
        return numholes(u.body)
    return 0


def numph(u: Term) -> int:
    if isinstance(u, Par):
        return sum(numph(c) for c in u.children)
    if isinstance(u, Loc):
        return numph(u.body)
    if isinstance(u, Sum):
        return sum(numholes(c) for _, c in u.branches)
    if isinstance(u, Repl):
        return numholes(u.body)
    return 0


def counts(u: Term) -> tuple[int, int, int]:
    return numap(u), numholes(u), numph(u)


# -- containment structures -------------------------------------------------

class DenTree:
    """Containment-structure tree: a label and an unordered list of children."""

    __slots__ = ("label", "children", "key", "_hash")

    def __init__(self, label: str | None, children: Iterable["DenTree"] = ()):
        self.label = label
        self.children = tuple(sorted(children, key=lambda d: d.key))
        self.key = (label or "") + "(" + ",".join(c.key for c in self.children) + ")"
        self._hash = hash(self.key)

    def __eq__(self, other):
        return isinstance(other, DenTree) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"DenTree({'ε' if self.label is None else self.label}{self.children or ''})"

    def names(self) -> set[str]:
        out = set() if self.label is None else {self.label}
        for c in self.children:
            out |= c.names()
        return out

    def single_root(self) -> str | None:
        """Name of the only child when the tree is single-child."""
        return self.children[0].label if len(self.children) == 1 else None


def _den_children(t: Term) -> list[DenTree]:
    if isinstance(t, Loc):
        return [DenTree(t.name, _den_children(t.body))]
    if isinstance(t, Par):
        out = []
        for c in t.children:
            out.extend(_den_children(c))
        return out
    return []


def cstr(p: Term) -> DenTree:
    return DenTree(None, _den_children(p))


def loc_subterms(t: Term, payloads: bool = True) -> Iterator[Loc]:
    """Every location subterm, including those under prefixes and in payloads."""
    if isinstance(t, Loc):
        yield t
        yield from loc_subterms(t.body, payloads)
    elif isinstance(t, Par):
        for c in t.children:
            yield from loc_subterms(c, payloads)
    elif isinstance(t, Sum):
        for p, c in t.branches:
            if payloads and isinstance(p, Update):
                yield from loc_subterms(p.pattern, payloads)
            yield from loc_subterms(c, payloads)
    elif isinstance(t, Repl):
        if payloads and isinstance(t.prefix, Update):
            yield from loc_subterms(t.prefix.pattern, payloads)
        yield from loc_subterms(t.body, payloads)


def cstrs(p: Term) -> set[DenTree]:
    return {cstr(l) for l in loc_subterms(p)}


# -- prefixes and payloads --------------------------------------------------

def prefixes(t: Term) -> Iterator[Prefix]:
    """All prefixes occurring in t, including inside payloads."""
    if isinstance(t, Par):
        for c in t.children:
            yield from prefixes(c)
    elif isinstance(t, Loc):
        yield from prefixes(t.body)
    elif isinstance(t, Sum):
        for p, c in t.branches:
            yield p
            if isinstance(p, Update):
                yield from prefixes(p.pattern)
            yield from prefixes(c)
    elif isinstance(t, Repl):
        yield t.prefix
        if isinstance(t.prefix, Update):
            yield from prefixes(t.prefix.pattern)
        yield from prefixes(t.body)


def payloads(t: Term) -> list[Term]:
    return [p.pattern for p in prefixes(t) if isinstance(p, Update)]


def names(t: Term) -> set[str]:
    out = {p.name for p in prefixes(t)}
    out.update(l.name for l in loc_subterms(t))
    return out


# -- classification ---------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    topology: str  # "static" or "dynamic-only"
    pattern: int | None  # 1, 2, 3 or None for ill-formed terms

    def __str__(self):
        return f"topology={self.topology} pattern={self.pattern if self.pattern else 'none'}"


def _holes_under_prefix(u: Term) -> bool:
    return numph(u) > 0


def _pattern3(u: Term) -> bool:
    # U ::= a[U] | U || P | hole
    if isinstance(u, Hole):
        return True
    if isinstance(u, Loc):
        return _pattern3(u.body)
    if isinstance(u, Par):
        holed = [c for c in u.children if numholes(c) > 0]
        return len(holed) == 1 and _pattern3(holed[0])
    return False


def pattern_class(u: Term) -> int:
    if _pattern3(u):
        return 3
    if not _holes_under_prefix(u):
        return 2
    return 1


def _static_A(t: Term, holes_ok: bool) -> bool:
    if isinstance(t, Nil):
        return True
    if isinstance(t, Hole):
        return holes_ok
    if isinstance(t, Par):
        return all(_static_A(c, holes_ok) for c in t.children)
    if isinstance(t, Sum):
        return all(_static_prefix(p) and _static_A(c, holes_ok) for p, c in t.branches)
    if isinstance(t, Repl):
        return _static_prefix(t.prefix) and _static_A(t.body, holes_ok)
    return False


def _static_P(t: Term, holes_ok: bool) -> bool:
    if isinstance(t, Loc):
        return _static_P(t.body, holes_ok)
    if isinstance(t, Par):
        return all(_static_P(c, holes_ok) for c in t.children)
    return _static_A(t, holes_ok)


def split_static_payload(u: Term) -> tuple[Loc, Term] | None:
    """Split a payload of shape a[U'] || A into (a[U'], A); None otherwise."""
    locs = [c for c in components(u) if isinstance(c, Loc)]
    if len(locs) != 1:
        return None
    rest = [c for c in components(u) if c is not locs[0]]
    return locs[0], par(rest)


def _static_prefix(p: Prefix) -> bool:
    if not isinstance(p, Update):
        return True
    split = split_static_payload(p.pattern)
    if split is None:
        return False
    target, rest = split
    if target.name != p.name:
        return False
    others = [c for c in components(p.pattern) if c is not target]
    if not all(_static_A(c, False) for c in others):
        return False
    return _static_P(target.body, True)


def is_static(t: Term) -> bool:
    return _static_P(t, False)


def classify(p: Term) -> Classification:
    topology = "static" if is_static(p) else "dynamic-only"
    if numholes(p) > 0:
        return Classification(topology, None)
    levels = [pattern_class(u) for u in payloads(p)]
    return Classification(topology, min(levels, default=3))


# -- inventories ------------------------------------------------------------

def subp(t: Term) -> set[Term]:
    """Sequential subprocesses, per the clause-by-clause definition."""
    out: set[Term] = set()
    _subp(t, out)
    return out


def _subp_prefix(p: Prefix, out: set):
    if isinstance(p, Update):
        _subp(p.pattern, out)


def _subp(t: Term, out: set):
    if isinstance(t, Nil):
        out.add(t)
    elif isinstance(t, Par):
        for c in t.children:
            _subp(c, out)
    elif isinstance(t, Loc):
        _subp(t.body, out)
    elif isinstance(t, Sum):
        out.add(t)
        for p, c in t.branches:
            if len(t.branches) > 1:
                out.add(Sum(((p, c),)))
            _subp_prefix(p, out)
            _subp(c, out)
    elif isinstance(t, Repl):
        out.add(t)
        _subp_prefix(t.prefix, out)
        _subp(t.body, out)


def cnames(t: Term) -> set[str]:
    return {l.name for l in loc_subterms(t)}


@dataclass
class Inventory:
    subp: set
    cnames: set
    upd: set
    par: list


def inventories(s: Iterable[Term]) -> Inventory:
    s = [canonicalize(t) for t in s]
    inv = Inventory(set(), set(), set(), [])
    for t in s:
        inv.subp |= subp(t)
        inv.cnames |= cnames(t)
        inv.upd.update(payloads(t))
        inv.par.append(list(components(t)))
    return inv


def drop_nil(t: Term) -> Term:
    """Remove inert 0 components from every parallel composition.

    P | 0 and P are strongly bisimilar, so barb-based properties are
    invariant under this collapse; it is used to fold infinite families of
    states that differ only in accumulated 0 components.
    """
    if isinstance(t, Par):
        kept = [drop_nil(c) for c in t.children]
        kept = [c for c in kept if not isinstance(c, Nil)]
        return par(kept) if kept else NIL
    if isinstance(t, Loc):
        return Loc(t.name, drop_nil(t.body))
    if isinstance(t, Sum):
        return Sum((_drop_prefix(p), drop_nil(c)) for p, c in t.branches)
    if isinstance(t, Repl):
        return Repl(_drop_prefix(t.prefix), drop_nil(t.body))
    return t


def _drop_prefix(p: Prefix) -> Prefix:
    if isinstance(p, Update):
        return Update(p.name, drop_nil(p.pattern))
    return p
