"""Static-to-dynamic encoding.

Every location is renamed after its containment structure, and every update
prefix is renamed so that it can only meet targets whose structure keeps the
topology static.  Prefixes that could break the topology are disabled by
renaming them to `err`.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable

from .core import (ERR, HOLE, NIL, DenTree, Hole, In, Loc, Nil, Out, Par, Repl, Sum, Term,
                   TermError, Update, canonicalize, choice, classify, components, cstr, cstrs,
                   numap, numholes, numph, par, split_static_payload)


class EncodingError(TermError):
    pass


def kappa_name(d: DenTree) -> str:
    """Name attached to a single-child denotation.

    A bare location a gets `k$a`; anything else gets a content digest, which
    starts with a digit so it can never clash with a `k$<name>` form.
    """
    top = d.children[0] if len(d.children) == 1 else None
    if top is not None and not top.children:
        return "k$" + top.label
    return "k$0" + hashlib.sha256(d.key.encode()).hexdigest()[:12]


@dataclass
class NameRegistry:
    table: dict = field(default_factory=dict)  # DenTree -> name

    def __getitem__(self, d: DenTree) -> str:
        name = self.table.get(d)
        return name if name is not None else kappa_name(d)

    def by_root(self, a: str) -> list[str]:
        """Names of the registered denotations whose only top location is a."""
        return sorted(n for d, n in self.table.items() if d.single_root() == a)


def build_registry(s: Iterable[DenTree]) -> NameRegistry:
    reg = NameRegistry()
    seen: dict[str, DenTree] = {}
    for d in sorted(set(s), key=lambda d: d.key):
        if ERR in d.names():
            raise EncodingError("the reserved name 'err' occurs in a containment structure")
        if len(d.children) != 1:
            raise EncodingError("registry entries must be single-child denotations")
        name = kappa_name(d)
        if name in seen and seen[name] != d:
            raise EncodingError(f"kappa digest collision on {name}")
        seen[name] = d
        reg.table[d] = name
    return reg


def kappa_a(a: str) -> str:
    return "k$" + a


def dyn(p: Term, s: Iterable[DenTree] | None = None, r: NameRegistry | None = None,
        check: bool = True) -> Term:
    p = canonicalize(p)
    if check and classify(p).topology != "static":
        raise EncodingError("dyn expects a process with static topology")
    if s is None:
        s = cstrs(p)
    s = set(s)
    if check and not cstrs(p) <= s:
        raise EncodingError("the denotation set does not cover the process")
    if r is None:
        r = build_registry(s)
    return _Encoder(r).term(p)


class _Encoder:
    def __init__(self, reg: NameRegistry):
        self.reg = reg

    def term(self, t: Term) -> Term:
        if isinstance(t, (Nil, Hole)):
            return t
        if isinstance(t, Loc):
            return Loc(self.reg[cstr(t)], self.term(t.body))
        if isinstance(t, Par):
            return par(self.term(c) for c in t.children)
        if isinstance(t, Sum):
            branches = []
            for p, c in t.branches:
                branches.extend(self.prefixed(p, c))
            return choice(branches)
        if isinstance(t, Repl):
            return par(Repl(p, c) for p, c in self.prefixed(t.prefix, t.body))
        raise TypeError(t)

    def prefixed(self, p, c) -> list:
        cont = self.term(c)
        if not isinstance(p, Update):
            return [(p, cont)]
        split = split_static_payload(p.pattern)
        if split is None or split[0].name != p.name:
            raise EncodingError(f"update on {p.name} is not statically shaped")
        target, rest = split
        u = target.body
        holes, ph, ap = numholes(u), numph(u), numap(u)
        du, da = self.term(u), self.term(rest) if not _empty(rest, p.pattern) else None

        def pattern(k):
            inner = Loc(k, du)
            return inner if da is None else par(inner, da)

        if holes == 0:
            kappa = self.reg[cstr(target)]
            return [(Update(kappa, pattern(kappa)), cont)]
        if ap == 0 and (holes > 1 or ph > 0):
            k = kappa_a(p.name)
            return [(Update(k, pattern(k)), cont)]
        if ap == 0:
            return [(Update(k, pattern(k)), cont) for k in self.reg.by_root(p.name)]
        return [(Update(ERR, NIL), cont)]


def _empty(rest: Term, whole: Term) -> bool:
    # split_static_payload returns NIL for a bare a[U]; tell it from an explicit 0
    return len(components(whole)) == 1


def dyn_cluster(c):
    """Encode the initial process and every modification against one registry."""
    from .cluster import Cluster

    members = [c.initial, *c.mods]
    s = set()
    for m in members:
        s |= cstrs(canonicalize(m))
    reg = build_registry(s)
    enc = lambda m: dyn(m, s, reg)
    return Cluster(enc(c.initial), [enc(m) for m in c.mods])
