"""Bounded adaptation by backward reachability over tree denotations.

The tree of a process has an unlabelled root, one leaf per sequential
component and one `a[ ]` node per location.  Processes are ordered by tree
embeddings that preserve labels, ancestry and minimal common ancestors; the
order is a wqo compatible with the dynamic reductions of the fragment with
no holes under prefixes, so upward-closed sets have finite bases and the set
of processes that can reach k consecutive barbed states is computable.

Predecessor bases are built constructively: pick the redex leaves from the
sequential subprocesses of the cluster, choose which part of the target the
step creates, strip it, re-insert the redex at every minimal position, and
keep the candidates that really step to something above the target.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .core import (HOLE, Hole, In, Loc, Nil, Out, Par, Repl, Sum, Term, TermError, Update,
                   canonicalize, classify, components, is_seq, loc_subterms, par, payloads,
                   subp as subp_of)
from .semantics import DYNAMIC, STATIC, leaf_barb, parse_barb, successors
from .syntax import render


class ClassError(TermError):
    pass


# -- tree denotations -------------------------------------------------------

@dataclass(frozen=True)
class ProcTree:
    label: str                  # "ε", a sequential term rendering, or "a[ ]"
    children: tuple = ()

    def __str__(self):
        if not self.children:
            return self.label
        return self.label + "{" + ", ".join(map(str, self.children)) + "}"


def _tree_item(t: Term) -> ProcTree:
    if isinstance(t, Loc):
        return ProcTree(t.name + "[ ]", tuple(sorted((_tree_item(c) for c in components(t.body)),
                                                     key=str)))
    return ProcTree(render(t))


def nset(s: Iterable[Term]) -> tuple[set, set]:
    """Node labels available over s: sequential subprocesses and location names."""
    seqs, names = set(), set()
    for t in s:
        t = canonicalize(t)
        seqs |= subp_of(t)
        names |= {l.name for l in loc_subterms(t)}
    return seqs, names


def tree_of(p: Term, s: Iterable[Term] | None = None) -> ProcTree:
    p = canonicalize(p)
    if s is not None:
        seqs, names = nset(s)
        for t in _items(p):
            if isinstance(t, Loc):
                if t.name not in names:
                    raise ValueError(f"location {t.name} outside nset")
            elif t not in seqs:
                raise ValueError(f"leaf {render(t)} outside nset")
    return ProcTree("ε", tuple(sorted((_tree_item(c) for c in components(p)), key=str)))


def _items(t: Term):
    for c in components(t):
        yield c
        if isinstance(c, Loc):
            yield from _items(c.body)


# -- the embedding order ----------------------------------------------------

@lru_cache(maxsize=None)
def size(t: Term) -> int:
    if isinstance(t, Loc):
        return 1 + sum(size(c) for c in components(t.body))
    if isinstance(t, Par):
        return sum(size(c) for c in t.children)
    return 1


@lru_cache(maxsize=2_000_000)
def sub(x: Term, y: Term) -> bool:
    """x embeds somewhere in the subtree rooted at y."""
    if size(x) > size(y):
        return False
    if emb(x, y):
        return True
    return isinstance(y, Loc) and any(sub(x, c) for c in components(y.body))


@lru_cache(maxsize=2_000_000)
def emb(x: Term, y: Term) -> bool:
    """x embeds with its root mapped onto y's root."""
    if isinstance(x, Loc):
        return (isinstance(y, Loc) and x.name == y.name
                and match(components(x.body), components(y.body)))
    return x == y


def match(xs, ys) -> bool:
    """Each x goes to a distinct y-subtree (bipartite matching, augmenting paths)."""
    if len(xs) > len(ys):
        return False
    if sum(size(x) for x in xs) > sum(size(y) for y in ys):
        return False
    adj = [[j for j, y in enumerate(ys) if sub(x, y)] for x in xs]
    owner = [-1] * len(ys)

    def augment(i, seen):
        for j in adj[i]:
            if j in seen:
                continue
            seen.add(j)
            if owner[j] < 0 or augment(owner[j], seen):
                owner[j] = i
                return True
        return False

    order = sorted(range(len(xs)), key=lambda i: len(adj[i]))
    return all(adj[i] and augment(i, set()) for i in order)


def embeds(p: Term, q: Term, s=None) -> bool:
    """p ⪯ q."""
    return _below(canonicalize(p), canonicalize(q))


def _below(p: Term, q: Term) -> bool:
    # both canonical; label multisets give a cheap necessary condition
    lp, lq = labels(p), labels(q)
    if any(lq.get(k, 0) < n for k, n in lp.items()):
        return False
    return match(components(p), components(q))


@lru_cache(maxsize=1 << 18)
def labels(t: Term) -> dict:
    """Multiset of node labels: leaf keys and location names."""
    out: dict = {}
    stack = list(components(t))
    while stack:
        x = stack.pop()
        k = ("L", x.name) if isinstance(x, Loc) else x.key
        out[k] = out.get(k, 0) + 1
        if isinstance(x, Loc):
            stack.extend(components(x.body))
    return out


def minimize(ts: Iterable[Term]) -> list[Term]:
    """Keep the ⪯-minimal elements; among equivalent ones the canonically smallest."""
    uniq = sorted(set(ts), key=lambda t: (size(t), t.key))
    kept: list[Term] = []
    for t in uniq:
        if not any(_below(k, t) for k in kept):
            kept.append(t)
    return sorted(kept, key=lambda t: t.key)


def covered(t: Term, basis: Iterable[Term]) -> bool:
    return any(_below(b, t) for b in basis)


# -- syntactic contexts and decompositions ----------------------------------

class CtxHole(Term):
    """Context hole [·] of a syntactic context (index = position order)."""

    __slots__ = ("index",)

    def __init__(self, index: int):
        self.index = index
        self._seal(f"[.{index}]")


def _groups(t: Term, path=()):
    """(path, indices) for every nonempty group of siblings at every node."""
    kids = components(t)
    for r in range(1, len(kids) + 1):
        for idx in itertools.combinations(range(len(kids)), r):
            yield path, idx
    for i, c in enumerate(kids):
        if isinstance(c, Loc):
            yield from _groups(c.body, path + (i,))


def _nested(g1, g2) -> bool:
    (p1, i1), (p2, i2) = g1, g2
    if p1 == p2:
        return bool(set(i1) & set(i2))
    for (pa, ia), (pb, _) in ((g1, g2), (g2, g1)):
        if len(pb) > len(pa) and pb[:len(pa)] == pa and pb[len(pa)] in ia:
            return True
    return False


def _plug(t: Term, groups) -> tuple[Term, list]:
    """Replace each group by a context hole; returns (context, removed parts)."""
    removed = [None] * len(groups)

    def walk(term, path):
        kids = list(components(term))
        out = []
        here = {k: gi for gi, (p, idx) in enumerate(groups) if p == path for k in idx}
        placed = set()
        for i, c in enumerate(kids):
            if i in here:
                gi = here[i]
                if gi not in placed:
                    placed.add(gi)
                    out.append(CtxHole(gi))
                    removed[gi] = par(kids[k] for k in groups[gi][1])
                continue
            if isinstance(c, Loc):
                c = Loc(c.name, walk(c.body, path + (i,)))
            out.append(c)
        return Par(out) if len(out) > 1 else out[0]

    return walk(t, ()), removed


def decompositions(p: Term) -> list[tuple[Term, tuple]]:
    """All (K, R) with p = K[R], at most two holes at parallel or located positions."""
    p = canonicalize(p)
    out = [(p, ())]
    gs = list(_groups(p))
    for g in gs:
        out.append(_renumber(_plug(p, [g])))
    for g1, g2 in itertools.combinations(gs, 2):
        if not _nested(g1, g2):
            out.append(_renumber(_plug(p, [g1, g2])))
    return out


def _renumber(res):
    k, removed = res
    return k, tuple(removed)


def extensions(k: Term) -> list[Term]:
    """K, K | [·] and K | [·] | [·], restricted to at most two holes."""
    n = sum(1 for _ in _ctx_holes(k))
    out = [k]
    if n <= 1:
        out.append(Par([k, CtxHole(n)]))
    if n == 0:
        out.append(Par([k, CtxHole(0), CtxHole(1)]))
    return out


def _ctx_holes(t):
    if isinstance(t, CtxHole):
        yield t
    elif isinstance(t, Par):
        for c in t.children:
            yield from _ctx_holes(c)
    elif isinstance(t, Loc):
        yield from _ctx_holes(t.body)


def plug(k: Term, parts) -> Term:
    """K[G1, G2]: fill the context holes."""
    if isinstance(k, CtxHole):
        return parts[k.index]
    if isinstance(k, Par):
        return par(plug(c, parts) for c in k.children)
    if isinstance(k, Loc):
        return Loc(k.name, plug(k.body, parts))
    return k


# -- mutable skeletons for candidate construction ---------------------------

class _Node:
    __slots__ = ("name", "kids", "new")

    def __init__(self, name, kids, new=False):
        self.name = name
        self.kids = kids
        self.new = new


def _to_node(t: Term, name=None) -> _Node:
    kids = [(_to_node(c.body, c.name) if isinstance(c, Loc) else c) for c in components(t)]
    return _Node(name, kids)


def _clone(n: _Node, memo: dict) -> _Node:
    c = _Node(n.name, [], n.new)
    memo[id(n)] = c
    c.kids = [_clone(k, memo) if isinstance(k, _Node) else k for k in n.kids]
    return c


def _to_term(n: _Node) -> Term | None:
    kids = []
    for k in n.kids:
        if isinstance(k, _Node):
            k = _to_term(k)
            if k is None:
                return None
        kids.append(k)
    if not kids:
        return None
    body = par(kids)
    return body if n.name is None else Loc(n.name, body)


def _item_term(k) -> Term:
    return _to_term(k) if isinstance(k, _Node) else k


def _walk(n: _Node):
    yield n
    for k in n.kids:
        if isinstance(k, _Node):
            yield from _walk(k)


def _anchor_zone(anchor: _Node):
    """The anchor plus the fresh wrappers hanging (transitively) below it."""
    yield anchor
    for k in anchor.kids:
        if isinstance(k, _Node) and k.new:
            yield from _anchor_zone(k)


def _insertions(root: _Node, anchor: _Node | None, item, wrappers):
    """Copies of the tree with `item` inserted at every admissible position.

    Returns (new_root, memo) pairs; memo maps ids of old nodes to copies.
    """
    zone = list(_walk(root)) if anchor is None else list(_anchor_zone(anchor))
    out = []
    for n in zone:
        memo = {}
        r = _clone(root, memo)
        memo[id(n)].kids.append(item)
        out.append((r, memo))
        for i in range(len(n.kids)):
            for w in wrappers:
                memo = {}
                r = _clone(root, memo)
                m = memo[id(n)]
                m.kids[i] = _Node(w, [m.kids[i], item], new=True)
                out.append((r, memo))
    return out


# -- the inventory used by the backward search ------------------------------

_ROOT = ("root",)


def _pairs(t: Term, anc: tuple, out: list, holes: list | None = None):
    """(ancestor, label) pairs of t placed below the locations in anc.

    Locations are labelled ("loc", a), leaves by themselves; with `holes`,
    the ancestor tuples of hole positions are collected too."""
    if isinstance(t, Par):
        for c in t.children:
            _pairs(c, anc, out, holes)
    elif isinstance(t, Loc):
        lab = ("loc", t.name)
        out.extend((x, lab) for x in anc)
        _pairs(t.body, anc + (lab,), out, holes)
    elif isinstance(t, Hole):
        if holes is not None:
            holes.append(anc)
    else:
        out.extend((x, t) for x in anc)


class Reach:
    """Over-approximation of which labels can occur below which locations in
    the states reachable from instances of a cluster.

    Embeddings preserve labels and ancestry, so a basis element with an
    ancestor pair outside this relation lies below no reachable state."""

    def __init__(self, members: Iterable[Term]):
        below: dict = {_ROOT: set()}
        facts = []
        for m in members:
            _pairs(canonicalize(m), (_ROOT,), facts)
        self.below = below
        self._absorb(facts)
        changed = True
        while changed:
            changed = False
            for x in list(below):
                for y in list(below[x]):
                    if isinstance(y, tuple) and y in below and not below[y] <= below[x]:
                        below[x] |= below[y]
                        changed = True
            for leaf in [y for y in below[_ROOT] if isinstance(y, (Sum, Repl))]:
                anc = tuple(x for x in below if leaf in below[x])
                for p, cont in (leaf.branches if isinstance(leaf, Sum) else
                                ((leaf.prefix, leaf.body),)):
                    facts = []
                    _pairs(cont, anc, facts)
                    if isinstance(p, Update):
                        lab = ("loc", p.name)
                        holes = []
                        _pairs(p.pattern, tuple(x for x in below if lab in below[x]),
                               facts, holes)
                        inner = below.get(lab, ())
                        facts += [(x, y) for h in holes for x in h for y in inner]
                    changed |= self._absorb(facts)
        self._memo: dict = {}

    def _absorb(self, facts) -> bool:
        grew = False
        for x, y in facts:
            row = self.below.setdefault(x, set())
            if y not in row:
                row.add(y)
                grew = True
            if isinstance(y, tuple):
                self.below.setdefault(y, set())
        return grew

    def possible(self, q: Term) -> bool:
        if q not in self._memo:
            facts = []
            _pairs(q, (_ROOT,), facts)
            self._memo[q] = all(y in self.below.get(x, ()) for x, y in facts)
        return self._memo[q]


class Space:
    """Sequential subprocesses, names and redex leaves of a set S.

    With `reach`, candidates that cannot lie below a reachable state are
    dropped."""

    def __init__(self, s: Iterable[Term], reach: Reach | None = None):
        self.reach = reach
        self.s = [canonicalize(t) for t in s]
        seqs, names = nset(self.s)
        self.subp = sorted(seqs, key=lambda t: t.key)
        self.cnames = sorted(names)
        self.ins, self.outs, self.upds = [], [], []
        for leaf in self.subp:
            for p, created in _leaf_actions(leaf):
                if isinstance(p, In):
                    self.ins.append((leaf, p.name, created))
                elif isinstance(p, Out):
                    self.outs.append((leaf, p.name, created))
                else:
                    self.upds.append((leaf, p.name, p.pattern, created))


def _leaf_actions(leaf: Term):
    if isinstance(leaf, Sum):
        for p, c in leaf.branches:
            yield p, list(components(c))
    elif isinstance(leaf, Repl):
        yield leaf.prefix, list(components(leaf.body)) + [leaf]


# -- symbolic embedding into a pattern and upper bounds of forests ----------

def _sym_match(xs, ys):
    """Ways of embedding the forest xs into the pattern forest ys.

    Yields lists of groups; each group is the part of xs that has to embed
    into one copy of the hole filler."""
    holes = [j for j, y in enumerate(ys) if isinstance(y, Hole)]
    solid = [j for j, y in enumerate(ys) if not isinstance(y, Hole)]

    def go(i, used, groups):
        if i == len(xs):
            yield [g for g in groups if g]
            return
        x = xs[i]
        for j in solid:
            if j in used:
                continue
            for req in _sym_sub(x, ys[j]):
                yield from (r + req for r in go(i + 1, used | {j}, groups))
        for h in range(len(holes)):
            g2 = [list(g) for g in groups]
            g2[h].append(x)
            yield from go(i + 1, used, g2)

    yield from go(0, frozenset(), [[] for _ in holes])


def _sym_sub(x, y):
    yield from _sym_emb(x, y)
    if isinstance(y, Loc):
        for c in components(y.body):
            if isinstance(c, Hole):
                yield [[x]]
            else:
                yield from _sym_sub(x, c)


def _sym_emb(x, y):
    if isinstance(x, Loc):
        if isinstance(y, Loc) and x.name == y.name:
            yield from _sym_match(components(x.body), components(y.body))
    elif x == y:
        yield []


def _min_forests(fs):
    uniq = sorted({tuple(sorted(f, key=lambda t: t.key)) for f in fs},
                  key=lambda f: (sum(size(t) for t in f), [t.key for t in f]))
    kept = []
    for f in uniq:
        if not any(match(k, f) for k in kept):
            kept.append(f)
    return kept


def _tree_join(f: Term, g: Term, wrappers) -> list[Term]:
    if f == g:
        return [f]
    out = []
    if isinstance(f, Loc) and isinstance(g, Loc) and f.name == g.name:
        out += [Loc(f.name, par(x)) for x in forest_join(components(f.body),
                                                         components(g.body), wrappers)]
    if isinstance(f, Loc):
        out += [Loc(f.name, par(x)) for x in forest_join(components(f.body), [g], wrappers)]
    if isinstance(g, Loc):
        out += [Loc(g.name, par(x)) for x in forest_join(components(g.body), [f], wrappers)]
    out += [Loc(w, par(f, g)) for w in wrappers]
    return [t[0] for t in _min_forests([(t,) for t in out])]


def forest_join(fs, gs, wrappers) -> list[tuple]:
    """Minimal forests into which both fs and gs embed (as sibling groups)."""
    fs, gs = list(fs), list(gs)
    results = []

    def go(i, used, pairs):
        if i == len(fs):
            left = [fs[k] for k in range(len(fs)) if k not in {a for a, _ in pairs}]
            right = [gs[k] for k in range(len(gs)) if k not in used]
            joins = [_tree_join(fs[a], gs[b], wrappers) for a, b in pairs]
            for combo in itertools.product(*joins):
                results.append(left + right + list(combo))
            return
        go(i + 1, used, pairs)
        for j in range(len(gs)):
            if j not in used:
                go(i + 1, used | {j}, pairs + [(i, j)])

    go(0, frozenset(), [])
    return _min_forests(results)


def _fillers(groups, space: Space) -> list[Term]:
    """Minimal hole fillers H such that every group embeds into H."""
    if not groups:
        return list(space.subp)
    cur = [tuple(groups[0])]
    for g in groups[1:]:
        nxt = []
        for f in cur:
            nxt += forest_join(f, g, space.cnames)
        cur = _min_forests(nxt)
    return [par(f) for f in _min_forests(cur)]


# -- predecessor bases ------------------------------------------------------

def _node_groups(root: _Node):
    """(node, kid indices) for every nonempty sibling group."""
    for n in _walk(root):
        for r in range(1, len(n.kids) + 1):
            for idx in itertools.combinations(range(len(n.kids)), r):
                yield n, idx


def _disjoint(g1, g2, root) -> bool:
    if g1 is None or g2 is None:
        return True
    (n1, i1), (n2, i2) = g1, g2
    if n1 is n2:
        return not set(i1) & set(i2)
    for (na, ia), (nb, _) in ((g1, g2), (g2, g1)):
        for i in ia:
            k = na.kids[i]
            if isinstance(k, _Node) and any(m is nb for m in _walk(k)):
                return False
    return True


def _strip(root: _Node, groups):
    """Copy of the tree without the grouped subtrees; anchors mapped to the copy."""
    memo = {}
    r = _clone(root, memo)
    anchors = []
    drops = {}
    for g in groups:
        if g is None:
            anchors.append(None)
            continue
        n, idx = g
        m = memo[id(n)]
        anchors.append(m)
        drops.setdefault(id(m), (m, set()))[1].update(idx)
    for m, idx in drops.values():
        m.kids = [k for i, k in enumerate(m.kids) if i not in idx]
    return r, anchors


def _group_terms(g) -> list[Term]:
    n, idx = g
    return [_item_term(n.kids[i]) for i in idx]


class _Pred:
    def __init__(self, target: Term, space: Space, mode: str, skip_trivial: bool, known):
        self.p = target
        self.space = space
        self.mode = mode
        self.skip_trivial = skip_trivial
        self.known = list(known) if known else []
        self.root = _to_node(target)
        self.groups = list(_node_groups(self.root))
        self.tested: dict[Term, bool] = {}

    def options(self, created):
        """Sibling groups of the target that the created forest can account for."""
        out = [None]
        for g in self.groups:
            if match(_group_terms(g), created):
                out.append(g)
        return out

    def consider(self, root: _Node):
        q = _to_term(root)
        if q is None or q in self.tested:
            return
        if self.space.reach and not self.space.reach.possible(q):
            self.tested[q] = False
            return
        if self.known and covered(q, self.known):
            self.tested[q] = False
            return
        self.tested[q] = any(match(components(self.p), components(r))
                             for r in successors(q, self.mode))

    def place_two(self, first, a1, second_items, a2_of):
        skel_opts = self.space.cnames
        for r1, memo1 in _insertions(first[0], a1, first[1], skel_opts):
            a2 = a2_of(memo1)
            for item in second_items:
                for r2, _ in _insertions(r1, a2, item, skel_opts):
                    self.consider(r2)

    def run(self) -> list[Term]:
        sp = self.space
        for a_leaf, name, fa in sp.ins:
            ga = self.options(fa)
            for b_leaf, bname, fb in sp.outs:
                if bname != name:
                    continue
                gb = self.options(fb)
                for g1 in ga:
                    for g2 in gb:
                        self._pair(g1, g2, a_leaf, [b_leaf])
        for c_leaf, name, pattern, fc in sp.upds:
            gc = self.options(fc)
            for g1 in gc:
                for g2, fillers in self._target_options(pattern):
                    targets = [Loc(name, h) for h in fillers]
                    self._pair(g1, g2, c_leaf, targets)
        return minimize(q for q, ok in self.tested.items() if ok)

    def _pair(self, g1, g2, leaf, second_items):
        if g1 is None and g2 is None and self.skip_trivial:
            return
        if not _disjoint(g1, g2, self.root):
            return
        skel, (a1, a2) = _strip(self.root, [g1, g2])
        if skel.name is None and not skel.kids and g1 is None and g2 is None:
            return
        self.place_two((skel, leaf), a1, second_items,
                       lambda memo: None if a2 is None else memo[id(a2)])

    def _target_options(self, pattern):
        yield None, self.space.subp
        ys = list(components(pattern))
        for g in self.groups:
            reqs = {}
            for req in _sym_match(_group_terms(g), ys):
                key = tuple(sorted(tuple(sorted(t.key for t in grp)) for grp in req))
                reqs.setdefault(key, req)
            fillers = set()
            for req in reqs.values():
                fillers.update(_fillers(req, self.space))
            if fillers:
                yield g, sorted(fillers, key=lambda t: t.key)


def pred_basis(p: Term, s: Iterable[Term] | Space, mode: str = DYNAMIC,
               skip_trivial: bool = False, known=None) -> list[Term]:
    """Finite basis of the processes that can step into the upward closure of p."""
    space = s if isinstance(s, Space) else Space(s)
    return _Pred(canonicalize(p), space, mode, skip_trivial, known).run()


def pred_star(b: Iterable[Term], s, mode: str = DYNAMIC) -> list[Term]:
    """Basis of everything that reaches the upward closure of b."""
    space = s if isinstance(s, Space) else Space(s)
    basis = minimize(b)
    frontier = list(basis)
    while frontier:
        fresh = []
        for q in frontier:
            for c in pred_basis(q, space, mode, skip_trivial=True, known=basis):
                if not covered(c, basis) and not covered(c, fresh):
                    fresh.append(c)
        fresh = minimize(fresh)
        basis = minimize(basis + fresh)
        frontier = [c for c in fresh if c in basis]
    return basis


def barbed_leaves(space: Space, alpha) -> list[Term]:
    name, output = parse_barb(alpha)
    return [t for t in space.subp if leaf_barb(t, name, output)]


def _add(q: Term, leaves, wrappers) -> list[Term]:
    out = []
    root = _to_node(q)
    for s in leaves:
        for r, _ in _insertions(root, None, s, wrappers):
            out.append(_to_term(r))
    return out


def _barbed(q: Term, name, output) -> bool:
    from .semantics import barb
    return barb(q, (name, output))


def fb_alpha_k(s, alpha, k: int, mode: str = DYNAMIC) -> list[Term]:
    """Basis of the processes that can reach k consecutive alpha-barbed states."""
    if k < 1:
        raise ValueError("k must be at least 1")
    space = s if isinstance(s, Space) else Space(s)
    name, output = parse_barb(alpha)
    fb = barbed_leaves(space, alpha)
    keep = space.reach.possible if space.reach else (lambda q: True)
    level = minimize(q for q in fb if keep(q))
    for _ in range(k - 1):
        preds = []
        for q in level:
            preds += pred_basis(q, space, mode)
        nxt = []
        for q in minimize(preds):
            if _barbed(q, name, output):
                nxt.append(q)
            else:
                nxt += _add(q, fb, space.cnames)
        level = minimize(q for q in nxt if keep(q))
    return pred_star(level, space, mode)


def check_fragment(members) -> None:
    for m in members:
        c = classify(m)
        if c.pattern is None:
            raise ClassError("process has holes outside update payloads")
        if c.pattern < 2:
            raise ClassError("bounded adaptation is undecidable for pattern-1 updates; "
                             f"offending process: {render(m)}")


def decide_ba(c, alpha, k: int, mode: str = DYNAMIC):
    """Does some cluster member reach k consecutive alpha-barbed states?

    Static clusters under static semantics are first encoded into dynamic ones.
    """
    from .cluster import Cluster, Verdict
    from .statdyn import dyn_cluster

    check_fragment(c.members())
    if mode == STATIC:
        c = dyn_cluster(c)
        check_fragment(c.members())
    space = Space(c.members(), Reach(c.members()))
    fb = fb_alpha_k(space, alpha, k)
    init = components(c.initial)
    for q in fb:
        rest = [x for x in components(q) if not any(embeds(x, m) for m in c.mods)]
        if match(rest, init):
            return _witness(c, q, rest, alpha, k, mode)
    return Verdict("holds")


def _witness(c, q, rest, alpha, k, mode, max_depth: int = 40):
    """The instance P | copies of mods that lies above q, with a run if one is short."""
    from .cluster import Verdict, instantiate
    from .semantics import bounded_barb_k

    counts = [0] * len(c.mods)
    for x in components(q):
        if x in rest:
            continue
        i = next(i for i, m in enumerate(c.mods) if embeds(x, m))
        counts[i] += 1
    r = instantiate(c, counts)
    reason = f"basis element {render(q)} lies below {render(r)}"
    for depth in (4, 8, 16, max_depth):
        res = bounded_barb_k(r, alpha, k, depth)
        if res.found:
            return Verdict("violated", counts, res.trace, reason)
        if res.exact:
            break
    return Verdict("violated", counts, None, reason)
