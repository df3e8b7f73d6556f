"""Labelled transition system, reductions, barbs and bounded barb searches.

Two modes exist: in static mode an update fires only when `cond_static`
accepts the payload/target pair; in dynamic mode every update may fire.
Silent steps are synthesised by pairing capabilities of two distinct parallel
branches, so the placeholder used by the location rule never leaves this
module.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from .core import (HOLE, In, Loc, Nil, Out, Par, Repl, Sum, Term, Update, canonicalize,
                   cstr, drop_nil, fill, numap, numholes, numph, par, split_static_payload)

STATIC = "static"
DYNAMIC = "dynamic"
MODES = (STATIC, DYNAMIC)


@dataclass(frozen=True)
class InL:
    name: str


@dataclass(frozen=True)
class OutL:
    name: str


@dataclass(frozen=True)
class CompL:
    name: str
    body: Term


@dataclass(frozen=True)
class UpdL:
    name: str
    pattern: Term


@dataclass(frozen=True)
class TauL:
    pass


TAU = TauL()


# -- the update side condition ----------------------------------------------

def cond_direct(u: Term, q: Term) -> bool:
    """cond(U,Q) evaluated literally on containment structures."""
    split = split_static_payload(u)
    if split is None:
        return False
    target, rest = split
    inner = target.body
    lhs = cstr(Loc(target.name, q))
    rhs = cstr(par(Loc(target.name, fill(inner, q)), rest))
    return lhs == rhs and (numph(inner) == 0 or numap(q) == 0)


def cond_static(u: Term, q: Term) -> bool:
    """cond(U,Q) through the three-case characterisation."""
    split = split_static_payload(u)
    if split is None:
        return False
    inner = split[0].body
    holes = numholes(inner)
    if holes == 0:
        return cstr(q) == cstr(inner)
    if numap(inner) != 0:
        return False
    if holes == 1:
        return numph(inner) == 0 or numap(q) == 0
    return numap(q) == 0


# -- capabilities -----------------------------------------------------------

class _Caps:
    __slots__ = ("ins", "outs", "upds", "locs", "taus")

    def __init__(self):
        self.ins = []    # (name, result)
        self.outs = []   # (name, result)
        self.upds = []   # (name, pattern, result)
        self.locs = []   # (name, body, ctx) with ctx(R) the term with a[body] replaced by R
        self.taus = []   # results


def _prefix_cap(caps: _Caps, p, result: Term):
    if isinstance(p, In):
        caps.ins.append((p.name, result))
    elif isinstance(p, Out):
        caps.outs.append((p.name, result))
    else:
        caps.upds.append((p.name, p.pattern, result))


def _lift(caps: _Caps, wrap) -> _Caps:
    out = _Caps()
    out.ins = [(a, wrap(r)) for a, r in caps.ins]
    out.outs = [(a, wrap(r)) for a, r in caps.outs]
    out.upds = [(a, u, wrap(r)) for a, u, r in caps.upds]
    out.locs = [(a, b, (lambda R, c=c: wrap(c(R)))) for a, b, c in caps.locs]
    out.taus = [wrap(r) for r in caps.taus]
    return out


@lru_cache(maxsize=200_000)
def _caps(t: Term, mode: str) -> _Caps:
    caps = _Caps()
    if isinstance(t, Sum):
        for p, c in t.branches:
            _prefix_cap(caps, p, c)
    elif isinstance(t, Repl):
        _prefix_cap(caps, t.prefix, par(t.body, t))
    elif isinstance(t, Loc):
        name = t.name
        caps = _lift(_caps(t.body, mode), lambda r: Loc(name, r))
        caps.locs.append((name, t.body, lambda R: R))
    elif isinstance(t, Par):
        kids = t.children
        sub = [_caps(c, mode) for c in kids]

        def rebuild(i, ri, j=None, rj=None):
            rest = [c for k, c in enumerate(kids) if k != i and k != j]
            rest.append(ri)
            if j is not None:
                rest.append(rj)
            return par(rest)

        # identical children give identical results: use one representative
        # per kind, and a second copy only for pairing a kind with itself
        first, second = [], {}
        for k, c in enumerate(kids):
            if k and c == kids[k - 1]:
                second.setdefault(first[-1], k)
            else:
                first.append(k)
        for i in first:
            lifted = _lift(sub[i], lambda r, i=i: rebuild(i, r))
            caps.ins += lifted.ins
            caps.outs += lifted.outs
            caps.upds += lifted.upds
            caps.locs += lifted.locs
            caps.taus += lifted.taus
        pairs = [(i, j) for i in first for j in first if i != j]
        pairs += [(i, j) for i, j in second.items()] + [(j, i) for i, j in second.items()]
        for i, j in pairs:
            ci, cj = sub[i], sub[j]
            for a, ri in ci.ins:
                for b, rj in cj.outs:
                    if a == b:
                        caps.taus.append(rebuild(i, ri, j, rj))
            for a, u, ri in ci.upds:
                for b, body, ctx in cj.locs:
                    if a != b:
                        continue
                    if mode == STATIC and not cond_static(u, body):
                        continue
                    caps.taus.append(rebuild(i, ri, j, ctx(fill(u, body))))
    return caps


def labeled_transitions(p: Term, mode: str = DYNAMIC) -> set:
    """All (label, target) pairs.  For location labels the target is the
    residual context, with a hole marking the vacated position."""
    caps = _caps(canonicalize(p), mode)
    out = set()
    for a, r in caps.ins:
        out.add((InL(a), r))
    for a, r in caps.outs:
        out.add((OutL(a), r))
    for a, u, r in caps.upds:
        out.add((UpdL(a, u), r))
    for a, body, ctx in caps.locs:
        out.add((CompL(a, body), canonicalize(ctx(HOLE))))
    for r in caps.taus:
        out.add((TAU, r))
    return out


@lru_cache(maxsize=200_000)
def _successors(p: Term, mode: str) -> frozenset:
    return frozenset(_caps(p, mode).taus)


@lru_cache(maxsize=200_000)
def _collapsed_successors(p: Term, mode: str) -> frozenset:
    return frozenset(drop_nil(s) for s in _successors(p, mode))


def successors(p: Term, mode: str = DYNAMIC) -> frozenset:
    return _successors(canonicalize(p), mode)


def clear_caches():
    _caps.cache_clear()
    _successors.cache_clear()
    _collapsed_successors.cache_clear()


# -- barbs ------------------------------------------------------------------

def parse_barb(alpha) -> tuple[str, bool]:
    """'e' is the input barb, 'e!' the output barb; labels are accepted too."""
    if isinstance(alpha, InL):
        return alpha.name, False
    if isinstance(alpha, OutL):
        return alpha.name, True
    if isinstance(alpha, tuple):
        return alpha
    if alpha.endswith("!"):
        return alpha[:-1], True
    return alpha, False


def prefix_is(p, name: str, output: bool) -> bool:
    return p.name == name and isinstance(p, Out if output else In)


def leaf_barb(t: Term, name: str, output: bool) -> bool:
    if isinstance(t, Sum):
        return any(prefix_is(p, name, output) for p, _ in t.branches)
    if isinstance(t, Repl):
        return prefix_is(t.prefix, name, output)
    return False


def barb(p: Term, alpha) -> bool:
    name, output = parse_barb(alpha)
    stack = [p]
    while stack:
        t = stack.pop()
        if isinstance(t, Par):
            stack.extend(t.children)
        elif isinstance(t, Loc):
            stack.append(t.body)
        elif leaf_barb(t, name, output):
            return True
    return False


# -- graph exploration ------------------------------------------------------

@dataclass
class Graph:
    root: Term
    depth: dict = field(default_factory=dict)   # state -> BFS level
    succ: dict = field(default_factory=dict)    # expanded state -> successors
    parent: dict = field(default_factory=dict)
    closed: bool = True

    def path_to(self, s: Term) -> list:
        path = [s]
        while path[-1] in self.parent:
            path.append(self.parent[path[-1]])
        return path[::-1]


def explore(p: Term, mode: str = DYNAMIC, depth: int | None = None,
            state_limit: int | None = None, collapse_nil: bool = False) -> Graph:
    """Breadth-first reduction graph; `closed` tells whether it is complete.

    With collapse_nil, states are taken modulo inert 0 components."""
    step = _collapsed_successors if collapse_nil else _successors
    p = canonicalize(p)
    if collapse_nil:
        p = drop_nil(p)
    g = Graph(p, {p: 0})
    queue = deque([p])
    while queue:
        s = queue.popleft()
        if depth is not None and g.depth[s] >= depth:
            if step(s, mode):
                g.closed = False
            continue
        nexts = step(s, mode)
        g.succ[s] = nexts
        for t in nexts:
            if t not in g.depth:
                if state_limit is not None and len(g.depth) >= state_limit:
                    g.closed = False
                    continue
                g.depth[t] = g.depth[s] + 1
                g.parent[t] = s
                queue.append(t)
    return g


@dataclass
class BarbSearch:
    found: bool
    trace: list | None = None   # states p ... Q1 ... Qk
    exact: bool = False         # for negative answers: graph closed within the bound
    reason: str = ""

    @property
    def status(self) -> str:
        if self.found:
            return "witness"
        return "holds-exact" if self.exact else "none-within-depth"


def bounded_barb_k(p: Term, alpha, k: int, depth: int, mode: str = DYNAMIC) -> BarbSearch:
    """Look for p ->* Q1 -> ... -> Qk with every Qi barbed, inside the graph
    explored to `depth`."""
    if k < 1:
        raise ValueError("k must be at least 1")
    g = explore(p, mode, depth=depth)
    levels = [{s for s in g.depth if barb(s, alpha)}]
    for _ in range(k - 1):
        prev = levels[-1]
        levels.append({s for s in levels[0] if any(t in prev for t in g.succ.get(s, ()))})
    if not levels[-1]:
        return BarbSearch(False, exact=g.closed)
    start = min(levels[-1], key=lambda s: (g.depth[s], s.key))
    trace = g.path_to(start)
    cur = start
    for j in range(k - 2, -1, -1):
        cur = min((t for t in g.succ[cur] if t in levels[j]), key=lambda t: t.key)
        trace.append(cur)
    return BarbSearch(True, trace)


def bounded_barb_omega(p: Term, alpha, state_limit: int, mode: str = DYNAMIC,
                       collapse_nil: bool = True) -> BarbSearch:
    """Look for a reachable cycle made only of barbed states.

    States are folded modulo inert 0 components by default, otherwise every
    replication with a 0 continuation would make the graph infinite."""
    import networkx as nx

    g = explore(p, mode, state_limit=state_limit, collapse_nil=collapse_nil)
    dg = nx.DiGraph()
    for s, nexts in g.succ.items():
        if not barb(s, alpha):
            continue
        for t in nexts:
            if barb(t, alpha) and t in g.succ:
                dg.add_edge(s, t)
    for comp in nx.strongly_connected_components(dg):
        s = min(comp, key=lambda t: t.key)
        if len(comp) > 1 or dg.has_edge(s, s):
            cycle = _cycle_through(dg, s, comp)
            return BarbSearch(True, g.path_to(s) + cycle[1:])
    if g.closed:
        return BarbSearch(False, exact=True)
    return BarbSearch(False, exact=False, reason=f"state limit {state_limit} reached")


def _cycle_through(dg, s, comp) -> list:
    import networkx as nx

    if dg.has_edge(s, s):
        return [s, s]
    sub = dg.subgraph(comp)
    best = None
    for t in sub.successors(s):
        path = nx.shortest_path(sub, t, s)
        if best is None or len(path) < len(best):
            best = path
    return [s] + best
