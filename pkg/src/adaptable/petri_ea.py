"""Eventual adaptation for static processes with preserving updates.

A process becomes a marking: one token per sequential component, tagged with
the path of locations around it, plus one token per location path.  Updates
that keep the current content in place need not touch the content tokens,
so the net simulates the reductions exactly.  Infinite barbed suffixes are
found by a phase-switching construction reduced to place boundedness, which
is settled with a Karp-Miller coverability tree.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable

from .core import Hole, Loc, Par, Repl, Sum, Term, TermError, Update, canonicalize, classify
from .semantics import parse_barb, prefix_is
from .syntax import render

OMEGA = math.inf


@dataclass(frozen=True, order=True)
class Proc:
    seq: Term
    addr: tuple = ()

    def __str__(self):
        return f"proc:{render(self.seq).replace(' ', '')}@{'/'.join(self.addr)}"


@dataclass(frozen=True, order=True)
class Path:
    addr: tuple

    def __str__(self):
        return "path:" + "/".join(self.addr)


@dataclass(frozen=True)
class Aux:
    name: str

    def __str__(self):
        return self.name


START, GO = Aux("start"), Aux("go")


def Marking(items=()) -> Counter:
    return Counter(items)


def _key(m: Counter) -> frozenset:
    return frozenset((p, n) for p, n in m.items() if n)


@dataclass
class PetriNet:
    places: set = field(default_factory=set)
    transitions: list = field(default_factory=list)   # (pre, post) Counters
    init: Counter = field(default_factory=Counter)

    def add(self, pre: Counter, post: Counter) -> None:
        self.places.update(pre)
        self.places.update(post)
        self.transitions.append((pre, post))

    def enabled(self, m: Counter):
        for i, (pre, _) in enumerate(self.transitions):
            if all(m[p] >= n for p, n in pre.items()):
                yield i

    def fire(self, m: Counter, i: int) -> Counter:
        pre, post = self.transitions[i]
        out = Counter(m)
        for p, n in pre.items():
            if out[p] < n:
                raise ValueError("transition not enabled")
            out[p] -= n
        out.update(post)
        return +out


def dec(sigma: tuple, p: Term) -> Counter:
    """Tokens of p placed at address sigma."""
    out = Counter()
    stack = [(tuple(sigma), p)]
    while stack:
        s, t = stack.pop()
        if isinstance(t, Par):
            stack.extend((s, c) for c in t.children)
        elif isinstance(t, Loc):
            s2 = s + (t.name,)
            out[Path(s2)] += 1
            stack.append((s2, t.body))
        elif not isinstance(t, Hole):
            out[Proc(t, s)] += 1
    return out


# -- translation ------------------------------------------------------------

def check_fragment(members) -> None:
    for m in members:
        c = classify(m)
        if c.topology != "static" or c.pattern != 3:
            raise TermError("eventual adaptation is decided only for static processes with "
                            f"preserving updates; got {c} for {render(m)}")


def _actions(t: Term):
    """(prefix, continuation, replicated) for every branch of a sequential term."""
    if isinstance(t, Sum):
        for p, c in t.branches:
            yield p, c, False
    elif isinstance(t, Repl):
        yield t.prefix, t.body, True


def _sum_c(*ms) -> Counter:
    out = Counter()
    for m in ms:
        out.update(m)
    return out


class _Builder:
    def __init__(self, net: PetriNet):
        self.net = net
        self.seen = set()
        self.known = set()
        self.procs: list[Proc] = []
        self.paths: list[Path] = []
        self.queue = deque()

    def emit(self, pre: Counter, post: Counter):
        k = (_key(pre), _key(post))
        if k in self.seen:
            return
        self.seen.add(k)
        self.net.add(pre, post)
        for p in post:
            self.discover(p)

    def discover(self, p):
        self.net.places.add(p)
        if p in self.known or not isinstance(p, (Proc, Path)):
            return
        self.known.add(p)
        (self.procs if isinstance(p, Proc) else self.paths).append(p)
        self.queue.append(p)

    def run(self):
        while self.queue:
            x = self.queue.popleft()
            if isinstance(x, Proc):
                for y in list(self.procs):
                    self.sync(x, y)
                for z in list(self.paths):
                    self.update(x, z)
            else:
                for y in list(self.procs):
                    self.update(y, x)

    def sync(self, x: Proc, y: Proc):
        for px, cx, rx in _actions(x.seq):
            if isinstance(px, Update):
                continue
            for py, cy, ry in _actions(y.seq):
                if isinstance(py, Update) or px.name != py.name or type(px) is type(py):
                    continue
                pre = _sum_c({GO: 1}, {x: 1}, {y: 1})
                post = _sum_c({GO: 1}, dec(x.addr, cx), dec(y.addr, cy),
                              {x: 1} if rx else {}, {y: 1} if ry else {})
                self.emit(Counter(pre), Counter(post))

    def update(self, x: Proc, z: Path):
        for px, cx, rx in _actions(x.seq):
            if not isinstance(px, Update) or z.addr[-1] != px.name:
                continue
            target = z.addr
            inside = x.addr[:len(target)] == target
            split = _split(px.pattern)
            if split is None:
                continue
            u, a = split
            theta = target[:-1]
            need = 2 if inside else 1
            pre = Counter({GO: 1, x: 1, z: need})
            post = _sum_c({GO: 1, z: need}, dec(x.addr, cx), dec(target, u),
                          *(dec(theta, r) for r in a), {x: 1} if rx else {})
            self.emit(pre, Counter(post))


def _split(pattern: Term):
    """a[U] | A  ->  (U, [components of A])."""
    from .core import components
    comps = list(components(pattern))
    locs = [c for c in comps if isinstance(c, Loc)]
    if len(locs) != 1:
        return None
    return locs[0].body, [c for c in comps if c is not locs[0]]


def translate(c, encode: bool = True) -> PetriNet:
    """Net of a cluster: members are dyn-encoded first unless encode=False."""
    from .statdyn import dyn_cluster

    check_fragment(c.members())
    if encode:
        c = dyn_cluster(c)
    net = PetriNet()
    net.init = dec((), c.initial) + Counter({START: 1})
    b = _Builder(net)
    net.places.update([START, GO])
    for p in net.init:
        b.discover(p)
    b.emit(Counter({START: 1}), Counter({GO: 1}))
    for m in c.mods:
        b.emit(Counter({START: 1}), Counter({START: 1}) + dec((), m))
    b.run()
    return net


# -- Karp-Miller ------------------------------------------------------------

class _Index:
    def __init__(self, places):
        self.order = sorted(places, key=str)
        self.pos = {p: i for i, p in enumerate(self.order)}

    def vec(self, m: Counter) -> tuple:
        v = [0] * len(self.order)
        for p, n in m.items():
            v[self.pos[p]] = n
        return tuple(v)


def coverability(n: PetriNet, limit: int = 200_000) -> tuple[list[tuple], _Index]:
    """Nodes of a Karp-Miller tree.

    A new node already covered by a node built earlier is not expanded;
    nodes are never deleted once built."""
    idx = _Index(n.places)
    trans = [(idx.vec(pre), idx.vec(post)) for pre, post in n.transitions]
    root = idx.vec(n.init)
    nodes = [root]
    parent = [-1]
    queue = deque([0])
    while queue:
        i = queue.popleft()
        m = nodes[i]
        for pre, post in trans:
            if any(a < b for a, b in zip(m, pre)):
                continue
            m2 = [a - b + c for a, b, c in zip(m, pre, post)]
            j = i
            while j >= 0:
                anc = nodes[j]
                if all(x <= y for x, y in zip(anc, m2)) and any(x < y for x, y in zip(anc, m2)):
                    m2 = [OMEGA if x < y else y for x, y in zip(anc, m2)]
                j = parent[j]
            m2 = tuple(m2)
            if any(all(x <= y for x, y in zip(m2, o)) for o in nodes):
                continue
            nodes.append(m2)
            parent.append(i)
            queue.append(len(nodes) - 1)
            if len(nodes) > limit:
                raise RuntimeError(f"coverability tree exceeds {limit} nodes")
    return nodes, idx


def place_bounded(n: PetriNet, p) -> bool:
    if p not in n.places:
        return True
    nodes, idx = coverability(n)
    k = idx.pos[p]
    return all(v[k] != OMEGA for v in nodes)


def infinite_visit(n: PetriNet, v: Iterable, mandatory) -> bool:
    """Is there an infinite run whose markings eventually always mark
    `mandatory` and some place of v?

    The run is split in two phases.  In the second phase every firing tests,
    on the marking it fires from, for `mandatory` and for one visit place,
    and leaves a token in `check`; the test only asks for the tokens on top
    of what the transition itself consumes when it does not consume them."""
    ph1, ph2, check = Aux("#ph1"), Aux("#ph2"), Aux("#check")
    n2 = PetriNet(init=n.init + Counter({ph1: 1}))
    n2.places = set(n.places) | {ph1, ph2, check, mandatory}
    for pre, post in n.transitions:
        n2.add(pre + Counter({ph1: 1}), post + Counter({ph1: 1}))
    n2.add(Counter({ph1: 1}), Counter({ph2: 1}))
    for pre, post in n.transitions:
        for q in set(v):
            test = Counter({mandatory: 1}) | Counter({q: 1})
            need = pre | test
            extra = need - pre
            n2.add(need + Counter({ph2: 1}), post + extra + Counter({ph2: 1, check: 1}))
    return not place_bounded(n2, check)


def coverability_graph(n: PetriNet, limit: int = 200_000):
    """Karp-Miller graph: every node is expanded once, equal labels are merged.

    Every run of the net is simulated by a path whose nodes agree with the
    run on finite places and carry OMEGA elsewhere."""
    idx = _Index(n.places)
    trans = [(idx.vec(pre), idx.vec(post)) for pre, post in n.transitions]
    nodes = [idx.vec(n.init)]
    ids = {nodes[0]: 0}
    parent = [-1]
    edges = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        m = nodes[i]
        for t, (pre, post) in enumerate(trans):
            if any(a < b for a, b in zip(m, pre)):
                continue
            m2 = [a - b + c for a, b, c in zip(m, pre, post)]
            j = i
            while j >= 0:
                anc = nodes[j]
                if all(x <= y for x, y in zip(anc, m2)) and any(x < y for x, y in zip(anc, m2)):
                    m2 = [OMEGA if x < y else y for x, y in zip(anc, m2)]
                j = parent[j]
            m2 = tuple(m2)
            if m2 not in ids:
                ids[m2] = len(nodes)
                nodes.append(m2)
                parent.append(i)
                queue.append(ids[m2])
                if len(nodes) > limit:
                    raise RuntimeError(f"coverability graph exceeds {limit} nodes")
            edges.append((i, t, ids[m2]))
    return nodes, edges, idx


def _effects(n: PetriNet, idx: _Index):
    out = []
    for pre, post in n.transitions:
        v = [0] * len(idx.order)
        for p, k in post.items():
            v[idx.pos[p]] += k
        for p, k in pre.items():
            v[idx.pos[p]] -= k
        out.append(v)
    return out


def _nonneg_cycle(nodes, edges, eff):
    """Edge multiplicities of a closed walk whose total effect is >= 0, or None.

    On each strongly connected piece an LP finds the largest support of a
    non-negative circulation; if that support splits, the search recurses
    into the parts, since any closed walk lives inside one of them."""
    import networkx as nx
    import numpy as np
    from scipy.optimize import linprog

    work = [list(range(len(edges)))]
    while work:
        es = work.pop()
        g = nx.DiGraph()
        g.add_edges_from((edges[e][0], edges[e][2]) for e in es)
        comp = {v: k for k, c in enumerate(nx.strongly_connected_components(g)) for v in c}
        parts = {}
        for e in es:
            a, _, b = edges[e]
            if comp[a] == comp[b]:
                parts.setdefault(comp[a], []).append(e)
        for part in parts.values():
            verts = sorted({edges[e][0] for e in part})
            omega = [p for p, x in enumerate(nodes[verts[0]]) if x == OMEGA]
            m = len(part)
            row = {v: r for r, v in enumerate(verts)}
            flow = np.zeros((len(verts), 2 * m))
            for c, e in enumerate(part):
                flow[row[edges[e][0]], c] -= 1
                flow[row[edges[e][2]], c] += 1
            # -effect(x) <= 0 on omega places, y <= x
            ub = [np.concatenate([[-eff[edges[e][1]][p] for e in part], np.zeros(m)])
                  for p in omega]
            for c in range(m):
                r = np.zeros(2 * m)
                r[m + c], r[c] = 1, -1
                ub.append(r)
            res = linprog(np.concatenate([np.zeros(m), -np.ones(m)]),
                          A_ub=np.array(ub), b_ub=np.zeros(len(ub)),
                          A_eq=flow, b_eq=np.zeros(len(verts)),
                          bounds=[(0, None)] * m + [(0, 1)] * m, method="highs")
            if res.status != 0 or -res.fun < 0.5:
                continue
            support = [e for c, e in enumerate(part) if res.x[m + c] > 0.5]
            if len(support) < m:
                work.append(support)
                continue
            counts = _integral(res.x[:m])
            if counts and _closed(part, counts, edges, eff, omega):
                return dict(zip(part, counts))
            raise RuntimeError("LP circulation could not be made integral")
    return None


def _integral(xs):
    from fractions import Fraction

    fr = [Fraction(float(x)).limit_denominator(10**6) for x in xs]
    den = math.lcm(*(f.denominator for f in fr))
    return [int(f * den) for f in fr]


def _closed(part, counts, edges, eff, omega) -> bool:
    bal = Counter()
    for e, k in zip(part, counts):
        bal[edges[e][0]] -= k
        bal[edges[e][2]] += k
    return (not any(bal.values()) and all(k > 0 for k in counts)
            and all(sum(k * eff[edges[e][1]][p] for e, k in zip(part, counts)) >= 0
                    for p in omega))


def fair_cycle(n: PetriNet, v: Iterable, mandatory):
    """Exact test for an infinite run whose markings eventually always mark
    `mandatory` and some place of v.

    Returns the edge multiplicities of a witnessing closed walk in the
    coverability graph, or None."""
    nodes, edges, idx = coverability_graph(n)
    keep = [idx.pos[q] for q in set(v) if q in idx.pos]
    if mandatory not in idx.pos or not keep:
        return None
    mpos = idx.pos[mandatory]
    good = {i for i, x in enumerate(nodes) if x[mpos] >= 1 and any(x[k] >= 1 for k in keep)}
    inner = [(a, t, b) for a, t, b in edges if a in good and b in good]
    return _nonneg_cycle(nodes, inner, _effects(n, idx))


def visit_places(net: PetriNet, alpha) -> set:
    name, output = parse_barb(alpha)
    return {p for p in net.places if isinstance(p, Proc)
            and any(prefix_is(px, name, output) for px, _, _ in _actions(p.seq))}


def decide_ea3(c, alpha, method: str = "cycle"):
    """`violated` iff some cluster member has an infinite run that is
    eventually always alpha-barbed.

    method="boundedness" answers with the phase-switching reduction to place
    boundedness instead; it over-approximates when the initial phase can
    pump tokens without bound."""
    from .cluster import Verdict

    net = translate(c)
    v = visit_places(net, alpha)
    if method == "boundedness":
        if infinite_visit(net, v, GO):
            return Verdict("violated", reason="check place is unbounded in the phase net")
        return Verdict("holds")
    if method != "cycle":
        raise ValueError(f"unknown method {method!r}")
    walk = fair_cycle(net, v, GO)
    if walk is not None:
        return Verdict("violated", reason=f"non-negative cycle of {sum(walk.values())} firings "
                                           f"through alpha-barbed markings")
    return Verdict("holds")


# -- export -----------------------------------------------------------------

def _ms(m: Counter) -> str:
    return " ".join(f"{p}*{k}" for p, k in sorted(((str(p), k) for p, k in m.items() if k)))


def export_net(n: PetriNet) -> str:
    lines = [f"place {p}" for p in sorted(map(str, n.places))]
    lines.append("init " + _ms(n.init))
    for pre, post in n.transitions:
        lines.append(f"trans {_ms(pre)} -> {_ms(post)}")
    return "\n".join(lines) + "\n"


def place_by_id(n: PetriNet, ident: str):
    for p in n.places:
        if str(p) == ident:
            return p
    raise KeyError(ident)
