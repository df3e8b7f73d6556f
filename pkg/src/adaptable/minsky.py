"""Two-counter Minsky machines and their encodings into the calculus.

Variant 1 uses updates whose holes sit under prefixes, variant 2 replaces
them with resource outputs and erroneous zero tests, variant 3 keeps a
single preserving hole but builds garbage locations.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .core import HOLE, NIL, In, Loc, Out, Term, Update, components, drop_nil, par, pre, repl
from .semantics import DYNAMIC, STATIC, _collapsed_successors, barb, successors


@dataclass(frozen=True)
class Inc:
    reg: int


@dataclass(frozen=True)
class Dec:
    reg: int
    target: int


@dataclass(frozen=True)
class Halt:
    pass


@dataclass(frozen=True)
class MinskyMachine:
    instrs: tuple
    init: tuple = (0, 0)

    def __post_init__(self):
        for ins in self.instrs:
            if isinstance(ins, (Inc, Dec)) and ins.reg not in (0, 1):
                raise ValueError("registers are r0 and r1")
            if isinstance(ins, Dec) and not 1 <= ins.target <= len(self.instrs):
                raise ValueError(f"jump target {ins.target} out of range")

    def start(self) -> "Config":
        return Config(1, *self.init)


@dataclass(frozen=True)
class Config:
    pc: int
    m0: int
    m1: int

    def reg(self, j: int) -> int:
        return self.m1 if j else self.m0

    def with_reg(self, j: int, v: int, pc: int) -> "Config":
        return Config(pc, self.m0, v) if j else Config(pc, v, self.m1)


def mm_step(m: MinskyMachine, c: Config) -> Config | None:
    """One machine step; None once the machine has halted."""
    ins = m.instrs[c.pc - 1]
    if isinstance(ins, Halt):
        return None
    if isinstance(ins, Inc):
        return c.with_reg(ins.reg, c.reg(ins.reg) + 1, c.pc + 1)
    if c.reg(ins.reg) > 0:
        return c.with_reg(ins.reg, c.reg(ins.reg) - 1, c.pc + 1)
    return Config(ins.target, c.m0, c.m1)


def run(m: MinskyMachine, fuel: int) -> tuple[list[Config], bool]:
    """Configurations visited within `fuel` steps, and whether HALT was reached."""
    trace = [m.start()]
    for _ in range(fuel):
        nxt = mm_step(m, trace[-1])
        if nxt is None:
            return trace, True
        if nxt.pc > len(m.instrs):
            raise ValueError(f"program counter {nxt.pc} runs off the program")
        trace.append(nxt)
    return trace, isinstance(m.instrs[trace[-1].pc - 1], Halt)


# -- encodings --------------------------------------------------------------

class _Names:
    def __init__(self, suffix: str = ""):
        self.s = suffix

    def __call__(self, base: str, idx=None) -> str:
        return base + ("" if idx is None else str(idx)) + self.s


def _many(t: Term, n: int) -> list[Term]:
    return [t] * n


def _v1_number(n: int, j: int, nm) -> Term:
    t = pre(Out(nm("z", j)))
    for _ in range(n):
        t = pre(Out(nm("u", j)), t)
    return t


def _register(variant: int, j: int, value: int, nm, garbage=None) -> Term:
    r = nm("r", j)
    if variant == 1:
        return Loc(r, _v1_number(value, j, nm))
    if variant == 2:
        return Loc(r, par(_v2_reg_core(j, nm), *_many(pre(Out(nm("u", j))), value)))
    c = nm("c", j)
    if garbage is None:
        inner = NIL
    else:
        inner = par(_v3_reg(j, nm), *_many(_v3_unit(j, nm), garbage))
    return Loc(r, par(*_many(_v3_unit(j, nm), value), _v3_reg(j, nm), Loc(c, inner)))


def _v2_reg_core(j, nm) -> Term:
    return par(repl(In(nm("inc", j)), pre(Out(nm("u", j)))), pre(Out(nm("z", j))))


def _v3_keep(j, nm) -> Update:
    c = nm("c", j)
    return Update(c, Loc(c, HOLE))


def _v3_unit(j, nm) -> Term:
    return pre(In(nm("u", j)), pre(_v3_keep(j, nm), pre(Out(nm("ack")))))


def _v3_reg(j, nm) -> Term:
    body = pre(_v3_keep(j, nm), pre(Out(nm("ack")), _v3_unit(j, nm)))
    return repl(In(nm("inc", j)), body)


def _v3_reset(j, nm, cont: Term) -> Term:
    c, r = nm("c", j), nm("r", j)
    return pre(Update(c, HOLE), pre(Update(r, Loc(r, par(_v3_reg(j, nm), Loc(c, HOLE)))), cont))


def _instruction(variant: int, i: int, ins, nm) -> Term:
    p = lambda k: pre(Out(nm("p", k)))
    trig = In(nm("p", i))
    if variant == 1:
        if isinstance(ins, Inc):
            r = nm("r", ins.reg)
            u = Update(r, Loc(r, pre(Out(nm("u", ins.reg)), HOLE)))
            return repl(trig, pre(u, p(i + 1)))
        if isinstance(ins, Dec):
            j, r = ins.reg, nm("r", ins.reg)
            reset = Update(r, Loc(r, pre(Out(nm("z", j)))))
            return repl(trig, _sum(pre(In(nm("u", j)), p(i + 1)),
                                   pre(In(nm("z", j)), pre(reset, p(ins.target)))))
        return repl(trig, _sum(pre(In(nm("e"))), p(i)))
    f, g, b = In(nm("f")), pre(Out(nm("g"))), In(nm("b"))
    if variant == 2:
        if isinstance(ins, Inc):
            return repl(trig, pre(f, par(g, pre(b, pre(Out(nm("inc", ins.reg)), p(i + 1))))))
        if isinstance(ins, Dec):
            j, r = ins.reg, nm("r", ins.reg)
            reset = Update(r, Loc(r, _v2_reg_core(j, nm)))
            dec = pre(In(nm("u", j)), par(pre(Out(nm("b"))), p(i + 1)))
            jump = pre(In(nm("z", j)), pre(reset, p(ins.target)))
            return repl(trig, pre(f, par(g, _sum(dec, jump))))
        resets = p(1)
        for j in (1, 0):
            r = nm("r", j)
            resets = pre(Update(r, Loc(r, _v2_reg_core(j, nm))), resets)
        return repl(trig, pre(Out(nm("h")), pre(In(nm("h")), resets)))
    ack = In(nm("ack"))
    if isinstance(ins, Inc):
        return repl(trig, pre(f, par(g, pre(b, pre(Out(nm("inc", ins.reg)), pre(ack, p(i + 1)))))))
    if isinstance(ins, Dec):
        j = ins.reg
        dec = pre(Out(nm("u", j)), pre(ack, par(pre(Out(nm("b"))), p(i + 1))))
        jump = _v3_reset(j, nm, p(ins.target))
        return repl(trig, pre(f, par(g, _sum(dec, jump))))
    return repl(trig, pre(Out(nm("h")), pre(In(nm("h")), _v3_reset(0, nm, _v3_reset(1, nm, p(1))))))


def _sum(*branches: Term) -> Term:
    from .core import Sum
    return Sum([b for t in branches for b in t.branches])


def _resources(nm, alpha=0, beta=0, gamma=0) -> list[Term]:
    a, h = nm("a"), nm("h")
    gen = repl(In(a), par(pre(Out(nm("f"))), pre(Out(nm("b"))), pre(Out(a))))
    fix = repl(In(h), par(pre(In(nm("g")), pre(Out(nm("f")))), pre(Out(h))))
    return (_many(pre(Out(nm("f"))), alpha) + _many(pre(Out(nm("b"))), beta)
            + _many(pre(Out(nm("g"))), gamma) + [gen, fix])


def _control(nm) -> list[Term]:
    a = nm("a")
    start = pre(Out(a), pre(In(a), par(pre(Out(nm("p", 1))), pre(In(nm("e"))))))
    return _resources(nm) + [start]


def _bank(m: MinskyMachine, variant: int, nm) -> list[Term]:
    return [_instruction(variant, i, ins, nm) for i, ins in enumerate(m.instrs, 1)]


def encode_mm(m: MinskyMachine, variant: int, suffix: str = "") -> Term:
    """The machine started at instruction 1 with its initial registers."""
    nm = _Names(suffix)
    if variant == 1:
        regs = [_register(1, j, m.init[j], nm) for j in (0, 1)]
        return par(*regs, *_bank(m, 1, nm), pre(Out(nm("p", 1))))
    if variant not in (2, 3):
        raise ValueError(f"unknown variant {variant}")
    if tuple(m.init) != (0, 0):
        raise ValueError(f"variant {variant} starts from empty registers")
    regs = [_register(variant, j, 0, nm) for j in (0, 1)]
    return par(*regs, *_bank(m, variant, nm), *_control(nm))


def encode_cfg(m: MinskyMachine, c: Config, variant: int, resources=(0, 0, 0),
               garbage=(None, None), suffix: str = "") -> Term:
    """A configuration in the middle of a run.

    `resources` gives the copies of f!, b! and g! for variants 2 and 3;
    `garbage` gives, per register, the units frozen in its c location
    (None for the empty initial one) in variant 3."""
    nm = _Names(suffix)
    regs = [_register(variant, j, c.reg(j), nm, garbage[j]) for j in (0, 1)]
    parts = [pre(Out(nm("p", c.pc))), *regs, *_bank(m, variant, nm)]
    if variant in (2, 3):
        parts += [pre(In(nm("e"))), *_resources(nm, *resources)]
    return par(*parts)


# -- decoding and directed simulation ---------------------------------------

def register_values(t: Term, variant: int, suffix: str = "") -> tuple[int, int] | None:
    """Read the register contents off an encoded state (None if unreadable)."""
    nm = _Names(suffix)
    vals = []
    for j in (0, 1):
        locs = [x for x in components(t) if isinstance(x, Loc) and x.name == nm("r", j)]
        if len(locs) != 1:
            return None
        body = [x for x in components(locs[0].body) if x != NIL]
        if variant == 1:
            if len(body) != 1:
                return None
            n, x = 0, body[0]
            unit, zero = Out(nm("u", j)), pre(Out(nm("z", j)))
            while x != zero:
                if not (x.__class__.__name__ == "Sum" and len(x.branches) == 1
                        and x.branches[0][0] == unit):
                    return None
                n, x = n + 1, x.branches[0][1]
            vals.append(n)
        else:
            unit = pre(Out(nm("u", j))) if variant == 2 else _v3_unit(j, nm)
            vals.append(sum(1 for x in body if x == unit))
    return tuple(vals)


def _counter(t: Term, pc: int, nm) -> bool:
    return barb(t, (nm("p", pc), True))


def _count(t: Term, leaf: Term) -> int:
    return sum(1 for x in components(t) if x == leaf)


def _bfs(start: Term, goal, mode: str, depth: int):
    """Shortest path (states modulo inert 0) from start to a goal state."""
    seen = {start: None}
    frontier = deque([(start, 0)])
    while frontier:
        s, d = frontier.popleft()
        if goal(s):
            path = [s]
            while seen[path[-1]] is not None:
                path.append(seen[path[-1]])
            return path[::-1]
        if d >= depth:
            continue
        for t in sorted(_collapsed_successors(s, mode), key=lambda x: x.key):
            if t not in seen:
                seen[t] = s
                frontier.append((t, d + 1))
    return None


@dataclass
class Simulation:
    trace: list          # encoded states, modulo inert 0
    configs: list        # machine configurations simulated along the way
    restarted: bool      # p1! emitted again after the halt


def simulate(m: MinskyMachine, variant: int, fuel: int = 50, segment_depth: int = 12,
             suffix: str = "") -> Simulation:
    """Drive the encoding through the machine run, one instruction at a time.

    Each segment is a breadth-first search for the next program counter with
    the expected register values; the segments concatenate into one genuine
    reduction sequence of the encoding.  For variants 2 and 3 the first
    segment stops once enough f! resources have been produced for the run.
    """
    nm = _Names(suffix)
    mode = STATIC if variant in (1, 2) else DYNAMIC
    configs, halted = run(m, fuel)
    state = drop_nil(encode_mm(m, variant, suffix))
    trace = [state]
    if variant in (2, 3):
        need = sum(1 for c in configs if not isinstance(m.instrs[c.pc - 1], Halt))
        f = pre(Out(nm("f")))
        goal = lambda s: _counter(s, 1, nm) and _count(s, f) >= need
        path = _bfs(state, goal, mode, need + 2)
        if path is None:
            return Simulation(trace, [], False)
        trace += path[1:]
    done = [configs[0]]
    for c, nxt in zip(configs, configs[1:] + [None]):
        if nxt is None:
            if not halted:
                break
            target = (1, (0, 0)) if variant in (2, 3) else None
            if target is None:
                break
        else:
            target = (nxt.pc, (nxt.m0, nxt.m1))
        pc, regs = target
        goal = lambda s, pc=pc, regs=regs: (s is not trace[-1] and _counter(s, pc, nm)
                                            and register_values(s, variant, suffix) == regs)
        path = _bfs(trace[-1], goal, mode, segment_depth)
        if path is None:
            return Simulation(trace, done, False)
        trace += path[1:]
        if nxt is None:
            return Simulation(trace, done, True)
        done.append(nxt)
    return Simulation(trace, done, False)
