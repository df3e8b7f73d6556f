import pytest

from adaptable.core import canonicalize, classify, drop_nil
from adaptable.minsky import (Config, Dec, Halt, Inc, MinskyMachine, _bfs, encode_cfg, encode_mm,
                              mm_step, register_values, run, simulate)
from adaptable.semantics import STATIC, successors
from adaptable.syntax import parse_mm, parse_process, render

HALT3 = MinskyMachine((Inc(0), Dec(0, 3), Halt()))


def test_mm_step():
    assert mm_step(HALT3, Config(1, 0, 0)) == Config(2, 1, 0)
    assert mm_step(HALT3, Config(2, 1, 0)) == Config(3, 0, 0)
    assert mm_step(HALT3, Config(2, 0, 0)) == Config(3, 0, 0)
    assert mm_step(HALT3, Config(3, 0, 0)) is None


def test_run():
    trace, halted = run(HALT3, 10)
    assert halted and [(c.pc, c.m0) for c in trace] == [(1, 0), (2, 1), (3, 0)]
    loop = MinskyMachine((Inc(0), Dec(1, 1)))
    trace, halted = run(loop, 10)
    assert not halted and len(trace) == 11


def test_bad_jump():
    with pytest.raises(ValueError):
        MinskyMachine((Dec(0, 5),))


def test_variant_one_halt():
    t = encode_mm(MinskyMachine((Halt(),)), 1)
    assert t == canonicalize(parse_process("r0[z0!] | r1[z1!] | !p1.(e + p1!) | p1!"))


def test_register_clauses():
    v2 = render(encode_mm(HALT3, 2))
    assert "r0[!inc0.u0!.0 | z0!.0]" in v2
    v3 = encode_mm(HALT3, 3)
    reg0 = parse_process("r0[!inc0.c0{c0[@]}.ack!.u0.c0{c0[@]}.ack!.0 | c0[0]]")
    assert canonicalize(reg0) in [canonicalize(x) for x in v3.children]


def test_encodings_classify():
    got = [classify(encode_mm(HALT3, v)) for v in (1, 2, 3)]
    assert [(c.topology, c.pattern) for c in got] == [
        ("static", 1), ("static", 2), ("dynamic-only", 3)]


def test_variant_one_numbers():
    t = encode_cfg(HALT3, Config(2, 2, 0), 1)
    assert "r0[u0!.u0!.z0!.0]" in render(t)
    assert register_values(t, 1) == (2, 0)


def test_variant_two_configuration_adds_resources():
    t = render(encode_cfg(HALT3, Config(1, 0, 0), 2, resources=(1, 0, 0)))
    assert "e.0" in t and "f!.0" in t


def test_encodings_need_zero_registers():
    m = MinskyMachine((Halt(),), init=(2, 0))
    assert register_values(encode_mm(m, 1), 1) == (2, 0)
    with pytest.raises(ValueError):
        encode_mm(m, 2)


def test_name_suffix():
    t = render(encode_mm(HALT3, 1, suffix="_x"))
    assert "r0_x[" in t and "p1_x!" in t


@pytest.mark.parametrize("name", ["halt3", "transfer", "move", "loop2"])
def test_variant_one_steps_are_simulated(fixtures, name):
    m = parse_mm((fixtures / f"{name}.mm").read_text())
    trace, _ = run(m, 8)
    for c, n in zip(trace, trace[1:]):
        a, b = drop_nil(encode_cfg(m, c, 1)), drop_nil(encode_cfg(m, n, 1))
        assert _bfs(a, lambda s: s == b, STATIC, 8) is not None


@pytest.mark.parametrize("variant", [2, 3])
def test_restart(variant):
    sim = simulate(HALT3, variant, segment_depth=12)
    assert sim.restarted
    assert [(c.pc, c.m0, c.m1) for c in sim.configs] == [(1, 0, 0), (2, 1, 0), (3, 0, 0)]
    mode = STATIC if variant == 2 else "dynamic"
    for a, b in zip(sim.trace, sim.trace[1:]):
        assert b in {drop_nil(s) for s in successors(a, mode)}
