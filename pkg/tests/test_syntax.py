import pytest

from adaptable.core import NIL, In, Loc, Out, Repl, Sum, Update, counts, par
from adaptable.syntax import ParseError, parse_mm, parse_process, render
from conftest import P, U


def test_parse_shapes():
    t = P("a[b.0] | a{c.0}.0")
    expect = par(Loc("a", Sum([(In("b"), NIL)])),
                 Sum([(Update("a", Sum([(In("c"), NIL)])), NIL)]))
    assert t == expect
    assert P("!p1.(e + p1!)") == Repl(In("p1"), Sum([(In("e"), NIL), (Out("p1"), NIL)]))


def test_payload_holes():
    t = P("a{b[@|@]}.0")
    (prefix, _), = t.branches
    assert counts(prefix.pattern)[1] == 2


def test_render():
    assert render(NIL) == "0"
    assert render(P("b!.0 | a.0")) == "a.0 | b!.0"
    assert render(U("a[@]")) == "a[@]"


@pytest.mark.parametrize("text", ["a.", "a[b.0", "a{@}.0 |", "k$a.0", "err.0", "a.@"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        P(text)


def test_parse_error_has_position():
    with pytest.raises(ParseError) as e:
        P("a.0 |\n  ]")
    assert "2:" in str(e.value)


def test_encoded_names():
    t = parse_process("k$a[err{0}.0]", encoded=True)
    assert render(t) == "k$a[err{0}.0]"


def test_parse_mm():
    m = parse_mm("r0=0\nr1=0\n1: INC r0\n2: DECJ r0 3\n3: HALT")
    assert len(m.instrs) == 3 and m.init == (0, 0)
    assert parse_mm("r0=2\n1: HALT").init == (2, 0)
    with pytest.raises(ValueError):
        parse_mm("1: DECJ r0 5")


def test_mm_render_roundtrip(fixtures):
    from adaptable.syntax import render_mm

    for path in fixtures.glob("*.mm"):
        m = parse_mm(path.read_text())
        assert parse_mm(render_mm(m)) == m
