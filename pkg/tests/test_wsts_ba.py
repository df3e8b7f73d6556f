import pytest

from adaptable.cluster import Cluster
from adaptable.core import canonicalize
from adaptable.semantics import successors
from adaptable.syntax import render
from adaptable.wsts_ba import (ClassError, Reach, Space, decide_ba, decompositions, embeds,
                               fb_alpha_k, minimize, plug, pred_basis, pred_star, tree_of)
from conftest import P

FIG_SMALL = "a.x.0 | b[c.y.0]"
FIG_BIG = "a.x.0 | d[b[f[e.z.0 | c.y.0]]]"


def test_tree_of():
    t = tree_of(P("a.0 | b{z.0}.0 | b[c.0 | d[0]] | f[g.0]"))
    assert str(t) == "ε{a.0, b[ ]{c.0, d[ ]{0}}, b{z.0}.0, f[ ]{g.0}}"
    assert str(tree_of(P("0"))) == "ε{0}"
    assert str(tree_of(P("a[0]"))) == "ε{a[ ]{0}}"


def test_tree_of_outside_nset():
    with pytest.raises(ValueError):
        tree_of(P("a[x.0]"), [P("b.0")])


def test_embedding():
    assert embeds(P(FIG_SMALL), P(FIG_BIG))
    assert not embeds(P(FIG_BIG), P(FIG_SMALL))
    assert not embeds(P("a[x.0]"), P("a[y.0]"))
    # siblings must stay in distinct subtrees
    assert not embeds(P("a.0 | b.0"), P("l[a.0 | b.0]"))
    assert embeds(P("l[a.0] | b.0"), P("l[m[a.0]] | b.0"))
    assert not embeds(P("l[a.0 | b.0]"), P("l[a.0] | l[b.0]"))


def test_minimize():
    got = minimize([P("a.0 | b.0"), P("a.0"), P("l[a.0]"), P("b.0")])
    assert set(got) == {P("a.0"), P("b.0")}


def _decs(text):
    return {(render(k), tuple(render(x) for x in parts)) for k, parts in decompositions(P(text))}


def test_decompositions():
    assert _decs("a.0 | b.0") == {
        ("a.0 | b.0", ()), ("b.0 | [.0]", ("a.0",)), ("a.0 | [.0]", ("b.0",)),
        ("[.0]", ("a.0 | b.0",)), ("[.0] | [.1]", ("a.0", "b.0"))}
    assert _decs("a[c.0]") == {("a[c.0]", ()), ("[.0]", ("a[c.0]",)), ("a[[.0]]", ("c.0",))}
    assert _decs("0") == {("0", ()), ("[.0]", ("0",))}


def test_decompositions_plug_back():
    p = canonicalize(P("l[a.0 | m[b.0]] | c.0"))
    for k, parts in decompositions(p):
        assert canonicalize(plug(k, parts)) == p


def test_pred_basis_sync():
    basis = pred_basis(P("0 | 0"), [P("a.0 | a!.0")])
    assert canonicalize(P("a.0 | a!.0")) in basis


def test_pred_basis_nothing_to_do():
    assert pred_basis(P("e.0"), [P("e.0")]) == []


def test_pred_basis_update():
    basis = pred_basis(P("c.0"), [P("a{c.0}.0"), P("a[x.0]")])
    assert canonicalize(P("a[x.0] | a{c.0}.0")) in basis


def test_pred_basis_is_sound():
    s = [P("a{b[@ | @]}.0"), P("a[c.0 | d.0]")]
    target = P("b[c.0] | d.0")
    basis = pred_basis(target, s)
    assert basis
    for q in basis:
        assert any(embeds(target, r) for r in successors(q))


def test_pred_star():
    assert pred_star([P("e.0")], [P("e.0")]) == [P("e.0")]
    assert pred_star([], [P("e.0")]) == []
    got = pred_star([P("0")], [P("e.0"), P("e!.0")])
    assert set(got) == {P("0"), canonicalize(P("e.0 | e!.0"))}


def test_fb_alpha_k():
    assert P("e.0") in fb_alpha_k([P("e.0"), P("e!.0")], "e", 1)
    got = fb_alpha_k([P("x.e.0"), P("x!.0")], "e", 1)
    assert set(got) == {P("e.0"), canonicalize(P("x.e.0 | x!.0"))}
    assert fb_alpha_k([P("x.y!.0")], "e", 2) == []


@pytest.mark.parametrize("p, mods, k, verdict", [
    ("x!.0", ["x.e.0"], 1, "violated"),
    ("x.e.0", [], 1, "holds"),
    ("e.0 | e!.e.0", [], 2, "violated"),
    ("a[e.0] | a{b[0]}.0", [], 2, "holds"),
    ("x.x.e.0", ["x!.0"], 1, "violated"),
])
def test_decide_ba(p, mods, k, verdict):
    v = decide_ba(Cluster(P(p), [P(m) for m in mods]), "e", k)
    assert v.status == verdict


def test_decide_ba_witness():
    v = decide_ba(Cluster(P("x.x.e.0"), [P("x!.0")]), "e", 1)
    assert v.counts == [2]
    assert v.trace and render(v.trace[-1]).count("e.0") == 1


def test_decide_ba_rejects_pattern_one():
    with pytest.raises(ClassError):
        decide_ba(Cluster(P("a[x.0] | a{y.0 | t.@}.0"), []), "e", 1)


def test_reach_relation():
    members = [P("l[e.e!.0]"), P("!l{!a!.0}.0")]
    r = Reach(members)
    assert r.possible(P("l[e.e!.0]"))
    assert r.possible(P("!a!.0 | e!.0"))
    assert not r.possible(P("l[l[0]]"))


def test_reach_follows_updates():
    r = Reach([P("l[x.0] | l{l[m[@]]}.0")])
    assert r.possible(P("l[m[x.0]]"))
    assert not r.possible(P("m[l[x.0]]"))


def test_order_not_kept_by_parallel_continuations():
    p, q = P("a.(x.0 | y.0) | a!.0"), P("m[a.(x.0 | y.0)] | a!.0")
    assert embeds(p, q)
    (p2,), (q2,) = successors(p), successors(q)
    assert not embeds(p2, q2)


def test_extensions_stay_within_two_holes():
    from adaptable.wsts_ba import extensions

    shapes = {render(k): [render(e) for e in extensions(k)]
              for k, _ in decompositions(P("a.0 | b.0"))}
    assert shapes["a.0 | b.0"] == ["a.0 | b.0", "a.0 | b.0 | [.0]", "a.0 | b.0 | [.0] | [.1]"]
    assert shapes["b.0 | [.0]"] == ["b.0 | [.0]", "b.0 | [.0] | [.1]"]
    assert shapes["[.0] | [.1]"] == ["[.0] | [.1]"]
