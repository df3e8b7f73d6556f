from collections import Counter

import pytest

from adaptable.cli import read_cluster_file
from adaptable.cluster import Cluster
from adaptable.core import TermError
from adaptable.petri_ea import (GO, START, Path, PetriNet, Proc, coverability_graph, dec,
                                decide_ea3, export_net, fair_cycle, infinite_visit,
                                place_bounded, translate)
from conftest import P, U


def test_dec():
    assert dec((), P("a[b.0 | c[d!.0]]")) == Counter({
        Proc(P("b.0"), ("a",)): 1, Proc(P("d!.0"), ("a", "c")): 1,
        Path(("a",)): 1, Path(("a", "c")): 1})
    assert dec((), P("0")) == Counter({Proc(P("0"), ()): 1})
    assert dec(("a",), U("@ | x.0")) == Counter({Proc(P("x.0"), ("a",)): 1})


def test_translate_sync():
    net = translate(Cluster(P("a[e.0 | e!.0]"), []))
    at = ("k$a",)
    assert (Counter({START: 1}), Counter({GO: 1})) in net.transitions
    pre = Counter({GO: 1, Proc(P("e.0"), at): 1, Proc(P("e!.0"), at): 1})
    post = Counter({GO: 1, Proc(P("0"), at): 2})
    assert (pre, post) in net.transitions
    assert net.init == Counter({START: 1, Path(at): 1, Proc(P("e.0"), at): 1,
                                Proc(P("e!.0"), at): 1})


def test_translate_replication_keeps_tokens():
    net = translate(Cluster(P("a[!e.0 | !e!.0]"), []))
    at = ("k$a",)
    ins, outs = Proc(P("!e.0"), at), Proc(P("!e!.0"), at)
    assert any(pre[ins] and pre[outs] and post[ins] and post[outs] for pre, post in net.transitions)


def test_translate_update_needs_two_paths_inside():
    net = translate(Cluster(P("l[l{l[@ | x.0]}.0]"), []))
    ups = [(pre, post) for pre, post in net.transitions if any(
        isinstance(p, Path) for p in pre)]
    assert ups and all(pre[Path(("k$l",))] == 2 for pre, _ in ups)


def test_translate_rejects_non_preserving():
    with pytest.raises(TermError):
        translate(Cluster(P("l[0] | l{l[0]}.0"), []))


def _net(transitions, init):
    n = PetriNet(init=Counter(init))
    n.places.update(init)
    for pre, post in transitions:
        n.add(Counter(pre), Counter(post))
    return n


def test_place_bounded():
    assert not place_bounded(_net([({"p": 1}, {"p": 2})], {"p": 1}), "p")
    assert place_bounded(_net([({"p": 1}, {"p": 1})], {"p": 1}), "p")
    assert place_bounded(_net([], {"p": 1}), "p")


def test_infinite_visit():
    loop = _net([({"p": 1}, {"p": 1})], {"p": 1})
    assert infinite_visit(loop, {"p"}, "p")
    stop = _net([({"p": 1}, {"q": 1})], {"p": 1})
    assert not infinite_visit(stop, {"p", "q"}, "p")
    never = _net([({"p": 1}, {"p": 1})], {"p": 1})
    never.places.add("m")
    assert not infinite_visit(never, {"p"}, "m")


def test_fair_cycle_needs_non_negative_loop():
    # "s" pumps "u" without bound, "go" then eats one "u" per firing
    n = _net([({"s": 1}, {"s": 1, "u": 1}), ({"s": 1}, {"go": 1}),
              ({"go": 1, "u": 1}, {"go": 1})], {"s": 1})
    n.places.add("go")
    assert fair_cycle(n, {"go"}, "go") is None
    assert infinite_visit(n, {"go"}, "go")      # the boundedness reduction over-approximates
    n.add(Counter({"go": 1}), Counter({"go": 1}))
    assert fair_cycle(n, {"go"}, "go") is not None


def test_coverability_graph_simulates_runs():
    n = _net([({"a": 1}, {"a": 1, "b": 1}), ({"b": 2}, {"c": 1})], {"a": 1})
    nodes, edges, idx = coverability_graph(n)
    assert len({e[1] for e in edges}) == 2
    ib = idx.pos["b"]
    assert any(v[ib] == float("inf") for v in nodes)


@pytest.mark.parametrize("p, mods, verdict", [
    ("a[!e.0 | !e!.0]", [], "violated"),
    ("a[e.0 | e!.0]", [], "holds"),
    ("0", ["e.0"], "holds"),
])
def test_decide_ea3(p, mods, verdict):
    assert decide_ea3(Cluster(P(p), [P(m) for m in mods]), "e").status == verdict


def test_boundedness_method_over_approximates(fixtures):
    c = read_cluster_file(str(fixtures / "ea" / "06_workflow_emergency.cluster"))
    assert decide_ea3(c, "urgent!").status == "holds"
    assert decide_ea3(c, "urgent!", method="boundedness").status == "violated"


def test_export_net():
    text = export_net(translate(Cluster(P("a[e.0 | e!.0]"), [])))
    lines = text.splitlines()
    assert "place go" in lines and "place path:k$a" in lines
    assert "trans start*1 -> go*1" in lines
    assert "trans go*1 proc:e!.0@k$a*1 proc:e.0@k$a*1 -> go*1 proc:0@k$a*2" in lines
