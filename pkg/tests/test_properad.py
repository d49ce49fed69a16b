import json
from collections import Counter

import pytest

from oracles import nerve_count
from helpers import CORPUS, corpus_graph
from properad_kit.gamma import DecoratedGraph
from properad_kit.graph import Biprofile, biprofile_of, is_simply_connected, make_pgc
from properad_kit.properad import (
    MONOIDS,
    FiniteProperad,
    all_free_elements,
    build_properad,
    check_properad_axioms,
    composite_profile,
    evaluate,
    evaluate_all_orders,
    free_elements,
    nerve,
    random_properad,
    terminal_properad,
)
from properad_kit.universe import enumerate_graphs


def load(name):
    return FiniteProperad.from_json(json.loads((CORPUS / name).read_text()))


def test_composite_profile_order():
    a = Biprofile(("a", "b"), ("x", "y", "z"))
    b = Biprofile(("y", "c"), ("d",))
    assert composite_profile(a, b, [(2, 1)]) == Biprofile(("a", "b", "c"), ("x", "z", "d"))


@pytest.mark.parametrize("name", ["terminal_a2", "pointer"] + [f"random_{i}" for i in range(5)])
def test_corpus_properads_pass(name):
    P = load(f"properads/{name}.json")
    report = check_properad_axioms(P)
    assert report.ok, report.violations[:3]
    assert FiniteProperad.from_json(json.loads(P.dumps())).to_json() == P.to_json()


@pytest.mark.parametrize("name,axiom", [("perturbed_unit", "unit"), ("perturbed_assoc", "associativity")])
def test_perturbed_properads_fail(name, axiom):
    report = check_properad_axioms(load(f"mutations/{name}.json"))
    assert not report.ok
    assert axiom in report.names()


@pytest.mark.parametrize("seed", range(10))
def test_random_properads_within_limits(seed):
    P = random_properad(seed)
    assert len(P.colors) <= 3
    assert all(len(t) <= 3 for t in P.ops.values())
    assert all(len(p.inputs) <= 3 and len(p.outputs) <= 3 for p in P.ops)
    assert check_properad_axioms(P).ok


def test_random_properads_deterministic():
    assert random_properad(5).to_json() == random_properad(5).to_json()


def test_monoid_evaluation_is_product():
    profiles = {Biprofile(("a",), ("a",)), Biprofile(("a",) * 2, ("a",)), Biprofile(("a",), ("a",) * 2)}
    from properad_kit.properad import _closure

    closed = _closure(profiles, 3, 40)
    P = build_properad(("a",), closed, "z3")
    elems, mult, unit = MONOIDS["z3"]
    for G in enumerate_graphs(3, 6, arities=P.arities()):
        for d in nerve(P, G)[:30]:
            if not G.vertices or not P.within_bound(biprofile_of(G.recolored({e: "a" for e in G.edge_ids}))):
                continue
            want = 0
            for t in d.vertex_decoration.values():
                want = mult(want, int(t.split(":")[1]))
            got = evaluate(P, d)
            assert int(got.split(":")[1]) == want
            assert set(evaluate_all_orders(P, d).values()) == {got}


def test_nerve_counts_match_closed_form():
    for name in ["terminal_a2", "pointer", "random_0", "random_1"]:
        P = load(f"properads/{name}.json")
        for G in enumerate_graphs(3, 5, arities=P.arities() | {(1, 1)}):
            assert len(nerve(P, G)) == nerve_count(P, G)


def test_terminal_nerve_one_per_coloring():
    P = terminal_properad(["a"], max_arity=2)
    for G in enumerate_graphs(2, 4, max_arity=2):
        assert len(nerve(P, G)) == 1


def test_nerve_of_pgc_is_composable_pairs():
    P = load("properads/random_2.json")
    G = make_pgc((1, 2), (2, 1), [(1, 1), (2, 2)])
    expected = sum(
        len(P.ops.get(pa, ())) * len(P.ops.get(Biprofile(pa.outputs, pb.outputs), ()))
        for pa in P.ops
        for pb in P.ops
        if (len(pa.inputs), len(pa.outputs)) == (1, 2) and (len(pb.inputs), len(pb.outputs)) == (2, 1)
        and pb.inputs == pa.outputs
    )
    assert len(nerve(P, G)) == expected


def test_free_elements_use_each_vertex_once_on_trees():
    for G in enumerate_graphs(3, max_arity=2):
        if not is_simply_connected(G):
            continue
        for d in all_free_elements(G, 3):
            counts = Counter(d.vertex_decoration.values())
            assert all(n == 1 for n in counts.values())


def test_free_elements_repeat_vertices_off_trees():
    D = corpus_graph("double_edge")
    repeats = [d for d in all_free_elements(D, 4) if len(set(d.vertex_decoration.values())) < len(d.vertex_decoration)]
    assert repeats


def test_free_elements_of_corolla():
    T = corpus_graph("tree_T")
    C = T.corolla_of("w")
    found = free_elements(C, Biprofile(tuple(C.inputs), tuple(C.outputs)), 2)
    assert len(found) == 1
    assert isinstance(found[0], DecoratedGraph)
    assert found[0].vertex_decoration == {v: "w" for v in found[0].shape.vertex_ids}
