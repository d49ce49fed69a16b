import random

import pytest

from helpers import corpus_graph, random_nested
from properad_kit.graph import (
    GraphError,
    make_corolla,
    make_exceptional_edge,
    make_linear_graph,
    validate_graph,
    weakly_isomorphic,
)
from properad_kit.substitution import (
    SubstitutionAssignment as A,
    codegeneracy,
    contract,
    enumerate_cofaces_into,
    inner_cofaces_into,
    outer_cofaces_into,
    substitute,
)
from properad_kit.universe import enumerate_graphs


def test_worked_example_counts():
    G, P = corpus_graph("subst_host"), corpus_graph("subst_guest")
    out = substitute(G, A("x", P))
    assert validate_graph(out).ok
    assert len(out.vertices) == 3
    assert len(out.internal_edges()) == len(G.internal_edges()) + 3


def test_arity_mismatch_names_the_port():
    G = corpus_graph("subst_host")
    with pytest.raises(GraphError, match="x:in"):
        substitute(G, A("x", make_corolla(1, 4)))


def test_bad_bijection_rejected():
    G = make_corolla(2, 1)
    with pytest.raises(GraphError, match="not a bijection"):
        substitute(G, A("v", make_corolla(2, 1), in_bij=(1, 1)))


def test_units():
    for G in enumerate_graphs(2, 4):
        for v in G.vertex_ids:
            corolla = G.corolla_of(v)
            assert weakly_isomorphic(substitute(G, A(v, corolla)), G)
        if G.vertices:
            C = make_corolla(*G.arity)
            assert weakly_isomorphic(substitute(C, A("v", G)), G)


def test_associativity_random():
    rng = random.Random(2024)
    for _ in range(200):
        G, outer, inner = random_nested(rng)
        left = substitute(substitute(G, outer), A(f"{outer.host_vertex}.{inner.host_vertex}", inner.guest, inner.in_bij, inner.out_bij))
        right = substitute(G, A(outer.host_vertex, substitute(outer.guest, inner), outer.in_bij, outer.out_bij))
        assert validate_graph(left).ok
        assert weakly_isomorphic(left, right)
        assert left == right


def test_codegeneracy_keeps_input_edge_id():
    L = make_linear_graph(2)
    gm = codegeneracy(L, "v1")
    assert len(gm.target.vertices) == 1
    assert gm.target.vertex_ids == ("v2",)
    assert "e0" in gm.target.edge_ids and "e1" not in gm.target.edge_ids
    with pytest.raises(GraphError):
        codegeneracy(make_corolla(2, 1), "v")


def test_codegeneracy_on_exceptional_substitution():
    L = make_linear_graph(1)
    out = substitute(L, A("v1", make_exceptional_edge()))
    assert out.is_exceptional


@pytest.mark.parametrize("n", range(1, 6))
def test_linear_coface_counts(n):
    L = make_linear_graph(n)
    assert len(inner_cofaces_into(L)) == n - 1
    assert len(outer_cofaces_into(L)) == 2
    assert len(enumerate_cofaces_into(L)) == n + 1


def test_coface_witnesses_replay():
    for K in enumerate_graphs(3, 5):
        for gm in enumerate_cofaces_into(K):
            assert gm.replay() == K
            assert len(gm.source.vertices) == len(K.vertices) - 1 or gm.source.is_exceptional


def test_contract_then_substitute_restores():
    T = corpus_graph("tree_T")
    for e in T.internal_edges():
        S, sub, w = contract(T, [e.tail_vertex, e.head_vertex])
        assert substitute(S, A(w, sub), namespace=False) == T


def test_outer_coface_into_corolla_is_edge_inclusion():
    C = make_corolla(2, 1)
    faces = outer_cofaces_into(C)
    assert len(faces) == 3
    assert all(f.source.is_exceptional for f in faces)
