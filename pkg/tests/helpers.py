"""Shared corpora for the test modules, built once per process."""
from __future__ import annotations

from collections import defaultdict
from functools import lru_cache
from pathlib import Path

from properad_kit.gamma import hom_set, is_negative, is_positive
from properad_kit.graph import parse_graph
from properad_kit.universe import enumerate_graphs

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"


def corpus_graph(name: str):
    return parse_graph((CORPUS / "graphs" / f"{name}.graph").read_text())


@lru_cache(maxsize=None)
def reedy_universe():
    """Graphs with at most 3 vertices and 6 edges, one per weak iso class."""
    return enumerate_graphs(3, 6)


@lru_cache(maxsize=None)
def hom_corpus():
    """Every morphism between members of the Reedy universe, keyed by
    (source, target)."""
    U = reedy_universe()
    homs = {}
    for H in U:
        for G in U:
            hs = hom_set(H, G)
            if hs:
                homs[(H, G)] = hs
    return homs


@lru_cache(maxsize=None)
def signed_index():
    """Negative maps by source and positive maps by (source, target)."""
    neg, pos = defaultdict(list), defaultdict(list)
    for (H, K), hs in hom_corpus().items():
        for h in hs:
            if is_negative(h):
                neg[H].append(h)
            if is_positive(h):
                pos[(H, K)].append(h)
    return neg, pos


@lru_cache(maxsize=None)
def _small_by_arity():
    table = defaultdict(list)
    for G in enumerate_graphs(2, 5):
        table[G.arity].append(G)
    return table


def _arity(vertex):
    return vertex.in_arity, vertex.out_arity


def _perm(rng, n):
    p = list(range(1, n + 1))
    rng.shuffle(p)
    return tuple(p)


def random_nested(rng):
    """A random triple (G, v, H, w, K) with bijections for checking
    G(H(K_w)_v) against (G(H_v))(K_{v.w}); every graph has at most 2
    vertices, so both sides have at most 4."""
    from properad_kit.substitution import SubstitutionAssignment as A

    table = _small_by_arity()
    G = rng.choice([X for X in enumerate_graphs(2, 5) if X.vertices])
    v = rng.choice(G.vertex_ids)
    H = rng.choice([X for X in table[_arity(G.vertex_map[v])] if X.vertices])
    w = rng.choice(H.vertex_ids)
    K = rng.choice(table[_arity(H.vertex_map[w])])
    vert_v, vert_w = G.vertex_map[v], H.vertex_map[w]
    outer = A(v, H, _perm(rng, vert_v.in_arity), _perm(rng, vert_v.out_arity))
    inner = A(w, K, _perm(rng, vert_w.in_arity), _perm(rng, vert_w.out_arity))
    return G, outer, inner
