"""Slow reference implementations used to cross-check the library.

Nothing here calls into the library's search code; only the plain graph
data structures are shared.
"""
from __future__ import annotations

import itertools

from properad_kit.graph import WiringGraph


def _tail(G: WiringGraph, e: str):
    t = G.edge_map[e].tail
    return None if isinstance(t, int) else t.vertex


def _head(G: WiringGraph, e: str):
    h = G.edge_map[e].head
    return None if isinstance(h, int) else h.vertex


def reachable(G: WiringGraph, v: str) -> set[str]:
    seen, todo = set(), [v]
    while todo:
        x = todo.pop()
        for e in G.edge_ids:
            if _tail(G, e) == x and _head(G, e) is not None and _head(G, e) not in seen:
                seen.add(_head(G, e))
                todo.append(_head(G, e))
    return seen


def connected(G: WiringGraph, S) -> bool:
    S = set(S)
    if not S:
        return False
    start = next(iter(S))
    seen, todo = {start}, [start]
    while todo:
        x = todo.pop()
        for e in G.edge_ids:
            a, b = _tail(G, e), _head(G, e)
            for p, q in ((a, b), (b, a)):
                if p == x and q in S and q not in seen:
                    seen.add(q)
                    todo.append(q)
    return seen == S


def convex(G: WiringGraph, S) -> bool:
    S = set(S)
    reach = {v: reachable(G, v) for v in G.vertex_ids}
    for a in S:
        for b in S:
            for m in G.vertex_ids:
                if m not in S and m in reach[a] and b in reach[m]:
                    return False
    return True


def simply_connected(G: WiringGraph) -> bool:
    """Connected with exactly |V| - 1 internal edges (undirected tree)."""
    internal = [e for e in G.edge_ids if _tail(G, e) is not None and _head(G, e) is not None]
    if not G.vertex_ids:
        return True
    return connected(G, G.vertex_ids) and len(internal) == len(G.vertex_ids) - 1


def boundary(G: WiringGraph, S) -> tuple[set[str], set[str], set[str]]:
    """(inputs, outputs, internal edges) of the vertex set S."""
    S = set(S)
    ins, outs, inner = set(), set(), set()
    for e in G.edge_ids:
        t, h = _tail(G, e) in S, _head(G, e) in S
        if t and h:
            inner.add(e)
        elif h:
            ins.add(e)
        elif t:
            outs.add(e)
    return ins, outs, inner


def brute_hom(H: WiringGraph, G: WiringGraph) -> set[tuple]:
    """All morphisms H -> G as (f0 items, blocks items), straight from the
    definition: every vertex goes to a connected convex block with matching
    boundary or to an edge, and the assembled image is a subgraph of G in
    which every vertex and edge is hit once."""
    subsets = [frozenset()]
    for r in range(1, len(G.vertex_ids) + 1):
        for S in itertools.combinations(G.vertex_ids, r):
            if connected(G, S) and convex(G, S):
                subsets.append(frozenset(S))
    bnd = {S: boundary(G, S) for S in subsets if S}
    found = set()
    hv = list(H.vertex_ids)
    for blocks in itertools.product(subsets, repeat=len(hv)):
        bl = dict(zip(hv, blocks))
        used = [b for b in blocks if b]
        if used and sum(map(len, used)) != len(frozenset().union(*used)):
            continue
        ok = True
        for v in hv:
            vert = H.vertex_map[v]
            if not bl[v]:
                ok &= (vert.in_arity, vert.out_arity) == (1, 1)
            else:
                ins, outs, _ = bnd[bl[v]]
                ok &= (len(ins), len(outs)) == (vert.in_arity, vert.out_arity)
        if not ok:
            continue
        options = []
        for e in H.edge_ids:
            allowed = set(G.edge_ids)
            t, h = _tail(H, e), _head(H, e)
            if t is not None and bl[t]:
                allowed &= bnd[bl[t]][1]
            if h is not None and bl[h]:
                allowed &= bnd[bl[h]][0]
            options.append(sorted(allowed))
        for choice in itertools.product(*options):
            f0 = dict(zip(H.edge_ids, choice))
            if _image_ok(H, G, f0, bl, bnd):
                found.add((tuple(sorted(f0.items())), tuple(sorted((v, tuple(sorted(b))) for v, b in bl.items()))))
    return found


def _image_ok(H, G, f0, bl, bnd) -> bool:
    # edges of H glued through collapsed vertices form one image edge
    parent = {e: e for e in H.edge_ids}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for v in H.vertex_ids:
        if bl[v]:
            ins, outs, _ = bnd[bl[v]]
            if {f0[e] for e in H.in_edges(v)} != ins or {f0[e] for e in H.out_edges(v)} != outs:
                return False
        else:
            (a,), (b,) = H.in_edges(v), H.out_edges(v)
            if f0[a] != f0[b]:
                return False
            parent[find(a)] = find(b)
    classes: dict[str, str] = {}
    for e in H.edge_ids:
        r = find(e)
        if r in classes and classes[r] != f0[e]:
            return False
        classes[r] = f0[e]
    images = list(classes.values())
    if len(set(images)) != len(images):
        return False
    inner = [x for v in H.vertex_ids if bl[v] for x in bnd[bl[v]][2]]
    if len(set(inner)) != len(inner) or set(inner) & set(images):
        return False
    V = set().union(*[bl[v] for v in H.vertex_ids]) if H.vertex_ids else set()
    if not V:
        return len(set(images)) == 1
    if not connected(G, V) or not convex(G, V):
        return False
    ins, outs, internal = boundary(G, V)
    return set(images) | set(inner) == ins | outs | internal


def brute_weak_iso(G: WiringGraph, H: WiringGraph) -> bool:
    """Try every vertex bijection, then match edges by (tail, head, color)."""
    if len(G.vertex_ids) != len(H.vertex_ids) or len(G.edge_ids) != len(H.edge_ids):
        return False
    for perm in itertools.permutations(H.vertex_ids):
        vm = dict(zip(G.vertex_ids, perm))
        if any(
            (G.vertex_map[a].in_arity, G.vertex_map[a].out_arity)
            != (H.vertex_map[b].in_arity, H.vertex_map[b].out_arity)
            for a, b in vm.items()
        ):
            continue
        left = sorted(
            (repr(vm.get(_tail(G, e))), repr(vm.get(_head(G, e))), repr(G.edge_map[e].color)) for e in G.edge_ids
        )
        right = sorted(
            (repr(_tail(H, e)), repr(_head(H, e)), repr(H.edge_map[e].color)) for e in H.edge_ids
        )
        if left == right:
            return True
    return False


def nerve_count(P, G: WiringGraph) -> int:
    """|N(P)_G| by summing over all edge colorings the number of operation
    choices per vertex."""
    from math import prod

    from properad_kit.graph import Biprofile

    total = 0
    for cols in itertools.product(P.colors, repeat=len(G.edge_ids)):
        c = dict(zip(G.edge_ids, cols))
        total += prod(
            len(P.ops.get(Biprofile(tuple(c[e] for e in G.in_edges(v)), tuple(c[e] for e in G.out_edges(v))), ()))
            for v in G.vertex_ids
        )
    return total


def brute_automorphism_count(G: WiringGraph) -> int:
    """Vertex permutations preserving the edge multiset, times the ways to
    permute parallel edges (same tail, head and color)."""
    from collections import Counter
    from math import factorial, prod

    groups = Counter((_tail(G, e), _head(G, e), repr(G.edge_map[e].color)) for e in G.edge_ids)
    total = 0
    for perm in itertools.permutations(G.vertex_ids):
        vm = dict(zip(G.vertex_ids, perm))
        moved = Counter((vm.get(t), vm.get(h), c) for (t, h, c), n in groups.items() for _ in range(n))
        if moved == groups and all(
            (G.vertex_map[a].in_arity, G.vertex_map[a].out_arity) == (G.vertex_map[b].in_arity, G.vertex_map[b].out_arity)
            for a, b in vm.items()
        ):
            total += prod(factorial(n) for n in groups.values())
    return total
