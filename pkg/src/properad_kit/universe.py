"""Exhaustive enumeration of small graphs up to weak isomorphism."""
from __future__ import annotations

import itertools
from functools import lru_cache

from .graph import (
    IN,
    OUT,
    Edge,
    Port,
    Vertex,
    WiringGraph,
    canonical_form,
    canonical_representative,
    make_exceptional_edge,
)


def _build(n: int, mult: dict[tuple[int, int], int], a: list[int], b: list[int]) -> WiringGraph:
    names = [f"v{i}" for i in range(n)]
    in_used = [0] * n
    out_used = [0] * n
    edges = []
    inputs, outputs = [], []
    count = itertools.count()

    def fresh() -> str:
        return f"e{next(count)}"

    for i in range(n):
        for _ in range(a[i]):
            eid = fresh()
            in_used[i] += 1
            inputs.append(eid)
            edges.append(Edge(eid, len(inputs), Port(names[i], IN, in_used[i])))
    for (i, j), k in sorted(mult.items()):
        for _ in range(k):
            out_used[i] += 1
            in_used[j] += 1
            edges.append(Edge(fresh(), Port(names[i], OUT, out_used[i]), Port(names[j], IN, in_used[j])))
    for i in range(n):
        for _ in range(b[i]):
            eid = fresh()
            out_used[i] += 1
            outputs.append(eid)
            edges.append(Edge(eid, Port(names[i], OUT, out_used[i]), len(outputs)))
    vertices = [Vertex(names[i], in_used[i], out_used[i]) for i in range(n)]
    return WiringGraph(vertices, edges, inputs, outputs)


def _connected(n: int, mult: dict[tuple[int, int], int]) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for (i, j), k in mult.items():
        if k:
            parent[find(i)] = find(j)
    return len({find(i) for i in range(n)}) == 1


def _multiplicities(n: int, pairs: list[tuple[int, int]], max_arity: int, max_edges: int):
    """Edge counts for each pair i < j, keeping every vertex within arity."""
    ins = [0] * n
    outs = [0] * n
    mult: dict[tuple[int, int], int] = {}

    def walk(k: int, used: int):
        if k == len(pairs):
            yield dict(mult)
            return
        i, j = pairs[k]
        top = min(max_arity - outs[i], max_arity - ins[j], max_edges - used)
        for m in range(top + 1):
            mult[pairs[k]] = m
            outs[i] += m
            ins[j] += m
            yield from walk(k + 1, used + m)
            outs[i] -= m
            ins[j] -= m

    yield from walk(0, 0)


@lru_cache(maxsize=None)
def enumerate_graphs(
    max_vertices: int,
    max_edges: int | None = None,
    arities: frozenset[tuple[int, int]] | None = None,
    max_arity: int | None = None,
) -> tuple[WiringGraph, ...]:
    """One canonical representative per weak iso class of uncolored graphs.

    Graphs have at most ``max_vertices`` vertices.  At least one of
    ``max_edges``, ``arities`` (allowed (in, out) pairs per vertex) or
    ``max_arity`` must bound the search.  Order: vertex count, edge count,
    canonical form.
    """
    if max_edges is None and arities is None and max_arity is None:
        raise ValueError("enumeration needs an edge or arity bound")
    if arities is not None:
        cap = max(max(p) for p in arities) if arities else 0
        max_arity = cap if max_arity is None else min(max_arity, cap)
    if max_arity is None:
        max_arity = max_edges
    if max_edges is None:
        max_edges = max_vertices * 2 * max_arity  # each edge uses a port
    seen: dict[bytes, WiringGraph] = {}

    def admit(G: WiringGraph) -> None:
        key = canonical_form(G)
        if key not in seen:
            seen[key] = canonical_representative(G)[0]

    admit(make_exceptional_edge())
    for n in range(1, max_vertices + 1):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        for mult in _multiplicities(n, pairs, max_arity, max_edges):
            if n > 1 and not _connected(n, mult):
                continue
            internal = sum(mult.values())
            in_int = [sum(mult[(i, j)] for i in range(j)) for j in range(n)]
            out_int = [sum(mult[(i, j)] for j in range(i + 1, n)) for i in range(n)]
            options = []
            for i in range(n):
                if arities is not None:
                    opts = [(p - in_int[i], q - out_int[i]) for p, q in sorted(arities)]
                else:
                    opts = [(x, y) for x in range(max_arity + 1) for y in range(max_arity + 1)]
                opts = [
                    (x, y) for x, y in opts
                    if x >= 0 and y >= 0 and in_int[i] + x <= max_arity and out_int[i] + y <= max_arity
                ]
                options.append(opts)
            for legs in itertools.product(*options):
                if internal + sum(x + y for x, y in legs) > max_edges:
                    continue
                admit(_build(n, mult, [x for x, _ in legs], [y for _, y in legs]))
    return tuple(
        sorted(seen.values(), key=lambda G: (len(G.vertices), len(G.edges), canonical_form(G)))
    )
