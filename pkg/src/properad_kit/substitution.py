"""Graph substitution and the generating maps it induces."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .graph import (
    IN,
    OUT,
    Edge,
    End,
    GraphError,
    Isomorphism,
    Port,
    Vertex,
    WiringGraph,
    canonical_form,
    format_graph,
    induced_subgraph,
    is_connected_set,
    is_convex,
    make_exceptional_edge,
    relabel,
)

INNER = "inner_coface"
OUTER = "outer_coface"
CODEGENERACY = "codegeneracy"
ISOMORPHISM = "isomorphism"


@dataclass(frozen=True)
class SubstitutionAssignment:
    """Put ``guest`` in place of ``host_vertex``.

    ``in_bij[k-1]`` is the host input port receiving the guest's k-th graph
    input; likewise ``out_bij``.  Both default to the identity.
    """

    host_vertex: str
    guest: WiringGraph
    in_bij: tuple[int, ...] | None = None
    out_bij: tuple[int, ...] | None = None


def _bijection(bij, n: int, where: str) -> tuple[int, ...]:
    bij = tuple(range(1, n + 1)) if bij is None else tuple(bij)
    if sorted(bij) != list(range(1, n + 1)):
        raise GraphError(f"{where}: {list(bij)} is not a bijection onto ports 1..{n}")
    return bij


def substitute(G: WiringGraph, a: SubstitutionAssignment, namespace: bool = True) -> WiringGraph:
    """G with the guest graph substituted at the host vertex.

    Guest vertices and internal edges are renamed ``host.id`` unless
    ``namespace`` is false.  Boundary edges keep the host's ids; when the
    guest is the exceptional edge the merged edge keeps the id of the host
    vertex's input edge.
    """
    vid = a.host_vertex
    if vid not in G.vertex_map:
        raise GraphError(f"unknown host vertex {vid!r}")
    v = G.vertex_map[vid]
    H = a.guest
    if len(H.inputs) != v.in_arity:
        raise GraphError(f"arity mismatch at {vid}:in: guest has {len(H.inputs)} inputs, vertex has {v.in_arity}")
    if len(H.outputs) != v.out_arity:
        raise GraphError(
            f"arity mismatch at {vid}:out: guest has {len(H.outputs)} outputs, vertex has {v.out_arity}"
        )
    in_bij = _bijection(a.in_bij, v.in_arity, f"{vid}:in")
    out_bij = _bijection(a.out_bij, v.out_arity, f"{vid}:out")
    host_in, host_out = G.in_edges(vid), G.out_edges(vid)
    leg_in = {H.inputs[k]: host_in[in_bij[k] - 1] for k in range(len(H.inputs))}
    leg_out = {H.outputs[k]: host_out[out_bij[k] - 1] for k in range(len(H.outputs))}

    host_colored = any(G.edge_map[e].color is not None for e in host_in + host_out)
    if H.internal_edges() and host_colored != H.is_colored:
        raise GraphError(f"coloring mismatch at {vid}: host and guest must both be colored or both uncolored")
    for legs, host_edges, direction, bij in ((H.inputs, host_in, IN, in_bij), (H.outputs, host_out, OUT, out_bij)):
        for k, gid in enumerate(legs):
            gc = H.edge_map[gid].color
            hc = G.edge_map[host_edges[bij[k] - 1]].color
            if gc is not None and hc is not None and gc != hc:
                raise GraphError(f"color mismatch at port {vid}:{direction}:{bij[k]}: host {hc}, guest {gc}")

    def vname(w: str) -> str:
        return f"{vid}.{w}" if namespace else w

    def ename(e: str) -> str:
        return f"{vid}.{e}" if namespace else e

    def guest_end(x: End) -> End:
        return x if isinstance(x, int) else Port(vname(x.vertex), x.direction, x.index)

    touching = set(host_in) | set(host_out)
    edges: list[Edge] = [e for e in G.edges if e.id not in touching]
    outputs = list(G.outputs)
    for e in H.edges:
        if e.is_input_leg and e.is_output_leg:
            # the guest is the exceptional edge: fuse the two host edges
            hin, hout = G.edge_map[leg_in[e.id]], G.edge_map[leg_out[e.id]]
            edges.append(Edge(hin.id, hin.tail, hout.head, hin.color))
            if isinstance(hout.head, int):
                outputs[hout.head - 1] = hin.id
        elif e.is_input_leg:
            h = G.edge_map[leg_in[e.id]]
            edges.append(Edge(h.id, h.tail, guest_end(e.head), h.color))
        elif e.is_output_leg:
            h = G.edge_map[leg_out[e.id]]
            edges.append(Edge(h.id, guest_end(e.tail), h.head, h.color))
        else:
            edges.append(Edge(ename(e.id), guest_end(e.tail), guest_end(e.head), e.color))
    vertices = [w for w in G.vertices if w.id != vid]
    vertices += [Vertex(vname(w.id), w.in_arity, w.out_arity) for w in H.vertices]
    return WiringGraph(vertices, edges, G.inputs, outputs, name=G.name)


def substitute_many(
    G: WiringGraph, assignments: Iterable[SubstitutionAssignment], namespace: bool = True
) -> WiringGraph:
    """Substitute at several distinct vertices at once."""
    assignments = list(assignments)
    hosts = [a.host_vertex for a in assignments]
    if len(set(hosts)) != len(hosts):
        raise GraphError(f"duplicate host vertex in {sorted(hosts)}")
    for a in sorted(assignments, key=lambda a: a.host_vertex):
        G = substitute(G, a, namespace=namespace)
    return G


# ---------------------------------------------------------------------------
# contraction and deletion


def contract(G: WiringGraph, S: Iterable[str], new_id: str | None = None) -> tuple[WiringGraph, WiringGraph, str]:
    """Collapse the convex connected vertex set S to one vertex.

    Returns (contracted graph, induced subgraph on S, new vertex id).  The
    new vertex's ports follow the induced subgraph's leg order, so
    substituting the subgraph back (without renaming) restores G exactly.
    """
    S = set(S)
    if not is_connected_set(G, S) or not is_convex(G, S):
        raise GraphError(f"vertex set {sorted(S)} is not connected and convex")
    sub = induced_subgraph(G, S)
    w = new_id or "+".join(sub.vertex_ids if len(S) == 1 else [v.id for v in sub.vertices])
    if w in G.vertex_map and w not in S:
        raise GraphError(f"vertex id {w!r} already in use")
    in_pos = {e: k for k, e in enumerate(sub.inputs, 1)}
    out_pos = {e: k for k, e in enumerate(sub.outputs, 1)}
    edges = []
    for e in G.edges:
        inside_t = e.tail_vertex in S
        inside_h = e.head_vertex in S
        if inside_t and inside_h:
            continue
        tail = Port(w, OUT, out_pos[e.id]) if inside_t else e.tail
        head = Port(w, IN, in_pos[e.id]) if inside_h else e.head
        edges.append(Edge(e.id, tail, head, e.color))
    vertices = [v for v in G.vertices if v.id not in S] + [Vertex(w, len(sub.inputs), len(sub.outputs))]
    return WiringGraph(vertices, edges, G.inputs, G.outputs, name=G.name), sub, w


def delete_vertex(K: WiringGraph, x: str) -> WiringGraph:
    """K without x; edges between x and the rest become legs.  Surviving
    legs keep their relative order and new legs follow, sorted by edge id."""
    rest = set(K.vertex_ids) - {x}
    if not rest or not is_connected_set(K, rest) or not is_convex(K, rest):
        raise GraphError(f"deleting {x!r} does not leave a connected convex subgraph")
    old_in = [e for e in K.inputs if K.edge_map[e].head_vertex != x]
    old_out = [e for e in K.outputs if K.edge_map[e].tail_vertex != x]
    new_in = sorted(e.id for e in K.edges if e.tail_vertex == x and e.head_vertex in rest)
    new_out = sorted(e.id for e in K.edges if e.head_vertex == x and e.tail_vertex in rest)
    inputs, outputs = old_in + new_in, old_out + new_out
    in_slot = {e: k for k, e in enumerate(inputs, 1)}
    out_slot = {e: k for k, e in enumerate(outputs, 1)}
    edges = []
    for e in K.edges:
        if e.tail_vertex == x and e.head_vertex not in rest:
            continue
        if e.head_vertex == x and e.tail_vertex not in rest:
            continue
        tail = in_slot[e.id] if e.id in in_slot else e.tail
        head = out_slot[e.id] if e.id in out_slot else e.head
        edges.append(Edge(e.id, tail, head, e.color))
    return WiringGraph([v for v in K.vertices if v.id != x], edges, inputs, outputs)


def _outer_pgc(K: WiringGraph, x: str, S: WiringGraph) -> tuple[WiringGraph, str]:
    """The two-vertex graph with x and a slot vertex standing for S, such that
    substituting S into the slot gives back K."""
    slot = "rest"
    while slot in K.vertex_map:
        slot += "_"
    s_in = {e: k for k, e in enumerate(S.inputs, 1)}
    s_out = {e: k for k, e in enumerate(S.outputs, 1)}
    edges = []
    for e in K.edges:
        tail: End | None = e.tail
        head: End | None = e.head
        if e.id in s_out:
            tail = Port(slot, OUT, s_out[e.id])
        elif isinstance(e.tail, Port) and e.tail.vertex != x:
            tail = None
        if e.id in s_in:
            head = Port(slot, IN, s_in[e.id])
        elif isinstance(e.head, Port) and e.head.vertex != x:
            head = None
        if tail is None or head is None:
            continue
        edges.append(Edge(e.id, tail, head, e.color))
    vertices = [K.vertex_map[x], Vertex(slot, len(S.inputs), len(S.outputs))]
    return WiringGraph(vertices, edges, K.inputs, K.outputs, name="pgc"), slot


# ---------------------------------------------------------------------------
# generator maps


@dataclass(frozen=True)
class GeneratorMap:
    kind: str
    source: WiringGraph
    target: WiringGraph
    witness: Mapping[str, Any] = field(default_factory=dict)

    def replay(self) -> WiringGraph:
        """Rebuild the target from the source and the witness."""
        w = self.witness
        if self.kind == INNER:
            return substitute(self.source, SubstitutionAssignment(w["vertex"], w["pgc"]), namespace=False)
        if self.kind == OUTER:
            if "edge" in w:
                corolla = w["corolla"]
                if corolla.edge_graph(w["edge"]) != self.source:
                    raise GraphError("edge witness does not match the source")
                return corolla
            return substitute(w["pgc"], SubstitutionAssignment(w["slot"], self.source), namespace=False)
        if self.kind == CODEGENERACY:
            return substitute(self.source, SubstitutionAssignment(w["vertex"], make_exceptional_edge()))
        if self.kind == ISOMORPHISM:
            iso: Isomorphism = w["iso"]
            return relabel(self.source, iso.vertex_map, iso.edge_map)
        raise GraphError(f"unknown generator kind {self.kind!r}")

    def to_json(self) -> dict:
        w = self.witness
        witness: dict[str, Any] = {}
        for key, value in w.items():
            if isinstance(value, WiringGraph):
                witness[key] = format_graph(value)
            elif isinstance(value, Isomorphism):
                witness[key] = {"vertices": dict(value.vertex_map), "edges": dict(value.edge_map)}
            else:
                witness[key] = value
        return {
            "kind": self.kind,
            "source": format_graph(self.source),
            "target": format_graph(self.target),
            "source_canonical": _digest(self.source),
            "target_canonical": _digest(self.target),
            "witness": witness,
        }


def _digest(G: WiringGraph) -> str:
    return hashlib.sha256(canonical_form(G)).hexdigest()[:16]


def inner_cofaces_into(K: WiringGraph) -> list[GeneratorMap]:
    out = []
    pairs = sorted({(e.tail_vertex, e.head_vertex) for e in K.internal_edges()})
    for u, v in pairs:
        if not is_convex(K, {u, v}):
            continue
        S, sub, w = contract(K, [u, v])
        out.append(GeneratorMap(INNER, S, K, {"vertex": w, "pgc": sub}))
    return out


def outer_cofaces_into(K: WiringGraph) -> list[GeneratorMap]:
    if len(K.vertices) == 1:
        x = K.vertex_ids[0]
        return [
            GeneratorMap(OUTER, K.edge_graph(e), K, {"vertex": x, "edge": e, "corolla": K})
            for e in K.edge_ids
        ]
    out = []
    for x in K.vertex_ids:
        rest = set(K.vertex_ids) - {x}
        if not is_connected_set(K, rest) or not is_convex(K, rest):
            continue
        S = delete_vertex(K, x)
        P, slot = _outer_pgc(K, x, S)
        out.append(GeneratorMap(OUTER, S, K, {"vertex": x, "pgc": P, "slot": slot}))
    return out


def enumerate_cofaces_into(K: WiringGraph) -> list[GeneratorMap]:
    """Every coface map into K, inner ones first."""
    if not K.vertices:
        return []
    return inner_cofaces_into(K) + outer_cofaces_into(K)


def codegeneracy(G: WiringGraph, v: str) -> GeneratorMap:
    """Collapse the (1,1)-vertex v to an edge."""
    if v not in G.vertex_map:
        raise GraphError(f"unknown vertex {v!r}")
    vert = G.vertex_map[v]
    if (vert.in_arity, vert.out_arity) != (1, 1):
        raise GraphError(f"codegeneracy needs a (1,1)-vertex; {v} is ({vert.in_arity},{vert.out_arity})")
    target = substitute(G, SubstitutionAssignment(v, make_exceptional_edge()))
    return GeneratorMap(CODEGENERACY, G, target, {"vertex": v})


def isomorphism_map(G: WiringGraph, H: WiringGraph, iso: Isomorphism) -> GeneratorMap:
    return GeneratorMap(ISOMORPHISM, G, H, {"iso": iso})
