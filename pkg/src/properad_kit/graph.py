"""Wiring graphs: connected directed acyclic graphs with legs and ordered ports.

A graph is stored as a set of vertices (with input/output arities) and a set
of edges.  Every edge has exactly one tail and one head; either end may be a
vertex port or a graph boundary slot.  Ports and slots are 1-based.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Union

Color = str

IN = "in"
OUT = "out"


class GraphError(ValueError):
    """Raised for malformed graphs or operations applied out of contract."""


class GraphParseError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
        self.message = message


@dataclass(frozen=True, order=True)
class Port:
    vertex: str
    direction: str
    index: int

    def __str__(self) -> str:
        return f"{self.vertex}:{self.direction}:{self.index}"


# An edge end is either a vertex port or a boundary slot number.
End = Union[Port, int]


@dataclass(frozen=True)
class Edge:
    id: str
    tail: End
    head: End
    color: Color | None = None

    @property
    def is_input_leg(self) -> bool:
        return isinstance(self.tail, int)

    @property
    def is_output_leg(self) -> bool:
        return isinstance(self.head, int)

    @property
    def tail_vertex(self) -> str | None:
        return None if isinstance(self.tail, int) else self.tail.vertex

    @property
    def head_vertex(self) -> str | None:
        return None if isinstance(self.head, int) else self.head.vertex


@dataclass(frozen=True)
class Vertex:
    id: str
    in_arity: int
    out_arity: int


@dataclass(frozen=True)
class Biprofile:
    inputs: tuple[Color, ...]
    outputs: tuple[Color, ...]

    def __str__(self) -> str:
        return f"({','.join(self.inputs)};{','.join(self.outputs)})"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[tuple[str, str], ...] = ()

    @classmethod
    def from_violations(cls, violations: Iterable[tuple[str, str]]) -> ValidationReport:
        violations = tuple(violations)
        return cls(not violations, violations)

    def names(self) -> set[str]:
        return {name for name, _ in self.violations}

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [{"invariant": n, "witness": w} for n, w in self.violations],
        }


@dataclass(frozen=True, eq=False)
class WiringGraph:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        vertices = tuple(sorted(self.vertices, key=lambda v: v.id))
        edges = tuple(sorted(self.edges, key=lambda e: e.id))
        for kind, ids in (("vertex", [v.id for v in vertices]), ("edge", [e.id for e in edges])):
            for a, b in zip(ids, ids[1:]):
                if a == b:
                    raise GraphError(f"duplicate {kind} id {a!r}")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))

    # equality is structural and ignores the display name
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, WiringGraph):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.vertices == other.vertices
            and self.edges == other.edges
            and self.inputs == other.inputs
            and self.outputs == other.outputs
        )

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.vertices, self.edges, self.inputs, self.outputs))

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<WiringGraph{label} |V|={len(self.vertices)} |E|={len(self.edges)}>"

    # -- lookups ---------------------------------------------------------

    @cached_property
    def vertex_map(self) -> dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _port_table(self) -> dict[tuple[str, str], list[str | None]]:
        table: dict[tuple[str, str], list[str | None]] = {}
        for v in self.vertices:
            table[v.id, IN] = [None] * v.in_arity
            table[v.id, OUT] = [None] * v.out_arity
        for e in self.edges:
            for end in (e.tail, e.head):
                if isinstance(end, Port):
                    slots = table.get((end.vertex, end.direction))
                    if slots is not None and 1 <= end.index <= len(slots):
                        slots[end.index - 1] = e.id
        return table

    def vertex(self, vid: str) -> Vertex:
        return self.vertex_map[vid]

    def edge(self, eid: str) -> Edge:
        return self.edge_map[eid]

    def in_edges(self, vid: str) -> tuple[str, ...]:
        return tuple(self._port_table[vid, IN])

    def out_edges(self, vid: str) -> tuple[str, ...]:
        return tuple(self._port_table[vid, OUT])

    def incident_edges(self, vid: str) -> tuple[str, ...]:
        return self.in_edges(vid) + self.out_edges(vid)

    @property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    @property
    def arity(self) -> tuple[int, int]:
        return len(self.inputs), len(self.outputs)

    def internal_edges(self) -> list[Edge]:
        return [e for e in self.edges if not e.is_input_leg and not e.is_output_leg]

    def legs(self) -> list[Edge]:
        return [e for e in self.edges if e.is_input_leg or e.is_output_leg]

    @cached_property
    def successors(self) -> dict[str, list[str]]:
        succ: dict[str, list[str]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            t, h = e.tail_vertex, e.head_vertex
            if t is not None and h is not None and t in succ:
                succ[t].append(h)
        return succ

    @cached_property
    def predecessors(self) -> dict[str, list[str]]:
        pred: dict[str, list[str]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            t, h = e.tail_vertex, e.head_vertex
            if t is not None and h is not None and h in pred:
                pred[h].append(t)
        return pred

    @cached_property
    def descendants(self) -> dict[str, frozenset[str]]:
        """Vertices reachable by a nonempty directed path (graph assumed acyclic)."""
        memo: dict[str, frozenset[str]] = {}

        def visit(v: str) -> frozenset[str]:
            if v not in memo:
                memo[v] = frozenset()  # guards against cycles in malformed input
                acc: set[str] = set()
                for w in self.successors[v]:
                    acc.add(w)
                    acc |= visit(w)
                memo[v] = frozenset(acc)
            return memo[v]

        for v in self.vertex_ids:
            visit(v)
        return memo

    @property
    def is_colored(self) -> bool:
        return bool(self.edges) and all(e.color is not None for e in self.edges)

    @property
    def is_exceptional(self) -> bool:
        return not self.vertices and len(self.edges) == 1

    def color_of(self, eid: str) -> Color:
        color = self.edge_map[eid].color
        if color is None:
            raise GraphError("coloring required")
        return color

    # -- derived graphs -------------------------------------------------

    def with_name(self, name: str) -> WiringGraph:
        return WiringGraph(self.vertices, self.edges, self.inputs, self.outputs, name=name)

    def recolored(self, coloring: Mapping[str, Color | None]) -> WiringGraph:
        edges = [Edge(e.id, e.tail, e.head, coloring.get(e.id)) for e in self.edges]
        return WiringGraph(self.vertices, edges, self.inputs, self.outputs, name=self.name)

    def uncolored(self) -> WiringGraph:
        return self.recolored({})

    def corolla_of(self, vid: str) -> WiringGraph:
        """The corolla C_v: vertex ``vid`` with its edges, all as legs."""
        v = self.vertex(vid)
        edges = []
        for i, eid in enumerate(self.in_edges(vid), 1):
            edges.append(Edge(eid, i, Port(vid, IN, i), self.edge_map[eid].color))
        outs = self.out_edges(vid)
        for j, eid in enumerate(outs, 1):
            edges.append(Edge(eid, Port(vid, OUT, j), j, self.edge_map[eid].color))
        return WiringGraph([v], edges, self.in_edges(vid), outs)

    def edge_graph(self, eid: str) -> WiringGraph:
        """The exceptional edge carrying the id and color of ``eid``."""
        return WiringGraph([], [Edge(eid, 1, 1, self.edge_map[eid].color)], [eid], [eid])


# ---------------------------------------------------------------------------
# validation


def _undirected_components(G: WiringGraph) -> int:
    parent = {v: v for v in G.vertex_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    loose = 0
    for e in G.edges:
        t, h = e.tail_vertex, e.head_vertex
        if t is None and h is None:
            loose += 1
        elif t is not None and h is not None and t in parent and h in parent:
            parent[find(t)] = find(h)
    return len({find(v) for v in parent}) + loose


def _find_cycle(G: WiringGraph) -> list[str] | None:
    succ = {v: [] for v in G.vertex_ids}
    for e in G.edges:
        t, h = e.tail_vertex, e.head_vertex
        if t in succ and h in succ:
            succ[t].append(h)
    state: dict[str, int] = {}
    stack: list[str] = []

    def dfs(v: str) -> list[str] | None:
        state[v] = 1
        stack.append(v)
        for w in succ[v]:
            if state.get(w) == 1:
                return stack[stack.index(w):] + [w]
            if w not in state:
                found = dfs(w)
                if found:
                    return found
        stack.pop()
        state[v] = 2
        return None

    for v in sorted(succ):
        if v not in state:
            found = dfs(v)
            if found:
                return found
    return None


def validate_graph(G: WiringGraph) -> ValidationReport:
    """Check every wiring-graph invariant and report each violation with a witness."""
    out: list[tuple[str, str]] = []
    hits: dict[tuple[str, str, int], list[str]] = {}
    in_slots: dict[int, list[str]] = {}
    out_slots: dict[int, list[str]] = {}
    for e in G.edges:
        for end, want, slots in ((e.tail, OUT, in_slots), (e.head, IN, out_slots)):
            if isinstance(end, int):
                slots.setdefault(end, []).append(e.id)
                continue
            v = G.vertex_map.get(end.vertex)
            if v is None:
                out.append(("port-range", f"edge {e.id} refers to unknown vertex {end.vertex}"))
                continue
            if end.direction != want:
                out.append(("port-range", f"edge {e.id} attaches {end} on the wrong side"))
                continue
            limit = v.out_arity if want == OUT else v.in_arity
            if not 1 <= end.index <= limit:
                out.append(("port-range", f"edge {e.id} uses {end} beyond arity {limit}"))
                continue
            hits.setdefault((end.vertex, want, end.index), []).append(e.id)
    for v in G.vertices:
        for direction, arity in ((IN, v.in_arity), (OUT, v.out_arity)):
            for i in range(1, arity + 1):
                got = hits.get((v.id, direction, i), [])
                if len(got) != 1:
                    out.append(("port-bijection", f"port {v.id}:{direction}:{i} hit by {got or 'no edge'}"))
    for kind, slots, declared in (("inputs", in_slots, G.inputs), ("outputs", out_slots, G.outputs)):
        expected = []
        for s in sorted(slots):
            expected.extend(slots[s])
        ok = sorted(slots) == list(range(1, len(slots) + 1)) and all(len(v) == 1 for v in slots.values())
        if not ok or tuple(expected) != tuple(declared):
            out.append(("slot-order", f"graph {kind} {list(declared)} but slots give {expected}"))
    if not G.vertices and not G.edges:
        out.append(("connected", "graph is empty"))
    elif _undirected_components(G) != 1:
        out.append(("connected", f"{_undirected_components(G)} components"))
    cycle = _find_cycle(G)
    if cycle:
        out.append(("directed cycle", " -> ".join(cycle)))
    colored = [e.color is not None for e in G.edges]
    if any(colored) and not all(colored):
        missing = [e.id for e in G.edges if e.color is None]
        out.append(("coloring", f"edges without color: {missing}"))
    return ValidationReport.from_violations(out)


def check_valid(G: WiringGraph) -> WiringGraph:
    report = validate_graph(G)
    if not report.ok:
        name, witness = report.violations[0]
        raise GraphError(f"invalid graph {G.name or ''}: {name}: {witness}")
    return G


def is_simply_connected(G: WiringGraph) -> bool:
    """True iff the underlying undirected graph (legs ignored) has no cycle."""
    parent = {v: v for v in G.vertex_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in G.internal_edges():
        a, b = find(e.tail_vertex), find(e.head_vertex)
        if a == b:
            return False
        parent[a] = b
    return True


def biprofile_of(G: WiringGraph) -> Biprofile:
    return Biprofile(tuple(G.color_of(e) for e in G.inputs), tuple(G.color_of(e) for e in G.outputs))


def biprofile_of_vertex(G: WiringGraph, vid: str) -> Biprofile:
    return Biprofile(
        tuple(G.color_of(e) for e in G.in_edges(vid)),
        tuple(G.color_of(e) for e in G.out_edges(vid)),
    )


# ---------------------------------------------------------------------------
# isomorphisms and canonical forms


@dataclass(frozen=True)
class Isomorphism:
    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, str]

    def is_identity(self) -> bool:
        return all(k == v for k, v in self.vertex_map.items()) and all(
            k == v for k, v in self.edge_map.items()
        )


def _refined_classes(G: WiringGraph, labels: Mapping[str, object] | None) -> dict[str, int]:
    """Color refinement on vertices; returns an iso-invariant rank per vertex."""
    sig: dict[str, object] = {}
    for v in G.vertices:
        ins = sorted(str(G.edge_map[e].color) for e in G.in_edges(v.id))
        outs = sorted(str(G.edge_map[e].color) for e in G.out_edges(v.id))
        sig[v.id] = (v.in_arity, v.out_arity, tuple(ins), tuple(outs), repr(labels.get(v.id)) if labels else "")
    rank = _rank(sig)
    while True:
        new = {}
        for v in G.vertex_ids:
            ins = sorted(
                (rank.get(G.edge_map[e].tail_vertex, -1), str(G.edge_map[e].color)) for e in G.in_edges(v)
            )
            outs = sorted(
                (rank.get(G.edge_map[e].head_vertex, -1), str(G.edge_map[e].color)) for e in G.out_edges(v)
            )
            new[v] = (rank[v], tuple(ins), tuple(outs))
        new_rank = _rank(new)
        if len(set(new_rank.values())) == len(set(rank.values())):
            return new_rank
        rank = new_rank


def _rank(sig: Mapping[str, object]) -> dict[str, int]:
    order = {s: i for i, s in enumerate(sorted(set(map(repr, sig.values()))))}
    return {v: order[repr(s)] for v, s in sig.items()}


def _orderings(classes: dict[str, int]) -> Iterator[list[str]]:
    groups: dict[int, list[str]] = {}
    for v, r in classes.items():
        groups.setdefault(r, []).append(v)
    ordered = [sorted(groups[r]) for r in sorted(groups)]
    for combo in itertools.product(*(itertools.permutations(g) for g in ordered)):
        yield [v for part in combo for v in part]


def _edge_key(e: Edge, pos: Mapping[str, int]) -> tuple:
    t = -1 if isinstance(e.tail, int) else pos[e.tail.vertex]
    h = -1 if isinstance(e.head, int) else pos[e.head.vertex]
    return (t, h, "" if e.color is None else str(e.color))


def _canonical_search(G: WiringGraph, labels: Mapping[str, object] | None):
    classes = _refined_classes(G, labels)
    best = None
    best_order: list[str] = []
    for order in _orderings(classes):
        pos = {v: i for i, v in enumerate(order)}
        code = (
            len(order),
            tuple(
                (G.vertex_map[v].in_arity, G.vertex_map[v].out_arity, repr(labels.get(v)) if labels else "")
                for v in order
            ),
            tuple(sorted(_edge_key(e, pos) for e in G.edges)),
        )
        if best is None or code < best:
            best, best_order = code, order
    return best, best_order


def canonical_form(G: WiringGraph, vertex_labels: Mapping[str, object] | None = None) -> bytes:
    """Encoding shared by exactly the weakly isomorphic graphs.

    Weak isomorphism preserves incidence, direction, edge colors and the
    optional vertex labels, and ignores port and slot orderings.
    """
    code, _ = _canonical_search(G, vertex_labels)
    return repr(code).encode()


def canonical_representative(G: WiringGraph) -> tuple[WiringGraph, Isomorphism]:
    """A fixed member of G's weak iso class, together with an iso G -> rep."""
    _, order = _canonical_search(G, None)
    pos = {v: i for i, v in enumerate(order)}
    vmap = {v: f"v{i}" for i, v in enumerate(order)}
    keyed = sorted(G.edges, key=lambda e: (_edge_key(e, pos), e.id))
    emap = {e.id: f"e{j}" for j, e in enumerate(keyed)}
    in_count: dict[str, int] = {}
    out_count: dict[str, int] = {}
    inputs: list[str] = []
    outputs: list[str] = []
    edges = []
    for e in keyed:
        if isinstance(e.tail, int):
            inputs.append(emap[e.id])
            tail: End = len(inputs)
        else:
            t = vmap[e.tail.vertex]
            c = out_count[t] = out_count.get(t, 0) + 1
            tail = Port(t, OUT, c)
        if isinstance(e.head, int):
            outputs.append(emap[e.id])
            head: End = len(outputs)
        else:
            h = vmap[e.head.vertex]
            c = in_count[h] = in_count.get(h, 0) + 1
            head = Port(h, IN, c)
        edges.append(Edge(emap[e.id], tail, head, e.color))
    vertices = [Vertex(vmap[v], G.vertex_map[v].in_arity, G.vertex_map[v].out_arity) for v in order]
    rep = WiringGraph(vertices, edges, inputs, outputs)
    return rep, Isomorphism(vmap, emap)


def find_isomorphisms(G: WiringGraph, H: WiringGraph, mode: str = "weak") -> list[Isomorphism]:
    """All isomorphisms G -> H.

    ``strict`` preserves port and slot orders; ``weak`` only incidence,
    direction and coloring.
    """
    if mode not in ("weak", "strict"):
        raise GraphError(f"unknown isomorphism mode {mode!r}")
    if len(G.vertices) != len(H.vertices) or len(G.edges) != len(H.edges):
        return []
    if mode == "strict" and (G.arity != H.arity):
        return []
    gv = sorted(G.vertex_ids)

    def compatible(a: str, b: str) -> bool:
        va, vb = G.vertex_map[a], H.vertex_map[b]
        if (va.in_arity, va.out_arity) != (vb.in_arity, vb.out_arity):
            return False
        ca = sorted(str(G.edge_map[e].color) for e in G.incident_edges(a))
        cb = sorted(str(H.edge_map[e].color) for e in H.incident_edges(b))
        return ca == cb

    def groups(X: WiringGraph, vmap: Mapping[str, str] | None):
        out: dict[tuple, list[str]] = {}
        for e in X.edges:
            t = "<" if isinstance(e.tail, int) else (vmap[e.tail.vertex] if vmap else e.tail.vertex)
            h = ">" if isinstance(e.head, int) else (vmap[e.head.vertex] if vmap else e.head.vertex)
            out.setdefault((t, h, e.color), []).append(e.id)
        return out

    if sorted((v.in_arity, v.out_arity) for v in G.vertices) != sorted(
        (v.in_arity, v.out_arity) for v in H.vertices
    ):
        return []
    hg = groups(H, None)
    hv = sorted(H.vertex_ids)
    results: list[Isomorphism] = []
    vmap: dict[str, str] = {}

    def extend(i: int) -> None:
        if i == len(gv):
            if mode == "strict":
                iso = _strict_edges(G, H, vmap)
                if iso is not None:
                    results.append(iso)
                return
            gg = groups(G, vmap)
            if {k: len(v) for k, v in gg.items()} != {k: len(v) for k, v in hg.items()}:
                return
            keys = sorted(gg, key=repr)
            for combo in itertools.product(*(itertools.permutations(hg[k]) for k in keys)):
                emap = {}
                for k, perm in zip(keys, combo):
                    emap.update(zip(gg[k], perm))
                results.append(Isomorphism(dict(vmap), emap))
            return
        used = set(vmap.values())
        for b in hv:
            if b not in used and compatible(gv[i], b):
                vmap[gv[i]] = b
                extend(i + 1)
                del vmap[gv[i]]

    extend(0)
    return results


def _strict_edges(G: WiringGraph, H: WiringGraph, vmap: Mapping[str, str]) -> Isomorphism | None:
    at_tail: dict[End, Edge] = {e.tail: e for e in H.edges}
    emap = {}
    for e in G.edges:
        tail = e.tail if isinstance(e.tail, int) else Port(vmap[e.tail.vertex], OUT, e.tail.index)
        f = at_tail.get(tail)
        if f is None or f.color != e.color:
            return None
        head = e.head if isinstance(e.head, int) else Port(vmap[e.head.vertex], IN, e.head.index)
        if f.head != head:
            return None
        emap[e.id] = f.id
    if len(set(emap.values())) != len(emap):
        return None
    return Isomorphism(dict(vmap), emap)


def weakly_isomorphic(G: WiringGraph, H: WiringGraph) -> bool:
    return canonical_form(G) == canonical_form(H)


# ---------------------------------------------------------------------------
# standard constructors


def make_exceptional_edge(color: Color | None = None, eid: str = "e0") -> WiringGraph:
    return WiringGraph([], [Edge(eid, 1, 1, color)], [eid], [eid], name="exceptional")


def make_corolla(m: int, n: int, color: Color | None = None, vid: str = "v") -> WiringGraph:
    if m < 0 or n < 0:
        raise GraphError("arities must be nonnegative")
    edges = [Edge(f"i{k}", k, Port(vid, IN, k), color) for k in range(1, m + 1)]
    edges += [Edge(f"o{k}", Port(vid, OUT, k), k, color) for k in range(1, n + 1)]
    return WiringGraph(
        [Vertex(vid, m, n)],
        edges,
        [f"i{k}" for k in range(1, m + 1)],
        [f"o{k}" for k in range(1, n + 1)],
        name=f"C({m},{n})",
    )


def make_linear_graph(n: int, color: Color | None = None) -> WiringGraph:
    """n vertices of arity (1;1) in a chain; L_0 is the exceptional edge."""
    if n < 0:
        raise GraphError("length must be nonnegative")
    if n == 0:
        return make_exceptional_edge(color).with_name("L0")
    vertices = [Vertex(f"v{k}", 1, 1) for k in range(1, n + 1)]
    edges = [Edge("e0", 1, Port("v1", IN, 1), color)]
    for k in range(1, n):
        edges.append(Edge(f"e{k}", Port(f"v{k}", OUT, 1), Port(f"v{k + 1}", IN, 1), color))
    edges.append(Edge(f"e{n}", Port(f"v{n}", OUT, 1), 1, color))
    return WiringGraph(vertices, edges, ["e0"], [f"e{n}"], name=f"L{n}")


def make_pgc(
    u_arity: tuple[int, int],
    v_arity: tuple[int, int],
    grafts: Iterable[tuple[int, int]],
) -> WiringGraph:
    """Partially grafted corolla: vertex u above v, with ``grafts`` pairs
    (output port of u, input port of v) joined by an edge.

    Graph inputs list u's inputs then v's free inputs; graph outputs list
    u's free outputs then v's outputs.
    """
    grafts = sorted(grafts)
    if not grafts:
        raise GraphError("PGC requires >=1 connecting edge")
    (ui, uo), (vi, vo) = u_arity, v_arity
    outs = [a for a, _ in grafts]
    ins = [b for _, b in grafts]
    if len(set(outs)) != len(outs) or len(set(ins)) != len(ins):
        raise GraphError("PGC grafting must be injective")
    if not all(1 <= a <= uo for a in outs) or not all(1 <= b <= vi for b in ins):
        raise GraphError("PGC grafting refers to a missing port")
    grafted_out = dict(grafts)
    grafted_in = {b for b in ins}
    edges = [Edge(f"ui{k}", k, Port("u", IN, k)) for k in range(1, ui + 1)]
    inputs = [f"ui{k}" for k in range(1, ui + 1)]
    outputs = []
    for k in range(1, uo + 1):
        if k in grafted_out:
            edges.append(Edge(f"g{k}", Port("u", OUT, k), Port("v", IN, grafted_out[k])))
        else:
            outputs.append(f"uo{k}")
            edges.append(Edge(f"uo{k}", Port("u", OUT, k), len(outputs)))
    for k in range(1, vi + 1):
        if k not in grafted_in:
            inputs.append(f"vi{k}")
            edges.append(Edge(f"vi{k}", len(inputs), Port("v", IN, k)))
    for k in range(1, vo + 1):
        outputs.append(f"vo{k}")
        edges.append(Edge(f"vo{k}", Port("v", OUT, k), len(outputs)))
    return WiringGraph([Vertex("u", ui, uo), Vertex("v", vi, vo)], edges, inputs, outputs, name="pgc")


# ---------------------------------------------------------------------------
# text format

_TOKEN = r"[^\s:=()]+"
_FROM = re.compile(rf"^from=(?:in:(\d+)|({_TOKEN}):out:(\d+))$")
_TO = re.compile(rf"^to=(?:out:(\d+)|({_TOKEN}):in:(\d+))$")
_ARITY = re.compile(r"^(in|out)=(\d+)$")
_ID = re.compile(rf"^{_TOKEN}$")


def parse_graph(text: str) -> WiringGraph:
    """Parse the line-oriented graph format.  Errors carry line numbers."""
    name = ""
    seen_header = False
    vertices: dict[str, Vertex] = {}
    edges: dict[str, tuple[int, Edge]] = {}
    inputs: list[str] | None = None
    outputs: list[str] | None = None
    list_lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, *rest = line.split()
        if word == "graph":
            if seen_header or vertices or edges:
                raise GraphParseError(lineno, "graph header must come first and only once")
            if len(rest) > 1:
                raise GraphParseError(lineno, "graph name must be a single token")
            name = rest[0] if rest else ""
            seen_header = True
        elif word == "vertex":
            if len(rest) != 3 or not _ID.match(rest[0]):
                raise GraphParseError(lineno, "expected: vertex <vid> in=<k> out=<j>")
            vid = rest[0]
            if vid in vertices:
                raise GraphParseError(lineno, f"duplicate vertex id {vid!r}")
            ar = {}
            for tok in rest[1:]:
                m = _ARITY.match(tok)
                if not m or m.group(1) in ar:
                    raise GraphParseError(lineno, f"bad arity field {tok!r}")
                ar[m.group(1)] = int(m.group(2))
            vertices[vid] = Vertex(vid, ar["in"], ar["out"])
        elif word == "edge":
            if len(rest) not in (3, 4) or not _ID.match(rest[0]):
                raise GraphParseError(lineno, "expected: edge <eid> from=... to=... [color=<c>]")
            eid = rest[0]
            if eid in edges:
                raise GraphParseError(lineno, f"duplicate edge id {eid!r}")
            fm, tm = _FROM.match(rest[1]), _TO.match(rest[2])
            if not fm:
                raise GraphParseError(lineno, f"bad tail {rest[1]!r}")
            if not tm:
                raise GraphParseError(lineno, f"bad head {rest[2]!r}")
            tail: End = int(fm.group(1)) if fm.group(1) else Port(fm.group(2), OUT, int(fm.group(3)))
            head: End = int(tm.group(1)) if tm.group(1) else Port(tm.group(2), IN, int(tm.group(3)))
            color = None
            if len(rest) == 4:
                if not rest[3].startswith("color=") or not _ID.match(rest[3][6:]):
                    raise GraphParseError(lineno, f"bad color field {rest[3]!r}")
                color = rest[3][6:]
            edges[eid] = (lineno, Edge(eid, tail, head, color))
        elif word in ("inputs", "outputs"):
            if word in list_lines:
                raise GraphParseError(lineno, f"duplicate {word} line")
            list_lines[word] = lineno
            if word == "inputs":
                inputs = rest
            else:
                outputs = rest
        else:
            raise GraphParseError(lineno, f"unknown keyword {word!r}")
    for lineno, e in edges.values():
        for end in (e.tail, e.head):
            if isinstance(end, Port) and end.vertex not in vertices:
                raise GraphParseError(lineno, f"edge {e.id} refers to unknown vertex {end.vertex!r}")
    for word, ids in (("inputs", inputs), ("outputs", outputs)):
        for eid in ids or []:
            if eid not in edges:
                raise GraphParseError(list_lines[word], f"{word} refers to unknown edge {eid!r}")
    return WiringGraph(
        list(vertices.values()),
        [e for _, e in edges.values()],
        inputs or [],
        outputs or [],
        name=name,
    )


def _format_end(end: End, leg: str) -> str:
    return f"{leg}:{end}" if isinstance(end, int) else str(end)


def format_graph(G: WiringGraph, name: str | None = None) -> str:
    lines = [f"graph {name or G.name or 'G'}"]
    for v in G.vertices:
        lines.append(f"vertex {v.id} in={v.in_arity} out={v.out_arity}")
    for e in G.edges:
        line = f"edge {e.id} from={_format_end(e.tail, IN)} to={_format_end(e.head, OUT)}"
        if e.color is not None:
            line += f" color={e.color}"
        lines.append(line)
    lines.append(" ".join(["inputs", *G.inputs]))
    lines.append(" ".join(["outputs", *G.outputs]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# vertex subsets


def topological_order(G: WiringGraph) -> list[str]:
    """Kahn's algorithm with ties broken by vertex id."""
    import heapq

    indeg = {v: len(G.predecessors[v]) for v in G.vertex_ids}
    ready = [v for v, d in indeg.items() if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for w in G.successors[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(ready, w)
    if len(order) != len(indeg):
        raise GraphError("graph has a directed cycle")
    return order


def is_connected_set(G: WiringGraph, S: Iterable[str]) -> bool:
    S = set(S)
    if not S:
        return False
    start = next(iter(S))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in G.successors[v] + G.predecessors[v]:
            if w in S and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == S


def is_convex(G: WiringGraph, S: Iterable[str]) -> bool:
    """No directed path leaves S and comes back into it."""
    S = set(S)
    for v in S:
        for w in G.successors[v]:
            if w not in S and G.descendants[w] & S:
                return False
    return True


def induced_subgraph(G: WiringGraph, S: Iterable[str]) -> WiringGraph:
    """The subgraph on vertex set S; every edge touching S is kept, with the
    crossing ones turned into legs.

    Legs are ordered by walking S in topological order and reading each
    vertex's ports in order.
    """
    S = set(S)
    order = [v for v in topological_order(G) if v in S]
    inputs: list[str] = []
    outputs: list[str] = []
    edges: dict[str, Edge] = {}
    for v in order:
        for eid in G.in_edges(v):
            e = G.edge_map[eid]
            if e.tail_vertex in S:
                edges[eid] = e
            else:
                inputs.append(eid)
                edges[eid] = Edge(eid, len(inputs), e.head, e.color)
    for v in order:
        for eid in G.out_edges(v):
            e = G.edge_map[eid]
            if e.head_vertex not in S:
                outputs.append(eid)
                edges[eid] = Edge(eid, e.tail, len(outputs), e.color)
    return WiringGraph([G.vertex_map[v] for v in order], edges.values(), inputs, outputs)


def relabel(G: WiringGraph, vertex_map: Mapping[str, str], edge_map: Mapping[str, str]) -> WiringGraph:
    """Rename ids, keeping every port and slot position."""

    def end(x: End) -> End:
        return x if isinstance(x, int) else Port(vertex_map[x.vertex], x.direction, x.index)

    return WiringGraph(
        [Vertex(vertex_map[v.id], v.in_arity, v.out_arity) for v in G.vertices],
        [Edge(edge_map[e.id], end(e.tail), end(e.head), e.color) for e in G.edges],
        [edge_map[e] for e in G.inputs],
        [edge_map[e] for e in G.outputs],
        name=G.name,
    )


def inline_graph(G: WiringGraph) -> str:
    """One-line form of the text format, for witnesses and logs."""
    return "; ".join(format_graph(G).strip().splitlines()[1:])
