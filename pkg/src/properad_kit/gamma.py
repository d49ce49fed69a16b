"""Morphisms of graphical properads and the Reedy structure on them.

A morphism H -> G is stored as an edge map ``f0`` together with, for each
vertex of H, the block of G's vertices that its decorated graph lands on.
An empty block means the vertex goes to an exceptional edge.  For valid
morphisms this determines the decorated graphs ``f1`` completely; arbitrary
decorated graphs (which may fail the subgraph condition) are also accepted
so that invalid data can be represented and diagnosed.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Iterable, Iterator, Mapping

from .graph import (
    Edge,
    GraphError,
    Isomorphism,
    WiringGraph,
    canonical_form,
    format_graph,
    induced_subgraph,
    is_connected_set,
    is_convex,
    parse_graph,
)
from .substitution import (
    CODEGENERACY,
    INNER,
    ISOMORPHISM,
    OUTER,
    GeneratorMap,
    SubstitutionAssignment,
    codegeneracy,
    substitute_many,
)

POSITIVE = "positive"
NEGATIVE = "negative"
ISO = "isomorphism"
NEITHER = "neither"


class InvalidMorphism(GraphError):
    def __init__(self, message: str, witness: Mapping[str, Any] | None = None):
        super().__init__(message)
        self.witness = dict(witness or {})


# ---------------------------------------------------------------------------
# decorated graphs and subgraphs


@dataclass(frozen=True, eq=False)
class DecoratedGraph:
    """A shape whose edges and vertices carry labels.

    For decorations over a graph G the labels are G's edges and vertices;
    for properad decorations they are colors and operation tokens.
    """

    shape: WiringGraph
    edge_decoration: Mapping[str, Any]
    vertex_decoration: Mapping[str, Any]

    @cached_property
    def _key(self):
        return (
            self.shape,
            tuple(sorted(self.edge_decoration.items())),
            tuple(sorted(self.vertex_decoration.items())),
        )

    def __eq__(self, other):
        return isinstance(other, DecoratedGraph) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"DecoratedGraph({self.shape!r}, {dict(self.edge_decoration)}, {dict(self.vertex_decoration)})"

    def canonical_key(self) -> bytes:
        """Equal exactly for decorated graphs that are weakly isomorphic
        through an isomorphism preserving both decorations."""
        colored = self.shape.recolored({e: repr(c) for e, c in self.edge_decoration.items()})
        return canonical_form(colored, self.vertex_decoration)

    def to_json(self) -> dict:
        return {
            "shape": format_graph(self.shape),
            "edge_decoration": dict(sorted(self.edge_decoration.items())),
            "vertex_decoration": dict(sorted(self.vertex_decoration.items())),
        }


@dataclass(frozen=True)
class Subgraph:
    """Either the exceptional edge at ``edge`` or the subgraph induced on
    ``vertices``."""

    edge: str | None = None
    vertices: frozenset[str] = frozenset()

    def graph(self, G: WiringGraph) -> WiringGraph:
        if self.edge is not None:
            return G.edge_graph(self.edge)
        return induced_subgraph(G, self.vertices)


@dataclass(frozen=True)
class _Block:
    vertices: frozenset[str]
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    internal: frozenset[str]


@lru_cache(maxsize=4096)
def _block_table(G: WiringGraph) -> tuple[dict[frozenset[str], _Block], dict[tuple[int, int], list[_Block]]]:
    by_set: dict[frozenset[str], _Block] = {}
    ids = G.vertex_ids
    for r in range(1, len(ids) + 1):
        for combo in itertools.combinations(ids, r):
            S = frozenset(combo)
            if not is_connected_set(G, S) or not is_convex(G, S):
                continue
            sub = induced_subgraph(G, S)
            internal = frozenset(e.id for e in sub.internal_edges())
            by_set[S] = _Block(S, sub.inputs, sub.outputs, internal)
    by_arity: dict[tuple[int, int], list[_Block]] = {}
    for b in by_set.values():
        by_arity.setdefault((len(b.inputs), len(b.outputs)), []).append(b)
    return by_set, by_arity


def subgraphs(G: WiringGraph) -> list[Subgraph]:
    """Edge subgraphs, then connected convex vertex-induced subgraphs."""
    out = [Subgraph(edge=e) for e in G.edge_ids]
    by_set, _ = _block_table(G)
    out += [Subgraph(vertices=S) for S in sorted(by_set, key=lambda s: (len(s), sorted(s)))]
    return out


def _incident(G: WiringGraph, U: frozenset[str]) -> frozenset[str]:
    return frozenset(e for v in U for e in G.incident_edges(v))


def _reslot(G: WiringGraph, inputs: tuple[str, ...], outputs: tuple[str, ...]) -> WiringGraph:
    """Same graph with its legs renumbered to the given order."""
    ip = {e: k for k, e in enumerate(inputs, 1)}
    op = {e: k for k, e in enumerate(outputs, 1)}
    edges = [
        Edge(e.id, ip[e.id] if e.is_input_leg else e.tail, op[e.id] if e.is_output_leg else e.head, e.color)
        for e in G.edges
    ]
    return WiringGraph(G.vertices, edges, inputs, outputs)


# ---------------------------------------------------------------------------
# morphisms


class GammaMorphism:
    """A morphism H -> G: an edge map f0 plus, per vertex of H, a decorated
    graph over G (given explicitly as ``f1`` or through vertex ``blocks``)."""

    __slots__ = ("source", "target", "f0", "blocks", "_f1", "_hash")

    def __init__(
        self,
        source: WiringGraph,
        target: WiringGraph,
        f0: Mapping[str, str],
        blocks: Mapping[str, Iterable[str]] | None = None,
        f1: Mapping[str, DecoratedGraph] | None = None,
    ):
        self.source = source
        self.target = target
        self.f0 = dict(f0)
        if blocks is None:
            if f1 is None:
                raise GraphError("a morphism needs blocks or decorated graphs")
            blocks = {v: frozenset(d.vertex_decoration.values()) for v, d in f1.items()}
        self.blocks = {v: frozenset(b) for v, b in blocks.items()}
        self._f1 = dict(f1) if f1 is not None else None
        self._hash = None
        if set(self.f0) != set(source.edge_ids):
            raise GraphError("f0 must be defined on every source edge")
        if set(self.blocks) != set(source.vertex_ids):
            raise GraphError("f1 must be defined on every source vertex")

    def _key(self):
        return (
            self.source,
            self.target,
            tuple(sorted(self.f0.items())),
            tuple(sorted((v, tuple(sorted(b))) for v, b in self.blocks.items())),
        )

    def __eq__(self, other):
        return isinstance(other, GammaMorphism) and self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        blocks = {v: sorted(b) for v, b in sorted(self.blocks.items())}
        return f"GammaMorphism(f0={dict(sorted(self.f0.items()))}, blocks={blocks})"

    @property
    def f1(self) -> dict[str, DecoratedGraph]:
        if self._f1 is None:
            self._f1 = {v: self._decorated(v) for v in self.source.vertex_ids}
        return self._f1

    def _decorated(self, v: str) -> DecoratedGraph:
        H, G = self.source, self.target
        block = self.blocks[v]
        if not block:
            e = self.f0[H.in_edges(v)[0]]
            return DecoratedGraph(G.edge_graph(e), {e: e}, {})
        sub = induced_subgraph(G, block)
        ins = tuple(self.f0[e] for e in H.in_edges(v))
        outs = tuple(self.f0[e] for e in H.out_edges(v))
        if sorted(ins) != sorted(sub.inputs) or sorted(outs) != sorted(sub.outputs):
            raise InvalidMorphism(f"biprofile mismatch at vertex {v}", {"vertex": v})
        shape = _reslot(sub, ins, outs)
        return DecoratedGraph(shape, {e: e for e in shape.edge_ids}, {w: w for w in shape.vertex_ids})


def identity(G: WiringGraph) -> GammaMorphism:
    return GammaMorphism(G, G, {e: e for e in G.edge_ids}, {v: {v} for v in G.vertex_ids})


def from_isomorphism(G: WiringGraph, H: WiringGraph, iso: Isomorphism) -> GammaMorphism:
    return GammaMorphism(G, H, iso.edge_map, {v: {w} for v, w in iso.vertex_map.items()})


def from_generator(gm: GeneratorMap) -> GammaMorphism:
    S, K, w = gm.source, gm.target, gm.witness
    if gm.kind == INNER:
        blocks = {v: {v} for v in S.vertex_ids}
        blocks[w["vertex"]] = set(w["pgc"].vertex_ids)
        return GammaMorphism(S, K, {e: e for e in S.edge_ids}, blocks)
    if gm.kind == OUTER:
        return GammaMorphism(S, K, {e: e for e in S.edge_ids}, {v: {v} for v in S.vertex_ids})
    if gm.kind == CODEGENERACY:
        v = w["vertex"]
        i, o = S.in_edges(v)[0], S.out_edges(v)[0]
        f0 = {e: e for e in S.edge_ids}
        f0[o] = i
        blocks = {u: {u} for u in S.vertex_ids}
        blocks[v] = set()
        return GammaMorphism(S, K, f0, blocks)
    if gm.kind == ISOMORPHISM:
        return from_isomorphism(S, K, w["iso"])
    raise GraphError(f"unknown generator kind {gm.kind!r}")


def compose(g: GammaMorphism, f: GammaMorphism) -> GammaMorphism:
    """g after f."""
    if f.target != g.source:
        raise GraphError("boundary mismatch: target of f is not the source of g")
    f0 = {e: g.f0[x] for e, x in f.f0.items()}
    blocks = {v: frozenset().union(*(g.blocks[w] for w in b)) if b else frozenset() for v, b in f.blocks.items()}
    return GammaMorphism(f.source, g.target, f0, blocks)


# ---------------------------------------------------------------------------
# images and validity


def image(f: GammaMorphism) -> DecoratedGraph:
    """Substitute every f1(v) into the source and decorate the result over
    the target."""
    H = f.source
    assignments = []
    edeco: dict[str, Any] = dict(f.f0)
    vdeco: dict[str, Any] = {}
    for v in H.vertex_ids:
        d = f.f1[v]
        shape = d.shape
        bijs = []
        for legs, host in ((shape.inputs, H.in_edges(v)), (shape.outputs, H.out_edges(v))):
            if len(legs) != len(host):
                raise InvalidMorphism(f"biprofile mismatch at vertex {v}", {"vertex": v})
            free = list(range(len(host)))
            bij = []
            for leg in legs:
                want = d.edge_decoration.get(leg)
                hit = next((j for j in free if f.f0[host[j]] == want), None)
                if hit is None:
                    raise InvalidMorphism(
                        f"biprofile mismatch at vertex {v}: leg {leg} decorated {want!r}",
                        {"vertex": v, "leg": leg},
                    )
                free.remove(hit)
                bij.append(hit + 1)
            bijs.append(tuple(bij))
        assignments.append(SubstitutionAssignment(v, shape, bijs[0], bijs[1]))
        for e in shape.internal_edges():
            edeco[f"{v}.{e.id}"] = d.edge_decoration[e.id]
        for w in shape.vertex_ids:
            vdeco[f"{v}.{w}"] = d.vertex_decoration[w]
    try:
        result = substitute_many(H, assignments, namespace=True)
    except GraphError as exc:
        raise InvalidMorphism(str(exc)) from exc
    return DecoratedGraph(result, {e: edeco[e] for e in result.edge_ids}, vdeco)


def _block_problem(f: GammaMorphism) -> str | None:
    """Fast validity check for block-described morphisms."""
    H, G = f.source, f.target
    by_set, _ = _block_table(G)
    f0 = f.f0
    internal_total = 0
    collapsed = 0
    used: set[str] = set()
    image_edges = set(f0.values())
    if not image_edges <= set(G.edge_ids):
        return "edge map leaves the target"
    for v in H.vertex_ids:
        block = f.blocks[v]
        ins = [f0[e] for e in H.in_edges(v)]
        outs = [f0[e] for e in H.out_edges(v)]
        if not block:
            if len(ins) != 1 or len(outs) != 1 or ins[0] != outs[0]:
                return f"vertex {v} sent to an edge but is not a (1,1)-vertex with equal edge images"
            collapsed += 1
            continue
        b = by_set.get(block)
        if b is None:
            return f"block of {v} is not a connected convex subgraph"
        if used & block:
            return f"blocks overlap at {sorted(used & block)}"
        used |= block
        if len(set(ins)) != len(ins) or set(ins) != set(b.inputs) or len(ins) != len(b.inputs):
            return f"biprofile mismatch at vertex {v} (inputs)"
        if len(set(outs)) != len(outs) or set(outs) != set(b.outputs) or len(outs) != len(b.outputs):
            return f"biprofile mismatch at vertex {v} (outputs)"
        internal_total += len(b.internal)
        image_edges |= b.internal
    if not used:
        return None if len(image_edges) == 1 else "image is not connected"
    if len(image_edges) != len(f0) - collapsed + internal_total:
        return "image is not injective on edges"
    U = frozenset(used)
    if U not in by_set:
        return "image vertices do not form a connected convex subgraph"
    if image_edges != _incident(G, U):
        return "image is not the full subgraph on its vertices"
    return None


def _image_problem(f: GammaMorphism) -> tuple[str | None, DecoratedGraph | None]:
    try:
        D = image(f)
    except InvalidMorphism as exc:
        return str(exc), None
    G = f.target
    shape = D.shape
    vd, ed = D.vertex_decoration, D.edge_decoration
    n = len(shape.vertices)
    if not all(t in G.vertex_map for t in vd.values()) or not all(g in G.edge_map for g in ed.values()):
        return "decorations do not refer to the target", D
    if len(set(vd.values())) != n:
        return f"image has {n} vertices but covers only {len(set(vd.values()))} target vertices", D
    if len(set(ed.values())) != len(ed):
        return "image is not injective on edges", D
    if n == 0:
        return None, D
    U = frozenset(vd.values())
    if not is_connected_set(G, U) or not is_convex(G, U):
        return "image vertices do not form a connected convex subgraph", D
    if set(ed.values()) != _incident(G, U):
        return "image is not the full subgraph on its vertices", D
    for w in shape.vertex_ids:
        t = vd[w]
        if sorted(ed[e] for e in shape.in_edges(w)) != sorted(G.in_edges(t)):
            return f"image vertex {w} does not match the inputs of {t}", D
        if sorted(ed[e] for e in shape.out_edges(w)) != sorted(G.out_edges(t)):
            return f"image vertex {w} does not match the outputs of {t}", D
    return None, D


def is_valid_gamma_morphism(f: GammaMorphism) -> tuple[bool, dict]:
    """Whether the image of f is a subgraph of the target; a witness otherwise."""
    if f._f1 is None:
        problem = _block_problem(f)
        if problem is None:
            return True, {}
    problem, D = _image_problem(f)
    if problem is None:
        return True, {}
    witness: dict[str, Any] = {"reason": problem}
    if D is not None:
        witness["image_vertices"] = len(D.shape.vertices)
        witness["image"] = D.to_json()
    return False, witness


def check_morphism(f: GammaMorphism) -> GammaMorphism:
    ok, witness = is_valid_gamma_morphism(f)
    if not ok:
        raise InvalidMorphism(f"not a morphism of the graphical category: {witness['reason']}", witness)
    return f


# ---------------------------------------------------------------------------
# hom-sets


def _vertex_order(H: WiringGraph) -> list[str]:
    """Breadth-first from the smallest id so neighbours come early."""
    order: list[str] = []
    seen: set[str] = set()
    for start in H.vertex_ids:
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in sorted(set(H.successors[v] + H.predecessors[v])):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


def _assign(edges: tuple[str, ...], legs: tuple[str, ...], f0: dict[str, str]) -> Iterator[list[tuple[str, str]]]:
    """Bijections edges -> legs agreeing with what f0 already fixes."""
    fixed = {}
    for e in edges:
        if e in f0:
            if f0[e] not in legs or f0[e] in fixed.values():
                return
            fixed[e] = f0[e]
    free_edges = [e for e in edges if e not in fixed]
    free_legs = [g for g in legs if g not in fixed.values()]
    for perm in itertools.permutations(free_legs):
        yield list(zip(free_edges, perm))


def hom_set(H: WiringGraph, G: WiringGraph) -> list[GammaMorphism]:
    """All morphisms H -> G, each exactly once."""
    if not H.vertices:
        (e,) = H.edge_ids
        return [GammaMorphism(H, G, {e: g}, {}) for g in G.edge_ids]
    by_set, by_arity = _block_table(G)
    for v in H.vertices:
        if (v.in_arity, v.out_arity) not in by_arity and (v.in_arity, v.out_arity) != (1, 1):
            return []
    if len(H.edges) - sum(1 for v in H.vertices if (v.in_arity, v.out_arity) == (1, 1)) > len(G.edges):
        return []
    order = _vertex_order(H)
    results: list[GammaMorphism] = []
    f0: dict[str, str] = {}
    blocks: dict[str, frozenset[str]] = {}

    def extend(i: int, used: frozenset[str]) -> None:
        if i == len(order):
            f = GammaMorphism(H, G, f0, blocks)
            if _block_problem(f) is None:
                results.append(f)
            return
        v = order[i]
        ins, outs = H.in_edges(v), H.out_edges(v)
        arity = (len(ins), len(outs))
        for b in by_arity.get(arity, ()):
            if b.vertices & used:
                continue
            for a_in in _assign(ins, b.inputs, f0):
                for a_out in _assign(outs, b.outputs, f0):
                    for e, g in a_in + a_out:
                        f0[e] = g
                    blocks[v] = b.vertices
                    extend(i + 1, used | b.vertices)
                    for e, _ in a_in + a_out:
                        del f0[e]
        if arity == (1, 1):
            i_e, o_e = ins[0], outs[0]
            options = G.edge_ids
            if i_e in f0:
                options = (f0[i_e],)
            if o_e in f0:
                options = tuple(g for g in options if g == f0[o_e])
            for g in options:
                added = [e for e in (i_e, o_e) if e not in f0]
                for e in added:
                    f0[e] = g
                blocks[v] = frozenset()
                extend(i + 1, used)
                for e in added:
                    del f0[e]
        blocks.pop(v, None)

    extend(0, frozenset())
    return results


def automorphisms(G: WiringGraph) -> list[GammaMorphism]:
    return [f for f in hom_set(G, G) if is_isomorphism(f)]


# ---------------------------------------------------------------------------
# Reedy structure


def degree(G: WiringGraph) -> int:
    return len(G.vertices)


def is_positive(f: GammaMorphism) -> bool:
    return len(set(f.f0.values())) == len(f.f0)


def is_negative(f: GammaMorphism) -> bool:
    if set(f.f0.values()) != set(f.target.edge_ids):
        return False
    singletons = {next(iter(b)) for b in f.blocks.values() if len(b) == 1}
    return singletons >= set(f.target.vertex_ids)


def is_isomorphism(f: GammaMorphism) -> bool:
    return is_positive(f) and is_negative(f)


def classify(f: GammaMorphism) -> str:
    pos, neg = is_positive(f), is_negative(f)
    if pos and neg:
        return ISO
    if pos:
        return POSITIVE
    if neg:
        return NEGATIVE
    return NEITHER


def inverse(f: GammaMorphism) -> GammaMorphism:
    if not is_isomorphism(f):
        raise GraphError("only isomorphisms have inverses")
    f0 = {g: e for e, g in f.f0.items()}
    blocks = {next(iter(b)): {v} for v, b in f.blocks.items()}
    return GammaMorphism(f.target, f.source, f0, blocks)


def reedy_factorize(f: GammaMorphism) -> tuple[GammaMorphism, GammaMorphism]:
    """Split f as g after h with h negative and g positive.

    The middle graph is the source with every vertex that f sends to an
    edge collapsed; vertex ids are kept.
    """
    check_morphism(f)
    H = f.source
    collapsed = sorted(v for v in H.vertex_ids if not f.blocks[v])
    mid = H
    rep = {e: e for e in H.edge_ids}
    for v in collapsed:
        o = mid.out_edges(v)[0]
        i = mid.in_edges(v)[0]
        mid = codegeneracy(mid, v).target
        for e, r in rep.items():
            if r == o:
                rep[e] = i
    mid = mid.with_name(f"{H.name}_1" if H.name else "")
    h = GammaMorphism(H, mid, rep, {v: (set() if v in collapsed else {v}) for v in H.vertex_ids})
    g = GammaMorphism(mid, f.target, {e: f.f0[e] for e in mid.edge_ids}, {v: f.blocks[v] for v in mid.vertex_ids})
    return h, g


def factor_through(d: GammaMorphism, phi: GammaMorphism) -> GammaMorphism | None:
    """The lift a with d after a equal to phi, for positive d, or None."""
    if d.target != phi.target:
        return None
    inv = {g: e for e, g in d.f0.items()}
    a0 = {}
    for e, g in phi.f0.items():
        if g not in inv:
            return None
        a0[e] = inv[g]
    blocks = {}
    S = d.source
    for v, P in phi.blocks.items():
        if not P:
            blocks[v] = frozenset()
            continue
        lift = frozenset(s for s in S.vertex_ids if d.blocks[s] and d.blocks[s] <= P)
        covered = frozenset().union(*(d.blocks[s] for s in lift)) if lift else frozenset()
        if covered != P:
            return None
        blocks[v] = lift
    a = GammaMorphism(phi.source, S, a0, blocks)
    if _block_problem(a) is not None or compose(d, a) != phi:
        return None
    return a


# ---------------------------------------------------------------------------
# JSON


def morphism_to_json(f: GammaMorphism) -> dict:
    return {
        "source": format_graph(f.source),
        "target": format_graph(f.target),
        "f0": dict(sorted(f.f0.items())),
        "f1": [{"vertex": v, **f.f1[v].to_json()} for v in f.source.vertex_ids],
    }


def morphism_from_json(data: Mapping[str, Any], load_graph=parse_graph) -> GammaMorphism:
    """Build a morphism from its JSON form.  ``load_graph`` turns the source
    and target fields into graphs (inline text by default)."""
    try:
        H = load_graph(data["source"])
        G = load_graph(data["target"])
        f1 = {}
        for entry in data["f1"]:
            shape = parse_graph(entry["shape"])
            f1[entry["vertex"]] = DecoratedGraph(
                shape, dict(entry["edge_decoration"]), dict(entry.get("vertex_decoration", {}))
            )
        return GammaMorphism(H, G, dict(data["f0"]), f1=f1)
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed morphism JSON: missing or bad field {exc}") from exc
