"""Truncated graphical sets and the Segal, horn-filling and nerve checkers."""
from __future__ import annotations

import itertools
import json
from collections import Counter
from functools import lru_cache
from typing import Any, Hashable, Iterable, Mapping

from .gamma import (
    DecoratedGraph,
    GammaMorphism,
    _block_table,
    automorphisms,
    compose,
    factor_through,
    from_generator,
    from_isomorphism,
    hom_set,
    identity,
    is_isomorphism,
    reedy_factorize,
)
from .graph import (
    IN,
    OUT,
    Biprofile,
    GraphError,
    ValidationReport,
    WiringGraph,
    canonical_representative,
    format_graph,
    inline_graph,
    make_corolla,
    make_exceptional_edge,
    make_pgc,
    parse_graph,
)
from .properad import (
    FiniteProperad,
    check_properad_axioms,
    nerve,
    nerve_restrict,
    pgc_entries,
)
from .substitution import INNER, GeneratorMap, codegeneracy, contract, enumerate_cofaces_into
from .universe import enumerate_graphs

Element = Hashable


def element_label(x: Any) -> str:
    """Short stable text for a graphex."""
    if isinstance(x, DecoratedGraph):
        colors = ",".join(f"{e}={c}" for e, c in sorted(x.edge_decoration.items()))
        ops = ",".join(f"{v}={t}" for v, t in sorted(x.vertex_decoration.items()))
        return f"[{colors}|{ops}]"
    if isinstance(x, GammaMorphism):
        f0 = ",".join(f"{e}>{g}" for e, g in sorted(x.f0.items()))
        blocks = ",".join(f"{v}>{'+'.join(sorted(b)) or '|'}" for v, b in sorted(x.blocks.items()))
        return f"<{f0};{blocks}>"
    return str(x)


# ---------------------------------------------------------------------------
# maps built from graph structure


def corolla_inclusion(G: WiringGraph, v: str) -> GammaMorphism:
    C = G.corolla_of(v)
    return GammaMorphism(C, G, {e: e for e in C.edge_ids}, {v: {v}})


def edge_inclusion(G: WiringGraph, e: str) -> GammaMorphism:
    return GammaMorphism(G.edge_graph(e), G, {e: e}, {})


def image_key(f: GammaMorphism) -> tuple:
    return (frozenset(f.f0.values()), frozenset(frozenset(b) for b in f.blocks.values()))


@lru_cache(maxsize=None)
def faces(G: WiringGraph) -> tuple[tuple[GeneratorMap, GammaMorphism], ...]:
    """Coface maps into G, one per image; inner faces first."""
    seen = set()
    out = []
    for gm in enumerate_cofaces_into(G):
        f = from_generator(gm)
        k = image_key(f)
        if k not in seen:
            seen.add(k)
            out.append((gm, f))
    return tuple(out)


def inner_faces(G: WiringGraph) -> list[GammaMorphism]:
    return [f for gm, f in faces(G) if gm.kind == INNER]


@lru_cache(maxsize=None)
def subobjects(G: WiringGraph) -> tuple[GammaMorphism, ...]:
    """One positive map into G per image, the identity included."""
    found = {image_key(identity(G)): identity(G)}
    for _, d in faces(G):
        for psi in subobjects(d.source):
            phi = compose(d, psi)
            found.setdefault(image_key(phi), phi)
    return tuple(sorted(found.values(), key=lambda f: (-len(f.source.vertices), -len(f.source.edges), repr(f))))


def _as_morphism(beta: GammaMorphism | GeneratorMap) -> GammaMorphism:
    return from_generator(beta) if isinstance(beta, GeneratorMap) else beta


# ---------------------------------------------------------------------------
# graphical sets


class GraphicalSet:
    """A presheaf on graphs with at most ``bound`` vertices and vertex
    arities at most ``max_arity``.

    Subclasses provide ``elements`` and ``restrict`` for arbitrary graphs
    (not only canonical ones) and ``universe``, the graphs worth checking.
    """

    bound: int = 4
    max_arity: int = 3

    def universe(self) -> list[WiringGraph]:
        raise NotImplementedError

    def elements(self, G: WiringGraph) -> list[Element]:
        raise NotImplementedError

    def restrict(self, f: GammaMorphism, x: Element) -> Element:
        raise NotImplementedError

    def label(self, x: Element) -> str:
        return element_label(x)

    def in_range(self, G: WiringGraph) -> bool:
        return len(G.vertices) <= self.bound and all(
            v.in_arity <= self.max_arity and v.out_arity <= self.max_arity for v in G.vertices
        )


class NerveGraphicalSet(GraphicalSet):
    def __init__(self, P: FiniteProperad, bound: int = 4):
        self.P = P
        self.bound = bound
        self.max_arity = max(P.max_inputs, P.max_outputs)

    def universe(self) -> list[WiringGraph]:
        arities = self.P.arities() | {(1, 1)}
        return list(enumerate_graphs(self.bound, arities=frozenset(arities)))

    def elements(self, G: WiringGraph) -> list[DecoratedGraph]:
        if not self.in_range(G):
            return []
        return nerve(self.P, G)

    def restrict(self, f: GammaMorphism, x: DecoratedGraph) -> DecoratedGraph:
        return nerve_restrict(self.P, f, x)

    def label(self, x: DecoratedGraph) -> str:
        return element_label(x)


class Representable(GraphicalSet):
    """Γ[G]: morphisms into G, acted on by precomposition."""

    def __init__(self, G: WiringGraph, bound: int = 4, max_arity: int = 3):
        self.G = G
        self.bound = bound
        self.max_arity = max_arity
        self._cache: dict[WiringGraph, list[GammaMorphism]] = {}

    def universe(self) -> list[WiringGraph]:
        _, by_arity = _block_table(self.G)
        arities = {a for a, blocks in by_arity.items() if blocks} | {(1, 1)}
        arities = {a for a in arities if max(a) <= self.max_arity}
        return list(enumerate_graphs(self.bound, arities=frozenset(arities)))

    def elements(self, K: WiringGraph) -> list[GammaMorphism]:
        if not self.in_range(K):
            return []
        if K not in self._cache:
            self._cache[K] = hom_set(K, self.G)
        return self._cache[K]

    def restrict(self, f: GammaMorphism, x: GammaMorphism) -> GammaMorphism:
        return compose(x, f)


class RepresentablePart(Representable):
    """The union of the images of some maps into G, as a sub-presheaf of Γ[G]."""

    def __init__(self, G: WiringGraph, kind: str, generators: Iterable[GammaMorphism], bound: int = 4):
        super().__init__(G, bound)
        self.kind = kind
        self.generators = list(generators)

    def contains(self, phi: GammaMorphism) -> bool:
        if phi.target != self.G:
            return False
        return any(factor_through(d, phi) is not None for d in self.generators)

    def elements(self, K: WiringGraph) -> list[GammaMorphism]:
        return [phi for phi in super().elements(K) if self.contains(phi)]


def boundary(G: WiringGraph, bound: int = 4) -> RepresentablePart:
    if not G.vertices:
        raise GraphError("the boundary needs a graph with at least one vertex")
    return RepresentablePart(G, "boundary", [f for _, f in faces(G)], bound)


def horn(G: WiringGraph, beta: GammaMorphism | GeneratorMap, bound: int = 4) -> RepresentablePart:
    beta = _as_morphism(beta)
    keys = [image_key(f) for _, f in faces(G)]
    if beta.target != G or image_key(beta) not in keys:
        raise GraphError("beta is not a coface of G")
    gens = [f for _, f in faces(G) if image_key(f) != image_key(beta)]
    return RepresentablePart(G, "horn", gens, bound)


def segal_core(G: WiringGraph, bound: int = 4) -> RepresentablePart:
    if not G.vertices:
        raise GraphError("the Segal core needs a graph with at least one vertex")
    return RepresentablePart(G, "segal_core", [corolla_inclusion(G, v) for v in G.vertex_ids], bound)


class TruncatedGraphicalSet(GraphicalSet):
    """A graphical set given by finite tables.

    ``values`` maps each listed canonical graph to its element labels;
    ``actions`` maps generator morphisms between listed graphs (cofaces,
    codegeneracies and automorphisms) to target-to-source label tables.
    Graphs that are not listed have no elements.  Elements of any graph
    are named by the labels of its canonical representative.
    """

    def __init__(
        self,
        bound: int,
        values: Mapping[WiringGraph, Iterable[str]],
        actions: Mapping[GammaMorphism, Mapping[str, str]],
        max_arity: int = 3,
        name: str = "",
    ):
        self.bound = bound
        self.max_arity = max_arity
        self.name = name
        self.values = {G: tuple(v) for G, v in values.items()}
        self.actions = {f: dict(t) for f, t in actions.items()}
        self._memo: dict = {}

    def universe(self) -> list[WiringGraph]:
        return sorted(self.values, key=lambda G: (len(G.vertices), len(G.edges), format_graph(G)))

    def _rep(self, G: WiringGraph) -> tuple[WiringGraph, GammaMorphism | None]:
        rep, iso = canonical_representative(G)
        if rep == G:
            return G, None
        return rep, from_isomorphism(G, rep, iso)

    def elements(self, G: WiringGraph) -> list[str]:
        return list(self.values.get(self._rep(G)[0], ()))

    def restrict(self, f: GammaMorphism, x: str) -> str:
        key = (f, x)
        if key not in self._memo:
            H, iH = self._rep(f.source)
            G, iG = self._rep(f.target)
            g = f
            if iH is not None:
                g = compose(g, _inverse_iso(iH))
            if iG is not None:
                g = compose(iG, g)
            self._memo[key] = self._restrict_canonical(g, x)
        return self._memo[key]

    def _lookup(self, f: GammaMorphism, x: str) -> str:
        table = self.actions.get(f)
        if table is None:
            raise GraphError(f"no action table for generator {element_label(f)}")
        if x not in table:
            raise GraphError(f"action table of {element_label(f)} misses element {x!r}")
        return table[x]

    def _restrict_canonical(self, f: GammaMorphism, x: str) -> str:
        if f in self.actions:
            return self._lookup(f, x)
        if x not in self.values.get(f.target, ()):
            raise GraphError(f"{x!r} is not an element over the target")
        h, g = reedy_factorize(f)
        if not is_isomorphism(h):
            y = self.restrict(g, x)
            return self._restrict_negative(h, y)
        if is_isomorphism(g):
            raise GraphError(f"no action table for isomorphism {element_label(f)}")
        for _, d in faces(f.target):
            _, i = self._rep(d.source)
            d_can = d if i is None else compose(d, _inverse_iso(i))
            if d_can not in self.actions:
                continue
            a = factor_through(d_can, f)
            if a is not None:
                return self.restrict(a, self._lookup(d_can, x))
        raise GraphError(f"positive map {element_label(f)} does not factor through a coface")

    def _restrict_negative(self, h: GammaMorphism, y: str) -> str:
        H = h.source
        v = next(v for v in H.vertex_ids if not h.blocks[v])
        s = from_generator(codegeneracy(H, v))
        rest = GammaMorphism(
            s.target, h.target, {e: h.f0[e] for e in s.target.edge_ids}, {u: h.blocks[u] for u in s.target.vertex_ids}
        )
        return self.restrict(s, self.restrict(rest, y))

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        graphs = self.universe()
        names = {G: f"g{i}" for i, G in enumerate(graphs)}
        actions = []
        for f, table in sorted(self.actions.items(), key=lambda kv: (names[kv[0].target], names[kv[0].source], repr(kv[0]))):
            actions.append(
                {
                    "source": names[f.source],
                    "target": names[f.target],
                    "f0": dict(sorted(f.f0.items())),
                    "blocks": {v: sorted(b) for v, b in sorted(f.blocks.items())},
                    "table": dict(sorted(table.items())),
                }
            )
        return {
            "name": self.name,
            "bound": self.bound,
            "max_arity": self.max_arity,
            "graphs": [{"id": names[G], "graph": format_graph(G), "elements": list(self.values[G])} for G in graphs],
            "actions": actions,
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> TruncatedGraphicalSet:
        try:
            graphs = {}
            values = {}
            for entry in data["graphs"]:
                G = parse_graph(entry["graph"])
                rep, _ = canonical_representative(G)
                if rep != G:
                    raise GraphError(f"graph {entry['id']} is not in canonical form")
                graphs[entry["id"]] = G
                values[G] = tuple(entry["elements"])
            actions = {}
            for entry in data.get("actions", []):
                f = GammaMorphism(graphs[entry["source"]], graphs[entry["target"]], entry["f0"], entry["blocks"])
                actions[f] = dict(entry["table"])
            return cls(int(data["bound"]), values, actions, int(data.get("max_arity", 3)), data.get("name", ""))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError(f"malformed graphical set JSON: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def _inverse_iso(f: GammaMorphism) -> GammaMorphism:
    f0 = {g: e for e, g in f.f0.items()}
    blocks = {next(iter(b)): {v} for v, b in f.blocks.items()}
    return GammaMorphism(f.target, f.source, f0, blocks)


def generator_morphisms(universe: Iterable[WiringGraph]) -> list[GammaMorphism]:
    """Cofaces, codegeneracies and automorphisms among canonical graphs."""
    graphs = set(universe)
    out: list[GammaMorphism] = []
    seen = set()

    def add(f: GammaMorphism) -> None:
        if f not in seen:
            seen.add(f)
            out.append(f)

    for K in sorted(graphs, key=lambda G: (len(G.vertices), len(G.edges), format_graph(G))):
        for f in automorphisms(K):
            add(f)
        for _, d in faces(K):
            rep, iso = canonical_representative(d.source)
            if rep in graphs:
                add(d if rep == d.source else compose(d, _inverse_iso(from_isomorphism(d.source, rep, iso))))
        for v in K.vertex_ids:
            vert = K.vertex_map[v]
            if (vert.in_arity, vert.out_arity) != (1, 1):
                continue
            s = from_generator(codegeneracy(K, v))
            rep, iso = canonical_representative(s.target)
            if rep in graphs:
                add(s if rep == s.target else compose(from_isomorphism(s.target, rep, iso), s))
    return out


def tabulate(X: GraphicalSet, universe: Iterable[WiringGraph] | None = None, name: str = "") -> TruncatedGraphicalSet:
    """Freeze X into tables over canonical graphs."""
    graphs = [canonical_representative(G)[0] for G in (X.universe() if universe is None else universe)]
    graphs = list(dict.fromkeys(graphs))
    labels = {}
    values = {}
    for G in graphs:
        elems = X.elements(G)
        names = [X.label(x) for x in elems]
        if len(set(names)) != len(names):
            raise GraphError("element labels collide")
        order = sorted(range(len(elems)), key=lambda i: names[i])
        values[G] = tuple(names[i] for i in order)
        labels[G] = {names[i]: elems[i] for i in order}
    actions = {}
    for f in generator_morphisms(graphs):
        table = {}
        for lab, x in labels[f.target].items():
            table[lab] = X.label(X.restrict(f, x))
        actions[f] = table
    return TruncatedGraphicalSet(X.bound, values, actions, X.max_arity, name)


# ---------------------------------------------------------------------------
# functoriality


def check_functoriality(X: TruncatedGraphicalSet) -> ValidationReport:
    """Tables are well typed, isomorphisms act bijectively, and every
    composite of two generators acts as the composite of their actions."""
    bad = []
    for f, table in X.actions.items():
        src = set(X.values.get(f.source, ()))
        tgt = set(X.values.get(f.target, ()))
        if set(table) != tgt:
            bad.append(("action-domain", f"table of {element_label(f)} is not defined on exactly the target elements"))
            continue
        if not set(table.values()) <= src:
            bad.append(("action-range", f"table of {element_label(f)} leaves the source elements"))
        if is_isomorphism(f) and len(set(table.values())) != len(table):
            bad.append(("iso-bijective", f"isomorphism {element_label(f)} does not act bijectively"))
    if bad:
        return ValidationReport.from_violations(bad)
    by_target: dict[WiringGraph, list[GammaMorphism]] = {}
    for f in X.actions:
        by_target.setdefault(f.target, []).append(f)
    for g in X.actions:
        for f in by_target.get(g.source, ()):
            gf = compose(g, f)
            for x in X.values.get(g.target, ()):
                try:
                    direct = X.restrict(gf, x)
                except GraphError as exc:
                    bad.append(("functoriality", f"{element_label(gf)} on {x}: {exc}"))
                    continue
                stepwise = X.actions[f][X.actions[g][x]]
                if direct != stepwise:
                    bad.append(
                        (
                            "functoriality",
                            f"{x} along {element_label(g)} then {element_label(f)} gives {stepwise},"
                            f" the composite gives {direct}",
                        )
                    )
    return ValidationReport.from_violations(bad)


# ---------------------------------------------------------------------------
# Segal maps


def segal_set(X: GraphicalSet, G: WiringGraph) -> list[tuple]:
    """Compatible families of corolla graphices, one entry per vertex of G
    in vertex order; X at the edge itself when G has no vertex."""
    if not G.vertices:
        return [(x,) for x in X.elements(G)]
    vs = list(G.vertex_ids)
    pieces = {v: X.elements(G.corolla_of(v)) for v in vs}
    # edge restrictions of each corolla element
    faces_of = {}
    for v in vs:
        C = G.corolla_of(v)
        faces_of[v] = [{e: X.restrict(edge_inclusion(C, e), x) for e in C.edge_ids} for x in pieces[v]]
    internal = [(e.id, e.tail_vertex, e.head_vertex) for e in G.internal_edges()]
    out = []
    chosen: list[int] = []

    def extend(i: int) -> None:
        if i == len(vs):
            out.append(tuple(pieces[v][k] for v, k in zip(vs, chosen)))
            return
        v = vs[i]
        for k in range(len(pieces[v])):
            ok = True
            for e, a, b in internal:
                other = b if a == v else a if b == v else None
                if other is None or other == v or vs.index(other) >= i:
                    continue
                if faces_of[v][k][e] != faces_of[other][chosen[vs.index(other)]][e]:
                    ok = False
                    break
            if ok:
                chosen.append(k)
                extend(i + 1)
                chosen.pop()

    extend(0)
    return out


def segal_map(X: GraphicalSet, G: WiringGraph) -> dict[Element, tuple]:
    """χ_G: each graphex to its family of corolla restrictions."""
    if not G.vertices:
        return {x: (x,) for x in X.elements(G)}
    incl = [corolla_inclusion(G, v) for v in G.vertex_ids]
    return {x: tuple(X.restrict(i, x) for i in incl) for x in X.elements(G)}


def segal_problem(X: GraphicalSet, G: WiringGraph) -> str | None:
    chi = segal_map(X, G)
    target = segal_set(X, G)
    seen: dict[tuple, Element] = {}
    for x, fam in chi.items():
        if fam in seen:
            return (
                f"not injective: {X.label(seen[fam])} and {X.label(x)} have the same corolla restrictions"
            )
        seen[fam] = x
    missing = [fam for fam in target if fam not in seen]
    if missing:
        fam = ", ".join(X.label(y) for y in missing[0])
        return f"not surjective: the compatible family ({fam}) has no preimage"
    stray = [fam for fam in seen if fam not in set(target)]
    if stray:
        return "corolla restrictions are not compatible along an internal edge"
    return None


def is_segal(X: GraphicalSet, N: int | None = None) -> ValidationReport:
    N = X.bound if N is None else N
    bad = []
    for G in X.universe():
        if len(G.vertices) > N:
            continue
        problem = segal_problem(X, G)
        if problem:
            bad.append(("segal", f"graph [{inline_graph(G)}]: {problem}"))
    return ValidationReport.from_violations(bad)


# ---------------------------------------------------------------------------
# horns


class HornData:
    """Faces of a horn of G and the compatibility constraints among them."""

    def __init__(self, G: WiringGraph, beta: GammaMorphism | GeneratorMap):
        beta = _as_morphism(beta)
        self.G = G
        self.beta = beta
        part = horn(G, beta)
        self.faces = part.generators
        self.constraints: list[list[tuple[int, int, GammaMorphism, GammaMorphism]]] = [[] for _ in self.faces]
        for phi in subobjects(G):
            lifts = []
            for i, d in enumerate(self.faces):
                a = factor_through(d, phi)
                if a is not None:
                    lifts.append((i, a))
            for (i, a), (j, b) in itertools.combinations(lifts, 2):
                self.constraints[max(i, j)].append((i, j, a, b) if i < j else (j, i, b, a))

    def in_range(self, X: GraphicalSet) -> bool:
        return X.in_range(self.G) and all(X.in_range(d.source) for d in self.faces)


def horn_maps(X: GraphicalSet, data: HornData) -> list[tuple]:
    """All natural maps from the horn to X, as values on the faces."""
    options = [X.elements(d.source) for d in data.faces]
    out: list[tuple] = []
    chosen: list[Element] = []

    def extend(i: int) -> None:
        if i == len(options):
            out.append(tuple(chosen))
            return
        for y in options[i]:
            ok = True
            for a_i, b_i, a, b in data.constraints[i]:
                # a_i < b_i == i
                if X.restrict(a, chosen[a_i]) != X.restrict(b, y):
                    ok = False
                    break
            if ok:
                chosen.append(y)
                extend(i + 1)
                chosen.pop()

    extend(0)
    return out


def horn_restriction(X: GraphicalSet, data: HornData, x: Element) -> tuple:
    return tuple(X.restrict(d, x) for d in data.faces)


def fillers(X: GraphicalSet, data: HornData, h: tuple) -> list[Element]:
    """Every graphex over G whose faces agree with the horn map h."""
    return [x for x in X.elements(data.G) if horn_restriction(X, data, x) == tuple(h)]


def _horn_report(X: GraphicalSet, N: int | None, unique: bool) -> ValidationReport:
    N = X.bound if N is None else N
    bad = []
    for G in X.universe():
        if len(G.vertices) > N or len(G.vertices) < 2:
            continue
        for beta in inner_faces(G):
            data = HornData(G, beta)
            if not data.in_range(X):
                continue
            counts = Counter(horn_restriction(X, data, x) for x in X.elements(G))
            for h in horn_maps(X, data):
                n = counts.get(h, 0)
                if n == 0 or (unique and n > 1):
                    bad.append(
                        (
                            "inner-horn",
                            f"graph [{inline_graph(G)}], inner face {element_label(beta)},"
                            f" horn map ({', '.join(X.label(y) for y in h)}) has {n} fillers",
                        )
                    )
    return ValidationReport.from_violations(bad)


def is_inner_kan(X: GraphicalSet, N: int | None = None) -> ValidationReport:
    return _horn_report(X, N, unique=False)


def has_unique_inner_fillers(X: GraphicalSet, N: int | None = None) -> ValidationReport:
    return _horn_report(X, N, unique=True)


# ---------------------------------------------------------------------------
# nerve characterization


def _corolla_swap(C: WiringGraph, side: str, i: int) -> GammaMorphism:
    legs = list(C.in_edges("v") if side == IN else C.out_edges("v"))
    f0 = {e: e for e in C.edge_ids}
    f0[legs[i - 1]], f0[legs[i]] = legs[i], legs[i - 1]
    return GammaMorphism(C, C, f0, {"v": {"v"}})


def reconstruct_properad(X: GraphicalSet) -> tuple[FiniteProperad, dict]:
    """Read a properad off X: colors from the edge, operations from
    corollas, composition from partially grafted corollas via the Segal map.

    Returns the properad and, per token, the corolla graphex it names.
    """
    edge = make_exceptional_edge()
    colors = {X.label(c): c for c in X.elements(edge)}
    color_of = {c: name for name, c in colors.items()}
    ops: dict[Biprofile, list[str]] = {}
    token_of: dict[tuple[int, int], dict[Element, str]] = {}
    element_of: dict[str, tuple[tuple[int, int], Element]] = {}
    A = X.max_arity
    for m in range(A + 1):
        for n in range(A + 1):
            C = make_corolla(m, n)
            token_of[(m, n)] = {}
            for k, x in enumerate(sorted(X.elements(C), key=X.label)):
                p = Biprofile(
                    tuple(color_of[_leg_color(X, C, e, x)] for e in C.in_edges("v")),
                    tuple(color_of[_leg_color(X, C, e, x)] for e in C.out_edges("v")),
                )
                t = f"x{m}{n}.{k}"
                ops.setdefault(p, []).append(t)
                token_of[(m, n)][x] = t
                element_of[t] = ((m, n), x)

    def tok(C_like: WiringGraph, y: Element) -> str:
        (w,) = C_like.vertex_ids
        m, n = C_like.vertex_map[w].in_arity, C_like.vertex_map[w].out_arity
        C = make_corolla(m, n)
        f0 = dict(zip(C.in_edges("v"), C_like.in_edges(w)))
        f0.update(zip(C.out_edges("v"), C_like.out_edges(w)))
        return token_of[(m, n)][X.restrict(GammaMorphism(C, C_like, f0, {"v": {w}}), y)]

    units = {}
    C11 = make_corolla(1, 1)
    sigma = from_generator(codegeneracy(C11, "v"))
    for name, c in colors.items():
        units[name] = token_of[(1, 1)][X.restrict(sigma, _transport_edge(X, sigma.target, c))]
    swaps = {}
    for t, ((m, n), x) in element_of.items():
        C = make_corolla(m, n)
        for side, k in ((IN, m), (OUT, n)):
            for i in range(1, k):
                swaps[(side, t, i)] = token_of[(m, n)][X.restrict(_corolla_swap(C, side, i), x)]
    P0 = FiniteProperad(
        tuple(sorted(colors)), {p: tuple(v) for p, v in ops.items()}, units, swaps, {}, A, A, name="reconstructed"
    )
    comps = {}
    for a, b, grafts, target in pgc_entries(P0):
        pa, pb = P0.profile[a], P0.profile[b]
        G = make_pgc((len(pa.inputs), len(pa.outputs)), (len(pb.inputs), len(pb.outputs)), grafts)
        if len(G.vertices) > X.bound:
            continue
        want = (_corolla_element(X, G, "u", element_of[a][1]), _corolla_element(X, G, "v", element_of[b][1]))
        chi = segal_map(X, G)
        hits = [z for z, fam in chi.items() if fam == want]
        if len(hits) != 1:
            raise GraphError(
                f"composition of {a} above {b} along {list(grafts)} is read from {len(hits)} graphices, not 1"
            )
        S, _, w = contract(G, ["u", "v"])
        d = GammaMorphism(S, G, {e: e for e in S.edge_ids}, {w: {"u", "v"}})
        comps[(a, b, grafts)] = tok(S, X.restrict(d, hits[0]))
    P0.compositions = comps
    return P0, element_of


def _leg_color(X: GraphicalSet, C: WiringGraph, e: str, x: Element) -> Element:
    """The restriction of x to the edge e, named over the standard edge."""
    edge = make_exceptional_edge()
    step = compose(edge_inclusion(C, e), GammaMorphism(edge, C.edge_graph(e), {edge.edge_ids[0]: e}, {}))
    return X.restrict(step, x)


def _transport_edge(X: GraphicalSet, E: WiringGraph, c: Element) -> Element:
    """The edge graphex c, named over the edge graph E."""
    edge = make_exceptional_edge()
    iso = GammaMorphism(E, edge, {E.edge_ids[0]: edge.edge_ids[0]}, {})
    return X.restrict(iso, c)


def _corolla_element(X: GraphicalSet, G: WiringGraph, v: str, x: Element) -> Element:
    """x over the standard corolla, named over the corolla of v in G."""
    Cv = G.corolla_of(v)
    vert = G.vertex_map[v]
    C = make_corolla(vert.in_arity, vert.out_arity)
    f0 = dict(zip(Cv.in_edges(v), C.in_edges("v")))
    f0.update(zip(Cv.out_edges(v), C.out_edges("v")))
    return X.restrict(GammaMorphism(Cv, C, f0, {v: {"v"}}), x)


def nerve_comparison(P: FiniteProperad, element_of: Mapping[str, tuple], X: GraphicalSet, G: WiringGraph) -> dict:
    """The map N(P)_G -> X_G through the Segal map of X."""
    chi = segal_map(X, G)
    inverse = {fam: x for x, fam in chi.items()}
    out = {}
    for D in nerve(P, G):
        if not G.vertices:
            (c,) = [y for y in X.elements(make_exceptional_edge()) if X.label(y) == D.edge_decoration[G.edge_ids[0]]]
            fam = (_transport_edge(X, G, c),)
        else:
            fam = tuple(_corolla_element(X, G, v, element_of[D.vertex_decoration[v]][1]) for v in G.vertex_ids)
        out[D] = inverse.get(fam)
    return out


def is_nerve(X: GraphicalSet, N: int | None = None) -> tuple[ValidationReport, FiniteProperad | None]:
    """Segal condition, then a reconstructed properad whose nerve is X."""
    N = X.bound if N is None else N
    report = is_segal(X, N)
    if not report.ok:
        return report, None
    try:
        P, element_of = reconstruct_properad(X)
    except GraphError as exc:
        return ValidationReport.from_violations([("reconstruction", str(exc))]), None
    axioms = check_properad_axioms(P, graph_bound=min(N, 3))
    if not axioms.ok:
        return ValidationReport.from_violations([("reconstruction", f"{n}: {w}") for n, w in axioms.violations]), P
    bad = []
    graphs = [G for G in X.universe() if len(G.vertices) <= N]
    maps = {}
    for G in graphs:
        phi = nerve_comparison(P, element_of, X, G)
        maps[G] = phi
        values = [x for x in phi.values() if x is not None]
        if len(values) != len(phi) or len(set(values)) != len(values) or len(values) != len(X.elements(G)):
            bad.append(("nerve-bijection", f"graph [{inline_graph(G)}]: N(P) and X differ in size or match"))
    if not bad:
        for f in generator_morphisms(graphs):
            phi_t, phi_s = maps[f.target], maps[f.source]
            for D, x in phi_t.items():
                if phi_s[nerve_restrict(P, f, D)] != X.restrict(f, x):
                    bad.append(("nerve-naturality", f"restriction along {element_label(f)} disagrees at {X.label(x)}"))
                    break
    return ValidationReport.from_violations(bad), P


# ---------------------------------------------------------------------------
# mutations


class _Wrapped(GraphicalSet):
    def __init__(self, X: GraphicalSet):
        self.X = X
        self.bound = X.bound
        self.max_arity = X.max_arity

    def universe(self) -> list[WiringGraph]:
        return self.X.universe()


def _reaches(X: GraphicalSet, G: WiringGraph, x: Element, K: WiringGraph, y: Element) -> bool:
    """Some f: G -> K restricts y to x."""
    if len(K.vertices) < len(G.vertices) and not any(v.in_arity == v.out_arity == 1 for v in G.vertices):
        return False
    return any(X.restrict(f, y) == x for f in hom_set(G, K))


class PuncturedSet(_Wrapped):
    """The largest sub-presheaf of X avoiding the graphex x over G."""

    def __init__(self, X: GraphicalSet, G: WiringGraph, x: Element):
        super().__init__(X)
        self.G, self.x = G, x
        self._cache: dict = {}

    def removed(self, K: WiringGraph, y: Element) -> bool:
        key = (K, y)
        if key not in self._cache:
            self._cache[key] = _reaches(self.X, self.G, self.x, K, y)
        return self._cache[key]

    def elements(self, K: WiringGraph) -> list[Element]:
        return [y for y in self.X.elements(K) if not self.removed(K, y)]

    def restrict(self, f: GammaMorphism, y: Element) -> Element:
        return self.X.restrict(f, y)

    def label(self, y: Element) -> str:
        return self.X.label(y)


class PaddedSet(_Wrapped):
    """X glued to itself along the punctured part: every graphex that
    restricts to x gets a twin (the pushout of X <- Z -> X)."""

    def __init__(self, X: GraphicalSet, G: WiringGraph, x: Element):
        super().__init__(X)
        self.Z = PuncturedSet(X, G, x)

    def elements(self, K: WiringGraph) -> list[Element]:
        out = []
        for y in self.X.elements(K):
            if self.Z.removed(K, y):
                out.extend([(0, y), (1, y)])
            else:
                out.append((0, y))
        return out

    def restrict(self, f: GammaMorphism, y: Element) -> Element:
        side, base = y
        r = self.X.restrict(f, base)
        if side == 1 and self.Z.removed(f.source, r):
            return (1, r)
        return (0, r)

    def label(self, y: Element) -> str:
        side, base = y
        return self.X.label(base) + ("'" if side else "")


def punctured(X: GraphicalSet, G: WiringGraph, x: Element) -> PuncturedSet:
    return PuncturedSet(X, G, x)


def padded(X: GraphicalSet, G: WiringGraph, x: Element) -> PaddedSet:
    return PaddedSet(X, G, x)
