"""Free graphical properads, finite colored properads and their nerves."""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Mapping

from .gamma import DecoratedGraph, GammaMorphism
from .graph import (
    IN,
    OUT,
    Biprofile,
    Edge,
    GraphError,
    Port,
    ValidationReport,
    Vertex,
    WiringGraph,
    inline_graph,
    is_convex,
    make_pgc,
)
from .substitution import contract
from .universe import enumerate_graphs


class CompositionError(GraphError):
    pass


Graft = tuple[int, int]


def composite_profile(a: Biprofile, b: Biprofile, grafts: Iterable[Graft]) -> Biprofile:
    """Biprofile of a grafted above b: a's inputs then b's free inputs,
    a's free outputs then b's outputs."""
    grafts = sorted(grafts)
    used_out = {i for i, _ in grafts}
    used_in = {j for _, j in grafts}
    inputs = a.inputs + tuple(c for j, c in enumerate(b.inputs, 1) if j not in used_in)
    outputs = tuple(c for i, c in enumerate(a.outputs, 1) if i not in used_out) + b.outputs
    return Biprofile(inputs, outputs)


def graft_options(a: Biprofile, b: Biprofile) -> Iterator[tuple[Graft, ...]]:
    """Every nonempty color-respecting partial matching of a's outputs to b's inputs."""
    na, nb = len(a.outputs), len(b.inputs)
    for k in range(1, min(na, nb) + 1):
        for outs in itertools.combinations(range(1, na + 1), k):
            for ins in itertools.permutations(range(1, nb + 1), k):
                grafts = tuple(zip(outs, ins))
                if all(a.outputs[i - 1] == b.inputs[j - 1] for i, j in grafts):
                    yield grafts


def _swapped(seq: tuple, i: int) -> tuple:
    s = list(seq)
    s[i - 1], s[i] = s[i], s[i - 1]
    return tuple(s)


@dataclass
class FiniteProperad:
    """Finite colored properad given by generating data.

    ``swaps[(side, x, i)]`` is x with ports i and i+1 on ``side`` exchanged.
    ``compositions[(a, b, grafts)]`` is a grafted above b where ``grafts``
    lists (output of a, input of b) pairs; see ``composite_profile`` for
    the port order of the result.
    """

    colors: tuple[str, ...]
    ops: dict[Biprofile, tuple[str, ...]]
    units: dict[str, str]
    swaps: dict[tuple[str, str, int], str]
    compositions: dict[tuple[str, str, tuple[Graft, ...]], str]
    max_inputs: int = 3
    max_outputs: int = 3
    name: str = ""
    profile: dict[str, Biprofile] = field(init=False, repr=False)
    _cache: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        self.colors = tuple(self.colors)
        self.profile = {}
        for p, tokens in self.ops.items():
            for t in tokens:
                if t in self.profile:
                    raise GraphError(f"operation token {t!r} used for two biprofiles")
                self.profile[t] = p

    # -- basic operations ----------------------------------------------

    def arities(self) -> frozenset[tuple[int, int]]:
        return frozenset((len(p.inputs), len(p.outputs)) for p, t in self.ops.items() if t)

    def tokens(self) -> list[str]:
        return sorted(self.profile)

    def ops_of(self, p: Biprofile) -> tuple[str, ...]:
        return self.ops.get(p, ())

    def swap(self, x: str, side: str, i: int) -> str:
        try:
            return self.swaps[(side, x, i)]
        except KeyError:
            raise CompositionError(f"symmetry table incomplete: no {side}-swap {i} for {x}") from None

    def permute(self, x: str, in_perm: Iterable[int] = (), out_perm: Iterable[int] = ()) -> str:
        """Reorder ports: position k of the result holds old port perm[k-1]."""
        for side, perm in ((IN, tuple(in_perm)), (OUT, tuple(out_perm))):
            if not perm:
                continue
            cur = list(range(1, len(perm) + 1))
            for k in range(len(perm)):
                j = cur.index(perm[k])
                while j > k:
                    x = self.swap(x, side, j)
                    cur[j - 1], cur[j] = cur[j], cur[j - 1]
                    j -= 1
        return x

    def compose(self, a: str, b: str, grafts: Iterable[Graft]) -> str:
        key = (a, b, tuple(sorted(grafts)))
        try:
            return self.compositions[key]
        except KeyError:
            raise CompositionError(f"composition table incomplete: {a} above {b} along {list(key[2])}") from None

    def within_bound(self, p: Biprofile) -> bool:
        return len(p.inputs) <= self.max_inputs and len(p.outputs) <= self.max_outputs

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "colors": list(self.colors),
            "max_arity": [self.max_inputs, self.max_outputs],
            "ops": [
                {"inputs": list(p.inputs), "outputs": list(p.outputs), "tokens": list(t)}
                for p, t in sorted(self.ops.items(), key=lambda kv: (kv[0].inputs, kv[0].outputs))
            ],
            "units": dict(sorted(self.units.items())),
            "swaps": [
                {"side": s, "op": x, "position": i, "result": r} for (s, x, i), r in sorted(self.swaps.items())
            ],
            "compositions": [
                {"upper": a, "lower": b, "grafts": [list(g) for g in gs], "result": r}
                for (a, b, gs), r in sorted(self.compositions.items())
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> FiniteProperad:
        try:
            ops = {
                Biprofile(tuple(e["inputs"]), tuple(e["outputs"])): tuple(e["tokens"]) for e in data["ops"]
            }
            swaps = {(e["side"], e["op"], int(e["position"])): e["result"] for e in data.get("swaps", [])}
            comps = {
                (e["upper"], e["lower"], tuple(sorted(tuple(g) for g in e["grafts"]))): e["result"]
                for e in data.get("compositions", [])
            }
            mi, mo = data.get("max_arity", [3, 3])
            return cls(
                tuple(data["colors"]),
                ops,
                dict(data["units"]),
                swaps,
                comps,
                int(mi),
                int(mo),
                data.get("name", ""),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed properad JSON: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


# ---------------------------------------------------------------------------
# evaluation of decorated graphs


def _check_decoration(P: FiniteProperad, d: DecoratedGraph) -> None:
    G = d.shape
    for v in G.vertex_ids:
        x = d.vertex_decoration.get(v)
        if x not in P.profile:
            raise GraphError(f"vertex {v} is decorated by unknown operation {x!r}")
        want = Biprofile(
            tuple(d.edge_decoration[e] for e in G.in_edges(v)), tuple(d.edge_decoration[e] for e in G.out_edges(v))
        )
        if P.profile[x] != want:
            raise GraphError(f"vertex {v}: operation {x} has biprofile {P.profile[x]}, ports give {want}")


def _convex_pairs(G: WiringGraph) -> list[tuple[str, str]]:
    pairs = sorted({(e.tail_vertex, e.head_vertex) for e in G.internal_edges()})
    return [(u, v) for u, v in pairs if is_convex(G, {u, v})]


def _contract_pair(P: FiniteProperad, G: WiringGraph, tokens: Mapping[str, str], u: str, v: str):
    grafts = tuple(
        sorted((e.tail.index, e.head.index) for e in G.internal_edges() if e.tail_vertex == u and e.head_vertex == v)
    )
    target = composite_profile(P.profile[tokens[u]], P.profile[tokens[v]], grafts)
    if not P.within_bound(target):
        return None
    S, _, w = contract(G, [u, v], new_id=f"({u}.{v})")
    new_tokens = {k: t for k, t in tokens.items() if k not in (u, v)}
    new_tokens[w] = P.compose(tokens[u], tokens[v], grafts)
    return S, new_tokens


def _single(P: FiniteProperad, G: WiringGraph, tokens: Mapping[str, str]) -> str:
    (v,) = G.vertex_ids
    in_perm = [G.edge_map[e].head.index for e in G.inputs]
    out_perm = [G.edge_map[e].tail.index for e in G.outputs]
    return P.permute(tokens[v], in_perm, out_perm)


def _evaluate(P: FiniteProperad, G: WiringGraph, tokens: dict[str, str], colors: Mapping[str, str]) -> str:
    if not G.vertices:
        return P.units[colors[G.edge_ids[0]]]
    if len(G.vertices) == 1:
        return _single(P, G, tokens)
    for u, v in _convex_pairs(G):
        step = _contract_pair(P, G, tokens, u, v)
        if step is None:
            continue
        try:
            return _evaluate(P, step[0], step[1], colors)
        except _OutOfBound:
            continue
    raise _OutOfBound()


class _OutOfBound(Exception):
    pass


def evaluate(P: FiniteProperad, d: DecoratedGraph) -> str:
    """Contract a P-decorated graph to one operation.

    The result's ports follow the shape's graph input and output order.
    """
    key = ("eval", d)
    if key in P._cache:
        return P._cache[key]
    _check_decoration(P, d)
    try:
        out = _evaluate(P, d.shape, dict(d.vertex_decoration), d.edge_decoration)
    except _OutOfBound:
        raise GraphError("shape exceeds arity bound: no contraction order stays within it") from None
    P._cache[key] = out
    return out


def evaluate_all_orders(P: FiniteProperad, d: DecoratedGraph) -> dict[tuple, str]:
    """Result of every contraction order that stays within the arity bound,
    keyed by the sequence of contracted pairs."""
    _check_decoration(P, d)
    out: dict[tuple, str] = {}

    def walk(G: WiringGraph, tokens: dict[str, str], path: tuple) -> None:
        if len(G.vertices) <= 1:
            out[path] = _evaluate(P, G, tokens, d.edge_decoration)
            return
        for u, v in _convex_pairs(G):
            step = _contract_pair(P, G, tokens, u, v)
            if step is not None:
                walk(step[0], step[1], path + ((u, v),))

    walk(d.shape, dict(d.vertex_decoration), ())
    return out


# ---------------------------------------------------------------------------
# nerve


def nerve(P: FiniteProperad, G: WiringGraph) -> list[DecoratedGraph]:
    """All P-decorations of G: edge colorings plus compatible operations."""
    key = ("nerve", G)
    if key in P._cache:
        return P._cache[key]
    for v in G.vertices:
        if v.in_arity > P.max_inputs or v.out_arity > P.max_outputs:
            raise GraphError(f"arity overflow at vertex {v.id}: ({v.in_arity},{v.out_arity})")
    by_arity: dict[tuple[int, int], list[str]] = {}
    for t, p in sorted(P.profile.items()):
        by_arity.setdefault((len(p.inputs), len(p.outputs)), []).append(t)
    results: list[DecoratedGraph] = []
    if not G.vertices:
        results = [DecoratedGraph(G, {G.edge_ids[0]: c}, {}) for c in P.colors]
        P._cache[key] = results
        return results
    order = list(G.vertex_ids)
    colors: dict[str, str] = {}
    tokens: dict[str, str] = {}

    def extend(i: int) -> None:
        if i == len(order):
            results.append(DecoratedGraph(G, dict(colors), dict(tokens)))
            return
        v = order[i]
        ins, outs = G.in_edges(v), G.out_edges(v)
        for t in by_arity.get((len(ins), len(outs)), ()):
            p = P.profile[t]
            pairs = list(zip(ins, p.inputs)) + list(zip(outs, p.outputs))
            if any(e in colors and colors[e] != c for e, c in pairs):
                continue
            added = [e for e, _ in pairs if e not in colors]
            for e, c in pairs:
                colors[e] = c
            tokens[v] = t
            extend(i + 1)
            del tokens[v]
            for e in added:
                del colors[e]

    extend(0)
    P._cache[key] = results
    return results


def nerve_restrict(P: FiniteProperad, f: GammaMorphism, x: DecoratedGraph) -> DecoratedGraph:
    """Pull a P-decoration of the target of f back to its source."""
    H = f.source
    colors = {e: x.edge_decoration[f.f0[e]] for e in H.edge_ids}
    tokens = {}
    for w in H.vertex_ids:
        d = f.f1[w]
        piece = DecoratedGraph(
            d.shape,
            {e: x.edge_decoration[d.edge_decoration[e]] for e in d.shape.edge_ids},
            {u: x.vertex_decoration[d.vertex_decoration[u]] for u in d.shape.vertex_ids},
        )
        tokens[w] = evaluate(P, piece)
    return DecoratedGraph(H, colors, tokens)


# ---------------------------------------------------------------------------
# axiom checks


def _pgc_decoration(P: FiniteProperad, a: str, b: str, grafts: tuple[Graft, ...]) -> DecoratedGraph:
    pa, pb = P.profile[a], P.profile[b]
    shape = make_pgc((len(pa.inputs), len(pa.outputs)), (len(pb.inputs), len(pb.outputs)), grafts)
    colors = {}
    for k, e in enumerate(shape.in_edges("u")):
        colors[e] = pa.inputs[k]
    for k, e in enumerate(shape.out_edges("u")):
        colors[e] = pa.outputs[k]
    for k, e in enumerate(shape.in_edges("v")):
        colors.setdefault(e, pb.inputs[k])
    for k, e in enumerate(shape.out_edges("v")):
        colors[e] = pb.outputs[k]
    return DecoratedGraph(shape, colors, {"u": a, "v": b})


def _swap_ports(d: DecoratedGraph, v: str, side: str, i: int, new_token: str) -> DecoratedGraph:
    G = d.shape
    edges = []
    for e in G.edges:
        tail, head = e.tail, e.head
        if side == OUT and isinstance(tail, Port) and tail.vertex == v and tail.index in (i, i + 1):
            tail = Port(v, OUT, 2 * i + 1 - tail.index)
        if side == IN and isinstance(head, Port) and head.vertex == v and head.index in (i, i + 1):
            head = Port(v, IN, 2 * i + 1 - head.index)
        edges.append(Edge(e.id, tail, head, e.color))
    shape = WiringGraph(G.vertices, edges, G.inputs, G.outputs)
    tokens = dict(d.vertex_decoration)
    tokens[v] = new_token
    return DecoratedGraph(shape, d.edge_decoration, tokens)


def pgc_entries(P: FiniteProperad) -> Iterator[tuple[str, str, tuple[Graft, ...], Biprofile]]:
    """Every composable (a, b, grafts) whose composite stays within bound."""
    for a in P.tokens():
        for b in P.tokens():
            for grafts in graft_options(P.profile[a], P.profile[b]):
                target = composite_profile(P.profile[a], P.profile[b], grafts)
                if P.within_bound(target):
                    yield a, b, grafts, target


def check_properad_axioms(P: FiniteProperad, graph_bound: int = 3) -> ValidationReport:
    """Structure, symmetric action, units, equivariance and associativity.

    Associativity is checked on every decorated graph with up to
    ``graph_bound`` vertices whose vertex arities occur in P.
    """
    bad: list[tuple[str, str]] = []
    colors = set(P.colors)
    for t, p in sorted(P.profile.items()):
        if not set(p.inputs + p.outputs) <= colors:
            bad.append(("structure", f"operation {t} uses an unknown color in {p}"))
        if not P.within_bound(p):
            bad.append(("structure", f"operation {t} exceeds the arity bound with {p}"))
    for c in P.colors:
        u = P.units.get(c)
        if u is None or P.profile.get(u) != Biprofile((c,), (c,)):
            bad.append(("unit", f"color {c} has no unit in ({c};{c})"))
    if bad:
        return ValidationReport.from_violations(bad)

    for t, p in sorted(P.profile.items()):
        for side, seq in ((IN, p.inputs), (OUT, p.outputs)):
            for i in range(1, len(seq)):
                r = P.swaps.get((side, t, i))
                if r is None:
                    bad.append(("symmetry", f"missing {side}-swap {i} for {t}"))
                    continue
                want = Biprofile(_swapped(p.inputs, i), p.outputs) if side == IN else Biprofile(
                    p.inputs, _swapped(p.outputs, i)
                )
                if P.profile.get(r) != want:
                    bad.append(("symmetry", f"{side}-swap {i} of {t} gives {r}, expected biprofile {want}"))
    if bad:
        return ValidationReport.from_violations(bad)

    for t, p in sorted(P.profile.items()):
        for side, n in ((IN, len(p.inputs)), (OUT, len(p.outputs))):
            for i in range(1, n):
                s = lambda x, j: P.swap(x, side, j)  # noqa: E731
                if s(s(t, i), i) != t:
                    bad.append(("symmetry", f"{side}-swap {i} is not an involution on {t}"))
                if i + 1 < n:
                    x = t
                    for _ in range(3):
                        x = s(s(x, i), i + 1)
                    if x != t:
                        bad.append(("symmetry", f"braid relation fails for {side}-swaps {i},{i + 1} on {t}"))
                for j in range(i + 2, n):
                    if s(s(t, i), j) != s(s(t, j), i):
                        bad.append(("symmetry", f"{side}-swaps {i} and {j} do not commute on {t}"))
        for i in range(1, len(p.inputs)):
            for j in range(1, len(p.outputs)):
                if P.swap(P.swap(t, IN, i), OUT, j) != P.swap(P.swap(t, OUT, j), IN, i):
                    bad.append(("symmetry", f"input and output swaps do not commute on {t}"))

    entries = list(pgc_entries(P))
    for a, b, grafts, target in entries:
        r = P.compositions.get((a, b, grafts))
        if r is None:
            bad.append(("composition", f"composition table incomplete: {a} above {b} along {list(grafts)}"))
        elif P.profile.get(r) != target:
            bad.append(("composition", f"{a} above {b} along {list(grafts)} gives {r}, expected biprofile {target}"))
    if bad:
        return ValidationReport.from_violations(bad)

    for x, p in sorted(P.profile.items()):
        for j, c in enumerate(p.inputs, 1):
            got = P.compose(P.units[c], x, ((1, j),))
            want = P.permute(x, in_perm=[j] + [k for k in range(1, len(p.inputs) + 1) if k != j])
            if got != want:
                bad.append(("unit", f"unit of {c} grafted into input {j} of {x} gives {got}, expected {want}"))
        for i, c in enumerate(p.outputs, 1):
            got = P.compose(x, P.units[c], ((i, 1),))
            want = P.permute(x, out_perm=[k for k in range(1, len(p.outputs) + 1) if k != i] + [i])
            if got != want:
                bad.append(("unit", f"output {i} of {x} grafted into the unit of {c} gives {got}, expected {want}"))

    for a, b, grafts, _ in entries:
        d = _pgc_decoration(P, a, b, grafts)
        base = evaluate(P, d)
        for v, x in (("u", a), ("v", b)):
            p = P.profile[x]
            for side, n in ((IN, len(p.inputs)), (OUT, len(p.outputs))):
                for i in range(1, n):
                    d2 = _swap_ports(d, v, side, i, P.swap(x, side, i))
                    try:
                        other = evaluate(P, d2)
                    except GraphError:
                        continue
                    if other != base:
                        bad.append(
                            (
                                "equivariance",
                                f"{a} above {b} along {list(grafts)}: {side}-swap {i} at {v} gives {other}, not {base}",
                            )
                        )

    if graph_bound >= 3:
        bad.extend(_associativity_violations(P, graph_bound))
    return ValidationReport.from_violations(bad)


def _associativity_violations(P: FiniteProperad, graph_bound: int) -> list[tuple[str, str]]:
    out = []
    arities = P.arities()
    if not arities:
        return out
    shapes = [G for G in enumerate_graphs(graph_bound, arities=arities) if len(G.vertices) >= 3]
    for G in shapes:
        for d in nerve(P, G):
            results = evaluate_all_orders(P, d)
            if len(set(results.values())) > 1:
                detail = "; ".join(f"{list(k)} -> {v}" for k, v in sorted(results.items()))
                out.append(
                    (
                        "associativity",
                        f"graph [{inline_graph(G)}] decorated {dict(sorted(d.vertex_decoration.items()))}"
                        f" with colors {dict(sorted(d.edge_decoration.items()))}: {detail}",
                    )
                )
    return out


# ---------------------------------------------------------------------------
# free properad on a graph


def _free_shapes(G: WiringGraph, max_vertices: int) -> Iterator[DecoratedGraph]:
    for e in G.edge_ids:
        yield DecoratedGraph(WiringGraph([], [Edge("e", 1, 1)], ["e"], ["e"]), {"e": e}, {})
    for k in range(1, max_vertices + 1):
        for multiset in itertools.combinations_with_replacement(G.vertex_ids, k):
            yield from _free_wirings(G, multiset)


def _partial_matchings(outs: list, ins: list) -> Iterator[list[tuple]]:
    for m in range(0, min(len(outs), len(ins)) + 1):
        for chosen in itertools.combinations(outs, m):
            for targets in itertools.permutations(ins, m):
                yield list(zip(chosen, targets))


def _free_wirings(G: WiringGraph, multiset: tuple[str, ...]) -> Iterator[DecoratedGraph]:
    names = [f"n{i}" for i in range(len(multiset))]
    out_ports: dict[str, list[tuple[str, int]]] = {}
    in_ports: dict[str, list[tuple[str, int]]] = {}
    for name, t in zip(names, multiset):
        for k, e in enumerate(G.out_edges(t), 1):
            out_ports.setdefault(e, []).append((name, k))
        for k, e in enumerate(G.in_edges(t), 1):
            in_ports.setdefault(e, []).append((name, k))
    colors = sorted(set(out_ports) | set(in_ports))
    options = [list(_partial_matchings(out_ports.get(c, []), in_ports.get(c, []))) for c in colors]
    vertices = [Vertex(n, G.vertex_map[t].in_arity, G.vertex_map[t].out_arity) for n, t in zip(names, multiset)]
    for combo in itertools.product(*options):
        edges = []
        deco = {}
        inputs, outputs = [], []
        count = 0
        for c, matching in zip(colors, combo):
            matched_out = {a for a, _ in matching}
            matched_in = {b for _, b in matching}
            for (tn, tk), (hn, hk) in matching:
                eid = f"x{count}"
                count += 1
                edges.append(Edge(eid, Port(tn, OUT, tk), Port(hn, IN, hk)))
                deco[eid] = c
            for hn, hk in in_ports.get(c, []):
                if (hn, hk) not in matched_in:
                    eid = f"x{count}"
                    count += 1
                    inputs.append(eid)
                    edges.append(Edge(eid, len(inputs), Port(hn, IN, hk)))
                    deco[eid] = c
            for tn, tk in out_ports.get(c, []):
                if (tn, tk) not in matched_out:
                    eid = f"x{count}"
                    count += 1
                    outputs.append(eid)
                    edges.append(Edge(eid, Port(tn, OUT, tk), len(outputs)))
                    deco[eid] = c
        shape = WiringGraph(vertices, edges, inputs, outputs)
        from .graph import validate_graph

        report = validate_graph(shape)
        if report.ok:
            yield DecoratedGraph(shape, deco, dict(zip(names, multiset)))


def all_free_elements(G: WiringGraph, max_vertices: int) -> list[DecoratedGraph]:
    """Every G-decorated graph with at most ``max_vertices`` vertices, one per
    decoration-preserving weak iso class."""
    seen: dict[bytes, DecoratedGraph] = {}
    for d in _free_shapes(G, max_vertices):
        seen.setdefault(d.canonical_key(), d)
    return list(seen.values())


def _reorder_legs(d: DecoratedGraph, profile: Biprofile) -> DecoratedGraph | None:
    shape = d.shape
    ordered = []
    for legs, want in ((shape.inputs, profile.inputs), (shape.outputs, profile.outputs)):
        pool = list(legs)
        chosen = []
        for c in want:
            hit = next((e for e in pool if d.edge_decoration[e] == c), None)
            if hit is None:
                return None
            pool.remove(hit)
            chosen.append(hit)
        if pool:
            return None
        ordered.append(tuple(chosen))
    from .gamma import _reslot

    return DecoratedGraph(_reslot(shape, ordered[0], ordered[1]), d.edge_decoration, d.vertex_decoration)


def free_elements(G: WiringGraph, profile: Biprofile, max_vertices: int) -> list[DecoratedGraph]:
    """Operations of the free properad on G with the given biprofile (over
    G's edges), up to decoration-preserving weak isomorphism."""
    out = []
    for d in all_free_elements(G, max_vertices):
        r = _reorder_legs(d, profile)
        if r is not None:
            out.append(r)
    return out


# ---------------------------------------------------------------------------
# constructions


def _closure(profiles: set[Biprofile], max_arity: int, limit: int) -> set[Biprofile] | None:
    """Close under port permutations and grafting, dropping composites past
    the bound; None if more than ``limit`` biprofiles appear."""
    done = set()
    todo = set(profiles)
    while todo:
        p = todo.pop()
        if len(p.inputs) > max_arity or len(p.outputs) > max_arity:
            return None
        done.add(p)
        if len(done) > limit:
            return None
        new = set()
        for ins in set(itertools.permutations(p.inputs)):
            for outs in set(itertools.permutations(p.outputs)):
                new.add(Biprofile(ins, outs))
        for q in list(done):
            for a, b in ((p, q), (q, p)):
                for grafts in graft_options(a, b):
                    q = composite_profile(a, b, grafts)
                    if len(q.inputs) <= max_arity and len(q.outputs) <= max_arity:
                        new.add(q)
        todo |= new - done
    return done


MONOIDS: dict[str, tuple[tuple[int, ...], Any, int]] = {
    "trivial": ((0,), lambda x, y: 0, 0),
    "z2": ((0, 1), lambda x, y: (x + y) % 2, 0),
    "z3": ((0, 1, 2), lambda x, y: (x + y) % 3, 0),
    "and": ((0, 1), lambda x, y: x * y, 1),
    "max": ((0, 1, 2), max, 0),
}


def _pointers(p: Biprofile) -> list[tuple[int, ...]]:
    """Functions from output positions to input positions."""
    return list(itertools.product(range(1, len(p.inputs) + 1), repeat=len(p.outputs)))


def build_properad(
    colors: Iterable[str],
    profiles: Iterable[Biprofile],
    monoid: str = "trivial",
    pointer: bool = False,
    max_arity: int = 3,
    name: str = "",
) -> FiniteProperad:
    """Properad on a composition-closed set of biprofiles.

    Operations at p are pairs (m, ptr): m in a commutative monoid composed
    by its product, and, when ``pointer`` is set, ptr a function sending
    each output to an input, composed by following the graft.  Symmetries
    act on ptr only.
    """
    colors = tuple(colors)
    elems, mult, unit = MONOIDS[monoid]
    profiles = sorted(set(profiles), key=lambda p: (len(p.inputs), len(p.outputs), p.inputs, p.outputs))
    index = {p: k for k, p in enumerate(profiles)}

    def ptrs(p):
        return _pointers(p) if pointer else [None]

    def tok(p: Biprofile, m: int, ptr) -> str:
        tail = "" if ptr is None else "@" + "".join(map(str, ptr))
        return f"p{index[p]}:{m}{tail}"

    ops = {p: tuple(tok(p, m, r) for m in elems for r in ptrs(p)) for p in profiles}
    data = {tok(p, m, r): (p, m, r) for p in profiles for m in elems for r in ptrs(p)}
    units = {c: tok(Biprofile((c,), (c,)), unit, (1,) if pointer else None) for c in colors}
    swaps = {}
    for t, (p, m, r) in data.items():
        for i in range(1, len(p.inputs)):
            q = Biprofile(_swapped(p.inputs, i), p.outputs)
            r2 = None if r is None else tuple({i: i + 1, i + 1: i}.get(x, x) for x in r)
            swaps[(IN, t, i)] = tok(q, m, r2)
        for i in range(1, len(p.outputs)):
            q = Biprofile(p.inputs, _swapped(p.outputs, i))
            r2 = None if r is None else _swapped(r, i)
            swaps[(OUT, t, i)] = tok(q, m, r2)
    comps = {}
    for a, (pa, ma, ra) in data.items():
        for b, (pb, mb, rb) in data.items():
            for grafts in graft_options(pa, pb):
                q = composite_profile(pa, pb, grafts)
                if len(q.inputs) > max_arity or len(q.outputs) > max_arity:
                    continue
                if q not in index:
                    raise GraphError(f"biprofile set not closed: {q}")
                r = None
                if pointer:
                    fed = dict((j, i) for i, j in grafts)
                    grafted_out = {i for i, _ in grafts}
                    free_in = [j for j in range(1, len(pb.inputs) + 1) if j not in fed]
                    m_a = len(pa.inputs)
                    r = tuple(ra[i - 1] for i in range(1, len(pa.outputs) + 1) if i not in grafted_out)
                    r += tuple(ra[fed[j] - 1] if j in fed else m_a + free_in.index(j) + 1 for j in rb)
                comps[(a, b, grafts)] = tok(q, mult(ma, mb), r)
    return FiniteProperad(colors, ops, units, swaps, comps, max_arity, max_arity, name=name)


def terminal_properad(colors: Iterable[str], max_arity: int = 2) -> FiniteProperad:
    """One operation per biprofile up to ``max_arity``; composites past the
    bound are simply absent."""
    colors = tuple(colors)
    profiles = [
        Biprofile(ins, outs)
        for m in range(max_arity + 1)
        for n in range(max_arity + 1)
        for ins in itertools.product(colors, repeat=m)
        for outs in itertools.product(colors, repeat=n)
    ]
    index = {p: f"t{k}" for k, p in enumerate(profiles)}
    ops = {p: (index[p],) for p in profiles}
    swaps = {}
    for p in profiles:
        for i in range(1, len(p.inputs)):
            swaps[(IN, index[p], i)] = index[Biprofile(_swapped(p.inputs, i), p.outputs)]
        for i in range(1, len(p.outputs)):
            swaps[(OUT, index[p], i)] = index[Biprofile(p.inputs, _swapped(p.outputs, i))]
    comps = {}
    for pa in profiles:
        for pb in profiles:
            for grafts in graft_options(pa, pb):
                q = composite_profile(pa, pb, grafts)
                if q in index:
                    comps[(index[pa], index[pb], grafts)] = index[q]
    units = {c: index[Biprofile((c,), (c,))] for c in colors}
    return FiniteProperad(colors, ops, units, swaps, comps, max_arity, max_arity, name="terminal")


def random_properad(
    seed: int,
    max_colors: int = 3,
    max_ops: int = 3,
    max_arity: int = 3,
    max_profiles: int = 10,
) -> FiniteProperad:
    """A seeded random properad satisfying the axioms by construction."""
    rng = random.Random(seed)
    for _ in range(10000):
        k = rng.randint(1, max_colors)
        colors = tuple("abc"[:k])
        gens = {Biprofile((c,), (c,)) for c in colors}
        for _ in range(rng.randint(0, 3)):
            m, n = rng.randint(0, 2), rng.randint(0, 2)
            gens.add(Biprofile(tuple(rng.choice(colors) for _ in range(m)), tuple(rng.choice(colors) for _ in range(n))))
        closed = _closure(gens, max_arity, max_profiles)
        if closed is None:
            continue
        monoid = rng.choice(sorted(MONOIDS))
        pointer = rng.random() < 0.5 and all(
            len(p.inputs) ** len(p.outputs) * len(MONOIDS[monoid][0]) <= max_ops for p in closed
        )
        if len(MONOIDS[monoid][0]) > max_ops:
            continue
        return build_properad(colors, closed, monoid, pointer, max_arity, name=f"random-{seed}")
    raise RuntimeError("no closed biprofile set found")
