"""Command-line front end.

Exit codes: 0 when a check passes or a command succeeds, 1 when a check
fails (a JSON report with witnesses is printed), 2 on unreadable input.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path
from typing import Any, Callable

from .gamma import (
    classify,
    hom_set,
    is_valid_gamma_morphism,
    morphism_from_json,
    morphism_to_json,
    reedy_factorize,
)
from .graph import (
    Biprofile,
    GraphError,
    GraphParseError,
    ValidationReport,
    WiringGraph,
    find_isomorphisms,
    format_graph,
    inline_graph,
    parse_graph,
    validate_graph,
)
from .presheaf import (
    GraphicalSet,
    NerveGraphicalSet,
    Representable,
    TruncatedGraphicalSet,
    check_functoriality,
    element_label,
    has_unique_inner_fillers,
    is_inner_kan,
    is_nerve,
    is_segal,
)
from .properad import (
    FiniteProperad,
    all_free_elements,
    check_properad_axioms,
    evaluate_all_orders,
    free_elements,
    nerve,
)
from .substitution import SubstitutionAssignment, codegeneracy, enumerate_cofaces_into, substitute
from .universe import enumerate_graphs

DEFAULT_BOUND = 4


class InputError(Exception):
    pass


class CheckFailed(Exception):
    def __init__(self, payload: dict):
        super().__init__("check failed")
        self.payload = payload


# ---------------------------------------------------------------------------
# DOT


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(G: WiringGraph) -> str:
    """Vertices as circles, edges pointing downward, legs to invisible anchors."""
    lines = [f"digraph {_quote(G.name or 'G')} {{", "  rankdir=TB;", "  node [shape=circle];"]
    for v in G.vertices:
        lines.append(f"  {_quote('v:' + v.id)} [label={_quote(v.id)}];")
    for e in G.edges:
        label = e.id if e.color is None else f"{e.id}:{e.color}"
        tail = f"v:{e.tail.vertex}" if not isinstance(e.tail, int) else f"in:{e.id}"
        head = f"v:{e.head.vertex}" if not isinstance(e.head, int) else f"out:{e.id}"
        for anchor in (tail, head):
            if not anchor.startswith("v:"):
                lines.append(f"  {_quote(anchor)} [shape=point, style=invis];")
        lines.append(f"  {_quote(tail)} -> {_quote(head)} [label={_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# loading


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc


def load_graph(path: str) -> WiringGraph:
    try:
        return parse_graph(_read(path))
    except GraphParseError as exc:
        raise InputError(f"{path}:{exc.lineno}: {exc.message}") from exc


def load_valid_graph(path: str) -> WiringGraph:
    G = load_graph(path)
    report = validate_graph(G)
    if not report.ok:
        raise InputError(f"{path}: invalid graph: " + "; ".join(f"{n}: {w}" for n, w in report.violations))
    return G


def load_json(path: str) -> Any:
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}: {exc.msg}") from exc


def _graph_field(value: str, base: Path) -> WiringGraph:
    """Inline graph text, or a path relative to the JSON file."""
    if "\n" in value:
        return parse_graph(value)
    return load_graph(str(base / value))


def load_morphism(path: str):
    data = load_json(path)
    base = Path(path).parent
    try:
        return morphism_from_json(data, load_graph=lambda v: _graph_field(v, base))
    except GraphParseError as exc:
        raise InputError(f"{path}: embedded graph line {exc.lineno}: {exc.message}") from exc
    except GraphError as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_properad(path: str, force: bool) -> FiniteProperad:
    try:
        P = FiniteProperad.from_json(load_json(path))
    except GraphError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if not force:
        report = check_properad_axioms(P)
        if not report.ok:
            raise CheckFailed({"input": path, **report.to_json()})
    return P


def load_graphical_set(path: str, bound: int, force: bool) -> GraphicalSet:
    data = load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    try:
        if "graphs" in data:
            X: GraphicalSet = TruncatedGraphicalSet.from_json(data)
            if not force:
                report = check_functoriality(X)
                if not report.ok:
                    raise CheckFailed({"input": path, **report.to_json()})
            X.bound = min(X.bound, bound)
            return X
        if "ops" in data:
            return NerveGraphicalSet(load_properad(path, force), bound)
        if "representable" in data:
            return Representable(_graph_field(data["representable"], Path(path).parent), bound)
    except GraphParseError as exc:
        raise InputError(f"{path}: embedded graph line {exc.lineno}: {exc.message}") from exc
    except GraphError as exc:
        raise InputError(f"{path}: {exc}") from exc
    raise InputError(f"{path}: expected a graphical set, a properad or a representable")


def _ints(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        return tuple(int(t) for t in text.split(",") if t)
    except ValueError as exc:
        raise InputError(f"bad integer list {text!r}") from exc


def _names(text: str | None) -> tuple[str, ...]:
    return tuple(t for t in (text or "").split(",") if t)


# ---------------------------------------------------------------------------
# commands; each returns (payload, text)


def _report(report: ValidationReport, extra: dict | None = None) -> tuple[dict, str]:
    payload = {**(extra or {}), **report.to_json()}
    if not report.ok:
        raise CheckFailed(payload)
    return payload, "ok"


def cmd_validate(a) -> tuple[dict, str]:
    G = load_graph(a.graph)
    return _report(validate_graph(G), {"graph": a.graph})


def cmd_iso(a) -> tuple[dict, str]:
    G, H = load_valid_graph(a.first), load_valid_graph(a.second)
    mode = "strict" if a.strict else "weak"
    isos = find_isomorphisms(G, H, mode)
    if not isos:
        raise CheckFailed({"isomorphic": False, "mode": mode})
    iso = isos[0]
    payload = {
        "isomorphic": True,
        "mode": mode,
        "vertex_map": dict(sorted(iso.vertex_map.items())),
        "edge_map": dict(sorted(iso.edge_map.items())),
    }
    text = " ".join(f"{k}->{v}" for k, v in sorted(iso.vertex_map.items())) or "isomorphic"
    return payload, text


def cmd_substitute(a) -> tuple[dict, str]:
    G, H = load_valid_graph(a.host), load_valid_graph(a.guest)
    try:
        out = substitute(
            G,
            SubstitutionAssignment(a.vertex, H, _ints(a.in_bij), _ints(a.out_bij)),
            namespace=not a.keep_ids,
        )
    except GraphError as exc:
        raise InputError(str(exc)) from exc
    return {"graph": format_graph(out)}, format_graph(out).rstrip()


def cmd_cofaces(a) -> tuple[dict, str]:
    G = load_valid_graph(a.graph)
    maps = enumerate_cofaces_into(G)
    payload = {"count": len(maps), "cofaces": [m.to_json() for m in maps]}
    text = "\n".join(f"{m.kind}\t{inline_graph(m.source)}" for m in maps)
    return payload, text


def cmd_codegen(a) -> tuple[dict, str]:
    G = load_valid_graph(a.graph)
    try:
        gm = codegeneracy(G, a.vertex)
    except GraphError as exc:
        raise InputError(str(exc)) from exc
    return {"graph": format_graph(gm.target)}, format_graph(gm.target).rstrip()


def cmd_factor(a) -> tuple[dict, str]:
    f = load_morphism(a.morphism)
    ok, witness = is_valid_gamma_morphism(f)
    if not ok:
        raise CheckFailed({"valid": False, "witness": _jsonable(witness)})
    h, g = reedy_factorize(f)
    payload = {
        "classification": classify(f),
        "middle": format_graph(h.target),
        "h": morphism_to_json(h),
        "g": morphism_to_json(g),
        "h_class": classify(h),
        "g_class": classify(g),
    }
    text = f"middle graph ({len(h.target.vertices)} vertices: {', '.join(h.target.vertex_ids)})\n"
    text += format_graph(h.target).rstrip()
    return payload, text


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in value]
        return sorted(items, key=str) if isinstance(value, (set, frozenset)) else items
    if isinstance(value, WiringGraph):
        return format_graph(value)
    if hasattr(value, "to_json"):
        return value.to_json()
    return value


def cmd_hom(a) -> tuple[dict, str]:
    H, G = load_valid_graph(a.source), load_valid_graph(a.target)
    maps = sorted(hom_set(H, G), key=element_label)
    payload = {
        "count": len(maps),
        "morphisms": [{"label": element_label(f), "class": classify(f), **morphism_to_json(f)} for f in maps],
    }
    text = "\n".join(f"{classify(f)}\t{element_label(f)}" for f in maps) or "(empty)"
    return payload, text


def cmd_free(a) -> tuple[dict, str]:
    G = load_valid_graph(a.graph)
    if a.inputs is None and a.outputs is None:
        elems = all_free_elements(G, a.max_vertices)
    else:
        elems = free_elements(G, Biprofile(_names(a.inputs), _names(a.outputs)), a.max_vertices)
    elems = sorted(elems, key=lambda d: (len(d.shape.vertices), d.canonical_key()))
    payload = {"count": len(elems), "elements": [d.to_json() for d in elems]}
    text = "\n".join(element_label(d) for d in elems) or "(empty)"
    return payload, text


def cmd_nerve(a) -> tuple[dict, str]:
    P = load_properad(a.properad, a.force)
    G = load_valid_graph(a.graph)
    try:
        elems = sorted(nerve(P, G), key=element_label)
    except GraphError as exc:
        raise InputError(str(exc)) from exc
    payload = {"count": len(elems), "elements": [element_label(d) for d in elems]}
    return payload, "\n".join(payload["elements"]) or "(empty)"


def cmd_check_properad(a) -> tuple[dict, str]:
    try:
        P = FiniteProperad.from_json(load_json(a.properad))
    except GraphError as exc:
        raise InputError(f"{a.properad}: {exc}") from exc
    report = check_properad_axioms(P, graph_bound=a.graph_bound)
    extra = {"properad": a.properad, "seed": a.seed}
    if report.ok and a.samples:
        report = _sampled_associativity(P, a.seed, a.samples)
        extra["samples"] = a.samples
    return _report(report, extra)


def _sampled_associativity(P: FiniteProperad, seed: int, samples: int) -> ValidationReport:
    """Contraction-order independence on random decorated 4-vertex graphs."""
    rng = random.Random(seed)
    shapes = [G for G in enumerate_graphs(4, arities=P.arities()) if len(G.vertices) == 4]
    bad = []
    for _ in range(samples if shapes else 0):
        G = rng.choice(shapes)
        decorations = nerve(P, G)
        if not decorations:
            continue
        d = rng.choice(decorations)
        results = evaluate_all_orders(P, d)
        if len(set(results.values())) > 1:
            bad.append(("associativity", f"graph [{inline_graph(G)}] decorated {element_label(d)}"))
    return ValidationReport.from_violations(bad)


def cmd_check_segal(a) -> tuple[dict, str]:
    X = load_graphical_set(a.graphical_set, a.bound, a.force)
    return _report(is_segal(X, a.bound), {"input": a.graphical_set, "bound": a.bound})


def cmd_check_inner_kan(a) -> tuple[dict, str]:
    X = load_graphical_set(a.graphical_set, a.bound, a.force)
    check = has_unique_inner_fillers if a.unique else is_inner_kan
    return _report(check(X, a.bound), {"input": a.graphical_set, "bound": a.bound, "unique": a.unique})


def cmd_is_nerve(a) -> tuple[dict, str]:
    X = load_graphical_set(a.graphical_set, a.bound, a.force)
    report, P = is_nerve(X, a.bound)
    extra: dict = {"input": a.graphical_set, "bound": a.bound}
    if report.ok and P is not None:
        extra["properad"] = P.to_json()
    return _report(report, extra)


def cmd_export_dot(a) -> tuple[dict, str]:
    G = load_valid_graph(a.graph)
    dot = export_dot(G)
    return {"dot": dot}, dot.rstrip()


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "iso": cmd_iso,
    "substitute": cmd_substitute,
    "cofaces": cmd_cofaces,
    "codegen": cmd_codegen,
    "factor": cmd_factor,
    "hom": cmd_hom,
    "free": cmd_free,
    "nerve": cmd_nerve,
    "check-properad": cmd_check_properad,
    "check-segal": cmd_check_segal,
    "check-inner-kan": cmd_check_inner_kan,
    "is-nerve": cmd_is_nerve,
    "export-dot": cmd_export_dot,
}


def _default_bound() -> int:
    raw = os.environ.get("PROPERAD_KIT_BOUND")
    if raw is None:
        return DEFAULT_BOUND
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_BOUND


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=_default_bound(), help="max vertex count for checks")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--force", action="store_true", help="load inputs that fail their axiom checks")
    common.add_argument("--format", choices=("json", "text"), default="json")

    parser = argparse.ArgumentParser(prog="properad-kit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name: str, help_text: str):
        return sub.add_parser(name, parents=[common], help=help_text)

    add("validate", "check the wiring-graph invariants").add_argument("graph")
    p = add("iso", "search for an isomorphism")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--strict", action="store_true", help="also preserve port and slot order")
    p = add("substitute", "substitute a guest graph at a host vertex")
    p.add_argument("host")
    p.add_argument("guest")
    p.add_argument("--vertex", required=True)
    p.add_argument("--in-bij", help="host input port for each guest input, comma separated")
    p.add_argument("--out-bij", help="host output port for each guest output, comma separated")
    p.add_argument("--keep-ids", action="store_true", help="do not prefix guest ids with the host vertex")
    add("cofaces", "list the coface maps into a graph").add_argument("graph")
    p = add("codegen", "collapse a (1,1) vertex")
    p.add_argument("graph")
    p.add_argument("--vertex", required=True)
    add("factor", "negative-positive factorization of a morphism").add_argument("morphism")
    p = add("hom", "all morphisms between two graphs")
    p.add_argument("source")
    p.add_argument("target")
    p = add("free", "operations of the free properad on a graph")
    p.add_argument("graph")
    p.add_argument("--inputs", help="input edge names, comma separated")
    p.add_argument("--outputs", help="output edge names, comma separated")
    p.add_argument("--max-vertices", type=int, default=2)
    p = add("nerve", "decorations of a graph by a properad")
    p.add_argument("properad")
    p.add_argument("graph")
    p = add("check-properad", "check the properad axioms")
    p.add_argument("properad")
    p.add_argument("--graph-bound", type=int, default=3)
    p.add_argument("--samples", type=int, default=20, help="random 4-vertex associativity samples")
    add("check-segal", "check the Segal condition").add_argument("graphical_set")
    p = add("check-inner-kan", "check inner horn filling")
    p.add_argument("graphical_set")
    p.add_argument("--unique", action="store_true", help="require exactly one filler")
    add("is-nerve", "decide whether a graphical set is a nerve").add_argument("graphical_set")
    add("export-dot", "render a graph as DOT").add_argument("graph")
    return parser


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        payload, text = COMMANDS[args.verb](args)
        code = 0
    except CheckFailed as exc:
        payload, text, code = exc.payload, None, 1
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json" or text is None:
        print(json.dumps({"verb": args.verb, "ok": code == 0, **payload}, indent=1, sort_keys=True), file=out)
    else:
        print(text, file=out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
