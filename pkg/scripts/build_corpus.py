"""Regenerate the generated parts of corpus/ (properads and graphical sets).

Hand-written graphs and morphisms under corpus/graphs and corpus/morphisms
are left alone.
"""
from __future__ import annotations

import json
from pathlib import Path

from properad_kit.graph import Biprofile
from properad_kit.presheaf import NerveGraphicalSet, padded, punctured, tabulate
from properad_kit.properad import (
    FiniteProperad,
    _closure,
    build_properad,
    check_properad_axioms,
    random_properad,
    terminal_properad,
)

ROOT = Path(__file__).resolve().parent.parent / "corpus"


def pointer_properad() -> FiniteProperad:
    B = Biprofile
    gens = {B(("a",), ("a",)), B(("a", "a"), ("a",)), B(("a",), ())}
    return build_properad("a", _closure(gens, 3, 40), "trivial", True, 3, name="pointer")


def perturb(P: FiniteProperad, want: str) -> FiniteProperad:
    """Change one composition entry so that the check reports ``want``."""
    units = set(P.units.values())
    for key in sorted(P.compositions):
        a, b, _ = key
        if want != "unit" and (a in units or b in units):
            continue
        if want == "unit" and a not in units:
            continue
        current = P.compositions[key]
        for other in P.ops[P.profile[current]]:
            if other == current:
                continue
            Q = FiniteProperad.from_json(P.to_json())
            Q.compositions[key] = other
            if want in check_properad_axioms(Q).names():
                Q.name = f"{P.name}-perturbed-{want}"
                return Q
    raise RuntimeError(f"no perturbation of {P.name} breaks {want}")


def pick_graphex(X):
    units = set(X.P.units.values())
    for G in X.universe():
        if len(G.vertices) == 2:
            for x in X.elements(G):
                if not set(x.vertex_decoration.values()) & units:
                    return G, x
    raise RuntimeError("no nondegenerate 2-vertex graphex")


def write(path: Path, data: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")


def main() -> None:
    props = {
        "terminal_a2": terminal_properad(("a",), 2),
        "pointer": pointer_properad(),
    }
    for seed in range(5):
        props[f"random_{seed}"] = random_properad(seed)
    for name, P in props.items():
        assert check_properad_axioms(P).ok, name
        write(ROOT / "properads" / f"{name}.json", P.to_json())

    write(ROOT / "mutations" / "perturbed_unit.json", perturb(props["pointer"], "unit").to_json())
    write(ROOT / "mutations" / "perturbed_assoc.json", perturb(props["random_0"], "associativity").to_json())

    X = NerveGraphicalSet(props["random_0"], 3)
    write(ROOT / "sets" / "nerve_random_0.json", tabulate(X, name="nerve of random_0").to_json())
    write(ROOT / "sets" / "representable_double_edge.json", {"representable": "../graphs/double_edge.graph"})
    write(ROOT / "sets" / "representable_linear_3.json", {"representable": "../graphs/linear_3.graph"})
    G, x = pick_graphex(X)
    write(ROOT / "mutations" / "punctured_nerve.json", tabulate(punctured(X, G, x), name="punctured").to_json())
    write(ROOT / "mutations" / "padded_nerve.json", tabulate(padded(X, G, x), name="padded").to_json())


if __name__ == "__main__":
    main()
