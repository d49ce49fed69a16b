import io
import json
import subprocess
import sys

import pytest

from helpers import CORPUS
from properad_kit.cli import export_dot, run
from properad_kit.graph import parse_graph

CASES = json.loads((CORPUS / "cli_expectations.json").read_text())


def call(argv):
    out = io.StringIO()
    code = run([argv[0]] + [str(CORPUS / a) if "/" in a else a for a in argv[1:]], out)
    return code, out.getvalue()


@pytest.mark.parametrize("case", CASES, ids=lambda c: " ".join(c["argv"]))
def test_exit_codes(case):
    code, text = call(case["argv"])
    assert code == case["exit"]
    if code in (0, 1):
        payload = json.loads(text)
        assert payload["ok"] == (code == 0)
        assert payload["verb"] == case["argv"][0]


def test_failures_carry_witness():
    code, text = call(["validate", "mutations/cyclic.graph"])
    payload = json.loads(text)
    assert code == 1
    assert any(v["invariant"] == "directed cycle" and v["witness"] for v in payload["violations"])


def test_parse_error_reports_line(capsys):
    code, _ = call(["validate", "mutations/syntax_error.graph"])
    assert code == 2
    assert "syntax_error.graph:4" in capsys.readouterr().err


def test_deterministic_output():
    for argv in (["check-properad", "properads/random_3.json", "--seed", "5"], ["hom", "graphs/edge.graph", "graphs/tree_T.graph"]):
        assert call(argv) == call(argv)


def test_substitute_output_parses():
    code, text = call(["substitute", "graphs/subst_host.graph", "graphs/subst_guest.graph", "--vertex", "x", "--format", "text"])
    assert code == 0
    G = parse_graph(text)
    assert len(G.vertices) == 3


def test_export_dot_mentions_every_vertex():
    G = parse_graph((CORPUS / "graphs" / "tree_T.graph").read_text())
    dot = export_dot(G)
    assert dot.startswith("digraph")
    for v in G.vertex_ids:
        assert f'"v:{v}"' in dot


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "properad_kit", "validate", str(CORPUS / "graphs" / "edge.graph")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["ok"] is True
