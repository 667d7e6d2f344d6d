import json

import pytest

from stackyquant import suites
from stackyquant.cli import WORKERS_ENV, main


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


@pytest.fixture
def edge_json(tmp_path):
    p = tmp_path / "edge.json"
    p.write_text(json.dumps({"vertices": ["v1", "v2"], "edges": [{"id": "e1", "src": "v1", "tgt": "v2"}]}))
    return str(p)


# build


def test_build_one_edge(capsys, edge_json):
    code, out, _ = run(capsys, "build", "--graph", edge_json, "--group", "torus:1", "--level", "0")
    assert code == 0
    doc = json.loads(out)
    assert doc["levels"][0]["del"]["t_v1"] == [{"coeff": [[0, -1, 1]], "monomial": [["t_e1", 1]]}]
    assert doc["levels"][0]["del"]["t_v1"] == doc["moment map"]["t_v1"]
    assert not doc["unit algebra"]


def test_build_empty_graph(capsys, tmp_path):
    p = tmp_path / "empty.json"
    p.write_text('{"vertices": [], "edges": []}')
    code, out, _ = run(capsys, "build", "--graph", str(p), "--group", "sl2")
    assert code == 0 and json.loads(out)["unit algebra"] is True


def test_build_rejects_malformed_edge_with_line(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n "vertices": ["v1"],\n "edges": [\n  {"id": "e1", "src": "v1", "tgt": "v7"}\n ]\n}\n')
    code, _, err = run(capsys, "build", "--graph", str(p))
    assert code == 2
    assert f"{p}:4:" in err and "v7" in err


def test_build_rejects_invalid_json(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"vertices": [,]}')
    code, _, err = run(capsys, "build", "--graph", str(p))
    assert code == 2 and f"{p}:1:" in err


@pytest.mark.parametrize("argv", [
    ["build", "--graph", "catalog:edge", "--group", "so3"],
    ["build", "--graph", "catalog:edge", "--group", "torus:0"],
    ["verify", "--level", "-1"],
    ["verify", "--level", "3", "--bound", "2"],
    ["verify", "--suite", "hopf,nonsense"],
    ["build"],
    ["build", "--graph", "catalog:nowhere"],
    ["build", "--graph", "/nonexistent/graph.json"],
    ["frobnicate"],
    ["verify", "--level", "two"],
])
def test_input_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_bad_worker_count(capsys, monkeypatch):
    monkeypatch.setenv(WORKERS_ENV, "zero")
    assert run(capsys, "verify", "--suite", "hopf", "--group", "torus:1")[0] == 2


# verify


def test_empty_suite_list_passes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "")
    assert code == 0 and json.loads(out)["status"] == "pass"


def test_verify_small_instance(capsys):
    code, out, _ = run(capsys, "verify", "--graph", "catalog:edge", "--group", "torus:1", "--level", "1",
                       "--suite", "hopf,ce,cosimplicial,poisson")
    doc = json.loads(out)
    assert code == 0, [c for s in doc["suites"] for c in s["checks"] if c["status"] != "pass"]
    assert [s["suite"] for s in doc["suites"]] == ["hopf", "ce", "cosimplicial", "poisson"]
    assert all(s["checks"] for s in doc["suites"])


def test_fault_injection_fails_with_jacobi_witness(capsys, monkeypatch):
    monkeypatch.setitem(suites.FAULTS, "lie_constant", (1, 0, 0, 1))
    code, out, _ = run(capsys, "verify", "--suite", "hopf,ce", "--group", "sl2", "--graph", "catalog:point")
    assert code == 1
    doc = json.loads(out)
    bad = {c["name"]: c for s in doc["suites"] for c in s["checks"] if c["status"] == "fail"}
    jac = [c for n, c in bad.items() if "Jacobi" in n]
    assert jac and len(jac[0]["witness"]) == 3
    assert any("plane" in n or "Q[x,y]" in n for n in bad)


def test_output_is_byte_identical(capsys, tmp_path, monkeypatch):
    argv = ["verify", "--graph", "catalog:loop", "--group", "sl2", "--level", "1",
            "--suite", "ce,poisson", "--seed", "4"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--out", str(a)]) == 0
    monkeypatch.setenv(WORKERS_ENV, "2")
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_unwritable_out(capsys):
    assert run(capsys, "verify", "--suite", "", "--out", "/nonexistent/dir/x.json")[0] == 2


# example-gm


def test_example_gm_weights(capsys):
    code, out, _ = run(capsys, "example-gm", "0", "1", "3")
    assert code == 0
    doc = json.loads(out)
    table = {row["weight"]: row["homology"] for row in doc["homology"]}
    assert set(table) == {0, 1, 3}
    assert "Q[hbar]/(1*hbar)" in table[1].values() and "Q[hbar]/(1*hbar)" in table[3].values()
    assert all("/" not in v for v in table[0].values())


def test_example_gm_empty(capsys):
    code, out, _ = run(capsys, "example-gm")
    assert code == 0 and json.loads(out)["homology"] == []


def test_example_gm_zero_is_the_pointing(capsys):
    code, out, _ = run(capsys, "example-gm", "0")
    doc = json.loads(out)
    assert code == 0 and any("pointing" in c["name"] for c in doc["checks"])
