import json

import pytest

from codegraph import cli, hmap
from codegraph.fqlinalg import rref


def run_cli(capsys, argv):
    code = cli.main(argv)
    return code, capsys.readouterr().out


def test_enum_block_count(capsys):
    code, out = run_cli(capsys, ["enum", "--n", "4", "--k", "2", "--q", "2"])
    assert code == 0
    blocks = [b for b in out.strip().split("\n\n") if b.strip()]
    assert len(blocks) == 35


def test_graph_reports_13_vertices(capsys):
    code, out = run_cli(
        capsys, ["graph", "--n", "4", "--k", "2", "--q", "2", "--nondegenerate"]
    )
    assert code == 0
    assert "vertices 13" in out


def test_graph_json_and_export(tmp_path, capsys):
    export = tmp_path / "g.adj"
    code, out = run_cli(
        capsys,
        [
            "graph", "--n", "4", "--k", "2", "--q", "2", "--nondegenerate",
            "--format", "json", "--export", str(export),
        ],
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["vertices"] == 13 and payload["kind"] == "NonDegenerate"
    lines = export.read_text().splitlines()
    assert lines[0].startswith("4 2 2 NonDegenerate 13 ")
    sidecar = (tmp_path / "g.adj.vertices").read_text()
    assert sidecar.startswith("# 0\n")


def test_out_flag_writes_file(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code, out = run_cli(
        capsys,
        ["graph", "--n", "4", "--k", "2", "--q", "2", "--format", "json", "--out", str(out_path)],
    )
    assert code == 0 and out == ""
    assert json.loads(out_path.read_text())["vertices"] == 35


def test_cliques_command(capsys):
    code, out = run_cli(
        capsys,
        ["cliques", "--n", "4", "--k", "2", "--q", "2", "--format", "json"],
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["maximal_cliques"] == 30
    assert payload["stars"] == 15 and payload["tops"] == 15
    assert payload["falsified"] is False


def test_hmap_verify_ok(capsys):
    code, out = run_cli(capsys, ["hmap-verify", "--n", "4", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] is True
    assert payload["class_sizes"] == {"A": 7, "B": 3, "C": 3}


def test_aut_command(capsys):
    code, out = run_cli(
        capsys, ["aut", "--n", "4", "--k", "2", "--q", "2", "--format", "json"]
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["grassmann_aut_order"] == 40320
    assert payload["code_graph_aut_order"] == 24


def test_invalid_config_exit_2(capsys):
    code = cli.main(["enum", "--n", "3", "--k", "2", "--q", "9"])
    assert code == 2
    code = cli.main(["graph", "--n", "4", "--k", "0", "--q", "2"])
    assert code == 2
    code = cli.main(["theorem", "--n", "4", "--jobs", "0"])
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["graph", "--n", "4", "--unknown-flag"])
    assert exc.value.code == 2


def test_theorem_full_run_exit_0(capsys):
    code, out = run_cli(capsys, ["theorem", "--n", "4", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["unclassified"] == 0
    assert payload["complete"] is True
    assert payload["embeddings_total"] == 80640


def test_theorem_budget_exit_3(capsys):
    code, out = run_cli(
        capsys, ["theorem", "--n", "4", "--budget-secs", "0", "--format", "json"]
    )
    assert code == 3
    payload = json.loads(out)
    assert payload["complete"] is False


def test_injected_adjacency_fault_reaches_exit_1(capsys, monkeypatch):
    # mutate adjacency under the verifier: flip the answer for one pair
    # of image planes so the forward-preservation assertion fails
    real = hmap.is_adjacent
    state = {}

    def mutated(x, y):
        out = real(x, y)
        if out and "flipped" not in state:
            state["flipped"] = (x, y)
            return False
        return out

    monkeypatch.setattr(hmap, "is_adjacent", mutated)
    code, out = run_cli(capsys, ["hmap-verify", "--n", "4", "--format", "json"])
    assert code == 1
    payload = json.loads(out)
    assert payload["passed"] is False
    by_name = {a["name"]: a for a in payload["assertions"]}
    assert by_name["adjacency_preserved_forward"]["passed"] is False


def test_injected_collision_fault_reaches_exit_1(capsys, monkeypatch):
    # corrupt the collapse map so two vertices collide; the verifier must
    # report the broken assertion and the command must exit 1
    real = hmap.h_map
    bucket = {}

    def corrupted(x):
        out = real(x)
        if x.n == 4:
            key = "first"
            if key not in bucket:
                bucket[key] = out
            else:
                return bucket[key]
        return out

    monkeypatch.setattr(hmap, "h_map", corrupted)
    code, out = run_cli(capsys, ["hmap-verify", "--n", "4", "--format", "json"])
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_machine_output_is_byte_identical(capsys):
    argv = ["cliques", "--n", "4", "--k", "2", "--q", "2", "--format", "json"]
    _, out1 = run_cli(capsys, argv)
    _, out2 = run_cli(capsys, argv)
    assert out1 == out2
    argv = ["enum", "--n", "5", "--k", "1", "--q", "2", "--format", "json"]
    _, out1 = run_cli(capsys, argv)
    _, out2 = run_cli(capsys, argv)
    assert out1 == out2


def test_theorem_json_deterministic_modulo_wall_ms(capsys):
    # wall-clock timing is the documented exception to byte stability
    argv = ["theorem", "--n", "4", "--budget-secs", "0", "--format", "json"]
    code1, out1 = run_cli(capsys, argv)
    code2, out2 = run_cli(capsys, argv)

    def strip_wall(text):
        payload = json.loads(text)
        payload.pop("wall_ms")
        return payload

    assert strip_wall(out1) == strip_wall(out2)


def test_witness_dump(tmp_path, capsys):
    dump = tmp_path / "witnesses.txt"
    code, _ = run_cli(
        capsys,
        ["theorem", "--n", "4", "--budget-secs", "5", "--witness-dump", str(dump)],
    )
    assert code == 3
    lines = dump.read_text().splitlines()
    assert lines
    first = lines[0].split()
    assert first[0] == "0" and first[1] in ("extendable", "exceptional")
