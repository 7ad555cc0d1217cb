import csv
import io
import json

import pytest

from recolor.cli import main
from recolor.runner import CSV_COLUMNS

from conftest import make_instance


def _write(tmp_path, inst, name="inst.json"):
    path = tmp_path / name
    inst.dump(path)
    return str(path)


def _run_json(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def test_empty_stream(tmp_path, capsys):
    path = _write(tmp_path, make_instance([1, 2, 1], []))
    for algo in ("A", "B", "Bhat", "C", "greedy"):
        code, out = _run_json(capsys, ["run", "--instance", path, "--algo", algo])
        assert code == 0
        assert out["cost_total"] == "0" and out["ratio"] is None


def test_single_edge_B_and_greedy(tmp_path, capsys):
    path = _write(tmp_path, make_instance([1, 1], [(0, 1)], D=4))
    _, out = _run_json(capsys, ["run", "--instance", path, "--algo", "B"])
    assert out["cost_total"] == "1" and out["opt2_final"] == "1" and out["ratio"] == "1"
    _, out = _run_json(capsys, ["run", "--instance", path, "--algo", "greedy"])
    assert out["cost_total"] == "8" and out["ratio"] == "8"


def test_trace_audit_and_dump(tmp_path, capsys):
    trace, dump = tmp_path / "t.jsonl", tmp_path / "m.json"
    code = main(["run", "--family", "forest", "--n", "32", "--seed", "1", "--algo", "B",
                 "--trace", str(trace), "--dump-moderation", str(dump)])
    capsys.readouterr()
    assert code == 0
    lines = trace.read_text().splitlines()
    assert json.loads(lines[0])["type"] == "header" and json.loads(lines[-1])["type"] == "summary"
    assert set(json.loads(dump.read_text())) >= {"sim", "exc", "witness_sets"}
    code = main(["audit", "--trace", str(trace)])
    report = json.loads(capsys.readouterr().out)
    assert code == 0 and report["checks"]["costs"]["ok"]


def test_gen_and_oracle(tmp_path, capsys):
    out = tmp_path / "p.json"
    assert main(["gen", "--family", "path_doubling", "--n", "8", "--D", "16", "--seed", "2",
                 "-o", str(out)]) == 0
    assert main(["oracle", "--instance", str(out), "--checkpoints", "0,4,6"]) == 0
    res = json.loads(capsys.readouterr().out)
    assert set(res["opt2"]) == {"0", "4", "6"} and res["opt2"]["0"] == 0
    assert res["beta"] == 1


def test_seed_from_environment(monkeypatch, capsys):
    main(["gen", "--family", "forest", "--n", "16", "--seed", "9"])
    explicit = capsys.readouterr().out
    monkeypatch.setenv("RECOLOR_SEED", "9")
    main(["gen", "--family", "forest", "--n", "16"])
    assert capsys.readouterr().out == explicit


def test_error_exit_code(capsys):
    assert main(["gen", "--family", "path_doubling", "--n", "6", "--D", "16"]) == 2
    assert "error:" in capsys.readouterr().err


def test_violation_exit_code(tmp_path, capsys, monkeypatch):
    import recolor.runner as runner
    real = runner._result

    def tampered(algo, *args):
        res = real(algo, *args)
        res.violations = 1
        return res

    monkeypatch.setattr(runner, "_result", tampered)
    path = _write(tmp_path, make_instance([1, 1], [(0, 1)]))
    code, _ = _run_json(capsys, ["run", "--instance", path])
    assert code == 1


def _sweep_rows(capsys, argv):
    assert main(["sweep"] + argv) == 0
    return list(csv.reader(io.StringIO(capsys.readouterr().out)))


def test_empty_grid(capsys):
    rows = _sweep_rows(capsys, ["--families", ""])
    assert rows == [CSV_COLUMNS]


def test_sweep_row_count(capsys):
    rows = _sweep_rows(capsys, ["--D", "4,16,64,256", "--n", "64", "--seeds", "0-19"])
    assert rows[0] == CSV_COLUMNS
    body = rows[1:]
    agg = [r for r in body if r[0].startswith("agg:")]
    assert len(body) == 84 and len(agg) == 4
    assert all(r[-1] == "0" for r in body)


def test_epsilon_grid_reports_colors(capsys):
    rows = _sweep_rows(capsys, ["--families", "forest", "--algos", "C", "--n", "64",
                                "--epsilon", "1/4,1/6,1/8", "--num-seeds", "2"])
    runs = [dict(zip(CSV_COLUMNS, r)) for r in rows[1:] if not r[0].startswith("agg:")]
    assert len(runs) == 6
    assert {r["epsilon"] for r in runs} == {"0.250000", "0.166667", "0.125000"}
    assert all(int(r["colors_used"]) == 2 * int(r["max_level"]) for r in runs)


def test_sweep_parallel_matches_serial(capsys):
    argv = ["--algos", "A,B", "--n", "32", "--D", "4,16", "--num-seeds", "3"]
    serial = _sweep_rows(capsys, argv)
    assert _sweep_rows(capsys, argv + ["--workers", "2"]) == serial


def test_plotdata(tmp_path, capsys):
    out = tmp_path / "s.csv"
    main(["sweep", "--D", "4,16", "--n", "32", "--num-seeds", "2", "-o", str(out)])
    assert main(["plotdata", "--csv", str(out)]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["series", "x", "y"]
    assert [r[1] for r in rows[1:]] == ["2", "4"]


def test_bad_subcommand():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
