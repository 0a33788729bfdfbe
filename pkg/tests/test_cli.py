import json

import pytest

from kerrflow.cli import main


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_constants_json(capsys):
    code, out, _ = _run(capsys, ["constants", "--mass", "1", "--spin", "0.7"])
    assert code == 0
    payload = json.loads(out)
    assert payload["schema_version"] == "1.0"
    v = payload["values"]
    assert v["r_plus"] == pytest.approx(1.0 + (1.0 - 0.49) ** 0.5, rel=1e-15)
    assert v["ergo_equatorial_outer"] == 2.0
    assert v["Omega_H"] == pytest.approx(0.7 / (v["r_plus"] ** 2 + 0.49),
                                         rel=1e-15)


def test_invalid_spin_exits_usage(capsys):
    code, _, err = _run(capsys, ["constants", "--spin", "1.5"])
    assert code == 2
    assert "subextreme range required" in err
    code, _, err = _run(capsys, ["constants", "--mass", "-1"])
    assert code == 2


def test_malformed_flags_exit_usage(capsys):
    assert main(["constants", "--spin", "abc"]) == 2
    assert main(["verify", "nonsense"]) == 2
    assert main(["trace", "--direction", "sideways"]) == 2


def test_trace_principal_summary(capsys):
    code, out, _ = _run(capsys, [
        "trace", "--spin", "0.7", "--principal", "in", "--r", "7.0",
        "--theta", "1.1", "--direction", "past"])
    assert code == 0
    lines = out.strip().split("\n")
    summary = json.loads(lines[-1])
    assert summary["fate"] == "ScriPast"
    assert summary["drift_xi_t"] < 1e-12
    assert summary["g_residual_max"] < 1e-8
    # every non-summary line is a trajectory record
    rec = json.loads(lines[0])
    assert rec["chart"] == "BL_I"
    assert rec["coords"][1] == 7.0


def test_trace_requires_initial_data(capsys):
    code, _, err = _run(capsys, ["trace", "--spin", "0.7"])
    assert code == 2
    assert "provide" in err


def test_trace_from_k_is_trapped(capsys):
    code, out, _ = _run(capsys, [
        "trace", "--spin", "0.7", "--from-k", "--seed", "3"])
    assert code == 0
    summary = json.loads(out.strip().split("\n")[-1])
    assert summary["fate"] == "Trapped"


def test_verify_ok_and_report_shape(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code = main(["verify", "lemma65", "--spin", "0.5", "--n", "2000",
                 "--seed", "9", "--out", str(out_file)])
    assert code == 0
    payload = json.loads(out_file.read_text())
    assert payload["campaign"] == "lemma65"
    assert payload["violations"] == 0
    assert payload["worst_margin"] <= 0.0
    assert payload["n"] == 2000
    assert payload["params"]["a"] == 0.5


def test_verify_p_positivity(capsys):
    code, out, _ = _run(capsys, ["verify", "p-positivity", "--spin", "0.9"])
    assert code == 0
    payload = json.loads(out)
    assert payload["violations"] == 0
    assert payload["min_value"] > 0.0


def test_sweep_deterministic_csv(tmp_path):
    f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["sweep", "--campaign", "lemma65", "--spin-min", "0.2",
            "--spin-max", "0.8", "--spin-steps", "3", "--n", "500",
            "--seed", "7", "--jobs", "1"]
    assert main(argv + ["--out", str(f1)]) == 0
    assert main(argv + ["--out", str(f2)]) == 0
    body = f1.read_text()
    assert body == f2.read_text()
    lines = body.strip().split("\n")
    assert lines[0] == "M,a,campaign,n,seed,violations,worst_margin,status"
    assert len(lines) == 4
    assert all(line.endswith(",ok") for line in lines[1:])


def test_sweep_parallel_matches_serial(tmp_path):
    f1, f2 = tmp_path / "s.csv", tmp_path / "p.csv"
    argv = ["sweep", "--campaign", "prop67", "--spin-min", "0.3",
            "--spin-max", "0.9", "--spin-steps", "2", "--n", "500",
            "--seed", "11"]
    assert main(argv + ["--jobs", "1", "--out", str(f1)]) == 0
    assert main(argv + ["--jobs", "2", "--out", str(f2)]) == 0
    assert f1.read_text() == f2.read_text()


def test_sweep_rejects_bad_grid(capsys):
    assert main(["sweep", "--spin-steps", "0"]) == 2
    assert main(["sweep", "--spin-max", "1.2"]) == 2
