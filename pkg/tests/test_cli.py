"""Command-line interface: exit codes, JSON envelopes, artifacts, config merge."""

import csv
import json

import pytest

from erasurelab import ErasureLevel, srip_certificate
from erasurelab.cli import main


def run_cli(tmp_path, *argv):
    code = main([*argv, "--out", str(tmp_path)])
    return 0 if code is None else code


def load_payload(tmp_path, basename):
    return json.loads((tmp_path / f"{basename}.json").read_text())


SRIP_ARGS = (
    "bounds", "srip", "--beta", "0.01", "--alpha", "0.02",
    "--s", "2", "--m", "64", "--n", "4096", "--eps", "1/4",
)


def test_bounds_srip_envelope(tmp_path, capsys):
    assert run_cli(tmp_path, *SRIP_ARGS) == 0
    payload = load_payload(tmp_path, "srip-certificate")
    assert payload["schema_version"] == 1
    assert payload["command"] == "bounds srip"
    assert set(payload["timestamp"]) == {"generated_at", "elapsed_seconds"}
    cert = srip_certificate(
        ErasureLevel(beta=0.01, alpha=0.02), s=2, m=64, n=4096, epsilon=0.25
    )
    got = payload["result"]["certificate"]
    assert got["failure_prob_bound"] == cert.failure_prob_bound
    assert got["theta_eps"] == cert.theta_eps
    # the resolved configuration is echoed both inline and as a sibling file
    echo = json.loads((tmp_path / "srip-certificate-config.json").read_text())
    assert echo["config"] == payload["config"]
    assert echo["command"] == "bounds srip"
    assert echo["config"]["eps"] == 0.25
    stdout_payload = json.loads(capsys.readouterr().out)
    assert stdout_payload["result"] == payload["result"]


def test_usage_errors_exit_1(tmp_path, capsys):
    assert run_cli(tmp_path, "bounds", "srip", "--bogus", "1") == 1
    assert run_cli(tmp_path, "verify", "--trials", "0") == 1
    assert run_cli(tmp_path, "compare-tables", "--tables", "7") == 1
    assert run_cli(tmp_path, *SRIP_ARGS, "--seed", "-1") == 1
    assert run_cli(tmp_path, *SRIP_ARGS, "--eps", "quarter") == 1
    err = capsys.readouterr().err
    assert "erasurelab: error:" in err


def test_domain_errors_exit_2(tmp_path, capsys):
    argv = list(SRIP_ARGS)
    argv[argv.index("--beta") + 1] = "0.05"
    assert run_cli(tmp_path, *argv) == 2
    assert "0.037" in capsys.readouterr().err


def test_side_condition_exit_2(tmp_path, capsys):
    argv = list(SRIP_ARGS)
    argv[argv.index("--n") + 1] = "256"
    assert run_cli(tmp_path, *argv) == 2
    assert "alpha" in capsys.readouterr().err


def test_forced_bad_bound_exits_3(tmp_path, capsys):
    code = run_cli(
        tmp_path, "verify", "--trials", "50", "--only", "khb", "--force-bad-bound"
    )
    assert code == 3
    out = capsys.readouterr().out
    assert "forced_bad_bound" in out
    assert "violated: 1" in out
    assert load_payload(tmp_path, "verify")["result"]["violated"] == 1


def test_verify_single_family(tmp_path, capsys):
    assert run_cli(tmp_path, "verify", "--trials", "60", "--only", "khb") == 0
    out = capsys.readouterr().out
    assert "khb_tail" in out
    assert "checks: 1, violated: 0" in out


def test_verify_csv_artifact(tmp_path):
    code = run_cli(
        tmp_path, "verify", "--trials", "60", "--only", "khb", "--format", "csv"
    )
    assert code == 0
    lines = (tmp_path / "verify.csv").read_text().splitlines()
    assert len(lines) == 2
    assert lines[0].startswith("name,theoretical_bound")


def test_fraction_flags_resolve(tmp_path):
    code = run_cli(
        tmp_path, "bounds", "jl", "--beta", "1/100", "--alpha", "1/50",
        "--n-points", "5", "--n", "2000",
    )
    assert code == 0
    payload = load_payload(tmp_path, "jl-certificate")
    assert payload["config"]["beta"] == 0.01
    assert payload["config"]["alpha"] == 0.02


def test_config_file_fills_and_flags_win(tmp_path):
    cfg = tmp_path / "jl.json"
    cfg.write_text(json.dumps(
        {"beta": "1/100", "alpha": 0.02, "n_points": 5, "n": 2000}
    ))
    assert run_cli(tmp_path, "bounds", "jl", "--config", str(cfg)) == 0
    assert load_payload(tmp_path, "jl-certificate")["config"]["beta"] == 0.01

    assert run_cli(tmp_path, "bounds", "jl", "--config", str(cfg), "--beta", "0.02") == 0
    assert load_payload(tmp_path, "jl-certificate")["config"]["beta"] == 0.02


def test_config_file_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"beta": 0.01, "spin": 3}))
    assert run_cli(tmp_path, "bounds", "jl", "--config", str(cfg)) == 1
    assert "spin" in capsys.readouterr().err


def test_simulate_square_csv_artifacts(tmp_path, capsys):
    code = run_cli(
        tmp_path, "simulate", "square", "--rows", "24", "--cols", "12",
        "--trials", "6", "--seed", "5", "--format", "csv",
    )
    assert code == 0
    trials = (tmp_path / "simulate-square-trials.csv").read_text().splitlines()
    assert len(trials) == 7
    assert trials[0] == "trial,seed,s_min,s_max,cond"
    payload = load_payload(tmp_path, "simulate-square")
    assert payload["result"]["cond_exceeded_10pct"] > 1.0
    assert payload["config"]["beta"] == 0.5
    assert capsys.readouterr().out.splitlines()[0] == trials[0]


def test_simulate_square_needs_tall_input(tmp_path):
    code = run_cli(
        tmp_path, "simulate", "square", "--rows", "12", "--cols", "12", "--trials", "2"
    )
    assert code == 1


def test_worker_count_never_changes_results(tmp_path, monkeypatch):
    argv = (
        "simulate", "nerf", "--rows", "30", "--cols", "10", "--beta", "0.2",
        "--trials", "8", "--seed", "11",
    )
    texts = []
    for threads in ("1", "4"):
        monkeypatch.setenv("ERASURELAB_THREADS", threads)
        out = tmp_path / f"w{threads}"
        out.mkdir()
        assert run_cli(out, *argv) == 0
        payload = load_payload(out, "simulate-nerf")
        del payload["timestamp"]
        texts.append(json.dumps(payload, sort_keys=True))
    assert texts[0] == texts[1]


def test_nerf_reference_comparison_is_tight(tmp_path):
    code = run_cli(
        tmp_path, "bounds", "nerf", "--nu", "0.1", "--lambda", "1/5", "--beta", "1/50"
    )
    assert code == 0
    result = load_payload(tmp_path, "nerf-certificate")["result"]
    comparison = result["comparison"]
    assert comparison["table"] == 1
    assert abs(comparison["relative_gap"]) < 1e-3


def test_nerf_sweep_artifacts(tmp_path, capsys):
    code = run_cli(
        tmp_path, "bounds", "nerf", "--sweep", "--nu", "0.1",
        "--lambda", "1/2", "--beta", "1/20",
    )
    assert code == 0
    sweep_csv = (tmp_path / "nerf-sweep.csv").read_text().splitlines()
    assert len(sweep_csv) == 6
    svg = (tmp_path / "nerf-sweep.svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg
    assert (tmp_path / "nerf-sweep.json").exists()
    assert capsys.readouterr().out.splitlines()[0] == sweep_csv[0]


def test_compare_tables_single_selection(tmp_path):
    assert run_cli(tmp_path, "compare-tables", "--tables", "1") == 0
    with open(tmp_path / "comparison.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 15
    assert {r["table"] for r in rows} == {"1"}
    assert {r["quantity"] for r in rows} == {"R", "P", "C"}
    payload = load_payload(tmp_path, "comparison")
    assert len(payload["result"]["rows"]) == 15


def test_compare_tables_empty_selection(tmp_path):
    assert run_cli(tmp_path, "compare-tables", "--tables", "") == 0
    lines = (tmp_path / "comparison.csv").read_text().splitlines()
    assert lines == ["table,quantity,lambda,beta,rows,cols,reference_value,computed_value,relative_gap,note"]


def test_simulate_jl_reports_check(tmp_path):
    code = run_cli(
        tmp_path, "simulate", "jl", "--rows", "250", "--dim", "8",
        "--n-points", "3", "--beta", "0.01", "--alpha", "0.02",
        "--trials", "2", "--t-samples", "4",
    )
    assert code == 0
    result = load_payload(tmp_path, "simulate-jl")["result"]
    assert result["check"]["name"] == "jl"
    assert result["check"]["verdict"] in ("holds", "inconclusive")
