import json
import math
import subprocess
import sys

import pytest
from scipy import stats

from skewmax.cli import main, parse_radius


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err


def test_eval_limit_examples(capsys):
    assert run(capsys, "eval-limit", "--family", "hr", "--lambda", "0", "--x", "0", "--y", "1")[1] == "0.367879441171442"
    assert run(capsys, "eval-limit", "--family", "hr", "--lambda", "inf", "--x", "0", "--y", "0")[1] == "0.135335283236613"
    code, out, _ = run(
        capsys, "eval-limit", "--family", "weibull-half-skew", "--alpha", "1", "--lambda", "1", "--x", "-1", "--y", "-1e-9"
    )
    assert code == 0 and float(out) == pytest.approx(math.exp(-0.3001054387190354), abs=1e-8)


def test_eval_limit_two_skew(capsys):
    code, out, _ = run(
        capsys, "eval-limit", "--family", "two-skew-gumbel", "--lambda1", "2", "--lambda2", "1", "--x", "0", "--y", "0"
    )
    assert code == 0 and float(out) == pytest.approx(0.185873398148184, rel=1e-14)


def test_eval_limit_errors(capsys):
    code, _, err = run(capsys, "eval-limit", "--family", "weibull-two-skew", "--alpha", "1", "--lambda1", "1",
                       "--lambda2", "0", "--x", "0.5", "--y", "-1")
    assert code == 2 and "x < 0" in err
    code, _, err = run(capsys, "eval-limit", "--family", "hr", "--x", "0", "--y", "0")
    assert code == 2 and "--lam" in err
    with pytest.raises(SystemExit) as exc:
        main(["eval-limit", "--family", "nope", "--x", "0", "--y", "0"])
    assert exc.value.code == 2


def test_norming(capsys):
    code, out, _ = run(capsys, "norming", "--radius", "uniform01", "--n", "1000000")
    assert code == 0 and json.loads(out)["u_n"] == pytest.approx(1e-4, rel=1e-12)
    code, out, _ = run(capsys, "norming", "--radius", "rayleigh", "--n", "10000")
    assert json.loads(out)["b_n"] == pytest.approx(stats.norm.isf(1e-4), rel=1e-12)
    assert run(capsys, "norming", "--radius", "rayleigh", "--n", "1")[0] == 2
    assert run(capsys, "norming", "--radius", "rayleigh", "--n", "100", "--mda", "weibull")[0] == 2
    code, out, _ = run(capsys, "norming", "--radius", "kotz:c=0.5,tau=2", "--n", "10000")
    assert json.loads(out)["b_n"] == pytest.approx(stats.norm.isf(1e-4), rel=1e-10)


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "joint-tail", "--radius", "rayleigh", "--rho", "1", "--x", "1", "--y", "2")
    assert float(out) == pytest.approx(stats.norm.sf(2), rel=1e-12)
    code, out, _ = run(capsys, "oracle", "skew-margin", "--radius", "rayleigh", "--rho", "1", "--x", "1")
    assert float(out) == pytest.approx(0.317311, abs=1e-6)
    code, out, _ = run(capsys, "oracle", "res00", "--radius", "uniform01", "--lambda", "0", "--x", "-1", "--n", "1000000")
    assert float(out) == pytest.approx(0.600211, rel=1e-4)
    assert run(capsys, "oracle", "res00", "--radius", "uniform01", "--lambda", "9", "--x", "-1", "--n", "10")[0] == 3
    assert run(capsys, "oracle", "res00", "--radius", "uniform01", "--x", "-1")[0] == 2
    assert run(capsys, "oracle", "skew-margin", "--radius", "beta:a=2", "--rho", "0.5", "--x", "0.1")[0] == 2


def test_parse_radius():
    assert parse_radius("beta:a=2,b=3") == {"kind": "beta", "a": 2.0, "b": 3.0}
    assert parse_radius("rayleigh") == {"kind": "rayleigh"}
    assert parse_radius({"kind": "uniform01"}) == {"kind": "uniform01"}


SIM = ["simulate", "--radius", "rayleigh", "--model", "half-skew", "--lambda", "1", "--n", "65536", "--reps", "10",
       "--seed", "7"]


def test_simulate_deterministic(capsys, tmp_path):
    assert run(capsys, *SIM, "--out", str(tmp_path / "a"))[0] == 0
    assert run(capsys, *SIM, "--out", str(tmp_path / "b"), "--workers", "4")[0] == 0
    a = (tmp_path / "a.csv").read_bytes()
    assert a == (tmp_path / "b.csv").read_bytes()
    assert a.splitlines()[0] == b"rep,n,m1,m2,z1,z2" and len(a.splitlines()) == 11
    summary = json.loads((tmp_path / "a.json").read_text())
    assert summary["seed"] == 7 and summary["config"]["radius"] == {"kind": "rayleigh"}


def test_simulate_infeasible(capsys, tmp_path):
    code, _, err = run(capsys, "simulate", "--radius", "rayleigh", "--model", "two-skew", "--lambda", "3",
                       "--lambda2", "1", "--n", "16", "--reps", "5", "--seed", "1", "--out", str(tmp_path / "x"))
    assert code == 3 and "n=16" in err


def test_simulate_config_file(capsys, tmp_path):
    conf = tmp_path / "sim.json"
    conf.write_text(json.dumps({"radius": "uniform01", "model": "two-skew", "lambda": 2, "lambda2": 1, "n": 64,
                                "reps": 20, "seed": 1, "out": str(tmp_path / "o")}))
    assert run(capsys, "simulate", "--config", str(conf))[0] == 0
    assert (tmp_path / "o.csv").exists()
    # flags override the file
    assert run(capsys, "simulate", "--config", str(conf), "--reps", "3")[0] == 0
    assert len((tmp_path / "o.csv").read_text().splitlines()) == 4


def test_converge(capsys, tmp_path):
    base = ["converge", "--n-schedule", "256,4096", "--reps", "200", "--seed", "3"]
    code, out, _ = run(capsys, *base, "--out", str(tmp_path / "c1"))
    assert code == 0 and "family=half-skew-gumbel" in out
    assert run(capsys, *base, "--out", str(tmp_path / "c2"), "--workers", "2")[0] == 0
    assert (tmp_path / "c1.csv").read_bytes() == (tmp_path / "c2.csv").read_bytes()
    summary = json.loads((tmp_path / "c1.json").read_text())
    assert summary["config"]["n_schedule"] == [256, 4096] and len(summary["per_n"]) == 2
    assert set(summary["per_n"][0]) >= {"n", "sup_gap", "ks_x", "ks_y"}


def test_converge_presets_and_errors(capsys, tmp_path):
    code, out, _ = run(capsys, "converge", "--preset", "uniform01-two-skew", "--reps", "100", "--seed", "1",
                       "--out", str(tmp_path / "p"))
    assert code == 0 and "weibull-two-skew" in out
    code, _, err = run(capsys, "converge", "--reps", "100")
    assert code == 2 and "--seed" in err
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"radius": "rayleigh", "bogus": 1, "seed": 1}))
    code, _, err = run(capsys, "converge", "--config", str(bad))
    assert code == 2 and "bogus" in err
    code, _, _ = run(capsys, "converge", "--n-schedule", "16", "--lambda", "3", "--reps", "100", "--seed", "1",
                     "--out", str(tmp_path / "q"))
    assert code == 3


def test_workers_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SKEWMAX_WORKERS", "2")
    assert run(capsys, *SIM, "--out", str(tmp_path / "e"))[0] == 0
    assert json.loads((tmp_path / "e.json").read_text())["runtime"]["workers"] == 2


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "skewmax", "eval-limit", "--family", "hr", "--lambda", "0", "--x", "0", "--y", "1"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0 and out.stdout.strip() == "0.367879441171442"
