import csv
import json

import numpy as np
import pytest
from click.testing import CliRunner

from clo_bench.cli import atomic_write, main
from clo_bench.evaluation import ierm_regret_exact_noiseless, reports_from_csv


@pytest.fixture
def runner():
    return CliRunner()


def _config(tmp_path, text):
    path = tmp_path / "exp.yaml"
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_run_simple_writes_report_slopes_manifest(runner, tmp_path):
    cfg = _config(tmp_path, "experiment: simple_example\nn_grid: [8, 16, 32]\nreplications: 20\ntest_size: 500\n")
    out = tmp_path / "res" / "r.csv"
    res = runner.invoke(main, ["run", "--config", cfg, "--out", str(out), "--seed", "4"])
    assert res.exit_code == 0, res.output
    assert out.exists()
    assert (tmp_path / "res" / "r.slopes.csv").exists()
    manifest = json.loads((tmp_path / "res" / "r.manifest.json").read_text())
    assert manifest["config"]["master_seed"] == 4
    assert manifest["exit_status"] == 0 and "replications" in manifest["stages"]
    assert manifest["successes"]["eto/threshold"] == 60
    assert not list((tmp_path / "res").glob(".*tmp"))


def test_run_is_deterministic(runner, tmp_path):
    cfg = _config(tmp_path, "experiment: simple_example\nn_grid: [8, 16]\nreplications: 10\ntest_size: 200\n")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert runner.invoke(main, ["run", "--config", cfg, "--out", str(a)]).exit_code == 0
    assert runner.invoke(main, ["run", "--config", cfg, "--out", str(b)]).exit_code == 0
    assert a.read_bytes() == b.read_bytes()


def test_run_noiseless_ierm_matches_formula(runner, tmp_path):
    cfg = _config(
        tmp_path,
        "experiment: simple_example\nsigma2: 0\nn_grid: [1, 2, 5]\nreplications: 3000\n"
        "methods: [ierm_left/threshold]\n",
    )
    out = tmp_path / "r.csv"
    assert runner.invoke(main, ["run", "--config", cfg, "--out", str(out)]).exit_code == 0
    reports = reports_from_csv(out.read_text())
    for n in (1, 2, 5):
        reg = np.array([r.regret for r in reports if r.n == n])
        # dense-grid evaluation (10000 midpoints) is off by at most one grid step
        se = reg.std(ddof=1) / np.sqrt(len(reg))
        assert abs(reg.mean() - ierm_regret_exact_noiseless(n)) <= 3 * se + 2e-4


def test_threads_env_fallback(runner, tmp_path):
    cfg = _config(tmp_path, "experiment: simple_example\nn_grid: [8]\nreplications: 4\ntest_size: 100\n")
    out = tmp_path / "r.csv"
    res = runner.invoke(main, ["run", "--config", cfg, "--out", str(out)], env={"CLO_BENCH_THREADS": "2"})
    assert res.exit_code == 0, res.output
    manifest = json.loads((tmp_path / "r.manifest.json").read_text())
    assert manifest["config"]["threads"] == 2


def test_bad_config_reports_key(runner, tmp_path):
    cfg = _config(tmp_path, "experiment: simple_example\nreplications: 0\n")
    res = runner.invoke(main, ["run", "--config", cfg])
    assert res.exit_code != 0 and "replications" in res.output
    cfg = _config(tmp_path, "experiment: simple_example\nbogus: 1\n")
    res = runner.invoke(main, ["run", "--config", cfg])
    assert res.exit_code != 0 and "bogus" in res.output


def test_run_oracle_check_experiment(runner, tmp_path):
    cfg = _config(tmp_path, f"experiment: oracle_check\noutput_path: {tmp_path / 'oc.csv'}\n")
    res = runner.invoke(main, ["run", "--config", cfg])
    assert res.exit_code == 0 and "0 mismatches" in res.output


def test_oracle_check_command(runner):
    res = runner.invoke(main, ["oracle-check", "--max-side", "3", "--trials", "20"])
    assert res.exit_code == 0 and "failed: 0" in res.output


def test_noise_profile_command(runner, tmp_path):
    cfg = _config(tmp_path, "experiment: noise_profile\nsample_size: 100000\n")
    out = tmp_path / "p.csv"
    res = runner.invoke(main, ["noise-profile", "--config", cfg, "--out", str(out)])
    assert res.exit_code == 0, res.output
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 30
    alpha = json.loads((tmp_path / "p.manifest.json").read_text())["alpha_hat"]
    assert 0.9 <= alpha <= 1.1


def test_slopes_command(runner, tmp_path):
    ns = [32, 64, 128, 256]
    lines = ["method,hypothesis,n,replication,regret,relative_regret,regret_se,test_size,seed"]
    for n in ns:
        for r in range(2):
            lines.append(f"eto,threshold,{n},{r},{0.5 / n!r},0,0,100,1")
    src = tmp_path / "in.csv"
    src.write_text("\n".join(lines) + "\n")
    dst = tmp_path / "s.csv"
    res = runner.invoke(main, ["slopes", "--in", str(src), "--out", str(dst)])
    assert res.exit_code == 0, res.output
    row = next(csv.DictReader(dst.open()))
    assert float(row["slope"]) == pytest.approx(-1.0, abs=1e-9)


def test_atomic_write_leaves_no_partial_file(tmp_path):
    target = tmp_path / "f.txt"
    atomic_write(target, "old")

    with pytest.raises(TypeError):
        atomic_write(target, 123)
    assert target.read_text() == "old"
    assert [p.name for p in tmp_path.iterdir()] == ["f.txt"]
