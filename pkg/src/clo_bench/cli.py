"""``clo-bench`` command-line interface.

Subcommands::

    clo-bench run --config exp.yaml [--seed N] [--threads N|auto] [--out results.csv]
    clo-bench slopes --in results.csv --out slopes.csv
    clo-bench oracle-check [--max-side 4] [--trials 200]
    clo-bench noise-profile --config exp.yaml [--out profile.csv]

``run`` writes the report CSV, a slope summary (``<stem>.slopes.csv``) when
the n-grid has at least three points, and a JSON manifest
(``<stem>.manifest.json``) next to it. Every file is written to a temporary
name first and renamed into place.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import os
import sys
import tempfile
import time
import warnings
from collections import Counter
from contextlib import contextmanager
from pathlib import Path

import click
import numpy as np

from . import __version__
from .checks import oracle_check
from .config import load_config
from .errors import ConfigError, InputError
from .evaluation import (
    fit_loglog_slope,
    profile_from_config,
    reports_from_csv,
    reports_to_csv,
    run_replications,
    summarize,
)

THREADS_ENV = "CLO_BENCH_THREADS"


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sibling(path, tag: str, ext: str) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}.{tag}{ext}")


class Manifest:
    """Config echo, version, per-stage wall-clock time and failure counts."""

    def __init__(self, cfg):
        self.doc = {"version": __version__, "config": cfg.to_dict(), "stages": {}, "failures": {}, "outputs": []}

    @contextmanager
    def stage(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.doc["stages"][name] = round(time.perf_counter() - t0, 6)

    def write(self, path) -> None:
        atomic_write(path, json.dumps(self.doc, indent=2, sort_keys=False) + "\n")


def slope_rows(reports) -> list[list]:
    """One log-log fit of mean regret against n per method."""
    by_method: dict = {}
    for c in summarize(reports):
        by_method.setdefault((c.method, c.hypothesis), []).append((c.n, c.mean_regret))
    rows = []
    for (m, h), pts in by_method.items():
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                fit = fit_loglog_slope(sorted(pts))
        except InputError:
            continue
        rows.append([m, h, f"{fit.slope:.17g}", f"{fit.intercept:.17g}", f"{fit.r_squared:.17g}", len(pts)])
    return rows


def slopes_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["method", "hypothesis", "slope", "intercept", "r_squared", "points"])
    w.writerows(rows)
    return buf.getvalue()


def missing_cells(cfg, reports) -> list[str]:
    """Labels of ``(method, n)`` cells with no successful replication."""
    have = {(r.method, r.hypothesis, r.n) for r in reports}
    return [
        f"{m.label} n={n}"
        for m in cfg.methods
        for n in cfg.n_grid
        if (m.estimator, m.hypothesis, n) not in have
    ]


def profile_csv(prof) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["delta", "prob"])
    for d, p in zip(prof.deltas, prof.probs):
        w.writerow([f"{d:.17g}", f"{p:.17g}"])
    return buf.getvalue()


def _threads(value):
    if value is None:
        value = os.environ.get(THREADS_ENV) or None
    if value is None or value == "auto":
        return value
    try:
        return int(value)
    except ValueError:
        raise click.BadParameter(f"threads must be a positive integer or 'auto', got {value!r}")


def _load(path, **overrides):
    try:
        return load_config(path, **overrides)
    except ConfigError as exc:
        raise click.UsageError(f"invalid config {path}: {exc}")


@click.group()
@click.version_option(__version__, prog_name="clo-bench")
@click.option("-v", "--verbose", is_flag=True, help="Log per-replication failures.")
def main(verbose):
    """Regret benchmarks for estimate-then-optimize and integrated learning."""
    logging.basicConfig(level=logging.INFO if verbose else logging.ERROR, format="%(levelname)s %(message)s")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=None, help="Override master_seed.")
@click.option("--threads", default=None, help=f"Worker processes or 'auto' (fallback: ${THREADS_ENV}).")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Override output_path.")
def run(config_path, seed, threads, out):
    """Run the experiment described by a config file."""
    cfg = _load(config_path, master_seed=seed, threads=_threads(threads), output_path=out)
    manifest = Manifest(cfg)
    out_path = Path(cfg.output_path)
    status = 0

    if cfg.experiment == "oracle_check":
        with manifest.stage("oracle_check"):
            res = oracle_check(seed=cfg.master_seed)
        text = f"comparisons,mismatches\n{res.comparisons},{res.mismatches}\n"
        _write(out_path, text, manifest)
        click.echo(f"oracle check: {res.comparisons} comparisons, {res.mismatches} mismatches")
        status = 0 if res.passed else 1
    elif cfg.experiment == "noise_profile":
        with manifest.stage("noise_profile"):
            prof = profile_from_config(cfg)
        manifest.doc["alpha_hat"] = prof.alpha_hat if prof.alpha_defined else None
        _write(out_path, profile_csv(prof), manifest)
        click.echo(_describe_profile(prof))
    else:
        with manifest.stage("replications"):
            reports, failures = run_replications(cfg)
        manifest.doc["failures"] = dict(Counter(f"{f.method}/{f.hypothesis}" for f in failures))
        manifest.doc["successes"] = dict(Counter(f"{r.method}/{r.hypothesis}" for r in reports))
        with manifest.stage("write"):
            _write(out_path, reports_to_csv(reports), manifest)
            rows = slope_rows(reports) if len(cfg.n_grid) >= 3 else []
            if rows:
                _write(sibling(out_path, "slopes", ".csv"), slopes_csv(rows), manifest)
        for c in summarize(reports):
            click.echo(f"{c.method}/{c.hypothesis:<15} n={c.n:<6} regret={c.mean_regret:.6g} "
                       f"(se {c.se_regret:.2g}) relative={c.relative_regret:.4g}")
        for row in rows:
            click.echo(f"slope {row[0]}/{row[1]}: {float(row[2]):.4f}")
        missing = missing_cells(cfg, reports)
        if missing:
            click.echo(f"error: no successful replication for {', '.join(missing)}", err=True)
            status = 1
        if failures:
            click.echo(f"{len(failures)} replication(s) failed; see manifest", err=True)

    manifest.doc["exit_status"] = status
    manifest.write(sibling(out_path, "manifest", ".json"))
    sys.exit(status)


def _write(path, text, manifest):
    try:
        atomic_write(path, text)
    except OSError as exc:
        raise click.ClickException(f"cannot write {path}: {exc}")
    manifest.doc["outputs"].append(str(path))


def _describe_profile(prof) -> str:
    alpha = f"{prof.alpha_hat:.4f}" if prof.alpha_defined else "undefined"
    return f"alpha_hat={alpha} B={prof.B:.6g} degenerate_fraction={prof.degenerate_fraction:.4g}"


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def slopes(in_path, out_path):
    """Fit log-log regret slopes from an existing report CSV."""
    try:
        reports = reports_from_csv(Path(in_path).read_text(encoding="utf-8"))
    except (ValueError, KeyError) as exc:
        raise click.ClickException(f"cannot read report CSV {in_path}: {exc}")
    rows = slope_rows(reports)
    if not rows:
        raise click.ClickException("no method has three positive mean-regret points")
    try:
        atomic_write(out_path, slopes_csv(rows))
    except OSError as exc:
        raise click.ClickException(f"cannot write {out_path}: {exc}")
    for row in rows:
        click.echo(f"{row[0]}/{row[1]}: slope {float(row[2]):.4f} (r2 {float(row[4]):.3f})")


@main.command("oracle-check")
@click.option("--max-side", type=click.IntRange(1, 6), default=4, show_default=True)
@click.option("--trials", type=click.IntRange(1), default=200, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def oracle_check_cmd(max_side, trials, seed):
    """Check the shortest-path DP against exhaustive path enumeration."""
    res = oracle_check(max_side, trials, seed)
    click.echo(f"grids: {len(res.grids)}  comparisons: {res.comparisons}  "
               f"passed: {res.comparisons - res.mismatches}  failed: {res.mismatches}")
    for w, h, k, what in res.failures[:20]:
        click.echo(f"  mismatch on {w}x{h} trial {k}: {what}", err=True)
    sys.exit(0 if res.passed else 1)


@main.command("noise-profile")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=None, help="Override master_seed.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Override output_path.")
def noise_profile_cmd(config_path, seed, out):
    """Estimate P(0 < gap <= delta) and its log-log exponent."""
    cfg = _load(config_path, master_seed=seed, output_path=out)
    manifest = Manifest(cfg)
    with manifest.stage("noise_profile"):
        prof = profile_from_config(cfg)
    manifest.doc["alpha_hat"] = prof.alpha_hat if prof.alpha_defined else None
    _write(cfg.output_path, profile_csv(prof), manifest)
    manifest.doc["exit_status"] = 0
    manifest.write(sibling(cfg.output_path, "manifest", ".json"))
    click.echo(_describe_profile(prof))
    for d, p in zip(prof.deltas, prof.probs):
        if np.isfinite(p):
            click.echo(f"  delta={d:<10.4g} P={p:.4f}")


if __name__ == "__main__":
    main()
