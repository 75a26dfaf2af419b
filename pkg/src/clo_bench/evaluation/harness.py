"""Replication harness.

Each ``(n, replication)`` pair is an independent task with its own random
substreams (train, validation, test, and one SGD stream per method), so
results do not depend on how tasks are scheduled. Tasks run in a process
pool when more than one worker is requested, with BLAS pinned to one thread
per task; reports are always returned sorted by ``(method, n, replication)``.
"""
from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from threadpoolctl import threadpool_limits

from ..config import ExperimentConfig
from ..datagen import ShortestPathDgp, SimpleDgp, make_coefficient_matrix
from ..decision_sets import GridDagSet, IntervalSet
from ..rng import FIT, PROFILE, TEST, TRAIN, VALIDATION, RngStream
from .methods import FitContext, fit_method, threshold_of
from .regret import ThresholdGridEvaluator, policy_regret

log = logging.getLogger(__name__)

CSV_HEADER = (
    "method",
    "hypothesis",
    "n",
    "replication",
    "regret",
    "relative_regret",
    "regret_se",
    "test_size",
    "seed",
)


@dataclass(frozen=True)
class RegretReport:
    method: str
    hypothesis: str
    n: int
    replication: int
    regret: float
    relative_regret: float
    regret_se: float
    test_size: int
    seed: int
    optimal_cost: float = float("nan")  # not serialized

    def row(self) -> list[str]:
        return [
            self.method,
            self.hypothesis,
            str(self.n),
            str(self.replication),
            f"{self.regret:.17g}",
            f"{self.relative_regret:.17g}",
            f"{self.regret_se:.17g}",
            str(self.test_size),
            str(self.seed),
        ]


@dataclass(frozen=True)
class Failure:
    method: str
    hypothesis: str
    n: int
    replication: int
    error: str


@lru_cache(maxsize=8)
def _shortest_path_dgp(coef_seed: int, width: int, height: int) -> ShortestPathDgp:
    d = height * (width - 1) + width * (height - 1)
    return ShortestPathDgp(make_coefficient_matrix(coef_seed, d=d))


def problem(cfg: ExperimentConfig):
    """``(dgp, decision set)`` for an experiment config."""
    if cfg.experiment == "simple_example" or (cfg.experiment == "noise_profile" and cfg.dgp == "simple"):
        return SimpleDgp(float(cfg.sigma2)), IntervalSet()
    return (
        _shortest_path_dgp(cfg.coef_seed, cfg.grid_width, cfg.grid_height),
        GridDagSet(cfg.grid_width, cfg.grid_height),
    )


@lru_cache(maxsize=4)
def _grid_evaluator(size: int) -> ThresholdGridEvaluator:
    return ThresholdGridEvaluator(size)


def replication_stream(cfg: ExperimentConfig, n: int, rep: int) -> RngStream:
    return RngStream(cfg.master_seed, (n, rep))


def run_task(cfg: ExperimentConfig, n: int, rep: int):
    """Fit and evaluate every method for one ``(n, replication)``.

    Returns ``(reports, failures)``; a method that raises is recorded as a
    failure and does not stop the others.
    """
    dgp, dset = problem(cfg)
    stream = replication_stream(cfg, n, rep)
    train = dgp.generate(n, stream.child(TRAIN))
    needs_val = any(m.estimator in ("eto", "spo_plus") and m.hypothesis != "threshold" for m in cfg.methods)
    val = dgp.generate(n, stream.child(VALIDATION)) if needs_val else None
    seed = stream.seed_int

    dense = cfg.evaluation == "dense_grid"
    if dense:
        evaluator = _grid_evaluator(cfg.test_size)
    else:
        test_xs = dgp.sample_x(cfg.test_size, stream.child(TEST))
        F_true = dgp.truth(test_xs)
        Z_star = dset.solve_batch(F_true)

    reports, failures = [], []
    for spec in cfg.methods:
        ctx = FitContext.from_config(
            cfg, dset, dgp.truth, dgp.p, sgd_seed=lambda: stream.child(FIT, spec.label).seed_int
        )
        try:
            predictor = fit_method(spec, train, val, ctx)
            if dense:
                est = evaluator.regret(threshold_of(predictor))
            else:
                est = policy_regret(predictor, dgp.truth, dset, test_xs, F_true, Z_star)
            if not np.isfinite(est.regret):
                raise ArithmeticError("non-finite regret")
        except Exception as exc:  # noqa: BLE001 - failures are recorded per replication
            log.warning("%s n=%d rep=%d failed: %s", spec.label, n, rep, exc)
            failures.append(Failure(spec.estimator, spec.hypothesis, n, rep, repr(exc)))
            continue
        reports.append(
            RegretReport(
                spec.estimator,
                spec.hypothesis,
                n,
                rep,
                est.regret,
                est.relative_regret,
                est.regret_se,
                est.test_size,
                seed,
                est.optimal_cost,
            )
        )
    return reports, failures


def _run_chunk(args):
    cfg, tasks = args
    with threadpool_limits(limits=1):
        return [run_task(cfg, n, rep) for n, rep in tasks]


def run_replications(cfg: ExperimentConfig, workers: int | None = None):
    """Run every ``(n, replication)`` task; returns ``(reports, failures)``.

    Output order is ``(method, n, replication)`` with methods in config order,
    independent of ``workers``.
    """
    workers = cfg.resolved_threads() if workers is None else workers
    tasks = [(n, r) for n in cfg.n_grid for r in range(cfg.replications)]
    if workers <= 1:
        results = _run_chunk((cfg, tasks))
    else:
        size = max(1, len(tasks) // (workers * 8))
        chunks = [(cfg, tasks[i : i + size]) for i in range(0, len(tasks), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [res for chunk in pool.map(_run_chunk, chunks) for res in chunk]
    reports = [r for rs, _ in results for r in rs]
    failures = [f for _, fs in results for f in fs]
    order = {(m.estimator, m.hypothesis): i for i, m in enumerate(cfg.methods)}
    reports.sort(key=lambda r: (order[(r.method, r.hypothesis)], r.n, r.replication))
    failures.sort(key=lambda f: (order[(f.method, f.hypothesis)], f.n, f.replication))
    return reports, failures


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()


def reports_from_csv(text: str) -> list[RegretReport]:
    rows = list(csv.DictReader(io.StringIO(text)))
    if rows and tuple(rows[0].keys()) != CSV_HEADER:
        raise ValueError("unexpected report CSV header")
    return [
        RegretReport(
            r["method"],
            r["hypothesis"],
            int(r["n"]),
            int(r["replication"]),
            float(r["regret"]),
            float(r["relative_regret"]),
            float(r["regret_se"]),
            int(r["test_size"]),
            int(r["seed"]),
        )
        for r in rows
    ]


@dataclass(frozen=True)
class CellSummary:
    method: str
    hypothesis: str
    n: int
    replications: int
    mean_regret: float
    se_regret: float
    relative_regret: float


def summarize(reports) -> list[CellSummary]:
    """Per ``(method, hypothesis, n)``: mean regret across replications, its
    standard error, and relative regret as a ratio of means."""
    cells: dict = {}
    for r in reports:
        cells.setdefault((r.method, r.hypothesis, r.n), []).append(r)
    out = []
    for (m, h, n), rs in cells.items():
        reg = np.array([r.regret for r in rs])
        opt = np.array([r.optimal_cost for r in rs])
        se = float(reg.std(ddof=1) / np.sqrt(len(reg))) if len(reg) > 1 else 0.0
        rel = float(reg.mean() / opt.mean()) if np.all(np.isfinite(opt)) and opt.mean() != 0 else float(
            np.mean([r.relative_regret for r in rs])
        )
        out.append(CellSummary(m, h, n, len(rs), float(reg.mean()), se, rel))
    return out


def profile_from_config(cfg: ExperimentConfig):
    """Margin profile of the configured truth on ``cfg.sample_size`` fresh draws."""
    from .noise import noise_profile

    dgp, dset = problem(cfg)
    xs = dgp.sample_x(cfg.sample_size, RngStream(cfg.master_seed, (PROFILE,)))
    return noise_profile(dset, dgp.truth, xs, cfg.delta_grid)
