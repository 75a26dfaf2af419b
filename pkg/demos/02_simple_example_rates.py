"""Least-squares plug-in versus exact decision-cost minimization on a scalar problem.

X is uniform on [-1, 1], Y = X + noise, and the decision is z in [-1, 1]
with cost Y * z. Both learners fit a threshold theta and act with
z = +1 when x < theta and z = -1 otherwise. The plug-in learner fits theta
by least squares, the other one minimizes the empirical decision cost
directly. This script fits both over a range of sample sizes and
compares the regret decay rates.
"""
import numpy as np

from clo_bench.config import parse_config
from clo_bench.evaluation import (
    eto_regret_exact_simple,
    fit_loglog_slope,
    ierm_regret_exact_noiseless,
    run_replications,
    summarize,
)

# A smaller replication count than the full benchmark keeps this quick.
cfg = parse_config({"experiment": "simple_example", "sigma2": 1.0, "replications": 200, "master_seed": 1})
reports, _ = run_replications(cfg)
cells = summarize(reports)

print(f"{'n':>6} {'plug-in':>12} {'sigma2/2n':>12} {'cost-min':>12}")
for n in cfg.n_grid:
    eto = next(c for c in cells if c.method == "eto" and c.n == n)
    ierm = next(c for c in cells if c.method == "ierm_left" and c.n == n)
    print(f"{n:>6} {eto.mean_regret:>12.3e} {eto_regret_exact_simple(n, 1.0):>12.3e} {ierm.mean_regret:>12.3e}")

# Log-log fits: the plug-in rate is close to 1/n, the other close to n^(-2/3).
for method in ("eto", "ierm_left", "ierm_mid"):
    pts = [(c.n, c.mean_regret) for c in cells if c.method == method]
    print(method, "slope", round(fit_loglog_slope(pts).slope, 3))

# Without noise the exact minimizer has a closed-form regret.
for n in (1, 2, 5, 10):
    print("noiseless, n =", n, "regret", round(ierm_regret_exact_noiseless(n), 5))
