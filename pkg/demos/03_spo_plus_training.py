"""The SPO+ surrogate and its subgradient trainer.

The surrogate is convex in the predicted cost and upper-bounds the decision
regret. Here a linear model is trained on shortest-path data with it and
compared with a least-squares fit of the same model.
"""
import numpy as np

from clo_bench import FeatureMap, GridDagSet, IntervalSet, LinearFamily, RngStream
from clo_bench.datagen import ShortestPathDgp, gen_shortest_path
from clo_bench.estimators import (
    SgdConfig,
    fit_least_squares_ridge,
    fit_spo_plus_sgd,
    spo_plus_loss,
    spo_plus_objective,
    spo_plus_subgradient,
)
from clo_bench.evaluation import policy_regret

# On the interval with true cost 1, predicting -1 costs 6 and predicting 0 costs 2.
print(spo_plus_loss([-1.0], [1.0], IntervalSet()), spo_plus_loss([0.0], [1.0], IntervalSet()))
print("subgradient:", spo_plus_subgradient([-1.0], [1.0], IntervalSet()))

grid = GridDagSet(5, 5)
dgp = ShortestPathDgp()
train = gen_shortest_path(200, dgp, RngStream(0, (0,)))
test_x = dgp.sample_x(2000, RngStream(0, (1,)))

# The misspecified class: costs linear in the raw features (the truth is a
# degree-5 polynomial).
family = LinearFamily(FeatureMap("identity", 5))
trace = []
spo = fit_spo_plus_sgd(
    train, family, grid, lam=0.0, sgd=SgdConfig(seed=1),
    callback=lambda t, f: trace.append(spo_plus_objective(f, train, grid)) if t % 100 == 99 else None,
)
print("training SPO+ objective every 100 steps:", np.round(trace, 3))

ls = fit_least_squares_ridge(train, family.feature_map, lam=0.0)
for name, f in (("least squares", ls), ("SPO+", spo)):
    est = policy_regret(f, dgp.truth, grid, test_x)
    print(f"{name:>14}: relative regret {est.relative_regret:.4f} (se {est.regret_se / est.optimal_cost:.4f})")
