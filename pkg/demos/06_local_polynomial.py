"""Local polynomial regression of a vector-valued response.

The degree is the largest integer strictly below the smoothness beta, the
default bandwidth is n^(-1/(2 beta + p)), and the estimate is projected onto
the unit ball. A singular local design gives the zero vector.
"""
import numpy as np

from clo_bench import Dataset, RngStream
from clo_bench.estimators import LocalPolyConfig, local_polynomial_fit

stream = RngStream(6)
X = stream.uniform(-1, 1, size=(400, 1))
truth = lambda x: np.column_stack([0.5 * np.sin(3 * x[:, 0]), 0.4 * x[:, 0] ** 2])  # noqa: E731
Y = truth(X) + 0.1 * stream.child(1).normal(size=(400, 2))
data = Dataset(X, Y)

for beta in (1.0, 2.0, 3.0):
    cfg = LocalPolyConfig(beta)
    q = np.linspace(-0.9, 0.9, 7)
    est = np.array([local_polynomial_fit([x], data, cfg) for x in q])
    err = np.abs(est - truth(q[:, None])).max()
    print(f"beta={beta}: bandwidth {cfg.resolve_bandwidth(400, 1):.3f}, max error {err:.3f}")

# Far from the data with a compact kernel nothing is in the window.
print(local_polynomial_fit([5.0], data, LocalPolyConfig(2.0, bandwidth=0.2, kernel="uniform")))
