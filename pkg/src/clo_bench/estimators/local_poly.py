"""Vector-valued local polynomial regression.

At a query point ``x`` the estimator fits, by kernel-weighted least squares,
a polynomial in ``(X_i - x) / h`` of total degree at most ``floor_strict(beta)``
(the largest integer strictly below ``beta``) to each response coordinate,
and returns the constant coefficient projected onto the unit ball. A
singular weighted design yields the zero vector.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from ..datagen import Dataset
from ..errors import ConfigError, InputError

KERNELS = ("uniform", "gaussian", "epanechnikov")
COND_LIMIT = 1e12


def strict_floor(beta: float) -> int:
    """Largest integer strictly smaller than ``beta``."""
    return math.ceil(beta) - 1


@dataclass(frozen=True)
class LocalPolyConfig:
    beta: float
    bandwidth: float | None = None
    kernel: str = "gaussian"

    def __post_init__(self):
        if not self.beta > 0:
            raise ConfigError("beta must be positive")
        if self.bandwidth is not None and not self.bandwidth > 0:
            raise ConfigError("bandwidth must be positive")
        if self.kernel not in KERNELS:
            raise ConfigError(f"kernel must be one of {KERNELS}")

    def resolve_bandwidth(self, n: int, p: int) -> float:
        if self.bandwidth is not None:
            return self.bandwidth
        return n ** (-1.0 / (2 * self.beta + p))


def kernel_weights(u: np.ndarray, kind: str) -> np.ndarray:
    """Radial kernel values at rows of ``u`` (unnormalized; scale is irrelevant)."""
    r2 = np.sum(u * u, axis=1)
    if kind == "uniform":
        return (r2 <= 1.0).astype(float)
    if kind == "gaussian":
        return np.exp(-0.5 * r2)
    return np.clip(1.0 - r2, 0.0, None)


def multi_indices(p: int, degree: int) -> list[tuple[int, ...]]:
    """Multi-indices ``s`` with ``|s| <= degree``, constant term first."""
    idx = [s for s in product(range(degree + 1), repeat=p) if sum(s) <= degree]
    return sorted(idx, key=lambda s: (sum(s), tuple(-v for v in s)))


def local_polynomial_fit(x, data: Dataset, cfg: LocalPolyConfig) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if len(data) == 0:
        raise InputError("empty dataset")
    if x.shape != (data.p,):
        raise InputError(f"query must have shape ({data.p},)")
    if not np.all(np.isfinite(x)):
        raise InputError("non-finite query point")
    h = cfg.resolve_bandwidth(len(data), data.p)
    u = (data.xs - x) / h
    w = kernel_weights(u, cfg.kernel)
    S = multi_indices(data.p, strict_floor(cfg.beta))
    U = np.column_stack([np.prod(u ** np.array(s), axis=1) for s in S])
    Q = U.T @ (w[:, None] * U)
    if not np.all(np.isfinite(Q)) or np.linalg.cond(Q) > COND_LIMIT:
        return np.zeros(data.d)
    theta = np.linalg.solve(Q, U.T @ (w[:, None] * data.ys))
    est = theta[0]
    norm = np.linalg.norm(est)
    return est / norm if norm > 1.0 else est
