"""Regret of plug-in policies."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..decision_sets import DecisionSet
from ..errors import InputError


@dataclass(frozen=True)
class RegretEstimate:
    regret: float
    regret_se: float
    relative_regret: float
    optimal_cost: float
    test_size: int


def _test_matrix(test_xs) -> np.ndarray:
    X = np.asarray(test_xs, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[0] == 0:
        raise InputError("empty test set")
    return X


def pointwise_gaps(predictor, truth, dset: DecisionSet, test_xs, F_true=None, Z_star=None):
    """Per-point cost gaps ``f*(x)^T (pi_f(x) - pi*(x))`` and optimal costs."""
    X = _test_matrix(test_xs)
    F = truth(X) if F_true is None else F_true
    F = np.asarray(F, dtype=float).reshape(X.shape[0], -1)
    if F.shape[1] != dset.dim:
        raise InputError("truth output dimension does not match the decision set")
    Zs = dset.solve_batch(F) if Z_star is None else Z_star
    C_hat = np.asarray(predictor(X), dtype=float).reshape(X.shape[0], -1)
    if C_hat.shape[1] != dset.dim:
        raise InputError("predictor output dimension does not match the decision set")
    Zh = dset.solve_batch(C_hat)
    opt = np.einsum("ij,ij->i", F, Zs)
    return np.einsum("ij,ij->i", F, Zh) - opt, opt


def policy_regret(predictor, truth, dset: DecisionSet, test_xs, F_true=None, Z_star=None) -> RegretEstimate:
    """Mean regret over ``test_xs``, its standard error, and the ratio of
    mean regret to mean optimal cost.

    ``F_true`` and ``Z_star`` may pass precomputed ``truth(test_xs)`` and the
    corresponding optimal decisions when several predictors share a test set.
    """
    gaps, opt = pointwise_gaps(predictor, truth, dset, test_xs, F_true, Z_star)
    m = len(gaps)
    mean = float(gaps.mean())
    se = float(gaps.std(ddof=1) / np.sqrt(m)) if m > 1 else 0.0
    opt_mean = float(opt.mean())
    rel = mean / opt_mean if opt_mean != 0 else float("nan")
    return RegretEstimate(mean, se, rel, opt_mean, m)


def dense_grid(size: int) -> np.ndarray:
    """Midpoint grid of ``size`` points on ``[-1, 1]``."""
    return -1.0 + (2.0 * np.arange(size) + 1.0) / size


class ThresholdGridEvaluator:
    """Dense-grid regret of threshold policies on the scalar example.

    Equivalent to ``policy_regret(threshold_predictor(theta), identity,
    IntervalSet(), dense_grid(size))`` but O(log size) per threshold, via
    prefix sums of the per-point gap ``2|x|``.
    """

    def __init__(self, size: int):
        self.x = dense_grid(size)
        self.size = size
        self._gap = np.concatenate([[0.0], np.cumsum(2.0 * np.abs(self.x))])
        self._gap2 = np.concatenate([[0.0], np.cumsum(4.0 * self.x * self.x)])
        self._zero = int(np.searchsorted(self.x, 0.0, side="left"))
        self.optimal_cost = float(-np.abs(self.x).mean())

    def _range(self, theta: float):
        # pi_theta(x) = +1 iff x < theta; pi*(x) = +1 iff x < 0
        k = int(np.searchsorted(self.x, theta, side="left"))
        return (k, self._zero) if k < self._zero else (self._zero, k)

    def regret(self, theta: float):
        lo, hi = self._range(theta)
        s1 = self._gap[hi] - self._gap[lo]
        s2 = self._gap2[hi] - self._gap2[lo]
        mean = s1 / self.size
        var = max(0.0, (s2 - self.size * mean * mean) / (self.size - 1))
        se = float(np.sqrt(var / self.size))
        return RegretEstimate(float(mean), se, float(mean / self.optimal_cost), self.optimal_cost, self.size)
