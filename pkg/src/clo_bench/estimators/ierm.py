"""Exact empirical decision-cost minimization over the threshold class.

For ``f_theta(x) = x - theta`` on ``Z = [-1, 1]`` the induced policy is
``z = 2 * 1{x <= theta} - 1`` and the empirical cost
``J(theta) = (1/n) sum Y_i (2 * 1{X_i <= theta} - 1)`` is a right-continuous
step function of ``theta`` that only jumps at the observed ``X_i``. It is
minimized exactly by scanning the ``n + 1`` pieces between breakpoints.
"""
from __future__ import annotations

import numpy as np

from ..datagen import Dataset
from ..errors import InputError
from .ridge import ThresholdClassFit

RULES = ("left_endpoint", "midpoint")


def ierm_threshold_objective(theta, data: Dataset) -> np.ndarray:
    """``J(theta)`` for a scalar or an array of thresholds."""
    x, y = data.xs[:, 0], data.ys[:, 0]
    theta = np.asarray(theta, dtype=float)
    z = np.where(x[None, :] <= theta.reshape(-1, 1), 1.0, -1.0)
    out = z @ y / len(x)
    return out.reshape(theta.shape)


def threshold_pieces(data: Dataset):
    """Breakpoints and objective values of ``J``.

    Returns ``(starts, ends, values)`` where piece ``k`` is
    ``[starts[k], ends[k])`` (the last piece is closed at 1).
    """
    x, y = data.xs[:, 0], data.ys[:, 0]
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    n = len(xs)
    # piece 0: theta below every X_i, all decisions are -1
    values = np.empty(n + 1)
    values[0] = -ys.sum()
    values[1:] = values[0] + 2.0 * np.cumsum(ys)
    values /= n
    starts = np.concatenate([[-1.0], xs])
    ends = np.concatenate([xs, [1.0]])
    return starts, ends, values


def fit_ierm_threshold(data: Dataset, rule: str = "left_endpoint") -> ThresholdClassFit:
    """Minimize ``J`` over ``theta in [-1, 1]``.

    The leftmost interval of minimizers is returned through its left
    endpoint (``rule="left_endpoint"``) or its midpoint (``rule="midpoint"``).
    Adjacent pieces with equal value are merged into one interval.
    """
    if rule not in RULES:
        raise InputError(f"rule must be one of {RULES}")
    if len(data) == 0:
        raise InputError("empty dataset")
    if data.p != 1 or data.d != 1:
        raise InputError("threshold IERM needs scalar X and Y")
    if np.abs(data.xs).max() > 1:
        raise InputError("threshold IERM needs X in [-1, 1]")
    starts, ends, values = threshold_pieces(data)
    tol = 1e-12 * max(1.0, float(np.abs(data.ys).max()))
    is_min = values <= values.min() + tol
    k = int(np.argmax(is_min))
    last = k
    while last + 1 < len(values) and is_min[last + 1]:
        last += 1
    lo, hi = starts[k], ends[last]
    theta = lo if rule == "left_endpoint" else 0.5 * (lo + hi)
    return ThresholdClassFit(float(min(1.0, max(-1.0, theta))), rule)
