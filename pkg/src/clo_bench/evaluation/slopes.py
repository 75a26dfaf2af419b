"""Log-log rate fits."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import InputError


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r_squared: float


def fit_loglog_slope(points) -> SlopeFit:
    """OLS of ``log(regret)`` on ``log(n)``; nonpositive regrets are dropped."""
    pts = np.asarray(list(points), dtype=float).reshape(-1, 2)
    keep = (pts[:, 1] > 0) & (pts[:, 0] > 0)
    if not keep.all():
        warnings.warn(f"dropping {int((~keep).sum())} nonpositive points from slope fit")
    pts = pts[keep]
    if len(pts) < 3:
        raise InputError("need at least 3 positive points for a slope fit")
    lx, ly = np.log(pts[:, 0]), np.log(pts[:, 1])
    X = np.column_stack([lx, np.ones_like(lx)])
    (slope, intercept), *_ = np.linalg.lstsq(X, ly, rcond=None)
    resid = ly - X @ np.array([slope, intercept])
    ss_tot = np.sum((ly - ly.mean()) ** 2)
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - np.sum(resid**2) / ss_tot)
    return SlopeFit(float(slope), float(intercept), float(r2))
