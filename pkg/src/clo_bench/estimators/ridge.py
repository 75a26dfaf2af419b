"""Least-squares estimators for estimate-then-optimize.

Both ridge variants minimize mean squared error plus ``lam`` times a squared
norm of the coefficients. The linear intercept is never penalized.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from ..datagen import Dataset
from ..errors import ConfigError, InputError, NumericalError
from ..models import FeatureMap, KernelPredictor, LinearPredictor, gram_matrix, threshold_predictor


def _check_data(data: Dataset):
    if len(data) == 0:
        raise InputError("empty dataset")


def fit_least_squares_ridge(
    data: Dataset, fmap: FeatureMap, lam: float = 0.0, intercept: bool = True
) -> LinearPredictor:
    """Minimize ``(1/n) sum ||Y_i - W phi(X_i) - b||^2 + lam ||W||_F^2``.

    For ``lam > 0`` the augmented normal equations are solved by Cholesky.
    For ``lam == 0`` (or when the factorization fails) the minimum-norm
    least-squares solution is returned.
    """
    _check_data(data)
    if lam < 0:
        raise ConfigError("ridge penalty must be nonnegative")
    Phi = fmap(data.xs)
    n, k = Phi.shape
    if intercept:
        Phi = np.hstack([Phi, np.ones((n, 1))])
    Y = data.ys
    coef = None
    if lam > 0:
        G = Phi.T @ Phi / n
        G[np.arange(k), np.arange(k)] += lam
        try:
            coef = linalg.cho_solve(linalg.cho_factor(G), Phi.T @ Y / n)
        except linalg.LinAlgError:
            coef = None
    if coef is None:
        coef = linalg.lstsq(Phi, Y, lapack_driver="gelsd")[0]
    W = coef[:k].T
    b = coef[k] if intercept else None
    return LinearPredictor(W, b, fmap)


@dataclass(frozen=True)
class ThresholdClassFit:
    """A fitted member ``f_theta(x) = x - theta`` of the threshold class."""

    theta: float
    selection_rule: str = "least_squares"

    def __post_init__(self):
        if not -1.0 <= self.theta <= 1.0:
            raise InputError("theta must lie in [-1, 1]")

    def predictor(self) -> LinearPredictor:
        return threshold_predictor(self.theta)


def fit_threshold_least_squares(data: Dataset) -> ThresholdClassFit:
    """Least squares over ``{x - theta : theta in [-1, 1]}``.

    The unconstrained minimizer is ``mean(X) - mean(Y)``; the objective is a
    parabola in ``theta`` so the constrained one is its clip to ``[-1, 1]``.
    """
    _check_data(data)
    if data.p != 1 or data.d != 1:
        raise InputError("threshold class needs scalar X and Y")
    theta = float(np.mean(data.xs) - np.mean(data.ys))
    return ThresholdClassFit(min(1.0, max(-1.0, theta)))


def fit_kernel_ridge(data: Dataset, rho: float, lam: float, gram: np.ndarray | None = None) -> KernelPredictor:
    """Gaussian-kernel ridge regression with dual coefficients ``(G + n lam I)^{-1} Y``."""
    _check_data(data)
    if lam <= 0:
        raise ConfigError("kernel ridge requires lam > 0")
    n = len(data)
    G = gram_matrix(data.xs, data.xs, rho) if gram is None else gram
    M = G + n * lam * np.eye(n)
    try:
        A = linalg.cho_solve(linalg.cho_factor(M), data.ys)
    except linalg.LinAlgError as exc:
        raise NumericalError(f"kernel ridge solve failed: {exc}") from exc
    if not np.all(np.isfinite(A)):
        raise NumericalError("kernel ridge produced non-finite coefficients")
    return KernelPredictor(data.xs, A, rho)
