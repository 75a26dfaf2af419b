"""SPO+ surrogate loss and a stochastic subgradient trainer.

For a predicted cost ``c_hat`` and realized cost ``c``::

    loss(c_hat, c) = max_z (c - 2 c_hat)^T z + 2 c_hat^T z*(c) - c^T z*(c)
    grad(c_hat, c) = 2 (z*(c) - z*(2 c_hat - c))

where ``z*(v)`` is the decision-set oracle's argmin for cost ``v``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..datagen import Dataset
from ..decision_sets import DecisionSet, TIE_TOL
from ..errors import ConfigError, InputError
from ..models import (
    KernelFamily,
    KernelPredictor,
    LinearFamily,
    LinearPredictor,
    ThresholdFamily,
    gram_matrix,
    threshold_predictor,
)
from ..rng import RngStream


@dataclass(frozen=True)
class SgdConfig:
    batch_size: int = 10
    iterations: int = 1000
    # step at iteration t is step_scale / sqrt(t + 1)
    step_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.batch_size < 1:
            raise ConfigError("batch_size must be positive")
        if self.iterations < 0:
            raise ConfigError("iterations must be nonnegative")
        if not self.step_scale > 0:
            raise ConfigError("step_scale must be positive")

    def step(self, t: int) -> float:
        return self.step_scale / np.sqrt(t + 1.0)


def _pair(c_hat, c, dset):
    c_hat = np.asarray(c_hat, dtype=float)
    c = np.asarray(c, dtype=float)
    if c_hat.shape != c.shape or c.shape[-1] != dset.dim:
        raise InputError(f"cost shapes {c_hat.shape} and {c.shape} do not match dimension {dset.dim}")
    return c_hat, c


def spo_plus_loss(c_hat, c, dset: DecisionSet, tie_tol: float = TIE_TOL) -> float:
    c_hat, c = _pair(c_hat, c, dset)
    z_true = dset.solve(c, tie_tol).argmin
    z_adv = dset.solve(2 * c_hat - c, tie_tol).argmin
    return float((c - 2 * c_hat) @ z_adv + 2 * c_hat @ z_true - c @ z_true)


def spo_plus_subgradient(c_hat, c, dset: DecisionSet, tie_tol: float = TIE_TOL) -> np.ndarray:
    c_hat, c = _pair(c_hat, c, dset)
    z_true = dset.solve(c, tie_tol).argmin
    z_adv = dset.solve(2 * c_hat - c, tie_tol).argmin
    return 2.0 * (z_true - z_adv)


def spo_plus_loss_batch(C_hat, C, dset: DecisionSet, Z_true=None) -> np.ndarray:
    """Row-wise SPO+ losses; ``Z_true`` may pass precomputed ``z*(C)``."""
    C_hat, C = _pair(C_hat, C, dset)
    if Z_true is None:
        Z_true = dset.solve_batch(C)
    Z_adv = dset.solve_batch(2 * C_hat - C)
    return np.einsum("ij,ij->i", C - 2 * C_hat, Z_adv) + np.einsum("ij,ij->i", 2 * C_hat - C, Z_true)


def spo_plus_objective(predictor, data: Dataset, dset: DecisionSet) -> float:
    """Mean SPO+ loss of ``predictor`` on ``data`` (no penalty)."""
    return float(np.mean(spo_plus_loss_batch(predictor(data.xs), data.ys, dset)))


def fit_spo_plus_sgd(
    data: Dataset,
    family,
    dset: DecisionSet,
    lam: float = 0.0,
    sgd: SgdConfig = SgdConfig(),
    gram: np.ndarray | None = None,
    callback=None,
):
    """Train a predictor by minibatch subgradient descent on mean SPO+ loss.

    Parameters start at zero. Each iteration samples ``sgd.batch_size`` rows
    uniformly with replacement, takes a step of size ``step_scale/sqrt(t+1)``
    along the averaged subgradient, then applies the proximal map of the
    ridge term ``lam * ||params||^2`` (division by ``1 + 2 * step * lam``).
    The final iterate is returned.

    ``family`` is a :class:`LinearFamily`, :class:`KernelFamily` or
    :class:`ThresholdFamily`. Kernel models are parametrized by dual
    coefficients on the training inputs and updated with functional
    gradients, so each batch element touches one row of the coefficients.
    ``gram`` optionally supplies the precomputed training Gram matrix.
    ``callback(t, predictor)`` is invoked after each iteration when given.
    """
    if len(data) == 0:
        raise InputError("empty dataset")
    if lam < 0:
        raise ConfigError("ridge penalty must be nonnegative")
    if data.d != dset.dim:
        raise InputError(f"data has {data.d} cost coordinates, decision set has {dset.dim}")
    rng = RngStream(sgd.seed)
    n, B = len(data), sgd.batch_size
    Y = data.ys

    if isinstance(family, LinearFamily):
        Phi = family.feature_map(data.xs)
        W = np.zeros((data.d, Phi.shape[1]))
        b = np.zeros(data.d)

        def current():
            return LinearPredictor(W, b if family.intercept else None, family.feature_map)

        for t in range(sgd.iterations):
            idx = rng.integers(0, n, size=B)
            C = Y[idx]
            C_hat = Phi[idx] @ W.T + b
            G = 2.0 * (dset.solve_batch(C) - dset.solve_batch(2 * C_hat - C))
            eta = sgd.step(t)
            W = (W - eta * (G.T @ Phi[idx]) / B) / (1.0 + 2.0 * eta * lam)
            if family.intercept:
                b = b - eta * G.mean(axis=0)
            if callback is not None:
                callback(t, current())
        return current()

    if isinstance(family, KernelFamily):
        K = gram_matrix(data.xs, data.xs, family.rho) if gram is None else gram
        A = np.zeros((n, data.d))
        for t in range(sgd.iterations):
            idx = rng.integers(0, n, size=B)
            C = Y[idx]
            C_hat = K[idx] @ A
            G = 2.0 * (dset.solve_batch(C) - dset.solve_batch(2 * C_hat - C))
            eta = sgd.step(t)
            np.add.at(A, idx, -eta * G / B)
            A /= 1.0 + 2.0 * eta * lam
            if callback is not None:
                callback(t, KernelPredictor(data.xs, A, family.rho))
        return KernelPredictor(data.xs, A, family.rho)

    if isinstance(family, ThresholdFamily):
        if data.p != 1 or data.d != 1:
            raise InputError("threshold family needs scalar X and Y")
        x = data.xs[:, 0]
        theta = 0.0
        for t in range(sgd.iterations):
            idx = rng.integers(0, n, size=B)
            C = Y[idx]
            C_hat = (x[idx] - theta)[:, None]
            G = 2.0 * (dset.solve_batch(C) - dset.solve_batch(2 * C_hat - C))
            eta = sgd.step(t)
            # d c_hat / d theta = -1; projection onto [-1, 1]
            theta = (theta + eta * G.mean()) / (1.0 + 2.0 * eta * lam)
            theta = min(1.0, max(-1.0, theta))
            if callback is not None:
                callback(t, threshold_predictor(theta))
        return threshold_predictor(theta)

    raise InputError(f"unsupported family {family!r}")
