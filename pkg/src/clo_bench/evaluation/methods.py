"""Turning a method spec into a fitted predictor (with validation when needed)."""
from __future__ import annotations

from dataclasses import dataclass

from ..config import ExperimentConfig, MethodSpec
from ..datagen import Dataset
from ..decision_sets import DecisionSet
from ..estimators import (
    SgdConfig,
    fit_ierm_threshold,
    fit_kernel_ridge,
    fit_least_squares_ridge,
    fit_spo_plus_sgd,
    fit_threshold_least_squares,
)
from ..models import FeatureMap, KernelFamily, LinearFamily, ThresholdFamily, gram_matrix, threshold_predictor
from .validation import select_hyperparams


@dataclass
class FitContext:
    """Everything a method needs besides the training data."""

    dset: DecisionSet
    truth: object
    grids: dict
    sgd: dict
    sgd_seed: object = 0  # int, or a zero-argument callable returning one
    wrong_linear_intercept: bool = True
    p: int = 5

    @classmethod
    def from_config(cls, cfg: ExperimentConfig, dset, truth, p, sgd_seed=0):
        return cls(dset, truth, cfg.grids, cfg.sgd, sgd_seed, cfg.wrong_linear_intercept, p)

    def sgd_config(self) -> SgdConfig:
        seed = self.sgd_seed() if callable(self.sgd_seed) else self.sgd_seed
        return SgdConfig(seed=seed, **self.sgd)


class _GramCache:
    def __init__(self):
        self._cache = {}

    def __call__(self, X, rho):
        key = (id(X), rho)
        if key not in self._cache:
            self._cache[key] = gram_matrix(X, X, rho)
        return self._cache[key]


def linear_family(spec: MethodSpec, ctx: FitContext) -> LinearFamily:
    if spec.hypothesis == "correct_linear":
        return LinearFamily(FeatureMap("monomial", ctx.p), True)
    return LinearFamily(FeatureMap("identity", ctx.p), ctx.wrong_linear_intercept)


def fit_method(spec: MethodSpec, train: Dataset, val: Dataset | None, ctx: FitContext):
    """Fit one method; returns a predictor.

    Methods with more than one hyperparameter configuration are tuned on
    ``val``: least-squares methods by validation MSE, SPO+ methods by
    validation decision cost.
    """
    est, hyp = spec.estimator, spec.hypothesis
    if est == "truth":
        return threshold_predictor(0.0) if hyp == "threshold" else ctx.truth

    if hyp == "threshold":
        if est == "eto":
            return fit_threshold_least_squares(train).predictor()
        if est == "ierm_left":
            return fit_ierm_threshold(train, "left_endpoint").predictor()
        if est == "ierm_mid":
            return fit_ierm_threshold(train, "midpoint").predictor()
        return fit_spo_plus_sgd(train, ThresholdFamily(), ctx.dset, 0.0, ctx.sgd_config())

    grams = _GramCache()
    if hyp in ("correct_linear", "wrong_linear"):
        family = linear_family(spec, ctx)
        grid = [{"lam": lam} for lam in ctx.grids["linear_lambda"]]
        if est == "eto":
            def fit(data, lam):
                return fit_least_squares_ridge(data, family.feature_map, lam, family.intercept)
        else:
            def fit(data, lam):
                return fit_spo_plus_sgd(data, family, ctx.dset, lam, ctx.sgd_config())
    else:
        grid = [
            {"rho": rho, "lam": lam}
            for rho in ctx.grids["kernel_rho"]
            for lam in ctx.grids["kernel_lambda"]
        ]
        if est == "eto":
            def fit(data, rho, lam):
                return fit_kernel_ridge(data, rho, lam, gram=grams(data.xs, rho))
        else:
            def fit(data, rho, lam):
                return fit_spo_plus_sgd(
                    data, KernelFamily(rho), ctx.dset, lam, ctx.sgd_config(), gram=grams(data.xs, rho)
                )

    if len(grid) == 1 or val is None:
        return fit(train, **grid[0])
    criterion = "mse" if est == "eto" else "decision_cost"
    return select_hyperparams(train, val, fit, grid, ctx.dset, criterion).predictor


def threshold_of(predictor) -> float:
    """``theta`` of a threshold-class predictor ``x - theta``."""
    if not (predictor.W.shape == (1, 1) and predictor.W[0, 0] == 1.0):
        raise ValueError("not a threshold-class predictor")
    return float(-predictor.intercept[0])

