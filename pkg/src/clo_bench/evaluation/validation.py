"""Hyperparameter selection on a held-out validation sample."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..datagen import Dataset
from ..decision_sets import DecisionSet
from ..errors import ConfigError

CRITERIA = ("mse", "decision_cost")


@dataclass(frozen=True)
class ValidationResult:
    chosen_config: dict
    criterion: str
    table: tuple  # ((config, score), ...) in grid order
    predictor: object = None  # fit at chosen_config


def validation_score(predictor, val: Dataset, criterion: str, dset: DecisionSet | None = None) -> float:
    """Mean squared error, or mean realized cost ``Y_i^T pi_f(X_i)``."""
    C_hat = predictor(val.xs)
    if criterion == "mse":
        return float(np.mean(np.sum((val.ys - C_hat) ** 2, axis=1)))
    Z = dset.solve_batch(C_hat)
    return float(np.mean(np.einsum("ij,ij->i", val.ys, Z)))


def select_hyperparams(
    train: Dataset, val: Dataset, fit, grid, dset: DecisionSet | None = None, criterion: str = "mse"
) -> ValidationResult:
    """Refit ``fit(train, **config)`` for each grid config and keep the best.

    Ties go to the earliest config in ``grid``. A config whose fit raises is
    scored ``inf``.
    """
    grid = list(grid)
    if not grid:
        raise ConfigError("empty hyperparameter grid")
    if criterion not in CRITERIA:
        raise ConfigError(f"criterion must be one of {CRITERIA}")
    if criterion == "decision_cost" and dset is None:
        raise ConfigError("decision_cost criterion needs a decision set")
    table, fits = [], []
    for params in grid:
        try:
            model = fit(train, **params)
            score = validation_score(model, val, criterion, dset)
        except (ArithmeticError, ValueError, np.linalg.LinAlgError):
            model, score = None, np.inf
        if not np.isfinite(score):
            score = np.inf
        table.append((dict(params), score))
        fits.append(model)
    scores = np.array([s for _, s in table])
    if np.all(np.isinf(scores)):
        raise ArithmeticError("every hyperparameter configuration failed")
    best = int(np.argmin(scores))
    return ValidationResult(table[best][0], criterion, tuple(table), fits[best])
