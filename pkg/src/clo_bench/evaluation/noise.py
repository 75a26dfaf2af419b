"""Empirical profile of the margin (near-degeneracy) distribution."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..decision_sets import DecisionSet, decision_radius
from ..errors import InputError

FIT_WINDOW = (0.01, 0.5)


@dataclass(frozen=True)
class NoiseProfile:
    """``probs[k]`` estimates ``P(0 < Delta(X) <= deltas[k])``.

    ``alpha_hat`` is the log-log slope of ``probs`` against ``deltas`` over
    grid points with probability inside ``FIT_WINDOW``; it is ``nan`` (and
    ``alpha_defined`` false) when fewer than two points fall in the window.
    """

    deltas: np.ndarray
    probs: np.ndarray
    alpha_hat: float
    alpha_defined: bool
    B: float
    degenerate_fraction: float


def noise_profile(dset: DecisionSet, truth, xs, delta_grid) -> NoiseProfile:
    X = np.asarray(xs, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    deltas = np.sort(np.asarray(delta_grid, dtype=float))
    if X.shape[0] == 0 or deltas.size == 0:
        raise InputError("need a nonempty sample and delta grid")
    if np.any(deltas <= 0):
        raise InputError("delta grid must be positive")
    F = np.asarray(truth(X), dtype=float).reshape(X.shape[0], -1)
    gaps, _, degenerate = dset.margin_gap_batch(F)
    live = np.sort(gaps[~degenerate])
    probs = np.searchsorted(live, deltas, side="right") / X.shape[0]
    window = (probs > FIT_WINDOW[0]) & (probs < FIT_WINDOW[1])
    if window.sum() >= 2:
        alpha = float(np.polyfit(np.log(deltas[window]), np.log(probs[window]), 1)[0])
        defined = True
    else:
        alpha, defined = float("nan"), False
    return NoiseProfile(deltas, probs, alpha, defined, decision_radius(dset), float(degenerate.mean()))
