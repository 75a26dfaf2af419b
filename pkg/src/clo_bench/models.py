"""Feature maps and predictor families.

Predictors map features ``x in R^p`` to cost vectors in ``R^d``. They are
immutable and callable on either a single ``x`` (returns shape ``(d,)``) or a
batch ``X`` of shape ``(n, p)`` (returns ``(n, d)``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path

import numpy as np
from scipy.spatial.distance import cdist

from .errors import InputError


def _as_batch(x, p: int):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = x[None, :] if single else x
    if X.ndim != 2 or X.shape[1] != p:
        raise InputError(f"expected inputs of dimension {p}, got shape {x.shape}")
    return X, single


def monomial_subsets(p: int) -> list[tuple[int, ...]]:
    """Nonempty subsets of ``range(p)`` ordered by size, then lexicographically."""
    return [s for k in range(1, p + 1) for s in combinations(range(p), k)]


@dataclass(frozen=True)
class FeatureMap:
    """``identity`` (``phi(x) = x``) or ``monomial`` (products of distinct features).

    The monomial map lists ``x1..xp, x1x2, x1x3, ..., x1x2...xp`` and has
    ``2**p - 1`` outputs.
    """

    kind: str
    input_dim: int

    def __post_init__(self):
        if self.kind not in ("identity", "monomial"):
            raise InputError(f"unknown feature map kind {self.kind!r}")
        if self.input_dim < 1:
            raise InputError("input_dim must be positive")

    @property
    def output_dim(self) -> int:
        return self.input_dim if self.kind == "identity" else 2**self.input_dim - 1

    @cached_property
    def _subsets(self):
        return monomial_subsets(self.input_dim)

    def __call__(self, x) -> np.ndarray:
        X, single = _as_batch(x, self.input_dim)
        if not np.all(np.isfinite(X)):
            raise InputError("non-finite feature values")
        if self.kind == "identity":
            out = X.copy()
        else:
            out = np.empty((X.shape[0], len(self._subsets)))
            for j, s in enumerate(self._subsets):
                out[:, j] = np.prod(X[:, list(s)], axis=1)
        return out[0] if single else out


def monomial_basis(x) -> np.ndarray:
    """All 31 products of distinct coordinates of a 5-vector."""
    x = np.asarray(x, dtype=float)
    if x.shape != (5,):
        raise InputError(f"monomial_basis expects a length-5 vector, got {x.shape}")
    return FeatureMap("monomial", 5)(x)


def gaussian_kernel(x, x2, rho: float) -> float:
    """``exp(-rho * ||x - x2||^2)``."""
    x = np.asarray(x, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x.shape != x2.shape:
        raise InputError("kernel arguments must have equal shapes")
    if rho <= 0:
        raise InputError("rho must be positive")
    return float(np.exp(-rho * np.sum((x - x2) ** 2)))


def gram_matrix(A, B, rho: float) -> np.ndarray:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise InputError("kernel arguments must have equal dimension")
    return np.exp(-rho * cdist(A, B, "sqeuclidean"))


class LinearPredictor:
    """``f(x) = W phi(x) + intercept``."""

    kind = "linear"

    def __init__(self, W, intercept=None, feature_map: FeatureMap | None = None):
        W = np.array(W, dtype=float, ndmin=2)
        self.feature_map = feature_map or FeatureMap("identity", W.shape[1])
        if W.shape[1] != self.feature_map.output_dim:
            raise InputError("W columns must match the feature map output dimension")
        b = np.zeros(W.shape[0]) if intercept is None else np.array(intercept, dtype=float)
        if b.shape != (W.shape[0],):
            raise InputError("intercept length must equal the output dimension")
        W.setflags(write=False)
        b.setflags(write=False)
        self.W, self.intercept = W, b

    @property
    def input_dim(self) -> int:
        return self.feature_map.input_dim

    @property
    def output_dim(self) -> int:
        return self.W.shape[0]

    def __call__(self, x) -> np.ndarray:
        X, single = _as_batch(x, self.input_dim)
        out = self.feature_map(X) @ self.W.T + self.intercept
        return out[0] if single else out

    def __repr__(self):
        return (
            f"LinearPredictor(d={self.output_dim}, features={self.feature_map.kind}, "
            f"p={self.input_dim})"
        )


class KernelPredictor:
    """``f(x) = sum_i K(x, X_i) A_i`` with the Gaussian kernel."""

    kind = "kernel"

    def __init__(self, support, dual_coefs, rho: float):
        support = np.array(support, dtype=float, ndmin=2)
        A = np.array(dual_coefs, dtype=float, ndmin=2)
        if A.shape[0] != support.shape[0]:
            raise InputError("need one dual-coefficient row per support point")
        if rho <= 0:
            raise InputError("rho must be positive")
        support.setflags(write=False)
        A.setflags(write=False)
        self.support, self.dual_coefs, self.rho = support, A, float(rho)

    @property
    def input_dim(self) -> int:
        return self.support.shape[1]

    @property
    def output_dim(self) -> int:
        return self.dual_coefs.shape[1]

    def __call__(self, x) -> np.ndarray:
        X, single = _as_batch(x, self.input_dim)
        out = gram_matrix(X, self.support, self.rho) @ self.dual_coefs
        return out[0] if single else out

    def __repr__(self):
        return f"KernelPredictor(n={len(self.support)}, d={self.output_dim}, rho={self.rho})"


def predict(predictor, x) -> np.ndarray:
    return predictor(x)


# hypothesis families for the integrated (SPO+) trainer ------------------------


@dataclass(frozen=True)
class LinearFamily:
    feature_map: FeatureMap
    intercept: bool = True


@dataclass(frozen=True)
class KernelFamily:
    rho: float


@dataclass(frozen=True)
class ThresholdFamily:
    """``f_theta(x) = x - theta`` with ``theta in [-1, 1]`` (scalar decisions)."""


def threshold_predictor(theta: float) -> LinearPredictor:
    return LinearPredictor([[1.0]], [-float(theta)])


# serialization ----------------------------------------------------------------
#
# JSON document with a "kind" tag. Matrices are stored as flat row-major lists
# next to their shapes, e.g.
#   {"kind": "linear", "feature_map": "monomial", "input_dim": 5,
#    "output_dim": 40, "W": [...], "intercept": [...]}
#   {"kind": "kernel", "rho": 0.5, "n": 100, "input_dim": 5, "output_dim": 40,
#    "support": [...], "dual_coefs": [...]}


def predictor_to_dict(predictor) -> dict:
    if isinstance(predictor, LinearPredictor):
        return {
            "kind": "linear",
            "feature_map": predictor.feature_map.kind,
            "input_dim": predictor.input_dim,
            "output_dim": predictor.output_dim,
            "W": predictor.W.ravel().tolist(),
            "intercept": predictor.intercept.tolist(),
        }
    if isinstance(predictor, KernelPredictor):
        return {
            "kind": "kernel",
            "rho": predictor.rho,
            "n": len(predictor.support),
            "input_dim": predictor.input_dim,
            "output_dim": predictor.output_dim,
            "support": predictor.support.ravel().tolist(),
            "dual_coefs": predictor.dual_coefs.ravel().tolist(),
        }
    raise InputError(f"cannot serialize {type(predictor).__name__}")


def predictor_from_dict(doc: dict):
    kind = doc.get("kind")
    if kind == "linear":
        fmap = FeatureMap(doc["feature_map"], doc["input_dim"])
        W = np.reshape(doc["W"], (doc["output_dim"], fmap.output_dim))
        return LinearPredictor(W, doc["intercept"], fmap)
    if kind == "kernel":
        support = np.reshape(doc["support"], (doc["n"], doc["input_dim"]))
        A = np.reshape(doc["dual_coefs"], (doc["n"], doc["output_dim"]))
        return KernelPredictor(support, A, doc["rho"])
    raise InputError(f"unknown predictor kind {kind!r}")


def save_predictor(predictor, path) -> None:
    Path(path).write_text(json.dumps(predictor_to_dict(predictor)), encoding="utf-8")


def load_predictor(path):
    return predictor_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
