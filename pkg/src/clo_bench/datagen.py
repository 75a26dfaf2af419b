"""Data-generating processes for the two benchmark problems.

``SimpleDgp``
    Scalar decisions on ``[-1, 1]``: ``X ~ Unif[-1, 1]``, ``Y = X + sigma * eps``.
``ShortestPathDgp``
    Costs on the 40 edges of a 5x5 grid: ``X ~ N(0, I_5)``,
    ``Y = eps * (W phi(X) + 3)`` with multiplicative ``eps ~ Unif[3/4, 5/4]^40``
    and ``phi`` the 31 monomials of distinct coordinates.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .models import FeatureMap
from .rng import COEFFICIENTS, RngStream

DEFAULT_COEF_SEED = 10


@dataclass(frozen=True)
class Dataset:
    xs: np.ndarray
    ys: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        xs = np.array(self.xs, dtype=float, ndmin=2)
        ys = np.array(self.ys, dtype=float, ndmin=2)
        if xs.shape[0] != ys.shape[0]:
            raise InputError("xs and ys must have the same number of rows")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise InputError("dataset contains non-finite values")
        xs.setflags(write=False)
        ys.setflags(write=False)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    def __len__(self):
        return self.xs.shape[0]

    @property
    def p(self) -> int:
        return self.xs.shape[1]

    @property
    def d(self) -> int:
        return self.ys.shape[1]


@dataclass(frozen=True)
class SimpleDgp:
    sigma2: float = 1.0
    p = 1
    d = 1

    def __post_init__(self):
        if not self.sigma2 >= 0:
            raise InputError("sigma2 must be nonnegative")

    def truth(self, x):
        return np.asarray(x, dtype=float).copy()

    def sample_x(self, n: int, stream: RngStream) -> np.ndarray:
        return stream.uniform(-1.0, 1.0, size=(n, 1))

    def generate(self, n: int, stream: RngStream) -> Dataset:
        return gen_simple(n, self, stream)


def gen_simple(n: int, dgp: SimpleDgp, stream: RngStream) -> Dataset:
    if n < 1:
        raise InputError("n must be positive")
    x = dgp.sample_x(n, stream)
    eps = stream.normal(size=(n, 1))
    y = x + np.sqrt(dgp.sigma2) * eps
    return Dataset(x, y, stream.seed_int)


def make_coefficient_matrix(seed: int = DEFAULT_COEF_SEED, d: int = 40, p_out: int = 31) -> np.ndarray:
    """Fixed ``d x p_out`` matrix with iid ``Unif[0, 1]`` entries."""
    return RngStream(seed, (COEFFICIENTS,)).uniform(0.0, 1.0, size=(d, p_out))


_SP_FEATURES = FeatureMap("monomial", 5)


def true_regression_sp(x, W) -> np.ndarray:
    """``W phi(x) + 3`` for a single ``x`` or a batch of rows."""
    W = np.asarray(W, dtype=float)
    return _SP_FEATURES(x) @ W.T + 3.0


@dataclass(frozen=True)
class ShortestPathDgp:
    W: np.ndarray = field(default_factory=make_coefficient_matrix)
    p = 5

    def __post_init__(self):
        W = np.array(self.W, dtype=float)
        if W.ndim != 2 or W.shape[1] != 2**self.p - 1:
            raise InputError(f"W must have {2**self.p - 1} columns")
        W.setflags(write=False)
        object.__setattr__(self, "W", W)

    @property
    def d(self) -> int:
        return self.W.shape[0]

    def truth(self, x):
        return true_regression_sp(x, self.W)

    def sample_x(self, n: int, stream: RngStream) -> np.ndarray:
        return stream.normal(size=(n, self.p))

    def generate(self, n: int, stream: RngStream) -> Dataset:
        return gen_shortest_path(n, self, stream)


def gen_shortest_path(n: int, dgp: ShortestPathDgp, stream: RngStream) -> Dataset:
    if n < 1:
        raise InputError("n must be positive")
    x = dgp.sample_x(n, stream)
    eps = stream.uniform(0.75, 1.25, size=(n, dgp.d))
    return Dataset(x, eps * dgp.truth(x), stream.seed_int)


# CSV dump/load ------------------------------------------------------------------


def dataset_to_csv(data: Dataset, path) -> None:
    """Columns ``x_1..x_p, y_1..y_d``; floats written with 17 significant digits."""
    header = [f"x_{j + 1}" for j in range(data.p)] + [f"y_{j + 1}" for j in range(data.d)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in np.hstack([data.xs, data.ys]):
            w.writerow([f"{v:.17g}" for v in row])


def dataset_from_csv(path, seed: int | None = None) -> Dataset:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    xcols = [i for i, h in enumerate(header) if h.startswith("x_")]
    ycols = [i for i, h in enumerate(header) if h.startswith("y_")]
    if not xcols or not ycols or len(xcols) + len(ycols) != len(header):
        raise InputError(f"{path}: expected columns x_1..x_p, y_1..y_d")
    arr = np.array(body, dtype=float).reshape(len(body), len(header))
    return Dataset(arr[:, xcols], arr[:, ycols], seed)

