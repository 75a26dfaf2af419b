"""Polytope decision sets with exact linear-minimization oracles.

Three sets are provided: the interval ``[-1, 1]``, the probability simplex,
and the set of s-t path flows on a directed grid. Every oracle returns an
extreme point, and ties are broken by a fixed order over the extreme points:

* interval: ``-1`` before ``+1``;
* simplex: lowest coordinate index first;
* grid: lexicographically smallest sequence of edge indices along the path.

Two costs are "tied" when their objective values differ by at most
``tie_tol * max(1, max|c|)``.

Grid edge layout
----------------
Nodes are ``(row, col)`` with the source at ``(0, 0)`` (top-left) and the
sink at ``(height-1, width-1)`` (bottom-right). Rightward edges
``(r, c) -> (r, c+1)`` come first, indexed row-major (top row first):
``r * (width-1) + c``. Downward edges ``(r, c) -> (r+1, c)`` follow, indexed
column-major: ``height * (width-1) + c * (height-1) + r``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import CapacityError, InputError

TIE_TOL = 1e-9
ENUMERATION_CAP = 10**6
# batched oracles use the vertex table below this many extreme points
TABLE_LIMIT = 5000


@dataclass(frozen=True)
class OracleResult:
    argmin: np.ndarray
    value: float
    tie: bool


@dataclass(frozen=True)
class MarginGap:
    """Gap between the optimal value and the best non-optimal extreme point.

    ``degenerate`` is set when every extreme point is optimal, in which case
    ``delta`` is 0.
    """

    delta: float
    optima_count: int
    degenerate: bool = False


def _check_cost(c, dim: int) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if c.ndim != 1 or c.shape[0] != dim:
        raise InputError(f"cost vector must have shape ({dim},), got {c.shape}")
    if not np.all(np.isfinite(c)):
        raise InputError("cost vector has non-finite entries")
    return c


def _check_costs(C, dim: int) -> np.ndarray:
    C = np.asarray(C, dtype=float)
    if C.ndim == 1:
        C = C[None, :]
    if C.ndim != 2 or C.shape[1] != dim:
        raise InputError(f"cost matrix must have {dim} columns, got shape {C.shape}")
    if not np.all(np.isfinite(C)):
        raise InputError("cost matrix has non-finite entries")
    return C


def _tol(c: np.ndarray, tie_tol: float):
    return tie_tol * np.maximum(1.0, np.max(np.abs(c), axis=-1))


class DecisionSet:
    """Base class. Subclasses define ``dim``, ``n_extreme_points`` and
    ``_enumerate`` (extreme points in tie-break order)."""

    dim: int

    @property
    def n_extreme_points(self) -> int:
        raise NotImplementedError

    def _enumerate(self) -> np.ndarray:
        raise NotImplementedError

    def extreme_points(self, cap: int = ENUMERATION_CAP) -> np.ndarray:
        if self.n_extreme_points > cap:
            raise CapacityError(
                f"{self!r} has {self.n_extreme_points} extreme points (cap {cap})"
            )
        return self._vertices

    @cached_property
    def _vertices(self) -> np.ndarray:
        V = self._enumerate()
        V.setflags(write=False)
        return V

    def is_extreme_point(self, z) -> bool:
        z = np.asarray(z, dtype=float)
        if z.shape != (self.dim,):
            return False
        return bool(np.any(np.all(np.abs(self._vertices - z) <= 1e-12, axis=1)))

    # single-cost oracles ------------------------------------------------
    def solve(self, c, tie_tol: float = TIE_TOL) -> OracleResult:
        c = _check_cost(c, self.dim)
        V = self._vertices
        vals = V @ c
        m = vals.min()
        within = vals <= m + _tol(c, tie_tol)
        i = int(np.argmax(within))
        z = V[i].copy()
        return OracleResult(z, _value(c, z), bool(within.sum() > 1))

    def margin_gap(self, c, tie_tol: float = TIE_TOL) -> MarginGap:
        c = _check_cost(c, self.dim)
        V = self._vertices
        vals = V @ c
        m = vals.min()
        within = vals <= m + _tol(c, tie_tol)
        count = int(within.sum())
        if count == vals.size:
            return MarginGap(0.0, count, True)
        j1 = int(np.argmin(vals))
        j2 = int(np.argmin(np.where(within, np.inf, vals)))
        return MarginGap(_value(c, V[j2]) - _value(c, V[j1]), count)

    # batched oracles -------------------------------------------------------
    def solve_batch(self, C, tie_tol: float = TIE_TOL) -> np.ndarray:
        """Argmin extreme points for each row of ``C``; shape ``(m, dim)``."""
        C = _check_costs(C, self.dim)
        V = self._vertices
        vals = C @ V.T
        m = vals.min(axis=1, keepdims=True)
        within = vals <= m + _tol(C, tie_tol)[:, None]
        return V[np.argmax(within, axis=1)]

    def margin_gap_batch(self, C, tie_tol: float = TIE_TOL):
        """Vectorized :meth:`margin_gap`: returns ``(delta, count, degenerate)`` arrays."""
        C = _check_costs(C, self.dim)
        vals = C @ self._vertices.T
        m = vals.min(axis=1, keepdims=True)
        within = vals <= m + _tol(C, tie_tol)[:, None]
        count = within.sum(axis=1)
        degenerate = count == vals.shape[1]
        above = np.where(within, np.inf, vals).min(axis=1)
        delta = np.where(degenerate, 0.0, above - m[:, 0])
        return delta, count, degenerate


def _value(c: np.ndarray, z: np.ndarray) -> float:
    # exactly rounded, so the value does not depend on summation order
    return math.fsum(c * z)


class IntervalSet(DecisionSet):
    """``Z = [-1, 1]``."""

    dim = 1

    @property
    def n_extreme_points(self) -> int:
        return 2

    def _enumerate(self):
        return np.array([[-1.0], [1.0]])

    def __repr__(self):
        return "IntervalSet()"

    def __eq__(self, other):
        return isinstance(other, IntervalSet)

    def __hash__(self):
        return hash("interval")


class SimplexSet(DecisionSet):
    """Probability simplex in ``R^K``."""

    def __init__(self, K: int):
        if K < 1:
            raise InputError("simplex dimension must be positive")
        self.K = self.dim = int(K)

    @property
    def n_extreme_points(self) -> int:
        return self.K

    def _enumerate(self):
        return np.eye(self.K)

    def __repr__(self):
        return f"SimplexSet(K={self.K})"

    def __eq__(self, other):
        return isinstance(other, SimplexSet) and other.K == self.K

    def __hash__(self):
        return hash(("simplex", self.K))


class GridDagSet(DecisionSet):
    """Unit-flow s-t paths on a ``height x width`` grid with right/down edges."""

    def __init__(self, width: int = 5, height: int = 5):
        if width < 1 or height < 1:
            raise InputError("grid dimensions must be positive")
        if width == 1 and height == 1:
            raise InputError("grid must have at least one edge")
        self.width = int(width)
        self.height = int(height)
        self.n_right = self.height * (self.width - 1)
        self.dim = self.n_right + self.width * (self.height - 1)
        self.path_length = (self.width - 1) + (self.height - 1)
        # out[(r, c)] = [(edge index, (r', c')), ...] sorted by edge index
        self._out = {}
        for r in range(self.height):
            for c in range(self.width):
                edges = []
                if c + 1 < self.width:
                    edges.append((self.right_edge(r, c), (r, c + 1)))
                if r + 1 < self.height:
                    edges.append((self.down_edge(r, c), (r + 1, c)))
                self._out[(r, c)] = edges
        self.source = (0, 0)
        self.sink = (self.height - 1, self.width - 1)

    def right_edge(self, r: int, c: int) -> int:
        return r * (self.width - 1) + c

    def down_edge(self, r: int, c: int) -> int:
        return self.n_right + c * (self.height - 1) + r

    @property
    def n_extreme_points(self) -> int:
        return math.comb(self.path_length, self.height - 1)

    def __repr__(self):
        return f"GridDagSet(width={self.width}, height={self.height})"

    def __eq__(self, other):
        return (
            isinstance(other, GridDagSet)
            and other.width == self.width
            and other.height == self.height
        )

    def __hash__(self):
        return hash(("grid", self.width, self.height))

    def _reverse_topological(self):
        for r in range(self.height - 1, -1, -1):
            for c in range(self.width - 1, -1, -1):
                yield (r, c)

    def _enumerate(self):
        # depth-first with edges taken in index order yields lexicographic order
        paths = []
        stack = []

        def walk(node):
            if node == self.sink:
                z = np.zeros(self.dim)
                z[stack] = 1.0
                paths.append(z)
                return
            for e, nxt in self._out[node]:
                stack.append(e)
                walk(nxt)
                stack.pop()

        walk(self.source)
        return np.array(paths)

    def is_extreme_point(self, z) -> bool:
        z = np.asarray(z, dtype=float)
        if z.shape != (self.dim,) or not np.all((z == 0) | (z == 1)):
            return False
        node, used = self.source, 0
        while node != self.sink:
            nxt = [v for e, v in self._out[node] if z[e] == 1]
            if len(nxt) != 1:
                return False
            node, used = nxt[0], used + 1
        return used == int(z.sum())

    # dynamic programs --------------------------------------------------------
    def _two_best(self, c: np.ndarray, tol: float):
        """Cost-to-go DP keeping, per node, the best value, the number of
        paths within ``tol`` of it, and the best value beyond that band.

        ``link[u]`` records where each of the two values came from:
        ``(edge, next node, which value at the next node)``.
        """
        best, count, second = {self.sink: 0.0}, {self.sink: 1}, {self.sink: np.inf}
        link = {}
        for u in self._reverse_topological():
            if u == self.sink:
                continue
            firsts = [(c[e] + best[v], count[v], e, v) for e, v in self._out[u]]
            b, _, e1, v1 = min(firsts, key=lambda f: f[0])
            band = b + tol
            count[u] = sum(k for f, k, _, _ in firsts if f <= band)
            cands = [(f, e, v, 0) for f, _, e, v in firsts if f > band]
            cands += [(c[e] + second[v], e, v, 1) for e, v in self._out[u]]
            cands = [x for x in cands if x[0] > band]
            best[u] = b
            first_link = (e1, v1, 0)
            if cands:
                f2, e2, v2, k2 = min(cands, key=lambda x: x[0])
                second[u], link[u] = f2, (first_link, (e2, v2, k2))
            else:
                second[u], link[u] = np.inf, (first_link, None)
        return best, count, second, link

    def _follow(self, link: dict, which: int) -> np.ndarray:
        z = np.zeros(self.dim)
        node = self.source
        while node != self.sink:
            e, node, which = link[node][which]
            z[e] = 1.0
        return z

    def _trace(self, c: np.ndarray, best: dict, tol: float) -> np.ndarray:
        # greedy in edge-index order under the global threshold reproduces the
        # lexicographically first near-optimal path
        threshold = best[self.source] + tol
        z = np.zeros(self.dim)
        node, spent = self.source, 0.0
        while node != self.sink:
            for e, v in self._out[node]:
                if spent + c[e] + best[v] <= threshold:
                    z[e] = 1.0
                    spent += c[e]
                    node = v
                    break
            else:  # pragma: no cover - unreachable for tol > 0
                raise RuntimeError("path reconstruction failed")
        return z

    def solve(self, c, tie_tol: float = TIE_TOL) -> OracleResult:
        c = _check_cost(c, self.dim)
        tol = float(_tol(c, tie_tol))
        best, count, _, _ = self._two_best(c, tol)
        z = self._trace(c, best, tol)
        return OracleResult(z, _value(c, z), count[self.source] > 1)

    def margin_gap(self, c, tie_tol: float = TIE_TOL) -> MarginGap:
        c = _check_cost(c, self.dim)
        tol = float(_tol(c, tie_tol))
        best, count, second, link = self._two_best(c, tol)
        s = self.source
        if np.isinf(second[s]):
            return MarginGap(0.0, count[s], True)
        z1, z2 = self._follow(link, 0), self._follow(link, 1)
        return MarginGap(_value(c, z2) - _value(c, z1), count[s])

    def solve_batch(self, C, tie_tol: float = TIE_TOL) -> np.ndarray:
        if self.n_extreme_points <= TABLE_LIMIT:
            return super().solve_batch(C, tie_tol)
        C = _check_costs(C, self.dim)
        return np.array([self.solve(c, tie_tol).argmin for c in C])

    def margin_gap_batch(self, C, tie_tol: float = TIE_TOL):
        if self.n_extreme_points <= TABLE_LIMIT:
            return super().margin_gap_batch(C, tie_tol)
        C = _check_costs(C, self.dim)
        gaps = [self.margin_gap(c, tie_tol) for c in C]
        return (
            np.array([g.delta for g in gaps]),
            np.array([g.optima_count for g in gaps]),
            np.array([g.degenerate for g in gaps]),
        )

    def margin_gap_enumerated(self, c, tie_tol: float = TIE_TOL) -> MarginGap:
        """Margin gap by brute force over all paths (oracle for the DP)."""
        return DecisionSet.margin_gap(self, c, tie_tol)

    def solve_enumerated(self, c, tie_tol: float = TIE_TOL) -> OracleResult:
        """Linear minimization by brute force over all paths."""
        return DecisionSet.solve(self, c, tie_tol)


# functional interface -------------------------------------------------------


def solve_linear(dset: DecisionSet, c, tie_tol: float = TIE_TOL) -> OracleResult:
    return dset.solve(c, tie_tol)


def enumerate_extreme_points(dset: DecisionSet, cap: int = ENUMERATION_CAP) -> np.ndarray:
    return dset.extreme_points(cap)


def margin_gap(dset: DecisionSet, c, tie_tol: float = TIE_TOL) -> MarginGap:
    if tie_tol <= 0:
        raise InputError("tie_tol must be positive")
    return dset.margin_gap(c, tie_tol)


def decision_radius(dset: DecisionSet, cap: int = ENUMERATION_CAP) -> float:
    """Largest Euclidean norm over the extreme points."""
    return float(np.linalg.norm(dset.extreme_points(cap), axis=1).max())
