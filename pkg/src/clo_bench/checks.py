"""Self-test comparing the grid shortest-path DP against path enumeration."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .decision_sets import GridDagSet
from .rng import RngStream


@dataclass
class OracleCheckResult:
    comparisons: int = 0
    mismatches: int = 0
    grids: list = field(default_factory=list)
    failures: list = field(default_factory=list)  # (width, height, trial, what)

    @property
    def passed(self) -> bool:
        return self.mismatches == 0


def oracle_check(max_side: int = 4, trials: int = 200, seed: int = 0) -> OracleCheckResult:
    """Compare value, argmin and margin gap of the DP with enumeration.

    Every grid with both sides at most ``max_side`` (and more than one node)
    gets ``trials`` Gaussian cost vectors plus ``trials // 4`` small-integer
    cost vectors, which exercise exact ties.
    """
    out = OracleCheckResult()
    stream = RngStream(seed)
    for w in range(1, max_side + 1):
        for h in range(1, max_side + 1):
            if w * h == 1:
                continue
            g = GridDagSet(w, h)
            out.grids.append((w, h))
            s = stream.child(w, h)
            costs = np.vstack([
                s.normal(size=(trials, g.dim)),
                np.floor(s.uniform(-2, 3, size=(trials // 4, g.dim))),
            ])
            for k, c in enumerate(costs):
                a, b = g.solve(c), g.solve_enumerated(c)
                checks = {
                    "value": a.value == b.value,
                    "argmin": np.array_equal(a.argmin, b.argmin),
                    "tie": a.tie == b.tie,
                    "margin": g.margin_gap(c) == g.margin_gap_enumerated(c),
                }
                out.comparisons += 1
                bad = [name for name, ok in checks.items() if not ok]
                if bad:
                    out.mismatches += 1
                    out.failures.append((w, h, k, ",".join(bad)))
    return out
