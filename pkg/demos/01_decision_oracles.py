"""Linear optimization oracles over the three decision sets.

Run with ``python demos/01_decision_oracles.py``.
"""
import numpy as np

from clo_bench import GridDagSet, IntervalSet, SimplexSet, margin_gap, solve_linear

# The interval [-1, 1]: pick -1 when the cost is positive, +1 when negative.
print(solve_linear(IntervalSet(), [0.7]))
# A zero cost makes both endpoints optimal. Ties always go to -1.
print(solve_linear(IntervalSet(), [0.0]))

# On the simplex the oracle picks the cheapest coordinate (lowest index on ties).
print(solve_linear(SimplexSet(4), [0.3, -0.2, -0.2, 1.0]).argmin)

# The 5x5 grid has 40 edges and 70 monotone source-to-sink paths.
grid = GridDagSet(5, 5)
print("edges:", grid.dim, "paths:", len(grid.extreme_points()))

# Right edges are numbered row by row, then down edges column by column.
print("right edge (1, 0) ->", grid.right_edge(1, 0), "  down edge (0, 1) ->", grid.down_edge(0, 1))

# Costs may be negative; the DAG dynamic program does not care.
rng = np.random.default_rng(0)
c = rng.normal(size=grid.dim)
best = grid.solve(c)
print("best path edges:", np.flatnonzero(best.argmin), "cost", round(best.value, 4))

# The margin gap is the distance from the best value to the best value
# achieved by a non-optimal path. It is computed with a two-best DP.
m = margin_gap(grid, c)
print("margin gap", round(m.delta, 6), "optimal paths", m.optima_count)

# Cross-check against brute force enumeration.
print("DP == enumeration:", grid.margin_gap(c) == grid.margin_gap_enumerated(c))

# With all edge costs equal every path is optimal, so the gap is degenerate.
print(margin_gap(grid, np.ones(grid.dim)))
