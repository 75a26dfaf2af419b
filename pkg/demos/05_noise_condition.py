"""How often is the decision nearly tied?

For each x the margin gap measures how far the best decision is from the
runner-up under the true costs. The fraction of x with gap at most delta
behaves like delta^alpha for small delta; alpha controls how much an
end-to-end learner can gain.
"""
import numpy as np

from clo_bench.config import parse_config
from clo_bench.evaluation import profile_from_config

# Scalar example: the gap is 2|x| with x uniform, so P(gap <= delta) = delta / 2.
prof = profile_from_config(parse_config({"experiment": "noise_profile", "dgp": "simple"}))
print("scalar example alpha_hat:", round(prof.alpha_hat, 3))
for d, p in list(zip(prof.deltas, prof.probs))[::6]:
    print(f"  delta={d:.4f}  P={p:.4f}  delta/2={d / 2:.4f}")

# Shortest path with the polynomial truth.
prof = profile_from_config(parse_config({"experiment": "noise_profile", "dgp": "shortest_path", "sample_size": 20000}))
print("shortest path alpha_hat:", round(prof.alpha_hat, 3), "decision radius", round(prof.B, 3))
print("fraction of exactly tied x:", prof.degenerate_fraction)
print("P(gap <= 0.1):", np.interp(0.1, prof.deltas, prof.probs))
