"""Closed-form regrets for the scalar threshold example."""
from __future__ import annotations

import math

from ..errors import InputError


def threshold_regret(theta: float) -> float:
    """Expected regret ``theta**2 / 2`` of the policy ``2 * 1{x <= theta} - 1``."""
    return 0.5 * theta * theta


def eto_regret_exact_simple(n: int, sigma2: float) -> float:
    """Regret of least-squares plug-in on the threshold example: ``sigma2 / (2n)``."""
    if n < 1:
        raise InputError("n must be positive")
    if sigma2 < 0:
        raise InputError("sigma2 must be nonnegative")
    return sigma2 / (2.0 * n)


def ierm_regret_exact_noiseless(n: int) -> float:
    """Regret of left-endpoint IERM on the threshold example when ``sigma2 = 0``."""
    if n < 1:
        raise InputError("n must be positive")
    return (4.0 - math.ldexp(3.0 + n, -n)) / ((n + 1.0) * (n + 2.0))
