"""Estimate-then-optimize versus integrated learning for contextual linear optimization."""

__version__ = "0.1.0"

from .datagen import (
    Dataset,
    ShortestPathDgp,
    SimpleDgp,
    gen_shortest_path,
    gen_simple,
    make_coefficient_matrix,
    true_regression_sp,
)
from .decision_sets import (
    GridDagSet,
    IntervalSet,
    MarginGap,
    OracleResult,
    SimplexSet,
    decision_radius,
    enumerate_extreme_points,
    margin_gap,
    solve_linear,
)
from .errors import CapacityError, ConfigError, InputError, NumericalError
from .models import (
    FeatureMap,
    KernelFamily,
    KernelPredictor,
    LinearFamily,
    LinearPredictor,
    ThresholdFamily,
    gaussian_kernel,
    monomial_basis,
    predict,
)
from .rng import RngStream
