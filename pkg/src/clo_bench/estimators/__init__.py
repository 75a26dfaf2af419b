from .ierm import fit_ierm_threshold, ierm_threshold_objective
from .local_poly import LocalPolyConfig, local_polynomial_fit, strict_floor
from .ridge import (
    ThresholdClassFit,
    fit_kernel_ridge,
    fit_least_squares_ridge,
    fit_threshold_least_squares,
)
from .spo import (
    SgdConfig,
    fit_spo_plus_sgd,
    spo_plus_loss,
    spo_plus_loss_batch,
    spo_plus_objective,
    spo_plus_subgradient,
)
