from .closed_form import eto_regret_exact_simple, ierm_regret_exact_noiseless, threshold_regret
from .harness import (
    RegretReport,
    reports_from_csv,
    reports_to_csv,
    run_replications,
    run_task,
    profile_from_config,
    summarize,
)
from .noise import NoiseProfile, noise_profile
from .regret import RegretEstimate, ThresholdGridEvaluator, dense_grid, policy_regret
from .slopes import SlopeFit, fit_loglog_slope
from .validation import ValidationResult, select_hyperparams
