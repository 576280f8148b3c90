"""Online learners for L-natural convex losses."""

from .experiment import initial_point, resolve_step_sizes, run_experiment
from .learners import bandit_estimate, bandit_step, full_info_step, sampling_probabilities
from .params import (
    BanditParameters,
    bandit_regret_bound,
    full_info_regret_bound,
    theoretical_bandit_params,
    theoretical_eta,
)
from .types import (
    Algorithm,
    InvalidParameterError,
    LearnerState,
    RegretTrace,
    RoundOutcome,
    RoundRecord,
)

__all__ = [
    "Algorithm",
    "BanditParameters",
    "InvalidParameterError",
    "LearnerState",
    "RegretTrace",
    "RoundOutcome",
    "RoundRecord",
    "bandit_estimate",
    "bandit_regret_bound",
    "bandit_step",
    "full_info_regret_bound",
    "full_info_step",
    "initial_point",
    "resolve_step_sizes",
    "run_experiment",
    "sampling_probabilities",
    "theoretical_bandit_params",
    "theoretical_eta",
]
