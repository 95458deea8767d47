"""CMA-ES with low-effective-dimensionality countermeasures, IPOP restarts,
and a reproducible benchmark harness."""

from .cmaes import (
    CSA,
    TPA,
    DistributionState,
    Population,
    StrategyParams,
    default_lambda,
    default_params,
)
from .engine import CmaEs, IterationStats
from .harness import (
    ExperimentConfig,
    ExperimentSummary,
    TrialRecord,
    emit_csv,
    run_experiment,
    run_trial,
    run_trials,
    summarize,
)
from .led import LedEstimator, adapt_hyperparameters, sigmoid_gain, snr_threshold
from .linalg import EigenPair, sym_eigen
from .objective import (
    BudgetExhausted,
    ConfigurationError,
    IntrinsicFunction,
    LedProblem,
    led_wrap,
    make_intrinsic,
    random_rotation,
)
from .restart import RunResult, RunSettings, StopConfig, check_stop, ipop_run, run_single
from .stepsize import Csa, EffectiveCsa, EffectiveTpa, Tpa, expected_norm

__version__ = "0.1.0"

__all__ = [
    "BudgetExhausted",
    "CSA",
    "CmaEs",
    "ConfigurationError",
    "Csa",
    "DistributionState",
    "EffectiveCsa",
    "EffectiveTpa",
    "EigenPair",
    "ExperimentConfig",
    "ExperimentSummary",
    "IntrinsicFunction",
    "IterationStats",
    "LedEstimator",
    "LedProblem",
    "Population",
    "RunResult",
    "RunSettings",
    "StopConfig",
    "StrategyParams",
    "TPA",
    "Tpa",
    "TrialRecord",
    "adapt_hyperparameters",
    "check_stop",
    "default_lambda",
    "default_params",
    "emit_csv",
    "expected_norm",
    "ipop_run",
    "led_wrap",
    "make_intrinsic",
    "random_rotation",
    "run_experiment",
    "run_single",
    "run_trial",
    "run_trials",
    "sigmoid_gain",
    "snr_threshold",
    "summarize",
    "sym_eigen",
]
