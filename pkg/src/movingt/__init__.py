"""Adaptive method-of-moments estimation of Student-t parameters.

Moving estimators track the location, scale and tail exponent of
heavy-tailed, nonstationary series through exponential moving averages
of absolute central moments; static estimators, a scale MLE and a
GARCH(1,1) baseline accompany them for evaluation.
"""

from .adaptive import (AdaptiveConfig, EmaState, ParamTrajectory, ema_update,
                       fold_backend, run, seed_state_from_prefix, step)
from .baselines import GarchParams, fit_garch_mle, fit_sigma_mle, garch_filter
from .data_io import (GarchScenario, PriceSeries, ReturnSeries, Segment,
                      generate_synthetic, read_csv, to_log_returns)
from .distribution import (NU_GAUSSIAN, StudentTParams, abs_central_moment,
                           cdf, log_pdf, pdf, sample)
from .errors import (DegenerateDataError, DivergentMomentError, DomainError,
                     MonotonicityError, MovingTError, NonConvergenceError,
                     ParseError, SeriesTooShortError)
from .evaluation import (SweepReport, TailTable, expected_tail_fraction,
                         mean_log_likelihood, nu_sweep,
                         sigma_power_error_sweep, tail_table)
from .special_math import (QuadratureResult, integrate_adaptive, log_gamma,
                           regularized_incomplete_beta)
from .static_estimators import (MomentSummary, NuInversionTable,
                                build_nu_table, compute_moments,
                                estimate_nu_adjusted, estimate_nu_raw,
                                estimate_sigma)

__version__ = "0.1.0"

__all__ = [
    "AdaptiveConfig", "EmaState", "ParamTrajectory", "ema_update",
    "fold_backend", "run", "seed_state_from_prefix", "step",
    "GarchParams", "fit_garch_mle", "fit_sigma_mle", "garch_filter",
    "GarchScenario", "PriceSeries", "ReturnSeries", "Segment",
    "generate_synthetic", "read_csv", "to_log_returns",
    "NU_GAUSSIAN", "StudentTParams", "abs_central_moment", "cdf",
    "log_pdf", "pdf", "sample",
    "DegenerateDataError", "DivergentMomentError", "DomainError",
    "MonotonicityError", "MovingTError", "NonConvergenceError",
    "ParseError", "SeriesTooShortError",
    "SweepReport", "TailTable", "expected_tail_fraction",
    "mean_log_likelihood", "nu_sweep", "sigma_power_error_sweep",
    "tail_table",
    "QuadratureResult", "integrate_adaptive", "log_gamma",
    "regularized_incomplete_beta",
    "MomentSummary", "NuInversionTable", "build_nu_table",
    "compute_moments", "estimate_nu_adjusted", "estimate_nu_raw",
    "estimate_sigma",
    "__version__",
]
