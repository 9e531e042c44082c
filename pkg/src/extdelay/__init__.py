"""Time-delay estimation under a k-bit communication budget.

A simulation library for the extremum-coding scheme: the encoder sends only
the k-bit index of its block maximum, and the decoder estimates the delay
from its own samples around that index. Includes the unconstrained
cross-correlator and two equal-budget compression benchmarks, closed-form
error bounds, and a seeded Monte Carlo harness with an error-exponent fit.
"""

from .model import (
    CorrelationModel,
    DelaySpec,
    TrialData,
    generate_trial,
    model_from_rho,
    model_from_sensor_noise,
    sample_delay,
    snr_db_to_model,
)
from .codec import ExtremumMessage, decode_index, encode_max_index
from .estimators import (
    CorrelationProfile,
    OpCounter,
    RdCompressedSignal,
    cross_correlate,
    mie_estimate,
    mle_estimate,
    onebit_estimate,
    rd_compress,
    rd_estimate,
    rho_hat_mie,
    sign_quantize,
)
from .bounds import (
    BoundReport,
    bound_report,
    concentration_threshold,
    error_exponent,
    expected_max,
    log2_lower_bound,
    log2_upper_bound,
    lower_bound,
    max_lower_tail_bound,
    max_lower_tail_exact,
    mie_variance_asymptotic,
    q_function,
    q_lower_gordon,
    q_upper_chernoff,
    run_deterministic_checks,
    upper_bound,
)
from .harness import (
    CSV_HEADER,
    ESTIMATORS,
    ExperimentConfig,
    ExponentFit,
    ResultRow,
    budget_bits,
    fit_exponent,
    format_fit,
    load_results,
    persist_results,
    run_experiment,
    run_trial,
    wilson_interval,
)

__version__ = "0.1.0"

__all__ = [
    "CorrelationModel", "DelaySpec", "TrialData", "generate_trial",
    "model_from_rho", "model_from_sensor_noise", "sample_delay", "snr_db_to_model",
    "ExtremumMessage", "decode_index", "encode_max_index",
    "CorrelationProfile", "OpCounter", "RdCompressedSignal", "cross_correlate",
    "mie_estimate", "mle_estimate", "onebit_estimate", "rd_compress",
    "rd_estimate", "rho_hat_mie", "sign_quantize",
    "BoundReport", "bound_report", "concentration_threshold", "error_exponent",
    "expected_max", "log2_lower_bound", "log2_upper_bound", "lower_bound",
    "max_lower_tail_bound", "max_lower_tail_exact", "mie_variance_asymptotic",
    "q_function", "q_lower_gordon", "q_upper_chernoff",
    "run_deterministic_checks", "upper_bound",
    "CSV_HEADER", "ESTIMATORS",
    "ExperimentConfig", "ExponentFit", "ResultRow", "budget_bits", "fit_exponent",
    "format_fit", "load_results", "persist_results", "run_experiment", "run_trial",
    "wilson_interval",
]
