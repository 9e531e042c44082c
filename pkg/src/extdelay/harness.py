"""Seeded Monte Carlo experiment runner.

Sweeps message sizes and estimators, counts delay-estimation errors, and
aggregates them into rows with Wilson confidence intervals. Every trial
draws its randomness from an independent stream keyed by
(master_seed, k, trial_index), so results are bit-identical no matter how
trials are scheduled or how many workers run them.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import csv
import math

import numpy as np

from .bounds import error_exponent
from .codec import decode_index, encode_max_index
from .estimators import (
    mie_estimate,
    mle_estimate,
    onebit_estimate,
    rd_compress,
    rd_estimate,
    sign_quantize,
)
from .model import DelaySpec, generate_trial, sample_delay, snr_db_to_model

__all__ = [
    "ESTIMATORS",
    "ExperimentConfig",
    "ResultRow",
    "ExponentFit",
    "wilson_interval",
    "budget_bits",
    "run_trial",
    "run_experiment",
    "fit_exponent",
    "format_fit",
    "persist_results",
    "load_results",
    "CSV_HEADER",
]

ESTIMATORS = ("mie", "mle", "onebit", "rd")

CSV_HEADER = [
    "estimator", "k", "n_samples", "rho", "snr_db", "d_max",
    "trials", "errors", "p_err", "ci_low", "ci_high", "master_seed",
]

# two-sided 95% normal quantile, frozen so intervals are reproducible
WILSON_Z = 1.959963984540054


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: a set of message sizes crossed with a set of estimators.

    n_samples overrides the default block length 2^k (it must still be
    representable in k bits). workers > 1 runs trial blocks in parallel
    processes; the result is identical to the serial run.
    """

    snr_db: float
    d_max: int
    k_values: tuple
    estimators: tuple = ("mie",)
    rd_rate: float = 1.0
    trials: int = 1000
    master_seed: int = 0
    output_path: str | None = None
    n_samples: int | None = None
    workers: int = 1

    def __post_init__(self):
        ks = tuple(int(k) for k in self.k_values)
        object.__setattr__(self, "k_values", ks)
        if not ks:
            raise ValueError("k_values must be nonempty")
        if any(k < 1 for k in ks):
            raise ValueError("k values must be >= 1")
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise ValueError("k_values must be strictly increasing")
        ests = tuple(self.estimators)
        if not ests:
            raise ValueError("estimators must be nonempty")
        unknown = [e for e in ests if e not in ESTIMATORS]
        if unknown:
            raise ValueError(f"unknown estimators {unknown}; choose from {ESTIMATORS}")
        if len(set(ests)) != len(ests):
            raise ValueError("duplicate estimator tags")
        # canonical order keeps output rows stable
        object.__setattr__(
            self, "estimators", tuple(e for e in ESTIMATORS if e in ests)
        )
        if self.trials < 100:
            raise ValueError("trials must be >= 100")
        if not (0 <= self.master_seed < 2**64):
            raise ValueError("master_seed must fit in 64 unsigned bits")
        if self.d_max < 0:
            raise ValueError("d_max must be nonnegative")
        if self.rd_rate <= 0:
            raise ValueError("rd_rate must be positive")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        for k in ks:
            n = self.block_length(k)
            if n < 1:
                raise ValueError("n_samples must be >= 1")
            if n > 2**k:
                raise ValueError(f"n_samples {n} not representable in k={k} bits")
            if "onebit" in self.estimators and k > n:
                raise ValueError(f"onebit needs k <= n_samples, got k={k}, n={n}")
            if "rd" in self.estimators:
                n_rd = k / self.rd_rate
                if abs(n_rd - round(n_rd)) > 1e-9 or round(n_rd) < 1:
                    raise ValueError(
                        f"rd budget k={k} not an integer number of samples "
                        f"at rate {self.rd_rate}"
                    )
                if round(n_rd) > n:
                    raise ValueError(f"rd block {round(n_rd)} exceeds n_samples {n}")

    def block_length(self, k: int) -> int:
        return int(self.n_samples) if self.n_samples is not None else 2**k


def budget_bits(estimator: str, k: int, rd_rate: float = 1.0):
    """Communication bits one trial consumes: k for every constrained
    estimator, None for the unconstrained baseline."""
    if estimator == "mie":
        return k  # one k-bit message
    if estimator == "onebit":
        return k  # k sign bits
    if estimator == "rd":
        n_rd = k / rd_rate
        if abs(n_rd - round(n_rd)) > 1e-9:
            raise ValueError("budget not an integer number of samples")
        return int(round(round(n_rd) * rd_rate))
    if estimator == "mle":
        return None
    raise ValueError(f"unknown estimator {estimator!r}")


def _trial_result(model, dspec, k, n, estimators, rd_rate, master_seed, trial_index,
                  want_detail=False):
    """Flags (and optional detail) for one trial; all estimators see the
    same realization. rd draws its compression noise after the trial, so
    adding or removing other estimators never shifts the stream."""
    rng = np.random.default_rng((master_seed, k, trial_index))
    d = sample_delay(dspec, rng)
    trial = generate_trial(model, dspec, n, d, rng)
    xv = trial.encoder_view()
    dm = dspec.d_max
    flags = {}
    detail = {"trial": trial_index, "k": k, "d": d} if want_detail else None
    for est in estimators:
        if est == "mie":
            msg = encode_max_index(xv, k)
            j = decode_index(msg)
            d_hat = mie_estimate(trial.y, j, dm, y_offset=trial.y_offset)
            if want_detail:
                detail["bits"] = msg.bits
                detail["J"] = j
        elif est == "mle":
            d_hat = mle_estimate(xv, trial.y, dm)
        elif est == "onebit":
            signs = sign_quantize(xv[:k])
            d_hat = onebit_estimate(signs, trial.y[: k + 2 * dm], dm)
        elif est == "rd":
            n_rd = int(round(k / rd_rate))
            compressed = rd_compress(xv[:n_rd], rd_rate, rng)
            d_hat = rd_estimate(compressed, trial.y[: n_rd + 2 * dm], dm)
        else:
            raise ValueError(f"unknown estimator {est!r}")
        flags[est] = d_hat == d
        if want_detail:
            detail[est] = d_hat
    return flags, detail


def run_trial(config: ExperimentConfig, k: int, trial_index: int) -> dict:
    """Correctness flags {estimator: bool} for a single trial."""
    model = snr_db_to_model(config.snr_db)
    dspec = DelaySpec(config.d_max)
    try:
        flags, _ = _trial_result(
            model, dspec, int(k), config.block_length(int(k)),
            config.estimators, config.rd_rate, config.master_seed, int(trial_index),
        )
    except Exception as exc:
        raise RuntimeError(f"trial {trial_index} (k={k}) failed: {exc}") from exc
    return flags


def _count_block(payload):
    """Error counts for a contiguous block of trial indices (worker task)."""
    snr_db, d_max, k, n, estimators, rd_rate, master_seed, start, stop = payload
    model = snr_db_to_model(snr_db)
    dspec = DelaySpec(d_max)
    counts = np.zeros(len(estimators), dtype=np.int64)
    for t in range(start, stop):
        try:
            flags, _ = _trial_result(model, dspec, k, n, estimators, rd_rate,
                                     master_seed, t)
        except Exception as exc:
            raise RuntimeError(f"trial {t} (k={k}) failed: {exc}") from exc
        for i, est in enumerate(estimators):
            if not flags[est]:
                counts[i] += 1
    return counts


def wilson_interval(errors: int, trials: int, z: float = WILSON_Z):
    """95% Wilson score interval for a binomial proportion.

    Chosen over the normal approximation because error rates here span
    decades down to ~1e-4, where the normal interval collapses or goes
    negative.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not (0 <= errors <= trials):
        raise ValueError("errors must lie in [0, trials]")
    p = errors / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials))
    # analytically lo <= p <= hi; rounding can break that at p in {0, 1},
    # so clamp to keep the bracket exact
    lo = min(max(0.0, center - half), p)
    hi = max(min(1.0, center + half), p)
    return lo, hi


@dataclass(frozen=True)
class ResultRow:
    """Error statistics for one (estimator, k) cell of a sweep."""

    estimator: str
    k: int
    n_samples: int
    rho: float
    snr_db: float
    d_max: int
    trials: int
    errors: int
    p_err: float
    ci_low: float
    ci_high: float
    master_seed: int

    def __post_init__(self):
        if not (0 <= self.errors <= self.trials):
            raise ValueError("errors must lie in [0, trials]")
        if abs(self.p_err - self.errors / self.trials) > 1e-12:
            raise ValueError("p_err must equal errors/trials")
        if not (self.ci_low <= self.p_err <= self.ci_high):
            raise ValueError("confidence interval must bracket p_err")


def _make_row(config, k, estimator, errors):
    model = snr_db_to_model(config.snr_db)
    lo, hi = wilson_interval(errors, config.trials)
    return ResultRow(
        estimator=estimator,
        k=int(k),
        n_samples=config.block_length(k),
        rho=model.rho,
        snr_db=float(config.snr_db),
        d_max=int(config.d_max),
        trials=int(config.trials),
        errors=int(errors),
        p_err=errors / config.trials,
        ci_low=lo,
        ci_high=hi,
        master_seed=int(config.master_seed),
    )


def run_experiment(config: ExperimentConfig, trace_stream=None) -> list:
    """Run the sweep and return one ResultRow per (estimator, k).

    A failing trial aborts the whole run (skipping it silently would bias
    the error rates). With trace_stream set, runs serially and writes one
    line per trial with the message bits and every estimate.
    """
    model = snr_db_to_model(config.snr_db)
    dspec = DelaySpec(config.d_max)
    rows = []
    for k in config.k_values:
        n = config.block_length(k)
        if trace_stream is not None or config.workers == 1:
            counts = np.zeros(len(config.estimators), dtype=np.int64)
            for t in range(config.trials):
                try:
                    flags, detail = _trial_result(
                        model, dspec, k, n, config.estimators, config.rd_rate,
                        config.master_seed, t, want_detail=trace_stream is not None,
                    )
                except Exception as exc:
                    raise RuntimeError(f"trial {t} (k={k}) failed: {exc}") from exc
                for i, est in enumerate(config.estimators):
                    if not flags[est]:
                        counts[i] += 1
                if trace_stream is not None:
                    parts = [f"k={k}", f"trial={detail['trial']}", f"d={detail['d']}"]
                    if "bits" in detail:
                        parts += [f"J={detail['J']}", f"bits={detail['bits']}"]
                    parts += [f"{est}={detail[est]}" for est in config.estimators]
                    trace_stream.write(" ".join(parts) + "\n")
        else:
            # block size chosen for low task overhead; totals are sums of
            # per-trial indicators, so the split cannot change them
            block = max(1, math.ceil(config.trials / (config.workers * 4)))
            payloads = [
                (config.snr_db, config.d_max, k, n, config.estimators,
                 config.rd_rate, config.master_seed, lo, min(lo + block, config.trials))
                for lo in range(0, config.trials, block)
            ]
            counts = np.zeros(len(config.estimators), dtype=np.int64)
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                for c in pool.map(_count_block, payloads):
                    counts += c
        for est, err in zip(config.estimators, counts):
            rows.append(_make_row(config, k, est, int(err)))
    if config.output_path is not None:
        persist_results(rows, config.output_path)
    return rows


# ---------------------------------------------------------------------------
# Exponent fitting

# below this many observed errors, log2(p_err) is too noisy to regress on
MIN_ERRORS_FOR_FIT = 20


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares fit of log2(p_err) against k for one estimator.

    slope_bits and c_hat describe the free fit p ~ c_hat * 2^(slope_bits*k);
    c_hat_theory is the constant refit with the slope pinned to the
    theoretical exponent -exponent_theory. residual is the free fit's RMS
    misfit in bits.
    """

    estimator: str
    slope_bits: float
    c_hat: float
    k_range: tuple
    residual: float
    exponent_theory: float
    c_hat_theory: float
    rows_used: int


def fit_exponent(rows) -> ExponentFit:
    """Fit the empirical error exponent from sweep rows of one estimator.

    Rows with fewer than 20 observed errors are dropped before fitting; at
    least 3 usable rows are required.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("no rows")
    tags = {r.estimator for r in rows}
    if len(tags) != 1:
        raise ValueError(f"rows mix estimators {sorted(tags)}; fit one at a time")
    rhos = {r.rho for r in rows}
    if max(rhos) - min(rhos) > 1e-12:
        raise ValueError("rows mix different rho values")
    usable = [r for r in rows if r.errors >= MIN_ERRORS_FOR_FIT]
    if len(usable) < 3:
        raise ValueError(
            f"need >= 3 rows with >= {MIN_ERRORS_FOR_FIT} errors, have {len(usable)}"
        )
    ks = np.array([r.k for r in usable], dtype=float)
    yb = np.log2([r.p_err for r in usable])
    slope, intercept = np.polyfit(ks, yb, 1)
    resid = float(np.sqrt(np.mean((yb - (slope * ks + intercept)) ** 2)))
    exp_th = error_exponent(usable[0].rho)
    intercept_fixed = float(np.mean(yb + exp_th * ks))
    return ExponentFit(
        estimator=usable[0].estimator,
        slope_bits=float(slope),
        c_hat=float(2.0**intercept),
        k_range=(int(ks.min()), int(ks.max())),
        residual=resid,
        exponent_theory=float(exp_th),
        c_hat_theory=float(2.0**intercept_fixed),
        rows_used=len(usable),
    )


def format_fit(fit: ExponentFit) -> str:
    """Flat key=value rendering, consumed by the plotting package."""
    lines = [
        f"estimator={fit.estimator}",
        f"rows_used={fit.rows_used}",
        f"k_min={fit.k_range[0]}",
        f"k_max={fit.k_range[1]}",
        f"slope_bits={fit.slope_bits:.17g}",
        f"c_hat={fit.c_hat:.17g}",
        f"residual={fit.residual:.17g}",
        f"exponent_theory={fit.exponent_theory:.17g}",
        f"c_hat_theory={fit.c_hat_theory:.17g}",
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Persistence

_ROW_TYPES = (str, int, int, float, float, int, int, int, float, float, float, int)


def persist_results(rows, path):
    """Write rows as CSV. Floats use 17 significant digits so a load of the
    file reproduces them bit-exactly."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([
                r.estimator, r.k, r.n_samples, f"{r.rho:.17g}", f"{r.snr_db:.17g}",
                r.d_max, r.trials, r.errors, f"{r.p_err:.17g}",
                f"{r.ci_low:.17g}", f"{r.ci_high:.17g}", r.master_seed,
            ])


def load_results(path) -> list:
    """Read rows back; malformed lines are reported with their line number."""
    rows = []
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a header") from None
        if header != CSV_HEADER:
            raise ValueError(f"{path}:1: bad header {header!r}")
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(CSV_HEADER):
                raise ValueError(f"{path}:{lineno}: expected {len(CSV_HEADER)} fields, got {len(rec)}")
            try:
                vals = [t(v) for t, v in zip(_ROW_TYPES, rec)]
                rows.append(ResultRow(*vals))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return rows
