"""Delay estimators and the statistics built on top of them.

Four estimators are implemented:

  * max-index estimator (MIE): uses only the k-bit max-index message,
    picks the lag whose y sample around the received index is largest;
  * cross-correlator (MLE): the unconstrained baseline, argmax of the
    empirical cross-correlation over the admissible lags;
  * 1-bit benchmark: the cross-correlator fed sign-quantized samples,
    one bit per sample;
  * rate-distortion benchmark: the cross-correlator fed a simulated
    optimally compressed copy of the reference slice.

All argmax decisions break ties toward the smallest lag and are invariant
to positive rescaling of the correlation profile.
"""

from dataclasses import dataclass
import math

import numpy as np

__all__ = [
    "OpCounter",
    "CorrelationProfile",
    "RdCompressedSignal",
    "mie_estimate",
    "rho_hat_mie",
    "cross_correlate",
    "mle_estimate",
    "sign_quantize",
    "onebit_estimate",
    "rd_compress",
    "rd_estimate",
]


class OpCounter:
    """Additive counter of inner-loop work (samples touched), used by the
    complexity property tests instead of wall-clock timing."""

    __slots__ = ("total",)

    def __init__(self):
        self.total = 0

    def add(self, n: int):
        self.total += int(n)


@dataclass(frozen=True)
class CorrelationProfile:
    """Correlation statistic per lag over the admissible window."""

    lags: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.lags.shape != self.values.shape:
            raise ValueError("lags and values must have matching shape")
        if self.lags.size == 0:
            raise ValueError("empty profile")
        if np.any(np.diff(self.lags) <= 0):
            raise ValueError("lags must be strictly increasing")

    def peak_lag(self) -> int:
        """Lag of the largest value; first (smallest lag) wins on ties."""
        return int(self.lags[int(np.argmax(self.values))])


@dataclass(frozen=True)
class RdCompressedSignal:
    """Simulated output of an optimal fixed-rate compressor for a white
    unit-variance Gaussian source at rate_bits_per_sample, with mean square
    distortion 2^(-2R). Var(x_hat) = 1 - distortion."""

    x_hat: np.ndarray
    rate_bits_per_sample: float
    distortion: float


def _window(y, j: int, d_max: int, y_offset: int):
    lo = y_offset + j - d_max
    hi = y_offset + j + d_max + 1
    if lo < 0 or hi > len(y):
        raise ValueError(
            f"y does not cover the window [{j - d_max}, {j + d_max}] "
            f"(offset {y_offset}, length {len(y)})"
        )
    return y[lo:hi]


def mie_estimate(y, j: int, d_max: int, y_offset: int = 0, counter: OpCounter | None = None) -> int:
    """Delay estimate from the received max index alone.

    Scans y over logical positions j - d_max .. j + d_max and returns the
    lag of the largest sample. y_offset maps logical index n to physical
    n + y_offset. Work is linear in the window size, independent of N.
    """
    w = _window(np.asarray(y), int(j), int(d_max), int(y_offset))
    if counter is not None:
        counter.add(w.size)
    return int(np.argmax(w)) - int(d_max)


def rho_hat_mie(y, j: int, lag: int, expected_max: float, y_offset: int = 0) -> float:
    """Correlation estimate read off a single decoder sample: y at logical
    j + lag divided by the expected value of the encoder's maximum.

    Unbiased for rho when lag equals the true delay, because the numerator
    then has mean rho * E[max].
    """
    if expected_max <= 0:
        raise ValueError(f"expected_max must be positive, got {expected_max!r}")
    y = np.asarray(y)
    idx = int(y_offset) + int(j) + int(lag)
    if idx < 0 or idx >= y.size:
        raise ValueError(f"y does not cover logical index {j + lag}")
    return float(y[idx]) / float(expected_max)


def cross_correlate(reference, y, d_max: int, counter: OpCounter | None = None) -> CorrelationProfile:
    """Empirical cross-correlation of y against a reference slice.

    reference covers logical [0, N-1], y covers logical [-d_max, N-1+d_max];
    value at lag l is (1/N) * sum_n reference[n] * y[n + l]. Work is
    N * (2 d_max + 1) multiply-accumulates.
    """
    ref = np.asarray(reference, dtype=float)
    yv = np.asarray(y, dtype=float)
    if ref.ndim != 1 or yv.ndim != 1:
        raise ValueError("inputs must be one-dimensional")
    n = ref.size
    if n < 1:
        raise ValueError("reference must be nonempty")
    d_max = int(d_max)
    if d_max < 0:
        raise ValueError("d_max must be nonnegative")
    if yv.size != n + 2 * d_max:
        raise ValueError(
            f"y has {yv.size} samples, expected {n + 2 * d_max} "
            f"(logical range [-{d_max}, {n - 1 + d_max}])"
        )
    values = np.correlate(yv, ref, mode="valid") / n
    if counter is not None:
        counter.add(n * (2 * d_max + 1))
    return CorrelationProfile(lags=np.arange(-d_max, d_max + 1), values=values)


def mle_estimate(x_slice, y, d_max: int, counter: OpCounter | None = None) -> int:
    """Unconstrained-baseline estimate: peak of the raw cross-correlation."""
    return cross_correlate(x_slice, y, d_max, counter=counter).peak_lag()


def sign_quantize(x_slice) -> np.ndarray:
    """Elementwise sign with sign(0) := +1; one bit per sample."""
    x = np.asarray(x_slice)
    return np.where(x >= 0, 1.0, -1.0)


def onebit_estimate(signs, y, d_max: int, counter: OpCounter | None = None) -> int:
    """Cross-correlator fed sign bits; the budget is one bit per reference
    sample, so a k-bit budget means a k-sample reference."""
    return cross_correlate(signs, y, d_max, counter=counter).peak_lag()


def rd_compress(x_slice, rate_bits_per_sample: float, rng: np.random.Generator) -> RdCompressedSignal:
    """Simulate optimal lossy compression of a white unit-variance Gaussian
    slice at the given rate.

    Uses the jointly Gaussian pair achieving distortion D = 2^(-2R):
    x_hat = (1 - D) x + sqrt(D (1 - D)) w with w white standard normal,
    so E[(x - x_hat)^2] = D and Var(x_hat) = 1 - D.
    """
    r = float(rate_bits_per_sample)
    if r <= 0:
        raise ValueError(f"rate must be positive, got {rate_bits_per_sample!r}")
    x = np.asarray(x_slice, dtype=float)
    dist = 2.0 ** (-2.0 * r)
    x_hat = (1.0 - dist) * x + math.sqrt(dist * (1.0 - dist)) * rng.standard_normal(x.size)
    return RdCompressedSignal(x_hat=x_hat, rate_bits_per_sample=r, distortion=dist)


def rd_estimate(compressed: RdCompressedSignal, y, d_max: int, counter: OpCounter | None = None) -> int:
    """Cross-correlator fed the compressed reference.

    The reference is rescaled to unit variance first; that leaves the
    argmax unchanged but keeps profile values readable as correlations.
    """
    scale = math.sqrt(1.0 - compressed.distortion)
    ref = compressed.x_hat / scale if scale > 0 else compressed.x_hat
    return cross_correlate(ref, y, d_max, counter=counter).peak_lag()
