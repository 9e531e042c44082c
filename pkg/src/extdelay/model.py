"""Gaussian observation model for delay-estimation trials.

Two jointly stationary streams share a common component:

    y[n] = rho * x[n - d] + sqrt(1 - rho^2) * z[n]

with x and z white standard normal and d an unknown integer delay drawn
uniformly from {-d_max, ..., +d_max}. Both marginals are standard normal
and Corr(x[n - d], y[n]) = rho.
"""

from dataclasses import dataclass
import math

import numpy as np

__all__ = [
    "CorrelationModel",
    "DelaySpec",
    "TrialData",
    "model_from_rho",
    "snr_db_to_model",
    "model_from_sensor_noise",
    "generate_trial",
    "sample_delay",
]

# Below this the model is numerically degenerate (rho ~ 1e-5 and falling),
# so reject instead of silently producing useless trials.
MIN_SNR_DB = -100.0


@dataclass(frozen=True)
class CorrelationModel:
    """Correlation parameters shared by the two streams.

    rho is the Pearson correlation between aligned samples, rho_bar the
    weight of the fresh-noise component, snr the linear signal-to-noise
    ratio rho^2 / (1 - rho^2) (infinite when rho == 1).
    """

    rho: float
    rho_bar: float
    snr: float


def model_from_rho(rho: float) -> CorrelationModel:
    """Model with the given correlation coefficient, rho in (0, 1]."""
    if not (0.0 < rho <= 1.0):
        raise ValueError(f"rho must lie in (0, 1], got {rho!r}")
    rho = float(rho)
    rho_bar = math.sqrt(max(0.0, 1.0 - rho * rho))
    snr = math.inf if rho == 1.0 else rho * rho / (1.0 - rho * rho)
    return CorrelationModel(rho=rho, rho_bar=rho_bar, snr=snr)


def snr_db_to_model(snr_db: float) -> CorrelationModel:
    """Model from an SNR given in dB: snr = 10^(dB/10), rho^2 = 1/(1 + 1/snr)."""
    if not math.isfinite(snr_db):
        raise ValueError("snr_db must be finite")
    if snr_db < MIN_SNR_DB:
        raise ValueError(f"snr_db below {MIN_SNR_DB:g} dB is rejected")
    snr = 10.0 ** (snr_db / 10.0)
    return model_from_rho(math.sqrt(1.0 / (1.0 + 1.0 / snr)))


def model_from_sensor_noise(sigma1_sq: float, sigma2_sq: float) -> CorrelationModel:
    """Model equivalent to two sensors observing one unit-variance signal
    through independent additive Gaussian noise of the given variances.

    After each sensor stream is normalized to unit variance, the pair
    (r1[n], r2[n + d]) has correlation 1 / sqrt((1 + s1^2)(1 + s2^2)).
    """
    if sigma1_sq < 0 or sigma2_sq < 0:
        raise ValueError("noise variances must be nonnegative")
    rho = 1.0 / math.sqrt((1.0 + sigma1_sq) * (1.0 + sigma2_sq))
    return model_from_rho(rho)


@dataclass(frozen=True)
class DelaySpec:
    """Admissible delays: the integer set {-d_max, ..., +d_max}."""

    d_max: int

    def __post_init__(self):
        if int(self.d_max) != self.d_max or self.d_max < 0:
            raise ValueError(f"d_max must be a nonnegative integer, got {self.d_max!r}")

    @property
    def spread(self) -> int:
        return 2 * self.d_max + 1

    def delays(self) -> np.ndarray:
        return np.arange(-self.d_max, self.d_max + 1)

    def contains(self, d: int) -> bool:
        return -self.d_max <= d <= self.d_max


@dataclass(frozen=True)
class TrialData:
    """One realization of (x, y) with a known true delay.

    Arrays are contiguous with an explicit index offset: logical index i of
    x lives at x[i + x_offset], logical n of y at y[n + y_offset]. x covers
    logical [-2 d_max, n_samples - 1 + 2 d_max] so that y is well defined
    for every admissible delay; y covers [-d_max, n_samples - 1 + d_max].
    The encoder may only ever look at x[0 .. n_samples - 1].
    """

    n_samples: int
    true_delay: int
    d_max: int
    x: np.ndarray
    y: np.ndarray
    x_offset: int
    y_offset: int

    def encoder_view(self) -> np.ndarray:
        """The slice the encoder side is allowed to see, x[0 .. N-1]."""
        return self.x[self.x_offset : self.x_offset + self.n_samples]

    def x_at(self, i: int) -> float:
        """x at logical index i."""
        j = i + self.x_offset
        if j < 0 or j >= self.x.size:
            raise IndexError(f"x logical index {i} out of range")
        return float(self.x[j])

    def y_at(self, n: int) -> float:
        """y at logical index n."""
        j = n + self.y_offset
        if j < 0 or j >= self.y.size:
            raise IndexError(f"y logical index {n} out of range")
        return float(self.y[j])


def generate_trial(
    model: CorrelationModel,
    delay_spec: DelaySpec,
    n_samples: int,
    true_delay: int,
    rng: np.random.Generator,
) -> TrialData:
    """Draw one (x, y) realization with the given true delay.

    Deterministic given the rng state: x is drawn first, then z, each as a
    single contiguous block. Returned arrays are marked read-only so trials
    can be shared across threads safely.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if not delay_spec.contains(true_delay):
        raise ValueError(
            f"true_delay {true_delay} outside [-{delay_spec.d_max}, {delay_spec.d_max}]"
        )
    n = int(n_samples)
    d = int(true_delay)
    dm = delay_spec.d_max
    x = rng.standard_normal(n + 4 * dm)
    z = rng.standard_normal(n + 2 * dm)
    # y at logical n needs x at logical n - d; logical -d_max - d maps to
    # physical d_max - d, which is >= 0 for every d in the admissible set.
    start = dm - d
    y = model.rho * x[start : start + n + 2 * dm] + model.rho_bar * z
    x.setflags(write=False)
    y.setflags(write=False)
    return TrialData(
        n_samples=n,
        true_delay=d,
        d_max=dm,
        x=x,
        y=y,
        x_offset=2 * dm,
        y_offset=dm,
    )


def sample_delay(delay_spec: DelaySpec, rng: np.random.Generator) -> int:
    """Uniform draw from the admissible delay set."""
    return int(rng.integers(-delay_spec.d_max, delay_spec.d_max + 1))
