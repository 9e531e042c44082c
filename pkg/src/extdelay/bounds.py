"""Closed-form error bounds, the error exponent, and related tail math.

Conventions: every exponential here is written with explicit natural logs
and ln(2) conversion factors. Public values documented as "bits" are base-2
quantities; everything else is natural scale. Bound values may exceed 1 by
design (they are bounds, not probabilities) and are reported raw.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.integrate import quad
from scipy.special import erfc

__all__ = [
    "BoundReport",
    "upper_bound",
    "lower_bound",
    "error_exponent",
    "concentration_threshold",
    "max_lower_tail_exact",
    "max_lower_tail_bound",
    "q_function",
    "q_lower_gordon",
    "q_upper_chernoff",
    "expected_max",
    "mie_variance_asymptotic",
    "bound_report",
    "CheckResult",
    "run_deterministic_checks",
]

LN2 = math.log(2.0)
SQRT_2PI = math.sqrt(2.0 * math.pi)


def _check_rho(rho: float):
    if not (0.0 < rho <= 1.0):
        raise ValueError(f"rho must lie in (0, 1], got {rho!r}")


def _phi(x: float) -> float:
    """Standard normal density."""
    return math.exp(-0.5 * x * x) / SQRT_2PI


def q_function(x):
    """Standard normal upper tail probability, via erfc for accuracy."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def q_lower_gordon(x: float) -> float:
    """Lower bound on the Q function: x / (1 + x^2) * phi(x), valid x > 0."""
    if x <= 0:
        raise ValueError("the lower tail bound requires x > 0")
    return x / (1.0 + x * x) * _phi(x)


def q_upper_chernoff(x: float) -> float:
    """Upper bound on the Q function: exp(-x^2 / 2), valid x > 0."""
    if x <= 0:
        raise ValueError("the upper tail bound requires x > 0")
    return math.exp(-0.5 * x * x)


def error_exponent(rho: float) -> float:
    """Asymptotic decay rate of the error probability, in bits per message
    bit: rho^2 / (2 - rho^2)."""
    _check_rho(rho)
    return rho * rho / (2.0 - rho * rho)


def upper_bound(k: int, rho: float, d_max: int) -> float:
    """Closed-form error probability upper bound at message size k:

        2 * d_max * exp(-k * ln2 * rho^2 / (2 - rho^2))

    May exceed 1 for small k. k = 0 is accepted (the exponential factor is
    then 1 and the union-bound prefactor alone remains).
    """
    _check_rho(rho)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    return 2.0 * d_max * math.exp(-k * LN2 * error_exponent(rho))


def lower_bound(k: int, rho: float) -> float:
    """Closed-form error probability lower bound at message size k:

        sqrt((2 - rho^2) / (4 pi rho^2 ln2 k)) * exp(-k ln2 rho^2 / (2 - rho^2))
    """
    _check_rho(rho)
    if k < 1:
        raise ValueError("k must be >= 1")
    pref = math.sqrt((2.0 - rho * rho) / (4.0 * math.pi * rho * rho * LN2 * k))
    return pref * math.exp(-k * LN2 * error_exponent(rho))


def log2_upper_bound(k: int, rho: float, d_max: int) -> float:
    """log2 of upper_bound, usable where the raw value underflows float64
    (which happens once k * exponent exceeds roughly a thousand bits)."""
    _check_rho(rho)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    return math.log2(2.0 * d_max) - k * error_exponent(rho)


def log2_lower_bound(k: int, rho: float) -> float:
    """log2 of lower_bound, usable where the raw value underflows."""
    _check_rho(rho)
    if k < 1:
        raise ValueError("k must be >= 1")
    pref = math.sqrt((2.0 - rho * rho) / (4.0 * math.pi * rho * rho * LN2 * k))
    return math.log2(pref) - k * error_exponent(rho)


def concentration_threshold(k: int) -> float:
    """Threshold below which the maximum of 2^k iid standard normals falls
    with super-exponentially small probability:

        sqrt(2 * ln2 * k * (1 - 1/sqrt(k)))
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    return math.sqrt(2.0 * LN2 * k * (1.0 - 1.0 / math.sqrt(k)))


def max_lower_tail_exact(n: int, tau: float) -> float:
    """Exact P(max of n iid standard normals < tau) = Phi(tau)^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    phi_cdf = 0.5 * erfc(-tau / math.sqrt(2.0))
    if phi_cdf == 0.0:
        return 0.0
    # exp(n log Phi) avoids pow() underflow warnings for huge n
    return math.exp(n * math.log(phi_cdf))


def max_lower_tail_bound(n: int, tau: float) -> float:
    """Upper bound on the lower tail of the maximum of n iid standard
    normals: exp(-n * (tau / (1 + tau^2)) * phi(tau)), valid tau > 0.

    Dominates max_lower_tail_exact for every n and tau > 0.
    """
    if tau <= 0:
        raise ValueError("tau must be positive (the tail bound needs it)")
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.exp(-n * (tau / (1.0 + tau * tau)) * _phi(tau))


def expected_max(n: int) -> float:
    """E[max of n iid standard normals] by adaptive quadrature.

    Integrates n x phi(x) Phi(x)^(n-1) over (-10, 10) with a breakpoint at
    the asymptotic location sqrt(2 ln n); absolute error <= 1e-8. n = 1
    is rejected because the value (0) cannot normalize a ratio estimate.
    """
    if n < 2:
        raise ValueError("n must be >= 2")

    def integrand(x):
        phi_cdf = 0.5 * erfc(-x / math.sqrt(2.0))
        if phi_cdf <= 0.0:
            return 0.0
        return n * x * _phi(x) * math.exp((n - 1) * math.log(phi_cdf))

    val, est_err = quad(
        integrand, -10.0, 10.0,
        points=[math.sqrt(2.0 * math.log(n))],
        epsabs=1e-10, epsrel=1e-10, limit=200,
    )
    if est_err > 1e-8:
        raise RuntimeError(f"quadrature error estimate {est_err:g} above 1e-8")
    return val


def mie_variance_asymptotic(n: int, rho: float) -> float:
    """Leading term of the variance of the single-sample correlation
    estimate: (1 - rho^2) / (2 ln n). The finite-n correction decays only
    like 1/ln n, so treat this as an asymptote, not a prediction."""
    if n < 2:
        raise ValueError("n must be >= 2")
    _check_rho(rho)
    return (1.0 - rho * rho) / (2.0 * math.log(n))


@dataclass(frozen=True)
class BoundReport:
    """Closed-form bound values for one (k, rho, d_max) point."""

    k: int
    rho: float
    d_max: int
    upper: float
    lower: float
    exponent: float
    threshold: float


def bound_report(k: int, rho: float, d_max: int) -> BoundReport:
    if k < 1:
        raise ValueError("k must be >= 1")
    return BoundReport(
        k=int(k),
        rho=float(rho),
        d_max=int(d_max),
        upper=upper_bound(k, rho, d_max),
        lower=lower_bound(k, rho),
        exponent=error_exponent(rho),
        threshold=concentration_threshold(k),
    )


# ---------------------------------------------------------------------------
# Deterministic inequality suites (exposed through the `check` subcommand).
# Each check is exact up to 1e-12 arithmetic slack; none is statistical.

SLACK = 1e-12


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def check_max_tail_domination() -> CheckResult:
    """Tail bound dominates the exact lower tail of the maximum on the grid
    n in {2^1 .. 2^20}, tau in {0.1, 0.5, 1, 2, 3, 5}."""
    worst = -math.inf
    for e in range(1, 21):
        n = 2**e
        for tau in (0.1, 0.5, 1.0, 2.0, 3.0, 5.0):
            gap = max_lower_tail_exact(n, tau) - max_lower_tail_bound(n, tau)
            worst = max(worst, gap)
    return CheckResult(
        "max-tail-domination",
        worst <= SLACK,
        f"max(exact - bound) = {worst:.3e} over 120 grid points",
    )


def check_q_bound_ordering() -> CheckResult:
    """gordon <= Q <= chernoff on x in {0.01, 0.1, 0.5, 1, 2, 4, 8}."""
    worst = -math.inf
    for x in (0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0):
        q = float(q_function(x))
        worst = max(worst, q_lower_gordon(x) - q, q - q_upper_chernoff(x))
    return CheckResult(
        "q-bound-ordering",
        worst <= SLACK,
        f"max violation = {worst:.3e} over 7 grid points",
    )


def check_bound_sandwich() -> CheckResult:
    """lower <= upper across a (k, rho, d_max) grid.

    The grid starts at rho = 0.3: for very small rho the lower bound's
    1/rho prefactor exceeds the union-bound prefactor at small k, so the
    sandwich only holds once k is past a rho-dependent threshold.
    """
    worst = -math.inf
    at = ""
    for k in (1, 2, 4, 8, 12, 16, 24, 32, 48, 64):
        for rho in (0.3, 0.5, math.sqrt(0.5), 0.9, 1.0):
            for dm in (1, 10, 150):
                gap = lower_bound(k, rho) - upper_bound(k, rho, dm)
                if gap > worst:
                    worst, at = gap, f"k={k} rho={rho:.4f} d_max={dm}"
    return CheckResult(
        "bound-sandwich",
        worst <= SLACK,
        f"max(lower - upper) = {worst:.3e} at {at}",
    )


def check_superexponential_decay() -> CheckResult:
    """The concentration-threshold tail bound decays faster than 2^-k.

    The product max_lower_tail_bound(2^k, threshold(k)) * 2^k only becomes
    monotone decreasing for k around 120 and beyond (the threshold's
    1/sqrt(k) correction term keeps the product growing below that), so
    the check uses perfect squares from 121 up.
    """
    ks = (121, 144, 169, 196)
    vals = [max_lower_tail_bound(2**k, concentration_threshold(k)) * 2.0**k for k in ks]
    ok = all(b < a + SLACK for a, b in zip(vals, vals[1:]))
    return CheckResult(
        "superexponential-decay",
        ok,
        "product over k in " + str(ks) + ": " + ", ".join(f"{v:.3e}" for v in vals),
    )


def check_exponent_agreement() -> CheckResult:
    """Both bounds' per-bit decay rates are within 0.01 of the exponent at
    k = 10^4 (they converge from the two sides). Uses the log2 forms since
    the raw values underflow at this k."""
    worst = -math.inf
    for rho in (0.3, 0.5, math.sqrt(0.5), 0.9, 1.0):
        k = 10_000
        e = error_exponent(rho)
        up = -log2_upper_bound(k, rho, 150) / k
        lo = -log2_lower_bound(k, rho) / k
        worst = max(worst, abs(up - e), abs(lo - e))
    return CheckResult(
        "exponent-agreement",
        worst <= 0.01,
        f"max |rate - exponent| = {worst:.2e} at k=10^4",
    )


def check_monotonicity() -> CheckResult:
    """upper_bound strictly decreasing in k and increasing in d_max;
    error_exponent strictly increasing in rho."""
    ok = True
    for rho in (0.3, math.sqrt(0.5), 1.0):
        ub = [upper_bound(k, rho, 10) for k in range(1, 51)]
        ok &= all(b < a for a, b in zip(ub, ub[1:]))
    ok &= upper_bound(8, 0.9, 20) > upper_bound(8, 0.9, 10)
    exps = [error_exponent(r) for r in np.linspace(0.05, 1.0, 40)]
    ok &= all(b > a for a, b in zip(exps, exps[1:]))
    return CheckResult("bound-monotonicity", bool(ok), "k-decrease, d_max-increase, rho-increase")


def run_deterministic_checks() -> list[CheckResult]:
    """All inequality suites, in a stable order."""
    return [
        check_max_tail_domination(),
        check_q_bound_ordering(),
        check_bound_sandwich(),
        check_superexponential_decay(),
        check_exponent_agreement(),
        check_monotonicity(),
    ]
