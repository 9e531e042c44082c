"""Shared Monte Carlo helpers for the test suite."""

import math

import numpy as np

from extdelay import rho_hat_mie


def sensor_streams(sigma1_sq, sigma2_sq, d, n, rng, pad=16):
    """Two noisy sensor observations of one common white Gaussian signal.

    Sensor 1 sees s[j] + noise1, sensor 2 sees s[j - d] + noise2. Returns
    (r1, r2_full, pad) where r1 covers logical [0, n) and r2_full covers
    logical [-pad, n + pad) at physical offset pad, so correlation can be
    probed at any lag with |lag| <= pad - |d| safely inside the arrays.
    """
    if abs(d) > pad:
        raise ValueError("pad too small for the delay")
    s = rng.standard_normal(n + 6 * pad)  # logical [-3 pad, n + 3 pad)
    w1 = rng.standard_normal(n)
    w2 = rng.standard_normal(n + 2 * pad)
    r1 = s[3 * pad : 3 * pad + n] + math.sqrt(sigma1_sq) * w1
    # r2 at logical j is s[j - d] + noise; physical i = j + pad
    r2_full = s[2 * pad - d : 2 * pad - d + n + 2 * pad] + math.sqrt(sigma2_sq) * w2
    return r1, r2_full, pad


def sensor_corr_at_lag(r1, r2_full, pad, lag):
    """Pearson correlation of (r1[j], r2[j + lag]) over the full overlap."""
    n = r1.size
    seg = r2_full[pad + lag : pad + lag + n]
    return float(np.corrcoef(r1, seg)[0, 1])


def rho_hat_samples(n, rho, trials, seed, expected_max_value, chunk=256):
    """Monte Carlo draws of the single-sample correlation estimate at the
    true lag: max of an n-block times rho plus fresh noise, normalized.

    Generates block maxima in chunks (the block itself is the only thing
    the statistic needs) and pushes each value through rho_hat_mie.
    """
    rng = np.random.default_rng(seed)
    rho_bar = math.sqrt(1.0 - rho * rho)
    out = np.empty(trials)
    filled = 0
    while filled < trials:
        c = min(chunk, trials - filled)
        m = rng.standard_normal((c, n)).max(axis=1)
        z = rng.standard_normal(c)
        vals = rho * m + rho_bar * z
        for i in range(c):
            out[filled + i] = rho_hat_mie(
                np.array([vals[i]]), 0, 0, expected_max_value
            )
        filled += c
    return out
