"""Parsers for the two text interfaces this package consumes.

Both files are produced by the extdelay CLI: the sweep CSV written by
`extdelay run`, and the flat key=value exponent fit written by
`extdelay fit`. Nothing here imports extdelay; the file formats are the
contract.
"""

from dataclasses import dataclass
import csv

CSV_COLUMNS = [
    "estimator", "k", "n_samples", "rho", "snr_db", "d_max",
    "trials", "errors", "p_err", "ci_low", "ci_high", "master_seed",
]

_COLUMN_TYPES = (str, int, int, float, float, int, int, int, float, float, float, int)

# keys `extdelay fit` emits, with the types we need back
_FIT_TYPES = {
    "estimator": str,
    "rows_used": int,
    "k_min": int,
    "k_max": int,
    "slope_bits": float,
    "c_hat": float,
    "residual": float,
    "exponent_theory": float,
    "c_hat_theory": float,
}


@dataclass(frozen=True)
class ResultPoint:
    """One (estimator, k) row of a sweep CSV."""

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


def read_results(path) -> list:
    """Parse a sweep CSV into ResultPoint rows; malformed lines are
    reported with their line number."""
    rows = []
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a header") from None
        if header != CSV_COLUMNS:
            raise ValueError(f"{path}:1: bad header {header!r}")
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(CSV_COLUMNS):
                raise ValueError(
                    f"{path}:{lineno}: expected {len(CSV_COLUMNS)} fields, got {len(rec)}"
                )
            try:
                rows.append(ResultPoint(*[t(v) for t, v in zip(_COLUMN_TYPES, rec)]))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return rows


def read_fit(path) -> dict:
    """Parse `extdelay fit` output (key=value lines) into a typed dict.

    The overlay needs exponent_theory and c_hat_theory; their absence is
    an error, unknown keys are kept as strings.
    """
    out = {}
    with open(path) as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.rstrip()!r}")
            key, val = line.split("=", 1)
            key, val = key.strip(), val.strip()
            conv = _FIT_TYPES.get(key, str)
            try:
                out[key] = conv(val)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    for required in ("exponent_theory", "c_hat_theory"):
        if required not in out:
            raise ValueError(f"{path}: fit output lacks {required!r}")
    return out
