"""Figure rendering: log-scale error rate vs message size."""

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")  # batch use, no display

import matplotlib.pyplot as plt
import numpy as np

from .reader import read_results

# draw known estimators in this order so legends are stable
TAG_ORDER = ("mie", "mle", "onebit", "rd")


@dataclass(frozen=True)
class PlotSpec:
    """What to draw: which CSV, which estimator curves, whether to add the
    fitted-exponent dashed line, and where to save."""

    input_path: str
    estimators: tuple = ()
    fit_overlay: bool = False
    output_image: str = ""


def _ordered_tags(rows, requested):
    present = []
    for r in rows:
        if r.estimator not in present:
            present.append(r.estimator)
    present.sort(key=lambda t: (TAG_ORDER.index(t) if t in TAG_ORDER else len(TAG_ORDER), t))
    if not requested:
        return present
    missing = [t for t in requested if t not in present]
    if missing:
        raise ValueError(f"no rows for estimators {missing}; file has {present}")
    return list(requested)


def render(spec: PlotSpec, fit_values: dict | None = None):
    """Draw one log-y error-rate curve per estimator, with 95% interval
    whiskers, and save to spec.output_image.

    With spec.fit_overlay, fit_values (parsed `extdelay fit` output) adds
    the dashed line c_hat_theory * 2^(-k * exponent_theory). Returns the
    figure; the input CSV is only ever read.
    """
    rows = read_results(spec.input_path)
    if not rows:
        raise ValueError(f"{spec.input_path}: no data rows to plot")
    if spec.fit_overlay and fit_values is None:
        raise ValueError("fit overlay requested but no fit values given")
    tags = _ordered_tags(rows, tuple(spec.estimators))

    fig, ax = plt.subplots(figsize=(7.2, 4.8))
    all_ks = []
    for tag in tags:
        mine = sorted((r for r in rows if r.estimator == tag), key=lambda r: r.k)
        drawable = [r for r in mine if r.p_err > 0]
        if not drawable:
            raise ValueError(
                f"estimator {tag!r} has no positive error rates; "
                "nothing to draw on a log axis"
            )
        ks = np.array([r.k for r in drawable])
        p = np.array([r.p_err for r in drawable])
        yerr = np.array([p - [r.ci_low for r in drawable],
                         [r.ci_high for r in drawable] - p])
        ax.errorbar(ks, p, yerr=yerr, marker="o", capsize=3, label=tag)
        all_ks.extend(ks.tolist())

    if spec.fit_overlay:
        e = float(fit_values["exponent_theory"])
        c = float(fit_values["c_hat_theory"])
        grid = set(all_ks)
        # span the fitted k-range too, so the line is a line even when the
        # data sits at a single k
        if "k_min" in fit_values and "k_max" in fit_values:
            grid |= {int(fit_values["k_min"]), int(fit_values["k_max"])}
        ks = np.array(sorted(grid), dtype=float)
        ax.plot(ks, c * 2.0 ** (-e * ks), "k--",
                label=f"{c:.3g}$\\cdot$2^(-{e:.3g}k)")

    ax.set_yscale("log")
    ax.set_xlabel("message size k (bits)")
    ax.set_ylabel("error probability")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.output_image, dpi=150)
    return fig
