"""Command line front end.

Subcommands:
  run     Monte Carlo sweep over message sizes, writes a CSV of error rates
  bounds  table of closed-form bound values over a k range
  fit     least-squares error-exponent fit from a results CSV
  check   deterministic inequality suites (exit code reports the verdict)

`run` also accepts a flat key=value config file; anything given on the
command line overrides the file.
"""

import argparse
import sys

from .bounds import bound_report, run_deterministic_checks
from .harness import (
    ExperimentConfig,
    fit_exponent,
    format_fit,
    load_results,
    run_experiment,
)
from .model import snr_db_to_model

CONFIG_KEYS = {
    "snr_db", "dmax", "k", "estimators", "trials", "seed",
    "rd_rate", "out", "n_samples", "workers",
}


def parse_k_values(text):
    """Parse '6,8,10' or '6:14' or '6:14:2' (inclusive ranges)."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"bad k range {text!r}, want start:stop[:step]")
        start, stop = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
        if step < 1 or stop < start:
            raise ValueError(f"bad k range {text!r}")
        return tuple(range(start, stop + 1, step))
    return tuple(int(p) for p in text.split(",") if p.strip())


def parse_config_file(path):
    """Flat key=value lines; '#' starts a comment, blank lines ignored."""
    out = {}
    with open(path) as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.rstrip()!r}")
            key, val = line.split("=", 1)
            key, val = key.strip(), val.strip()
            if key not in CONFIG_KEYS:
                raise ValueError(
                    f"{path}:{lineno}: unknown key {key!r}, allowed: {sorted(CONFIG_KEYS)}"
                )
            out[key] = val
    return out


def _build_run_config(args):
    settings = {
        "snr_db": None, "dmax": None, "k": None, "estimators": "mie",
        "trials": None, "seed": "0", "rd_rate": "1", "out": None,
        "n_samples": None, "workers": "1",
    }
    if args.config:
        settings.update(parse_config_file(args.config))
    overrides = {
        "snr_db": args.snr_db, "dmax": args.dmax, "k": args.k,
        "estimators": args.estimators, "trials": args.trials, "seed": args.seed,
        "rd_rate": args.rd_rate, "out": args.out, "n_samples": args.n_samples,
        "workers": args.workers,
    }
    for key, val in overrides.items():
        if val is not None:
            settings[key] = val
    missing = [k for k in ("snr_db", "dmax", "k", "trials", "out") if settings[k] is None]
    if missing:
        raise ValueError(f"missing required settings: {', '.join(missing)}")
    return ExperimentConfig(
        snr_db=float(settings["snr_db"]),
        d_max=int(settings["dmax"]),
        k_values=parse_k_values(str(settings["k"])),
        estimators=tuple(str(settings["estimators"]).split(",")),
        rd_rate=float(settings["rd_rate"]),
        trials=int(settings["trials"]),
        master_seed=int(settings["seed"]),
        output_path=str(settings["out"]),
        n_samples=None if settings["n_samples"] is None else int(settings["n_samples"]),
        workers=int(settings["workers"]),
    )


def cmd_run(args):
    config = _build_run_config(args)
    trace_stream = sys.stdout if args.trace else None
    rows = run_experiment(config, trace_stream=trace_stream)
    for r in rows:
        print(
            f"{r.estimator:>6s} k={r.k:<3d} n={r.n_samples:<8d} "
            f"errors={r.errors}/{r.trials} p_err={r.p_err:.6g} "
            f"ci=[{r.ci_low:.6g}, {r.ci_high:.6g}]"
        )
    print(f"wrote {len(rows)} rows to {config.output_path}")
    return 0


def cmd_bounds(args):
    if args.rho is not None:
        rho = args.rho
    else:
        rho = snr_db_to_model(args.snr_db).rho
    ks = parse_k_values(args.k)
    reports = [bound_report(k, rho, args.dmax) for k in ks]
    cols = ["k", "rho", "d_max", "upper", "lower", "exponent", "threshold"]
    if args.format == "csv":
        print(",".join(cols))
        for r in reports:
            print(f"{r.k},{r.rho:.17g},{r.d_max},{r.upper:.17g},"
                  f"{r.lower:.17g},{r.exponent:.17g},{r.threshold:.17g}")
    else:
        print(f"{'k':>4s} {'upper':>13s} {'lower':>13s} {'exponent':>10s} {'threshold':>10s}"
              f"   (rho={rho:.6g}, d_max={args.dmax})")
        for r in reports:
            print(f"{r.k:>4d} {r.upper:>13.6g} {r.lower:>13.6g} "
                  f"{r.exponent:>10.6g} {r.threshold:>10.6g}")
    return 0


def cmd_fit(args):
    rows = load_results(args.input)
    mine = [r for r in rows if r.estimator == args.estimator]
    if not mine:
        present = sorted({r.estimator for r in rows})
        raise ValueError(f"no rows for estimator {args.estimator!r}; file has {present}")
    fit = fit_exponent(mine)
    sys.stdout.write(format_fit(fit))
    return 0


def cmd_check(args):
    results = run_deterministic_checks()
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name}: {res.detail}")
        failed += 0 if res.passed else 1
    if failed:
        print(f"{failed} of {len(results)} checks failed")
        return 1
    print(f"all {len(results)} checks passed")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="extdelay",
                                description="delay estimation under a k-bit budget")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Monte Carlo sweep, writes a results CSV")
    run.add_argument("--config", help="key=value file; flags override it")
    run.add_argument("--snr-db", dest="snr_db", type=float)
    run.add_argument("--dmax", type=int)
    run.add_argument("--k", help="message sizes: '6,8,10' or '6:14[:2]'")
    run.add_argument("--estimators", help="comma list from mie,mle,onebit,rd")
    run.add_argument("--trials", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--rd-rate", dest="rd_rate", type=float)
    run.add_argument("--n-samples", dest="n_samples", type=int,
                     help="override block length (default 2^k)")
    run.add_argument("--workers", type=int)
    run.add_argument("--out", help="output CSV path")
    run.add_argument("--trace", action="store_true",
                     help="print every trial's message bits and estimates (serial)")
    run.set_defaults(func=cmd_run)

    bounds = sub.add_parser("bounds", help="closed-form bound table")
    grp = bounds.add_mutually_exclusive_group(required=True)
    grp.add_argument("--rho", type=float)
    grp.add_argument("--snr-db", dest="snr_db", type=float)
    bounds.add_argument("--k", required=True, help="'6,8,10' or '6:20[:2]'")
    bounds.add_argument("--dmax", type=int, required=True)
    bounds.add_argument("--format", choices=("table", "csv"), default="table")
    bounds.set_defaults(func=cmd_bounds)

    fit = sub.add_parser("fit", help="error-exponent fit from a results CSV")
    fit.add_argument("--in", dest="input", required=True)
    fit.add_argument("--estimator", required=True)
    fit.set_defaults(func=cmd_fit)

    check = sub.add_parser("check", help="deterministic inequality suites")
    check.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
