"""Command line front end: CSV in, PNG out."""

import argparse
import sys

import matplotlib.pyplot as plt

from .figure import PlotSpec, render
from .reader import read_fit


def main(argv=None) -> int:
    p = argparse.ArgumentParser(
        prog="plotview",
        description="render extdelay sweep CSVs as log-scale error-rate figures",
    )
    p.add_argument("--in", dest="input", required=True, help="sweep CSV from `extdelay run`")
    p.add_argument("--fit", dest="fit", help="`extdelay fit` output; adds the dashed exponent line")
    p.add_argument("--out", dest="output", required=True, help="image path (png, pdf, svg, ...)")
    p.add_argument("--estimators", help="comma list of curves to draw; default: all in the file")
    args = p.parse_args(argv)
    try:
        fit_values = read_fit(args.fit) if args.fit else None
        spec = PlotSpec(
            input_path=args.input,
            estimators=tuple(t.strip() for t in args.estimators.split(",")) if args.estimators else (),
            fit_overlay=fit_values is not None,
            output_image=args.output,
        )
        fig = render(spec, fit_values)
        plt.close(fig)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
