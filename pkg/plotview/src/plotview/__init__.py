"""Log-scale error-rate figures from extdelay sweep CSVs.

Consumes the `extdelay run` CSV and `extdelay fit` key=value output as
plain files; no dependency on the extdelay package itself.
"""

from .figure import PlotSpec, render
from .reader import CSV_COLUMNS, ResultPoint, read_fit, read_results

__version__ = "0.1.0"

__all__ = [
    "CSV_COLUMNS",
    "PlotSpec",
    "ResultPoint",
    "read_fit",
    "read_results",
    "render",
]
