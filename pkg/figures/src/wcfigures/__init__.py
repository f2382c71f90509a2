"""Figure rendering for wcopt experiment CSVs.

This package talks to the experiment harness only through its CSV files
(summary.csv and tte.csv); there is no in-process coupling.
"""

from .render import FigureSpec, render_gap_figure, render_tte_figure

__all__ = ["FigureSpec", "render_gap_figure", "render_tte_figure"]
