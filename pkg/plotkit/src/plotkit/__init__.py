"""Figures from iidmatch benchmark CSVs."""

from .figures import (FigureError, FigureSpec, load_rows, plot_ranked_bar,
                      plot_runtime, plot_sweep, render)

__all__ = ["FigureError", "FigureSpec", "load_rows", "plot_ranked_bar",
           "plot_runtime", "plot_sweep", "render"]

__version__ = "0.1.0"
