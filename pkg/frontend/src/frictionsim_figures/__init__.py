"""Figure regeneration from frictionsim aggregated sweep CSVs."""

from .plots import FigureInputError, FigureSpec, curve, load_cells, plot_quality, plot_tau

__all__ = ["FigureInputError", "FigureSpec", "curve", "load_cells",
           "plot_quality", "plot_tau"]
