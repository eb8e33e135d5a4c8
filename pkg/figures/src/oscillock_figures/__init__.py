"""Publication figures for oscillock CSV outputs.

Every figure is rendered purely from columns of the simulator's CSV files;
no physics is recomputed here.
"""

from oscillock_figures.io import CsvValidationError, read_table
from oscillock_figures.render import FIGURE_KINDS, FigureSpec, render

__version__ = "0.1.0"

__all__ = [
    "CsvValidationError",
    "read_table",
    "FIGURE_KINDS",
    "FigureSpec",
    "render",
]
