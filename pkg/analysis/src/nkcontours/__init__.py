"""Render per-p contour panels of Manhattan distances from a sweep summary CSV."""

__version__ = "0.1.0"

from .contours import (
    CELLS,
    P_VALUES,
    TAUS_BOTTOM_UP,
    MissingCellsError,
    load_summary,
    render_contours,
)

__all__ = [
    "CELLS",
    "P_VALUES",
    "TAUS_BOTTOM_UP",
    "MissingCellsError",
    "load_summary",
    "render_contours",
]
