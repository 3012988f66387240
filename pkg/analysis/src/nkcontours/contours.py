"""Contour panels from a sweep summary.

Input is the sweep driver's ``summary.csv`` (columns: scenario_id, K,
structure, p, tau, D). Output is one image per adaptation probability p,
plotting the Manhattan distance D over a grid with task complexity increasing
left to right and reorganization frequency increasing bottom to top. All
panels share one color scale; lower D means better-performing coalitions.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

# complexity order, left to right
CELLS = [
    (3, "concentrated"),
    (3, "scattered"),
    (5, "concentrated"),
    (5, "scattered"),
    (11, "full"),
]
# reorganization frequency order, bottom to top (never / every 10 steps / every step)
TAUS_BOTTOM_UP = [0, 10, 1]
P_VALUES = [0.0, 0.2, 0.5]

CELL_LABELS = ["K3\nconc.", "K3\nscat.", "K5\nconc.", "K5\nscat.", "K11\nfull"]
TAU_LABELS = ["tau=0", "tau=10", "tau=1"]


class MissingCellsError(ValueError):
    def __init__(self, scenario_ids: list[str]):
        super().__init__(
            "summary is missing scenarios: " + ", ".join(scenario_ids)
        )
        self.scenario_ids = scenario_ids


def scenario_id(k: int, structure: str, p: float, tau: int) -> str:
    return f"K{k}_{structure}_p{p:g}_tau{tau}"


def load_summary(path: Path) -> dict[tuple[int, str, float, int], float]:
    """Read D per (K, structure, p, tau); fails if any grid cell is absent."""
    values: dict[tuple[int, str, float, int], float] = {}
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        required = {"K", "structure", "p", "tau", "D"}
        missing_cols = required - set(reader.fieldnames or ())
        if missing_cols:
            raise ValueError(f"{path}: missing columns {sorted(missing_cols)}")
        for row in reader:
            key = (int(row["K"]), row["structure"], float(row["p"]), int(row["tau"]))
            values[key] = float(row["D"])

    absent = [
        scenario_id(k, structure, p, tau)
        for p in P_VALUES
        for k, structure in CELLS
        for tau in TAUS_BOTTOM_UP
        if (k, structure, p, tau) not in values
    ]
    if absent:
        raise MissingCellsError(absent)
    return values


def panel_grid(values, p: float) -> np.ndarray:
    """D on the (tau, cell) grid for one p panel."""
    grid = np.empty((len(TAUS_BOTTOM_UP), len(CELLS)))
    for yi, tau in enumerate(TAUS_BOTTOM_UP):
        for xi, (k, structure) in enumerate(CELLS):
            grid[yi, xi] = values[(k, structure, p, tau)]
    return grid


def render_contours(summary_path: Path, outdir: Path, fmt: str = "png") -> list[Path]:
    """Write one contour panel per p value; returns the image paths."""
    values = load_summary(summary_path)
    outdir.mkdir(parents=True, exist_ok=True)

    grids = {p: panel_grid(values, p) for p in P_VALUES}
    lo = min(grid.min() for grid in grids.values())
    hi = max(grid.max() for grid in grids.values())
    if hi - lo < 1e-9:  # degenerate all-equal input still renders
        lo, hi = lo - 0.5, hi + 0.5
    levels = np.linspace(lo, hi, 13)

    written = []
    x = np.arange(len(CELLS))
    y = np.arange(len(TAUS_BOTTOM_UP))
    for p in P_VALUES:
        fig, ax = plt.subplots(figsize=(7.0, 4.2))
        contour = ax.contourf(x, y, grids[p], levels=levels, cmap="viridis_r")
        ax.set_xticks(x, CELL_LABELS)
        ax.set_yticks(y, TAU_LABELS)
        ax.set_xlabel("task complexity (increasing)")
        ax.set_ylabel("reorganization frequency (increasing)")
        ax.set_title(f"adaptation probability p = {p:g}")
        colorbar = fig.colorbar(contour, ax=ax)
        colorbar.set_label("Manhattan distance D (lower is better)")
        path = outdir / f"contour_p{p:g}.{fmt}"
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(path)
    return written
