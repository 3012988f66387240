"""Scenario-level aggregation: normalized mean series and Manhattan distance.

Each round is normalized by its own landscape maximum; the per-step mean runs
over rounds in ascending round-index order in 64-bit floats, so repeated runs
aggregate bit-identically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(eq=False)
class ScenarioSummary:
    k: int
    structure: str
    p: float
    tau: int
    distance: float
    series: np.ndarray


def normalized_mean_series(rounds) -> np.ndarray:
    """Per-step mean of each round's normalized performance series."""
    if not rounds:
        raise ValueError("cannot aggregate an empty round set")
    ordered = sorted(rounds, key=lambda r: r.round_index)
    t_max = ordered[0].t_max
    if any(r.t_max != t_max for r in ordered):
        raise ValueError("all rounds must have the same number of time steps")
    total = np.zeros(t_max, dtype=np.float64)
    for r in ordered:
        total += r.normalized
    return total / np.float64(len(ordered))


def manhattan_distance(series: np.ndarray) -> float:
    """Sum over time steps of the shortfall from the normalized optimum, 1 - value."""
    if len(series) == 0:
        raise ValueError("series must be non-empty")
    s = 0.0
    for v in series:
        s += 1.0 - v
    return float(s)


def summarize(result) -> ScenarioSummary:
    cfg = result.config
    return ScenarioSummary(cfg.k, cfg.structure, cfg.p, cfg.tau, result.distance, result.series)
