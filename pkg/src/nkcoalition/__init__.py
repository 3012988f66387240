"""Simulations of auction-formed coalitions searching NK performance landscapes."""

__version__ = "0.1.0"

from .agent import Agent, UtilityWeights, adapt_capabilities, choose_solution
from .coalition import Bid, Coalition, compute_bid, form_coalition, reorganization_due, run_area_auction
from .engine import ScenarioConfig, init_round, run_round, run_scenario, step
from .kernels import NUMBA_ENABLED, backend_name
from .landscape import (
    InteractionMatrix,
    Landscape,
    build_interaction_matrix,
    contribution,
    generate_landscape,
    load_interaction_matrix,
    performance,
)
from .metrics import manhattan_distance, normalized_mean_series

__all__ = [
    "Agent",
    "Bid",
    "Coalition",
    "InteractionMatrix",
    "Landscape",
    "NUMBA_ENABLED",
    "ScenarioConfig",
    "UtilityWeights",
    "adapt_capabilities",
    "backend_name",
    "build_interaction_matrix",
    "choose_solution",
    "compute_bid",
    "contribution",
    "form_coalition",
    "generate_landscape",
    "init_round",
    "load_interaction_matrix",
    "manhattan_distance",
    "normalized_mean_series",
    "performance",
    "reorganization_due",
    "run_area_auction",
    "run_round",
    "run_scenario",
    "step",
]
