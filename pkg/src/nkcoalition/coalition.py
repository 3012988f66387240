"""Second-price auctions per area of expertise and the reorganization schedule.

Every agent bids its best expected utility over its repertoire; the top bidder
of each area joins the coalition and pays the second-highest bid. The clearing
price is recorded for audit only, it never feeds back into agent state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .agent import AREA_SIZE, N_AREAS, N_PARTIAL_SOLUTIONS, Agent, UtilityWeights, expected_utilities
from .landscape import Landscape


@dataclass(frozen=True)
class Bid:
    agent_id: int
    area: int
    amount: float


@dataclass(eq=False)
class AuctionOutcome:
    area: int
    winner_id: int
    winning_bid: float
    clearing_price: float
    bids: list[Bid] = field(default_factory=list)


@dataclass(eq=False)
class Coalition:
    members: tuple[int, int, int]  # agent ids, indexed by area
    formed_at: int
    last_strategy: np.ndarray | None = None

    def member_for_area(self, area: int) -> int:
        return self.members[area]


def compute_bid(
    agent: Agent, landscape: Landscape, residual_prev: np.ndarray, weights: UtilityWeights
) -> Bid:
    """Truthful bid: the agent's maximal expected utility over its repertoire."""
    utils = expected_utilities(landscape, agent.area, agent.codes_array(), residual_prev, weights)
    return Bid(agent.id, agent.area, float(utils.max()))


def run_area_auction(bids: list[Bid], rng: np.random.Generator) -> AuctionOutcome:
    """Second-price auction for one area; ties broken uniformly at random.

    With a single bidder the auction clears at that bidder's own amount.
    """
    if not bids:
        raise ValueError("auction requires at least one bid (area without agents)")
    area = bids[0].area
    if any(b.area != area for b in bids):
        raise ValueError("all bids in one auction must target the same area")

    amounts = [b.amount for b in bids]
    top = max(amounts)
    top_indices = [i for i, a in enumerate(amounts) if a == top]
    if len(top_indices) > 1:
        winner_idx = top_indices[int(rng.integers(len(top_indices)))]
    else:
        winner_idx = top_indices[0]
    losing = [a for i, a in enumerate(amounts) if i != winner_idx]
    clearing = max(losing) if losing else top
    return AuctionOutcome(area, bids[winner_idx].agent_id, top, clearing, list(bids))


def _all_bids(
    population: list[Agent],
    landscape: Landscape,
    residual_prev: np.ndarray,
    weights: UtilityWeights,
) -> list[Bid]:
    """Every agent's bid, computed in one fused kernel call.

    Produces the same amounts as per-agent compute_bid (identical inner
    arithmetic, maximum over the same candidate order).
    """
    m = len(population)
    area_starts = np.empty(m, dtype=np.int64)
    sizes = np.empty(m, dtype=np.int64)
    codes = np.zeros((m, N_PARTIAL_SOLUTIONS), dtype=np.int64)
    for row, agent in enumerate(population):
        area_starts[row] = AREA_SIZE * agent.area
        rep = agent.codes_array()
        sizes[row] = len(rep)
        codes[row, : len(rep)] = rep
    amounts = kernels.best_utilities(
        landscape.matrix.deps, landscape.tables, area_starts, codes, sizes,
        residual_prev, weights.alpha, weights.beta,
    )
    return [
        Bid(agent.id, agent.area, float(amounts[row]))
        for row, agent in enumerate(population)
    ]


def form_coalition(
    population: list[Agent],
    landscape: Landscape,
    residual_prev: np.ndarray,
    weights: UtilityWeights,
    rng: np.random.Generator,
    t: int,
) -> tuple[Coalition, list[AuctionOutcome]]:
    """Run all three area auctions and return the winners plus audit outcomes.

    Auctions run in ascending area order so tie-break draws are reproducible.
    """
    by_area: dict[int, list[Bid]] = {a: [] for a in range(N_AREAS)}
    for bid in _all_bids(population, landscape, residual_prev, weights):
        by_area[bid.area].append(bid)

    outcomes = []
    members = []
    for area in range(N_AREAS):
        if not by_area[area]:
            raise ValueError(f"no agents in area {area}")
        outcome = run_area_auction(by_area[area], rng)
        outcomes.append(outcome)
        members.append(outcome.winner_id)
    return Coalition(tuple(members), t), outcomes


def reorganization_due(t: int, tau: int) -> bool:
    """True at t=1 (a coalition always forms once) and every tau steps after.

    tau=0 means the coalition forms only once; tau=10 fires at t=1, 11, 21, ...
    """
    if tau < 0:
        raise ValueError(f"reorganization frequency tau must be >= 0, got {tau}")
    if t < 1:
        raise ValueError(f"time step must be >= 1, got {t}")
    if t == 1:
        return True
    return tau > 0 and (t - 1) % tau == 0
