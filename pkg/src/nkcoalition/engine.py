"""Round execution: preparation, auctions, decisions, utilities, adaptation.

A round draws a fresh landscape, endows 3*P agents with one random partial
solution each, and iterates T time steps. Each step in order: reorganize the
coalition when due, let each member pick its best-known partial solution
against the previous step's residuals, enact the concatenated strategy,
realize utilities, then run individual adaptation (by default for the sitting
members; configurable to the whole population). All within-step expectations,
adaptation included, condition on the t-1 residuals.

Seeding: every round derives its own generator streams (landscape, agents,
auction tie-breaks) from SeedSequence([master_seed, round_index]), so rounds
are reproducible and safe to execute in any order or in parallel.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from . import kernels, metrics
from .agent import (
    AREA_SIZE,
    N_AREAS,
    Agent,
    UtilityWeights,
    adapt_capabilities,
    area_start,
    choose_solution,
    realized_utility,
)
from .coalition import Coalition, form_coalition, reorganization_due
from .landscape import (
    CANONICAL_PAIRS,
    N_DECISIONS,
    Landscape,
    bits_from_code,
    build_interaction_matrix,
    code_from_bits,
    generate_landscape,
    mean_ascending,
    random_bits,
)

DEFAULT_MASTER_SEED = 42


@dataclass(frozen=True)
class ScenarioConfig:
    k: int
    structure: str
    p: float
    tau: int
    rounds: int
    master_seed: int = DEFAULT_MASTER_SEED
    t_max: int = 200
    n: int = N_DECISIONS
    pool_size: int = 18
    alpha: float = 0.5
    beta: float = 0.5
    adapt_scope: str = "members"  # or "population"
    learn_base: str = "member"  # or "choice"

    def __post_init__(self):
        if (self.structure, self.k) not in CANONICAL_PAIRS:
            raise ValueError(f"unsupported (structure, k) pair: ({self.structure}, {self.k})")
        if self.n != N_DECISIONS:
            raise ValueError(f"canonical scenarios require n={N_DECISIONS}, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"adaptation probability p={self.p} outside [0, 1]")
        if self.tau < 0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")
        if self.t_max < 1:
            raise ValueError(f"t_max must be >= 1, got {self.t_max}")
        if self.rounds < 1:
            raise ValueError(f"rounds must be >= 1, got {self.rounds}")
        if self.pool_size < 1:
            raise ValueError(f"pool_size must be >= 1, got {self.pool_size}")
        if self.adapt_scope not in ("population", "members"):
            raise ValueError(f"adapt_scope must be 'population' or 'members', got {self.adapt_scope!r}")
        if self.learn_base not in ("choice", "member"):
            raise ValueError(f"learn_base must be 'choice' or 'member', got {self.learn_base!r}")
        UtilityWeights(self.alpha, self.beta)  # validates the weights

    @property
    def scenario_id(self) -> str:
        return f"K{self.k}_{self.structure}_p{self.p:g}_tau{self.tau}"

    @property
    def weights(self) -> UtilityWeights:
        return UtilityWeights(self.alpha, self.beta)


@dataclass(eq=False)
class RoundState:
    landscape: Landscape
    population: list[Agent]
    coalition: Coalition | None
    prev_strategy: np.ndarray
    t: int
    agent_rng: np.random.Generator
    auction_rng: np.random.Generator
    auction_events: list[tuple] = field(default_factory=list)  # (t, area, winner, bid, price)


@dataclass(eq=False)
class TimeStepRecord:
    t: int
    strategy: np.ndarray
    raw_performance: float
    normalized_performance: float
    member_ids: tuple[int, int, int]
    member_utilities: tuple[float, float, float]


@dataclass(eq=False)
class RoundResult:
    round_index: int
    global_max: float
    raw: np.ndarray  # float64 (T,)
    normalized: np.ndarray  # float64 (T,)
    strategy_codes: np.ndarray  # uint16 (T,)
    member_ids: np.ndarray  # int32 (T, 3)
    member_utilities: np.ndarray  # float64 (T, 3)
    auction_events: list[tuple] = field(default_factory=list)

    @property
    def t_max(self) -> int:
        return len(self.raw)


@dataclass(eq=False)
class ScenarioResult:
    config: ScenarioConfig
    rounds: list[RoundResult]
    series: np.ndarray  # mean normalized performance per step
    distance: float  # Manhattan distance to the all-ones series


def round_streams(master_seed: int, round_index: int):
    """Three independent, reproducible generator streams for one round."""
    ss = np.random.SeedSequence([master_seed, round_index])
    land, agents, auction = ss.spawn(3)
    return (
        np.random.default_rng(land),
        np.random.default_rng(agents),
        np.random.default_rng(auction),
    )


def init_round(config: ScenarioConfig, round_index: int) -> RoundState:
    """Preparation phase: landscape, agent endowments, random starting point."""
    land_rng, agent_rng, auction_rng = round_streams(config.master_seed, round_index)
    matrix = build_interaction_matrix(config.structure, config.k, config.n)
    landscape = generate_landscape(matrix, land_rng)
    population = []
    for aid in range(N_AREAS * config.pool_size):
        code = int(agent_rng.integers(16))
        population.append(Agent(aid, aid // config.pool_size, [code]))
    start = random_bits(agent_rng, config.n)
    return RoundState(landscape, population, None, start, 1, agent_rng, auction_rng)


def step(state: RoundState, config: ScenarioConfig) -> TimeStepRecord:
    """Advance one time step and return its record."""
    t = state.t
    if t > config.t_max:
        raise ValueError(f"stepping past t_max={config.t_max}")
    weights = config.weights
    landscape = state.landscape
    prev = state.prev_strategy

    if reorganization_due(t, config.tau):
        coal, outcomes = form_coalition(
            state.population, landscape, prev, weights, state.auction_rng, t
        )
        coal.last_strategy = None if state.coalition is None else state.coalition.last_strategy
        state.coalition = coal
        for o in outcomes:
            state.auction_events.append((t, o.area, o.winner_id, o.winning_bid, o.clearing_price))

    members = [state.population[aid] for aid in state.coalition.members]
    strategy = np.empty(config.n, dtype=np.uint8)
    for area, member in enumerate(members):
        choice = choose_solution(member, landscape, prev, weights)
        s = area_start(area)
        strategy[s:s + AREA_SIZE] = bits_from_code(choice, AREA_SIZE)

    contribs = kernels.contributions_vector(landscape.matrix.deps, landscape.tables, strategy)
    raw = mean_ascending(contribs)
    norm = raw / landscape.global_max
    utilities = tuple(realized_utility(landscape, area, strategy, weights) for area in range(N_AREAS))

    # adaptation runs before the previous-strategy update, so expectations
    # still condition on the t-1 residuals, like the in-step decisions do
    adapting = state.population if config.adapt_scope == "population" else members
    for agent in adapting:
        adapt_capabilities(
            agent, state.agent_rng, config.p, landscape, prev, weights, config.learn_base
        )

    state.coalition.last_strategy = strategy
    state.prev_strategy = strategy
    state.t = t + 1
    return TimeStepRecord(t, strategy, raw, norm, state.coalition.members, utilities)


def run_round(config: ScenarioConfig, round_index: int, record_auctions: bool = False) -> RoundResult:
    """Execute one full round of T steps."""
    state = init_round(config, round_index)
    t_max = config.t_max
    raw = np.empty(t_max, dtype=np.float64)
    norm = np.empty(t_max, dtype=np.float64)
    codes = np.empty(t_max, dtype=np.uint16)
    members = np.empty((t_max, N_AREAS), dtype=np.int32)
    utilities = np.empty((t_max, N_AREAS), dtype=np.float64)
    for i in range(t_max):
        rec = step(state, config)
        raw[i] = rec.raw_performance
        norm[i] = rec.normalized_performance
        codes[i] = code_from_bits(rec.strategy)
        members[i] = rec.member_ids
        utilities[i] = rec.member_utilities
    events = (
        [(round_index,) + e for e in state.auction_events] if record_auctions else []
    )
    return RoundResult(
        round_index, state.landscape.global_max, raw, norm, codes, members, utilities, events
    )


def run_scenario(
    config: ScenarioConfig,
    workers: int | None = None,
    record_auctions: bool = False,
) -> ScenarioResult:
    """Execute all R rounds of a scenario and aggregate them.

    Rounds are independent; with workers > 1 they run in a process pool.
    Aggregation always consumes them in round-index order, so serial and
    parallel execution produce identical results.
    """
    indices = range(config.rounds)
    runner = partial(run_round, config, record_auctions=record_auctions)
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rounds = list(pool.map(runner, indices, chunksize=max(1, config.rounds // (4 * workers))))
    else:
        rounds = [runner(i) for i in indices]
    series = metrics.normalized_mean_series(rounds)
    return ScenarioResult(config, rounds, series, metrics.manhattan_distance(series))
