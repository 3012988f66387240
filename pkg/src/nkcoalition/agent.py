"""Boundedly rational agents: repertoires, utilities, choice, adaptation.

Each agent owns one of three 4-decision areas of expertise and knows a
non-empty repertoire of 4-bit partial solutions (stored as integer codes
0..15, kept sorted ascending). Expectations freeze the 8 residual decisions at
their previous-step values; utility weights the own-area mean contribution by
alpha and the residual mean by beta.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .landscape import Landscape, bits_from_code, code_from_bits

AREA_SIZE = 4
N_AREAS = 3
N_PARTIAL_SOLUTIONS = 1 << AREA_SIZE  # 16


def area_start(area: int) -> int:
    if not 0 <= area < N_AREAS:
        raise ValueError(f"area {area} out of range [0, {N_AREAS})")
    return AREA_SIZE * area


def area_positions(area: int) -> list[int]:
    s = area_start(area)
    return list(range(s, s + AREA_SIZE))


def residual_positions(area: int) -> list[int]:
    s = area_start(area)
    return [i for i in range(AREA_SIZE * N_AREAS) if not s <= i < s + AREA_SIZE]


@dataclass(frozen=True)
class UtilityWeights:
    alpha: float = 0.5
    beta: float = 0.5

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("utility weights must be non-negative")


@dataclass(eq=False)
class Agent:
    id: int
    area: int
    repertoire: list[int] = field(default_factory=list)  # sorted ascending
    current_choice: int | None = None

    def __post_init__(self):
        if not self.repertoire:
            raise ValueError("repertoire must be non-empty")
        self.repertoire = sorted(set(int(c) for c in self.repertoire))
        if self.repertoire[0] < 0 or self.repertoire[-1] >= N_PARTIAL_SOLUTIONS:
            raise ValueError("partial-solution codes must be in [0, 16)")
        self._codes_cache: np.ndarray | None = None

    def knows(self, code: int) -> bool:
        idx = bisect.bisect_left(self.repertoire, code)
        return idx < len(self.repertoire) and self.repertoire[idx] == code

    def codes_array(self) -> np.ndarray:
        # learn/forget always change the repertoire length, so length is a
        # sufficient staleness check for the cached array
        cached = self._codes_cache
        if cached is None or len(cached) != len(self.repertoire):
            cached = self._codes_cache = np.array(self.repertoire, dtype=np.int64)
        return cached


def hybrid_strategy(area: int, own_code: int, residual_source: np.ndarray) -> np.ndarray:
    """Splice a partial solution over the area positions of a full strategy."""
    bits = residual_source.astype(np.uint8).copy()
    bits[area_start(area):area_start(area) + AREA_SIZE] = bits_from_code(own_code, AREA_SIZE)
    return bits


def expected_contribution(
    landscape: Landscape, area: int, i: int, own_code: int, residual_prev: np.ndarray
) -> float:
    """Expected contribution of decision i: own bits at t, residuals frozen at t-1."""
    from .landscape import contribution

    if i not in area_positions(area):
        raise ValueError(f"decision {i} is not in area {area}")
    return contribution(landscape, i, hybrid_strategy(area, own_code, residual_prev))


def expected_utilities(
    landscape: Landscape,
    area: int,
    candidate_codes: list[int] | np.ndarray,
    residual_prev: np.ndarray,
    weights: UtilityWeights,
) -> np.ndarray:
    """Expected utility of each candidate partial solution, in the given order."""
    if not 0 <= area < N_AREAS:
        raise ValueError(f"area {area} out of range [0, {N_AREAS})")
    codes = (
        candidate_codes
        if isinstance(candidate_codes, np.ndarray)
        else np.asarray(candidate_codes, dtype=np.int64)
    )
    return kernels.batch_expected_utilities(
        landscape.matrix.deps,
        landscape.tables,
        AREA_SIZE * area,
        codes,
        residual_prev,
        weights.alpha,
        weights.beta,
    )


def expected_utility(
    landscape: Landscape,
    area: int,
    candidate_code: int,
    residual_prev: np.ndarray,
    weights: UtilityWeights,
) -> float:
    return float(expected_utilities(landscape, area, [candidate_code], residual_prev, weights)[0])


def realized_utility(
    landscape: Landscape, area: int, strategy_bits: np.ndarray, weights: UtilityWeights
) -> float:
    """Realized utility under the enacted full strategy.

    Evaluating the hybrid of the strategy's own-area bits over the strategy
    itself reproduces the realized contributions exactly, so this shares the
    expected-utility kernel.
    """
    s = area_start(area)
    own_code = code_from_bits(strategy_bits[s:s + AREA_SIZE])
    return float(expected_utilities(landscape, area, [own_code], strategy_bits, weights)[0])


def choose_solution(
    agent: Agent, landscape: Landscape, residual_prev: np.ndarray, weights: UtilityWeights
) -> int:
    """Pick the repertoire member with the highest expected utility.

    Ties go to the smallest code; the repertoire is sorted ascending, so the
    first maximum wins. Sets the agent's current choice.
    """
    utils = expected_utilities(landscape, agent.area, agent.codes_array(), residual_prev, weights)
    choice = agent.repertoire[int(utils.argmax())]
    agent.current_choice = choice
    return choice


def adapt_capabilities(
    agent: Agent,
    rng: np.random.Generator,
    p: float,
    landscape: Landscape,
    residual_source: np.ndarray,
    weights: UtilityWeights,
    learn_base: str = "member",
) -> None:
    """One learn-then-forget adaptation step, each firing with probability p.

    Learning drafts a Hamming-1 neighbor (uniform over the 4 neighbors) of a
    base solution: a uniformly drawn repertoire member by default, or the
    agent's current choice with ``learn_base="choice"``; an already-known
    neighbor is a no-op. Forgetting drops the member with the lowest expected
    utility, ties to the smallest code, unless it is the current choice or the
    last member.

    The draw sequence per call is fixed (learn uniform, conditional base and
    bit picks, forget uniform) so runs replay deterministically.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"adaptation probability {p} outside [0, 1]")
    if learn_base not in ("choice", "member"):
        raise ValueError(f"learn_base must be 'choice' or 'member', got {learn_base!r}")

    if rng.random() < p:
        if learn_base == "choice" and agent.current_choice is not None:
            base = agent.current_choice
        else:
            base = agent.repertoire[int(rng.integers(len(agent.repertoire)))]
        neighbor = base ^ (1 << int(rng.integers(AREA_SIZE)))
        if not agent.knows(neighbor):
            bisect.insort(agent.repertoire, neighbor)

    if rng.random() < p and len(agent.repertoire) > 1:
        utils = expected_utilities(landscape, agent.area, agent.codes_array(), residual_source, weights)
        victim = agent.repertoire[int(utils.argmin())]
        if victim != agent.current_choice:
            agent.repertoire.remove(victim)
