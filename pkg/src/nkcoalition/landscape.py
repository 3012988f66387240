"""NK performance landscapes: interaction structure, lookup tables, evaluation.

A landscape maps each of the 2**n binary strategies to a coalition
performance, the mean of n per-decision contributions. Each contribution is a
table lookup keyed by the decision's own bit plus the bits of its k
interaction partners. The exhaustive maximum over all strategies is computed
once at generation time and cached for normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

N_DECISIONS = 12
BLOCK_SIZE = 4
N_BLOCKS = 3

CONCENTRATED = "concentrated"
SCATTERED = "scattered"
FULL = "full"
CUSTOM = "custom"

STRUCTURES = (CONCENTRATED, SCATTERED, FULL, CUSTOM)

# the five (structure, k) cells of the experiment grid
CANONICAL_PAIRS = (
    (CONCENTRATED, 3),
    (CONCENTRATED, 5),
    (SCATTERED, 3),
    (SCATTERED, 5),
    (FULL, 11),
)


class MatrixParseError(ValueError):
    """Raised when a matrix file does not parse; carries the 1-based line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


# ---------------------------------------------------------------------------
# bit-string helpers (strategies are uint8 arrays, codes are their big-endian
# integer reading, e.g. "110000000000" -> 3072)
# ---------------------------------------------------------------------------

def bits_from_code(code: int, width: int) -> np.ndarray:
    if not 0 <= code < (1 << width):
        raise ValueError(f"code {code} out of range for width {width}")
    return np.array([(code >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def code_from_bits(bits: np.ndarray) -> int:
    code = 0
    for b in bits:
        code = (code << 1) | int(b)
    return code


def format_bits(bits: np.ndarray) -> str:
    return "".join(str(int(b)) for b in bits)


def parse_bits(text: str) -> np.ndarray:
    if set(text) - {"0", "1"}:
        raise ValueError(f"not a bit-string: {text!r}")
    return np.array([int(ch) for ch in text], dtype=np.uint8)


def random_bits(rng: np.random.Generator, width: int) -> np.ndarray:
    return rng.integers(0, 2, size=width, dtype=np.uint8)


# ---------------------------------------------------------------------------
# interaction matrices
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class InteractionMatrix:
    n: int
    k: int
    structure: str
    deps: np.ndarray  # int64 (n, k), ascending per row

    def __post_init__(self):
        self.deps = np.asarray(self.deps, dtype=np.int64)
        if self.deps.shape != (self.n, self.k):
            raise ValueError(f"deps shape {self.deps.shape} != ({self.n}, {self.k})")
        for i in range(self.n):
            row = self.deps[i]
            if len(set(row.tolist())) != self.k:
                raise ValueError(f"row {i}: dependencies not distinct")
            if i in row:
                raise ValueError(f"row {i}: decision depends on itself")
            if self.k and (row.min() < 0 or row.max() >= self.n):
                raise ValueError(f"row {i}: dependency index out of range")

    def as_text(self) -> str:
        """Render in the matrix file format ('x' marks, diagonal included)."""
        lines = []
        for i in range(self.n):
            marked = set(self.deps[i].tolist()) | {i}
            lines.append("".join("x" if j in marked else "." for j in range(self.n)))
        return "\n".join(lines) + "\n"


def _block_of(i: int) -> int:
    return i // BLOCK_SIZE


def build_interaction_matrix(structure: str, k: int, n: int = N_DECISIONS) -> InteractionMatrix:
    """Construct one of the canonical interaction patterns.

    concentrated k=3: each decision depends on the three others of its
    4-decision block. concentrated k=5: block plus the first two decisions of
    the next block (cyclic). scattered k=3: cyclic shifts {4, 6, 8}, scattered
    k=5: cyclic shifts {4..8}; shifts in [4, 8] never land in the own block.
    full: every other decision.
    """
    if structure == FULL:
        if k != n - 1:
            raise ValueError(f"unsupported (structure, k) pair: ({structure}, {k})")
        deps = np.array([[j for j in range(n) if j != i] for i in range(n)], dtype=np.int64)
        return InteractionMatrix(n, k, structure, deps)

    if n != N_DECISIONS or (structure, k) not in CANONICAL_PAIRS:
        raise ValueError(f"unsupported (structure, k) pair: ({structure}, {k}) with n={n}")

    rows = []
    for i in range(n):
        if structure == CONCENTRATED:
            b = _block_of(i)
            block = [j for j in range(BLOCK_SIZE * b, BLOCK_SIZE * (b + 1)) if j != i]
            if k == 3:
                row = block
            else:  # k == 5: the two decisions closest to the own block
                nb = BLOCK_SIZE * ((b + 1) % N_BLOCKS)
                row = block + [nb, nb + 1]
        else:  # scattered
            shifts = (4, 6, 8) if k == 3 else (4, 5, 6, 7, 8)
            row = [(i + s) % n for s in shifts]
        rows.append(sorted(row))
    return InteractionMatrix(n, k, structure, np.array(rows, dtype=np.int64))


def load_interaction_matrix(text: str) -> InteractionMatrix:
    """Parse an n x n matrix of 'x'/'.' characters (diagonal mandatory)."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    n = len(lines)
    if n == 0:
        raise MatrixParseError(1, "empty matrix file")
    rows = []
    k = None
    for idx, line in enumerate(lines):
        lineno = idx + 1
        if len(line) != n:
            raise MatrixParseError(lineno, f"expected {n} characters, got {len(line)}")
        bad = set(line) - {"x", "."}
        if bad:
            raise MatrixParseError(lineno, f"invalid characters {sorted(bad)}")
        if line[idx] != "x":
            raise MatrixParseError(lineno, "diagonal entry must be 'x'")
        deps = [j for j, ch in enumerate(line) if ch == "x" and j != idx]
        if k is None:
            k = len(deps)
        elif len(deps) != k:
            raise MatrixParseError(lineno, f"row has {len(deps)} dependencies, expected {k}")
        rows.append(deps)
    return InteractionMatrix(n, k, CUSTOM, np.array(rows, dtype=np.int64))


# ---------------------------------------------------------------------------
# landscapes
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class Landscape:
    matrix: InteractionMatrix
    tables: np.ndarray  # float64 (n, 2**(k+1))
    global_max: float
    global_max_code: int  # smallest strategy encoding attaining the maximum

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def global_max_argmax(self) -> np.ndarray:
        return bits_from_code(self.global_max_code, self.n)


def generate_landscape(matrix: InteractionMatrix, rng: np.random.Generator) -> Landscape:
    """Draw all contribution tables U[0,1) and cache the exhaustive maximum."""
    tables = rng.random((matrix.n, 1 << (matrix.k + 1)), dtype=np.float64)
    perf = kernels.all_performances(matrix.deps, tables)
    best = int(np.argmax(perf))  # first occurrence = smallest encoding
    return Landscape(matrix, tables, float(perf[best]), best)


def landscape_with_tables(matrix: InteractionMatrix, tables: np.ndarray) -> Landscape:
    """Build a landscape from explicit tables, recomputing the cached maximum.

    Meant for tests (constant or rescaled tables); values outside [0,1] are
    accepted here.
    """
    tables = np.ascontiguousarray(tables, dtype=np.float64)
    perf = kernels.all_performances(matrix.deps, tables)
    best = int(np.argmax(perf))
    return Landscape(matrix, tables, float(perf[best]), best)


def contribution(landscape: Landscape, i: int, strategy_bits: np.ndarray) -> float:
    """Contribution of decision i under the given full strategy."""
    n, k = landscape.matrix.deps.shape
    if not 0 <= i < n:
        raise ValueError(f"decision index {i} out of range [0, {n})")
    key = int(strategy_bits[i]) << k
    for r in range(k):
        key |= int(strategy_bits[landscape.matrix.deps[i, r]]) << (k - 1 - r)
    return float(landscape.tables[i, key])


def mean_ascending(values: np.ndarray) -> float:
    """Mean with a pinned left-to-right summation order."""
    s = np.float64(0.0)
    for v in values:
        s = s + v
    return float(s / len(values))


def performance(landscape: Landscape, strategy_bits: np.ndarray) -> float:
    """Coalition performance: mean of the n contributions."""
    if len(strategy_bits) != landscape.n:
        raise ValueError(f"strategy has {len(strategy_bits)} bits, expected {landscape.n}")
    contribs = kernels.contributions_vector(landscape.matrix.deps, landscape.tables, strategy_bits)
    return mean_ascending(contribs)


def global_max(landscape: Landscape) -> float:
    return landscape.global_max
