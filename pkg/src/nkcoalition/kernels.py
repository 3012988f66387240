"""Hot numeric kernels with two interchangeable backends.

The default backend compiles the inner loops with numba's ``@njit``. Setting
the environment variable ``NKCOALITION_NO_NUMBA=1`` (checked once, at import
time) selects a vectorized pure-numpy fallback instead; the fallback is also
used automatically when numba is not installed.

Both backends are written to produce bit-identical float64 results:
contributions are accumulated in ascending decision-index order, own-area and
residual sums are kept in separate accumulators, and the final expressions are
spelled identically. ``benchmarks/compare_backends.py`` times the two paths
against each other and checks that their outputs agree exactly.

Array conventions shared by every kernel:
  deps    int64 (n, k)   dependency indices per decision, ascending per row
  tables  float64 (n, 2**(k+1))   contribution lookup tables
  bits    uint8 (n,)     one full strategy

Lookup keys put the decision's own bit in the top position followed by the
dependency bits in stored (ascending) order.
"""

from __future__ import annotations

import os

import numpy as np

NUMBA_ENV_FLAG = "NKCOALITION_NO_NUMBA"

AREA_SIZE = 4


def _env_disabled() -> bool:
    return os.environ.get(NUMBA_ENV_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


try:
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env-flag fallback
    _HAVE_NUMBA = False

NUMBA_ENABLED = _HAVE_NUMBA and not _env_disabled()


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


def _dep_weights(k: int) -> np.ndarray:
    """Bit weights for dependency positions: first stored dep is most significant."""
    if k == 0:
        return np.zeros(0, dtype=np.int64)
    return (np.int64(1) << np.arange(k - 1, -1, -1, dtype=np.int64)).astype(np.int64)


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------

def contributions_vector_numpy(deps: np.ndarray, tables: np.ndarray, bits: np.ndarray) -> np.ndarray:
    """Contribution of every decision under one full strategy."""
    n, k = deps.shape
    b = bits.astype(np.int64)
    keys = b << k
    if k:
        keys = keys + b[deps] @ _dep_weights(k)
    return tables[np.arange(n), keys]


def all_performances_numpy(deps: np.ndarray, tables: np.ndarray) -> np.ndarray:
    """Mean contribution of every one of the 2**n strategies.

    Index ``s`` of the result is the strategy whose bit-string, read left to
    right, is the binary representation of ``s``.
    """
    n, k = deps.shape
    count = 1 << n
    codes = np.arange(count, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    bits = ((codes[:, None] >> shifts[None, :]) & 1).astype(np.int64)
    w = _dep_weights(k)
    acc = np.zeros(count, dtype=np.float64)
    for i in range(n):  # ascending, so the summation order is pinned
        keys = bits[:, i] << k
        if k:
            keys = keys + bits[:, deps[i]] @ w
        acc += tables[i, keys]
    return acc / np.float64(n)


def batch_expected_utilities_numpy(
    deps: np.ndarray,
    tables: np.ndarray,
    area_start: int,
    candidate_codes: np.ndarray,
    residual_bits: np.ndarray,
    alpha: float,
    beta: float,
) -> np.ndarray:
    """Utility of each candidate partial solution spliced over residual_bits.

    The hybrid strategy takes the candidate's four bits at positions
    ``area_start..area_start+3`` and ``residual_bits`` everywhere else; the
    returned value is ``alpha * mean(own contributions) + beta * mean(residual
    contributions)`` evaluated on that hybrid.
    """
    n, k = deps.shape
    m = candidate_codes.shape[0]
    w = _dep_weights(k)
    hyb = np.broadcast_to(residual_bits.astype(np.int64), (m, n)).copy()
    for b in range(AREA_SIZE):
        hyb[:, area_start + b] = (candidate_codes >> (AREA_SIZE - 1 - b)) & 1
    own = np.zeros(m, dtype=np.float64)
    res = np.zeros(m, dtype=np.float64)
    for i in range(n):  # ascending
        keys = hyb[:, i] << k
        if k:
            keys = keys + hyb[:, deps[i]] @ w
        c = tables[i, keys]
        if area_start <= i < area_start + AREA_SIZE:
            own += c
        else:
            res += c
    return alpha * (own / 4.0) + beta * (res / float(n - AREA_SIZE))


def best_utilities_numpy(
    deps: np.ndarray,
    tables: np.ndarray,
    area_starts: np.ndarray,
    repertoire_codes: np.ndarray,
    repertoire_sizes: np.ndarray,
    residual_bits: np.ndarray,
    alpha: float,
    beta: float,
) -> np.ndarray:
    """Best expected utility per agent over its repertoire (the truthful bid).

    ``repertoire_codes`` is zero-padded to a common width; row a holds
    ``repertoire_sizes[a]`` valid codes.
    """
    m = area_starts.shape[0]
    out = np.empty(m, dtype=np.float64)
    for a in range(m):
        utils = batch_expected_utilities_numpy(
            deps,
            tables,
            int(area_starts[a]),
            repertoire_codes[a, : repertoire_sizes[a]],
            residual_bits,
            alpha,
            beta,
        )
        out[a] = utils.max()
    return out


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

if NUMBA_ENABLED:

    @_njit(cache=True)
    def _contribs_jit(deps, tables, bits):
        n, k = deps.shape
        out = np.empty(n, dtype=np.float64)
        for i in range(n):
            key = np.int64(bits[i]) << k
            for r in range(k):
                key |= np.int64(bits[deps[i, r]]) << (k - 1 - r)
            out[i] = tables[i, key]
        return out

    @_njit(cache=True)
    def _all_performances_jit(deps, tables):
        n, k = deps.shape
        count = 1 << n
        out = np.empty(count, dtype=np.float64)
        bits = np.empty(n, dtype=np.uint8)
        for code in range(count):
            for i in range(n):
                bits[i] = (code >> (n - 1 - i)) & 1
            s = 0.0
            for i in range(n):
                key = np.int64(bits[i]) << k
                for r in range(k):
                    key |= np.int64(bits[deps[i, r]]) << (k - 1 - r)
                s += tables[i, key]
            out[code] = s / n
        return out

    @_njit(cache=True)
    def _batch_utils_jit(deps, tables, area_start, candidate_codes, residual_bits, alpha, beta):
        n, k = deps.shape
        m = candidate_codes.shape[0]
        out = np.empty(m, dtype=np.float64)
        hyb = np.empty(n, dtype=np.uint8)
        for j in range(m):
            for i in range(n):
                hyb[i] = residual_bits[i]
            code = candidate_codes[j]
            for b in range(4):
                hyb[area_start + b] = (code >> (3 - b)) & 1
            own = 0.0
            res = 0.0
            for i in range(n):
                key = np.int64(hyb[i]) << k
                for r in range(k):
                    key |= np.int64(hyb[deps[i, r]]) << (k - 1 - r)
                c = tables[i, key]
                if area_start <= i < area_start + 4:
                    own += c
                else:
                    res += c
            out[j] = alpha * (own / 4.0) + beta * (res / (n - 4.0))
        return out

    @_njit(cache=True)
    def _best_utils_jit(deps, tables, area_starts, repertoire_codes, repertoire_sizes, residual_bits, alpha, beta):
        n, k = deps.shape
        m = area_starts.shape[0]
        out = np.empty(m, dtype=np.float64)
        hyb = np.empty(n, dtype=np.uint8)
        for a in range(m):
            start = area_starts[a]
            best = -1.0
            for j in range(repertoire_sizes[a]):
                code = repertoire_codes[a, j]
                for i in range(n):
                    hyb[i] = residual_bits[i]
                for b in range(4):
                    hyb[start + b] = (code >> (3 - b)) & 1
                own = 0.0
                res = 0.0
                for i in range(n):
                    key = np.int64(hyb[i]) << k
                    for r in range(k):
                        key |= np.int64(hyb[deps[i, r]]) << (k - 1 - r)
                    c = tables[i, key]
                    if start <= i < start + 4:
                        own += c
                    else:
                        res += c
                u = alpha * (own / 4.0) + beta * (res / (n - 4.0))
                if u > best:
                    best = u
            out[a] = best
        return out

    contributions_vector = _contribs_jit
    all_performances = _all_performances_jit
    batch_expected_utilities = _batch_utils_jit
    best_utilities = _best_utils_jit
else:
    contributions_vector = contributions_vector_numpy
    all_performances = all_performances_numpy
    batch_expected_utilities = batch_expected_utilities_numpy
    best_utilities = best_utilities_numpy


def warm_up() -> None:
    """Trigger JIT compilation of every kernel (no-op on the numpy backend)."""
    deps = np.array([[1, 2], [0, 2], [0, 1]], dtype=np.int64)
    # toy n=3 problem is enough to compile contributions/all_performances
    tables = np.full((3, 8), 0.5, dtype=np.float64)
    bits = np.zeros(3, dtype=np.uint8)
    contributions_vector(deps, tables, bits)
    all_performances(deps, tables)
    deps12 = np.array([[(i + 1) % 12, (i + 2) % 12] for i in range(12)], dtype=np.int64)
    tables12 = np.full((12, 8), 0.5, dtype=np.float64)
    batch_expected_utilities(
        deps12, tables12, 0, np.zeros(1, dtype=np.int64), np.zeros(12, dtype=np.uint8), 0.5, 0.5
    )
    best_utilities(
        deps12,
        tables12,
        np.zeros(1, dtype=np.int64),
        np.zeros((1, 16), dtype=np.int64),
        np.ones(1, dtype=np.int64),
        np.zeros(12, dtype=np.uint8),
        0.5,
        0.5,
    )
