"""Independent brute-force reference evaluator for the test suite.

Deliberately coded without the package's kernels: lookups go through
string-keyed dictionaries built from the landscape tables, and all arithmetic
is plain Python floats. Summations follow the same pinned ascending-index
convention as the package contract, so agreement is expected to be exact.
"""

import itertools


def table_dicts(landscape):
    """Per-decision {key-string: value} lookup dicts, key = own bit + dep bits."""
    deps = landscape.matrix.deps
    n, k = deps.shape
    dicts = []
    for i in range(n):
        d = {}
        for combo in itertools.product("01", repeat=k + 1):
            key = "".join(combo)
            d[key] = float(landscape.tables[i, int(key, 2)])
        dicts.append(d)
    return dicts


def oracle_contribution(landscape, i, bits):
    deps = landscape.matrix.deps
    key = str(int(bits[i])) + "".join(str(int(bits[j])) for j in deps[i])
    return float(landscape.tables[i, int(key, 2)])


def oracle_contributions(landscape, bits, dicts=None):
    deps = landscape.matrix.deps
    n = deps.shape[0]
    if dicts is None:
        return [oracle_contribution(landscape, i, bits) for i in range(n)]
    out = []
    for i in range(n):
        key = str(int(bits[i])) + "".join(str(int(bits[j])) for j in deps[i])
        out.append(dicts[i][key])
    return out


def oracle_performance(landscape, bits, dicts=None):
    total = 0.0
    for c in oracle_contributions(landscape, bits, dicts):
        total += c
    return total / landscape.matrix.n


def all_strategies(n):
    """All 2**n bit tuples, ordered by their big-endian integer encoding."""
    for code in range(1 << n):
        yield code, tuple((code >> (n - 1 - i)) & 1 for i in range(n))


def oracle_global_max(landscape):
    """Exhaustive maximum and the smallest-encoding argmax."""
    dicts = table_dicts(landscape)
    best_code, best_perf = 0, -1.0
    for code, bits in all_strategies(landscape.matrix.n):
        perf = oracle_performance(landscape, bits, dicts)
        if perf > best_perf:
            best_code, best_perf = code, perf
    return best_perf, best_code


def oracle_hybrid(area, own_bits, residual_bits):
    """Full strategy: own_bits at the area's 4 positions, residual elsewhere."""
    bits = list(int(b) for b in residual_bits)
    for offset, b in enumerate(own_bits):
        bits[4 * area + offset] = int(b)
    return tuple(bits)


def oracle_utility(landscape, area, bits, alpha, beta):
    """alpha * own-area mean + beta * residual mean of the contributions."""
    contribs = oracle_contributions(landscape, bits)
    own = 0.0
    res = 0.0
    for i, c in enumerate(contribs):
        if 4 * area <= i < 4 * area + 4:
            own += c
        else:
            res += c
    return alpha * (own / 4.0) + beta * (res / 8.0)


def partial_bits(code):
    return tuple((code >> (3 - b)) & 1 for b in range(4))
