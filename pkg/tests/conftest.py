import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nkcoalition import kernels
from nkcoalition.landscape import (
    CANONICAL_PAIRS,
    build_interaction_matrix,
    generate_landscape,
    landscape_with_tables,
)


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    kernels.warm_up()


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


def make_landscape(structure="full", k=11, seed=0):
    matrix = build_interaction_matrix(structure, k)
    return generate_landscape(matrix, np.random.default_rng(seed))


def constant_landscape(value=0.5, structure="concentrated", k=3):
    matrix = build_interaction_matrix(structure, k)
    tables = np.full((matrix.n, 1 << (k + 1)), value, dtype=np.float64)
    return landscape_with_tables(matrix, tables)


def random_canonical_landscape(seed):
    structure, k = CANONICAL_PAIRS[seed % len(CANONICAL_PAIRS)]
    return make_landscape(structure, k, seed)
