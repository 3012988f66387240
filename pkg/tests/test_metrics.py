import numpy as np
import pytest

from nkcoalition.engine import RoundResult
from nkcoalition.metrics import manhattan_distance, normalized_mean_series


def synthetic_round(idx, normalized):
    normalized = np.asarray(normalized, dtype=np.float64)
    t = len(normalized)
    return RoundResult(
        round_index=idx,
        global_max=1.0,
        raw=normalized.copy(),
        normalized=normalized,
        strategy_codes=np.zeros(t, dtype=np.uint16),
        member_ids=np.zeros((t, 3), dtype=np.int32),
        member_utilities=np.zeros((t, 3), dtype=np.float64),
    )


class TestNormalizedMeanSeries:
    def test_single_optimal_round_is_all_ones(self):
        series = normalized_mean_series([synthetic_round(0, [1.0, 1.0, 1.0])])
        assert series.tolist() == [1.0, 1.0, 1.0]

    def test_pointwise_mean_of_two_rounds(self):
        series = normalized_mean_series(
            [synthetic_round(0, [0.8, 0.8]), synthetic_round(1, [0.6, 0.4])]
        )
        assert series.tolist() == [0.7, pytest.approx(0.6)]

    def test_paper_scale_shape_accepted(self):
        rng = np.random.default_rng(0)
        rounds = [synthetic_round(i, rng.random(200)) for i in range(1500)]
        series = normalized_mean_series(rounds)
        assert series.shape == (200,)

    def test_empty_round_set_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            normalized_mean_series([])

    def test_unequal_lengths_rejected(self):
        with pytest.raises(ValueError, match="same number"):
            normalized_mean_series([synthetic_round(0, [1.0]), synthetic_round(1, [1.0, 1.0])])

    def test_round_order_does_not_matter(self):
        rng = np.random.default_rng(1)
        rounds = [synthetic_round(i, rng.random(50)) for i in range(10)]
        forward = normalized_mean_series(rounds)
        backward = normalized_mean_series(list(reversed(rounds)))
        assert forward.tobytes() == backward.tobytes()

    def test_normalization_is_scale_free(self):
        # scaling one round's raw values and its global max together leaves
        # its normalized series unchanged (exactly so for power-of-two scales)
        rng = np.random.default_rng(4)
        raw = rng.random(100)
        gmax = 0.95
        assert np.array_equal((raw * 4.0) / (gmax * 4.0), raw / gmax)
        assert np.allclose((raw * 7.0) / (gmax * 7.0), raw / gmax, rtol=1e-15, atol=0)


class TestManhattanDistance:
    def test_perfect_series_has_zero_distance(self):
        assert manhattan_distance(np.ones(200)) == 0.0

    def test_constant_shortfall(self):
        assert manhattan_distance(np.full(200, 0.9)) == pytest.approx(20.0)

    def test_one_pass_equals_algebraic_identity(self):
        rng = np.random.default_rng(2)
        series = rng.random(200)
        d = manhattan_distance(series)
        assert d == pytest.approx(200.0 - float(np.sum(series)), abs=1e-9)

    def test_monotone_in_pointwise_improvement(self):
        rng = np.random.default_rng(3)
        series = rng.random(100) * 0.9
        improved = series + 0.05
        assert manhattan_distance(improved) < manhattan_distance(series)

    def test_empty_series_rejected(self):
        with pytest.raises(ValueError, match="non-empty"):
            manhattan_distance(np.array([]))

    def test_zero_iff_all_ones(self):
        series = np.ones(50)
        series[20] = 0.999
        assert manhattan_distance(series) > 0.0
