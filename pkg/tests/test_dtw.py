import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from warpwatch.dtw import (
    BandSpec,
    WarpingPath,
    accumulated_cost_matrix,
    backtrack,
    dtw,
    local_cost_matrix,
)
from warpwatch.errors import BandInfeasibleError, DegenerateRangeError, EmptySeriesError
from warpwatch.testkit import brute_force_dtw

UNBOUNDED = BandSpec.unconstrained()

small_series = st.lists(
    st.sampled_from([0.0, 1.0, 2.0, 3.0]), min_size=1, max_size=6
)


def path_is_valid(path: WarpingPath, n: int, m: int, band: BandSpec) -> bool:
    pairs = path.pairs
    if pairs[0] != (1, 1) or pairs[-1] != (n, m):
        return False
    for (i1, j1), (i2, j2) in zip(pairs, pairs[1:]):
        if (i2 - i1, j2 - j1) not in {(1, 0), (0, 1), (1, 1)}:
            return False
    return all(band.admits(i, j) for i, j in pairs)


def resummed_cost(path: WarpingPath, x, y) -> float:
    total = 0.0
    for i, j in path:
        total += abs(x[i - 1] - y[j - 1])
    return total


class TestLocalCostMatrix:
    def test_direct_differences(self):
        np.testing.assert_array_equal(local_cost_matrix((0, 1), (1, 0)), [[1, 0], [0, 1]])

    def test_identity(self):
        np.testing.assert_array_equal(local_cost_matrix((7,), (7,)), [[0.0]])

    def test_rectangular(self):
        np.testing.assert_array_equal(
            local_cost_matrix((0, 3, 1), (2, 0)), [[2, 0], [1, 3], [1, 1]]
        )

    def test_empty_rejected(self):
        with pytest.raises(EmptySeriesError):
            local_cost_matrix((), (1, 2))


class TestBandSpec:
    def test_radius_validation(self):
        with pytest.raises(ValueError):
            BandSpec.sakoe_chiba(-1)

    def test_admits(self):
        band = BandSpec.sakoe_chiba(2)
        assert band.admits(5, 7) and not band.admits(5, 8)
        assert UNBOUNDED.admits(0, 99)


class TestDtw:
    @pytest.mark.parametrize("band", [UNBOUNDED, BandSpec.sakoe_chiba(0), BandSpec.sakoe_chiba(3)])
    def test_identical_series(self, band):
        result = dtw((1, 2, 3), (1, 2, 3), band)
        assert result.distance == 0.0
        assert result.path.pairs == ((1, 1), (2, 2), (3, 3))

    def test_radius_zero_is_elementwise_l1(self):
        result = dtw((1, 2, 3), (2, 2, 2), BandSpec.sakoe_chiba(0))
        assert result.distance == 2.0
        assert result.path.pairs == ((1, 1), (2, 2), (3, 3))

    def test_enumeration_oracle_case(self):
        # minimum over all valid paths on the 3x2 grid, computed by the
        # exhaustive oracle before this module existed
        result = dtw((0, 3, 1), (2, 0), UNBOUNDED)
        assert result.distance == 4.0
        assert resummed_cost(result.path, (0, 3, 1), (2, 0)) == pytest.approx(4.0, abs=1e-9)

    def test_band_infeasible(self):
        with pytest.raises(BandInfeasibleError):
            dtw((1, 2, 3), tuple(range(10)), BandSpec.sakoe_chiba(2))

    def test_empty_inputs(self):
        with pytest.raises(EmptySeriesError):
            dtw((), (1,))
        with pytest.raises(EmptySeriesError):
            dtw((1,), ())

    def test_normalize_x_flag(self):
        plain = dtw((0.0, 0.5, 1.0), (0.0, 0.5, 1.0), UNBOUNDED, normalize_x=False)
        scaled = dtw((10.0, 15.0, 20.0), (0.0, 0.5, 1.0), UNBOUNDED, normalize_x=True)
        assert scaled.distance == plain.distance == 0.0

    def test_normalize_degenerate(self):
        with pytest.raises(DegenerateRangeError):
            dtw((5.0, 5.0), (0.0, 1.0), UNBOUNDED, normalize_x=True)

    def test_y_never_normalized(self):
        # y enters costing as-is; distance reflects its raw scale
        result = dtw((0.0, 1.0), (10.0, 20.0), UNBOUNDED)
        assert result.distance == pytest.approx(29.0)


class TestBacktrack:
    def test_single_cell(self):
        path = backtrack(np.array([[0.7]]), UNBOUNDED)
        assert path.pairs == ((1, 1),)

    def test_pure_diagonal_for_identical_series(self):
        cost = local_cost_matrix((1, 2, 3), (1, 2, 3))
        acc = accumulated_cost_matrix(cost, UNBOUNDED)
        assert backtrack(acc, UNBOUNDED).pairs == ((1, 1), (2, 2), (3, 3))

    def test_recovers_oracle_cost(self):
        x, y = (0, 3, 1), (2, 0)
        acc = accumulated_cost_matrix(local_cost_matrix(x, y), UNBOUNDED)
        path = backtrack(acc, UNBOUNDED)
        assert resummed_cost(path, x, y) == pytest.approx(4.0, abs=1e-9)

    def test_malformed_matrix_rejected(self):
        with pytest.raises(ValueError):
            backtrack(np.full((2, 2), np.inf), UNBOUNDED)

    def test_diagonal_tie_break(self):
        # all-zero costs: every predecessor ties, diagonal must win
        acc = accumulated_cost_matrix(np.zeros((3, 3)), UNBOUNDED)
        assert backtrack(acc, UNBOUNDED).pairs == ((1, 1), (2, 2), (3, 3))


class TestProperties:
    @given(small_series, small_series, st.sampled_from([None, 0, 1, 2]))
    @settings(max_examples=300, deadline=None)
    def test_matches_enumeration_oracle(self, x, y, radius):
        band = UNBOUNDED if radius is None else BandSpec.sakoe_chiba(radius)
        try:
            expected = brute_force_dtw(x, y, band)
        except BandInfeasibleError:
            with pytest.raises(BandInfeasibleError):
                dtw(x, y, band)
            return
        result = dtw(x, y, band)
        assert result.distance == pytest.approx(expected, abs=1e-9)
        assert path_is_valid(result.path, len(x), len(y), band)
        assert resummed_cost(result.path, x, y) == pytest.approx(result.distance, abs=1e-9)

    @given(small_series, small_series)
    @settings(max_examples=150, deadline=None)
    def test_symmetry(self, x, y):
        assert dtw(x, y, UNBOUNDED).distance == dtw(y, x, UNBOUNDED).distance

    @given(small_series)
    @settings(max_examples=100, deadline=None)
    def test_identity(self, x):
        result = dtw(x, x, UNBOUNDED)
        assert result.distance == 0.0
        assert result.path.pairs == tuple((i, i) for i in range(1, len(x) + 1))

    @given(small_series, small_series)
    @settings(max_examples=150, deadline=None)
    def test_band_nesting(self, x, y):
        gap = abs(len(x) - len(y))
        radii = [r for r in (0, 1, 2, 4) if r >= gap]
        distances = [dtw(x, y, BandSpec.sakoe_chiba(r)).distance for r in radii]
        distances.append(dtw(x, y, UNBOUNDED).distance)
        for tighter, looser in zip(distances, distances[1:]):
            assert tighter >= looser - 1e-12

    @given(small_series, small_series)
    @settings(max_examples=100, deadline=None)
    def test_deterministic_path(self, x, y):
        first = dtw(x, y, UNBOUNDED)
        second = dtw(x, y, UNBOUNDED)
        assert first.path.pairs == second.path.pairs
        assert first.distance == second.distance
