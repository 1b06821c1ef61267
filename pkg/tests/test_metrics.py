import pytest
from hypothesis import given, strategies as st

from rangeforge.corpus import TileGrid, default_catalog, parse_level
from rangeforge.metrics import (
    AxesSpec,
    CellKey,
    MetricsError,
    bin_cell,
    density,
    difficulty,
    interestingness_raw,
    normalize,
)
from rangeforge.pathfind import PathResult

CATALOG = default_catalog()


def grid_from(text: str) -> TileGrid:
    return parse_level(text, CATALOG)


class TestDensity:
    def test_all_background(self):
        grid = grid_from("\n".join(["-" * 20] * 14))
        assert density(grid, CATALOG) == 0

    def test_direct_count(self):
        assert density(grid_from("X-\n-X"), CATALOG) == 2

    def test_upper_bound(self):
        grid = grid_from("\n".join(["X" * 20] * 14))
        assert density(grid, CATALOG) == 280

    def test_coins_and_enemies_are_not_background(self):
        assert density(grid_from("oE\n--"), CATALOG) == 2

    @given(st.lists(st.integers(min_value=0, max_value=10), min_size=4, max_size=4))
    def test_density_plus_background_is_area(self, ids):
        grid = TileGrid(2, 2, tuple(ids))
        background = sum(1 for t in ids if t == 0)
        assert density(grid, CATALOG) + background == 4


class TestDifficulty:
    def test_solid_floor_no_enemies(self):
        grid = grid_from("----\nXXXX")
        assert difficulty(grid, CATALOG) == 0

    def test_gaps_plus_enemy(self):
        grid = grid_from("-E--\n-X--")
        assert difficulty(grid, CATALOG) == 3 + 1

    def test_all_background_counts_bottom_row(self):
        grid = grid_from("\n".join(["-" * 20] * 14))
        # Oracle: direct count of bottom-row background cells.
        bottom = [grid.tile_at(x, 13) for x in range(20)]
        expected = sum(1 for t in bottom if CATALOG.has_category(t, "background"))
        assert expected == 20
        assert difficulty(grid, CATALOG) == expected

    def test_bounded_by_area(self):
        grid = grid_from("EE\nEE")
        assert difficulty(grid, CATALOG) <= 4


class TestBinCell:
    AXES = AxesSpec(0, 150, 15, 0, 24, 3)

    def test_paper_cell(self):
        assert bin_cell(67, 13, self.AXES) == CellKey(4, 4)
        assert self.AXES.density_range(CellKey(4, 4)) == (60, 74)
        assert self.AXES.difficulty_range(CellKey(4, 4)) == (12, 14)

    def test_lower_boundary(self):
        assert bin_cell(0, 0, self.AXES) == CellKey(0, 0)

    def test_exclusive_upper_bound(self):
        assert bin_cell(150, 0, self.AXES) is None
        assert bin_cell(0, 24, self.AXES) is None

    def test_invalid_axes(self):
        with pytest.raises(MetricsError):
            AxesSpec(0, 100, 15, 0, 24, 3)  # 100 not divisible by 15

    @given(st.integers(0, 149), st.integers(0, 149))
    def test_monotone_in_density(self, a, b):
        lo, hi = sorted((a, b))
        cell_lo = bin_cell(lo, 0, self.AXES)
        cell_hi = bin_cell(hi, 0, self.AXES)
        assert cell_lo.density_bin <= cell_hi.density_bin

    def test_total_over_axes(self):
        for d in range(-5, 160):
            cell = bin_cell(d, 5, self.AXES)
            if 0 <= d < 150:
                assert cell is not None
                lo, hi = self.AXES.density_range(cell)
                assert lo <= d <= hi
            else:
                assert cell is None


class TestInterestingness:
    def test_sum(self):
        moves = tuple([((0, 0), "start")] + [((i, 0), "walk") for i in range(1, 26)])
        path = PathResult(True, moves, 25, 4)
        assert interestingness_raw(path) == 29

    def test_unplayable_is_zero(self):
        assert interestingness_raw(PathResult(False, (), 0, 0)) == 0

    def test_straight_walk(self):
        path = PathResult(True, (), 19, 0)
        assert interestingness_raw(path) == 19


class TestNormalize:
    def test_minmax(self):
        out = normalize([10, 29, 40])
        assert out[0] == 0.0
        assert out[2] == 1.0
        assert out[1] == pytest.approx((29 - 10) / 30)

    def test_degenerate_range(self):
        assert normalize([7, 7, 7]) == [0.0, 0.0, 0.0]

    def test_empty_list(self):
        with pytest.raises(MetricsError):
            normalize([])

    @given(st.lists(st.integers(0, 1000), min_size=2, max_size=20))
    def test_monotone(self, values):
        out = normalize(values)
        for i in range(len(values)):
            for j in range(len(values)):
                if values[i] <= values[j]:
                    assert out[i] <= out[j]

    def test_idempotent_on_normalized(self):
        data = [0.0, 0.25, 1.0]
        assert normalize(data) == data
