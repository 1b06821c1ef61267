"""Density and difficulty metrics plus expressive-range binning.

Density counts non-background tiles. Difficulty counts enemy/hazard
tiles anywhere plus gap tiles, where a gap is a bottom-row cell holding
a background tile. Bins are lower-inclusive, upper-exclusive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, NamedTuple, Optional

from .corpus import TileCatalog, TileGrid

if TYPE_CHECKING:
    from .pathfind import PathResult


class MetricsError(ValueError):
    pass


class CellKey(NamedTuple):
    """One cell of the expressive-range grid."""

    density_bin: int
    difficulty_bin: int


@dataclass(frozen=True)
class AxesSpec:
    """Bin layout of the density x difficulty expressive range."""

    density_min: int = 0
    density_max: int = 150
    density_bin_width: int = 15
    difficulty_min: int = 0
    difficulty_max: int = 24
    difficulty_bin_width: int = 3

    def __post_init__(self) -> None:
        for lo, hi, width, name in (
            (self.density_min, self.density_max, self.density_bin_width, "density"),
            (self.difficulty_min, self.difficulty_max, self.difficulty_bin_width, "difficulty"),
        ):
            if width < 1:
                raise MetricsError(f"{name} bin width must be >= 1")
            if hi <= lo:
                raise MetricsError(f"{name} max must exceed min")
            if (hi - lo) % width != 0:
                raise MetricsError(f"{name} range is not a whole number of bins")

    @property
    def density_bins(self) -> int:
        return (self.density_max - self.density_min) // self.density_bin_width

    @property
    def difficulty_bins(self) -> int:
        return (self.difficulty_max - self.difficulty_min) // self.difficulty_bin_width

    def all_cells(self) -> list[CellKey]:
        return [
            CellKey(d, h)
            for d in range(self.density_bins)
            for h in range(self.difficulty_bins)
        ]

    def density_range(self, cell: CellKey) -> tuple[int, int]:
        """Inclusive density bounds covered by a cell."""
        lo = self.density_min + cell.density_bin * self.density_bin_width
        return lo, lo + self.density_bin_width - 1

    def difficulty_range(self, cell: CellKey) -> tuple[int, int]:
        """Inclusive difficulty bounds covered by a cell."""
        lo = self.difficulty_min + cell.difficulty_bin * self.difficulty_bin_width
        return lo, lo + self.difficulty_bin_width - 1


def density(segment: TileGrid, catalog: TileCatalog) -> int:
    """Number of tiles that are not background tiles."""
    background = catalog.ids_with("background")
    return sum(1 for t in segment.cells if t not in background)


def difficulty(segment: TileGrid, catalog: TileCatalog) -> int:
    """Number of enemy/hazard tiles plus bottom-row gap tiles."""
    threat = catalog.ids_with("enemy") | catalog.ids_with("hazard")
    background = catalog.ids_with("background")
    bottom = segment.height - 1
    count = 0
    for y in range(segment.height):
        for t in segment.row(y):
            if t in threat or (y == bottom and t in background):
                count += 1
    return count


def bin_cell(d: int, h: int, axes: AxesSpec) -> Optional[CellKey]:
    """Bin a (density, difficulty) pair; None when outside the axes."""
    if not (axes.density_min <= d < axes.density_max):
        return None
    if not (axes.difficulty_min <= h < axes.difficulty_max):
        return None
    return CellKey(
        (d - axes.density_min) // axes.density_bin_width,
        (h - axes.difficulty_min) // axes.difficulty_bin_width,
    )


def interestingness_raw(path: "PathResult") -> int:
    """Path length plus jump count; 0 for unplayable segments."""
    if not path.playable:
        return 0
    return path.length + path.jumps


def normalize(values: list[int | float]) -> list[float]:
    """Min-max normalize to [0, 1]; a constant list maps to all zeros."""
    if not values:
        raise MetricsError("cannot normalize an empty list")
    lo = min(values)
    hi = max(values)
    if hi == lo:
        return [0.0] * len(values)
    return [(v - lo) / (hi - lo) for v in values]
