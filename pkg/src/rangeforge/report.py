"""Aggregation of attempt logs and level sets into tabular result files.

All outputs are plain CSV with fixed headers (documented in the
README) so plotting tools can consume them without importing this
package:

* ``attempts.csv``: template,total,successful,failed,timed_out,mean_solve_time,mean_fail_time,mean_time
* ``histogram.csv``: density_bin,difficulty_bin,count,origin
* ``interestingness.csv``: density,difficulty,norm_interest,origin
* ``tilefreq.csv``: row,col,tile_char,fraction
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .corpus import TileCatalog, TileGrid
from .explorer import FAILED, SUCCESS, TIMED_OUT, AttemptRecord
from .metrics import AxesSpec, CellKey, bin_cell, density, difficulty, interestingness_raw, normalize
from .pathfind import PhysicsSpec, find_path


class ReportError(ValueError):
    pass


@dataclass(frozen=True)
class AttemptStats:
    """Attempt counts and timing means for one template.

    Means over empty groups are None (reported as absent), never zero.
    ``mean_time`` averages over every attempt, timeouts included.
    """

    template: str
    total: int
    successful: int
    failed: int
    timed_out: int
    mean_solve_time: float | None
    mean_fail_time: float | None
    mean_time: float | None


def attempt_table(records: list[AttemptRecord]) -> list[AttemptStats]:
    """Per-template statistics, ordered by first appearance in the log."""
    order: list[str] = []
    grouped: dict[str, list[AttemptRecord]] = {}
    for record in records:
        if record.template not in grouped:
            order.append(record.template)
            grouped[record.template] = []
        grouped[record.template].append(record)

    def mean(values: list[float]) -> float | None:
        return sum(values) / len(values) if values else None

    stats = []
    for template in order:
        group = grouped[template]
        solves = [r.elapsed for r in group if r.outcome == SUCCESS]
        fails = [r.elapsed for r in group if r.outcome == FAILED]
        stats.append(
            AttemptStats(
                template=template,
                total=len(group),
                successful=len(solves),
                failed=len(fails),
                timed_out=sum(1 for r in group if r.outcome == TIMED_OUT),
                mean_solve_time=mean(solves),
                mean_fail_time=mean(fails),
                mean_time=mean([r.elapsed for r in group]),
            )
        )
    return stats


def histogram(
    levels: list[TileGrid], axes: AxesSpec, catalog: TileCatalog
) -> tuple[dict[CellKey, int], int]:
    """Per-cell level counts plus a separate out-of-range tally."""
    counts = {cell: 0 for cell in axes.all_cells()}
    out_of_range = 0
    for level in levels:
        cell = bin_cell(density(level, catalog), difficulty(level, catalog), axes)
        if cell is None:
            out_of_range += 1
        else:
            counts[cell] += 1
    return counts, out_of_range


def interestingness_table(
    tagged_levels: list[tuple[TileGrid, str]],
    catalog: TileCatalog,
    physics: PhysicsSpec | None = None,
) -> list[tuple[int, int, float, str]]:
    """(density, difficulty, normalized interestingness, origin) per level.

    Normalization is min-max over exactly the provided set.
    """
    physics = physics or PhysicsSpec()
    raws = []
    rows = []
    for level, origin in tagged_levels:
        path = find_path(level, catalog, physics)
        raws.append(interestingness_raw(path))
        rows.append((density(level, catalog), difficulty(level, catalog), origin))
    normalized = normalize(raws) if raws else []
    return [
        (d, h, norm, origin)
        for (d, h, origin), norm in zip(rows, normalized)
    ]


@dataclass(frozen=True)
class TileFrequencyGrid:
    """Per-position tile occurrence fractions across a level set."""

    width: int
    height: int
    fractions: dict[tuple[int, int], dict[int, float]]  # (row, col) -> tile -> frac


def tile_frequency(levels: list[TileGrid]) -> TileFrequencyGrid:
    """How often each tile occurs at each position; fractions sum to 1."""
    if not levels:
        raise ReportError("tile_frequency needs at least one level")
    width, height = levels[0].width, levels[0].height
    for level in levels:
        if (level.width, level.height) != (width, height):
            raise ReportError("levels have mixed dimensions")
    fractions: dict[tuple[int, int], dict[int, float]] = {}
    n = len(levels)
    for y in range(height):
        for x in range(width):
            tally: dict[int, int] = {}
            for level in levels:
                t = level.tile_at(x, y)
                tally[t] = tally.get(t, 0) + 1
            fractions[(y, x)] = {t: c / n for t, c in sorted(tally.items())}
    return TileFrequencyGrid(width, height, fractions)


# ----- CSV writers -----


def write_attempts_csv(stats: list[AttemptStats], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["template", "total", "successful", "failed", "timed_out",
             "mean_solve_time", "mean_fail_time", "mean_time"]
        )
        for s in stats:
            writer.writerow(
                [s.template, s.total, s.successful, s.failed, s.timed_out]
                + [
                    "" if v is None else f"{v:.6f}"
                    for v in (s.mean_solve_time, s.mean_fail_time, s.mean_time)
                ]
            )


def write_histogram_csv(
    tagged_histograms: list[tuple[dict[CellKey, int], str]], path
) -> None:
    """Each input pair is (per-cell counts, origin tag)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["density_bin", "difficulty_bin", "count", "origin"])
        for counts, origin in tagged_histograms:
            for cell in sorted(counts):
                writer.writerow([cell.density_bin, cell.difficulty_bin, counts[cell], origin])


def write_interestingness_csv(rows: list[tuple[int, int, float, str]], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["density", "difficulty", "norm_interest", "origin"])
        for d, h, norm, origin in rows:
            writer.writerow([d, h, f"{norm:.6f}", origin])


def write_tilefreq_csv(freq: TileFrequencyGrid, catalog: TileCatalog, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row", "col", "tile_char", "fraction"])
        for (row, col), entries in sorted(freq.fractions.items()):
            for tile, fraction in entries.items():
                writer.writerow([row, col, catalog.char_of(tile), f"{fraction:.6f}"])
