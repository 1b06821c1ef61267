"""CNF compilation of generation tasks and model decoding.

Variables 1..W*H*T are primary: variable for (cell, tile) is
``cell * tile_count + tile + 1`` with cells numbered row-major.
Auxiliary variables (pattern selectors, per-cell metric indicators,
sequential-counter registers) follow.

Pattern constraints follow the same boundary convention as extraction
and checking: input positions cover the grid plus its one-cell border
ring, out-of-grid reads are the boundary sentinel, and rule tuples
inconsistent with that sentinel are dropped position by position.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import TileCatalog, TileGrid
from .patterns import RuleSet


class EncodeError(ValueError):
    pass


@dataclass(frozen=True)
class CountConstraint:
    """Inclusive bounds on a tile-count metric.

    ``metric`` selects the counted cells: "density" counts
    non-background tiles anywhere, "difficulty" counts enemy/hazard
    tiles anywhere plus background tiles in the bottom row.
    """

    metric: str
    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.metric not in ("density", "difficulty"):
            raise EncodeError(f"unknown metric {self.metric!r}")
        if not (0 <= self.lo <= self.hi):
            raise EncodeError(f"invalid bounds [{self.lo}, {self.hi}]")


@dataclass
class CnfInstance:
    """A CNF formula plus the bookkeeping needed to decode models."""

    var_count: int
    clauses: list[list[int]]
    width: int
    height: int
    tile_count: int
    trivially_unsat: bool = False
    aux_summary: dict[str, int] = field(default_factory=dict)

    def primary_var(self, cell: int, tile: int) -> int:
        return cell * self.tile_count + tile + 1

    @property
    def var_map(self) -> dict[tuple[int, int], int]:
        """(cell, tile) -> variable, for every in-grid cell."""
        return {
            (cell, tile): self.primary_var(cell, tile)
            for cell in range(self.width * self.height)
            for tile in range(self.tile_count)
        }


def encode_exactly_one(variables: list[int]) -> list[list[int]]:
    """One at-least-one clause plus pairwise at-most-one clauses."""
    if not variables:
        raise EncodeError("exactly-one over an empty variable list")
    clauses = [list(variables)]
    for i in range(len(variables)):
        for j in range(i + 1, len(variables)):
            clauses.append([-variables[i], -variables[j]])
    return clauses


class PatternEncoding:
    """Pattern clauses for one (rule set, grid size); reusable across tasks.

    The clause list is immutable by convention: callers concatenate it
    with task-specific clauses and never mutate it in place.
    """

    def __init__(
        self, width: int, height: int, ruleset: RuleSet, catalog: TileCatalog
    ):
        if ruleset.tile_chars != catalog.chars:
            raise EncodeError("rule set was extracted under a different catalog")
        self.width = width
        self.height = height
        self.first_aux = width * height * catalog.tile_count + 1
        self.clauses: list[list[int]] = []
        self.selector_count = 0
        self.trivially_unsat = False
        self._build(ruleset, catalog)

    def _build(self, ruleset: RuleSet, catalog: TileCatalog) -> None:
        width, height = self.width, self.height
        tiles = catalog.tile_count
        boundary = catalog.boundary_id
        next_var = self.first_aux

        def cell_of(x: int, y: int) -> int:
            return y * width + x

        # Feasible tuples depend only on which group offsets land
        # in-grid, so they are computed once per (group, tile, mask).
        feasible_cache: dict[tuple[int, int, int], list[list[tuple[int, int]]]] = {}

        def feasible(g: int, tile: int, mask: int, group) -> list[list[tuple[int, int]]]:
            key = (g, tile, mask)
            hit = feasible_cache.get(key)
            if hit is not None:
                return hit
            allowed = ruleset.rules[g].get(tile)
            result: list[list[tuple[int, int]]] = []
            if allowed is not None:
                for tup in sorted(allowed):
                    members: list[tuple[int, int]] = []
                    ok = True
                    for idx, value in enumerate(tup):
                        if mask & (1 << idx):
                            if value == boundary:
                                ok = False
                                break
                            members.append((idx, value))
                        elif value != boundary:
                            ok = False
                            break
                    if ok:
                        result.append(members)
            feasible_cache[key] = result
            return result

        for y in range(-1, height + 1):
            for x in range(-1, width + 1):
                in_grid = 0 <= x < width and 0 <= y < height
                trigger = None  # literal that activates the constraint
                input_tiles = range(tiles) if in_grid else (boundary,)
                for g, group in enumerate(ruleset.shape.output_groups):
                    mask = 0
                    for idx, (dx, dy) in enumerate(group):
                        if 0 <= x + dx < width and 0 <= y + dy < height:
                            mask |= 1 << idx
                    member_vars = [
                        cell_of(x + dx, y + dy) * tiles
                        for dx, dy in group
                    ]
                    for tile in input_tiles:
                        if in_grid:
                            trigger = -(cell_of(x, y) * tiles + tile + 1)
                        options = feasible(g, tile, mask, group)
                        if any(len(m) == 0 for m in options):
                            continue  # some tuple is satisfied vacuously
                        if not options:
                            if in_grid:
                                self.clauses.append([trigger])
                            else:
                                # A border position admits no tuple: no
                                # grid of this size can satisfy the rules.
                                self.trivially_unsat = True
                                self.clauses.append([1])
                                self.clauses.append([-1])
                            continue
                        if all(len(m) == 1 for m in options):
                            # Disjunction over single literals; no selectors.
                            by_offset: dict[int, list[int]] = {}
                            for members in options:
                                idx, value = members[0]
                                by_offset.setdefault(idx, []).append(value)
                            if len(by_offset) == 1:
                                idx, values = next(iter(by_offset.items()))
                                lits = [member_vars[idx] + v + 1 for v in values]
                                self.clauses.append(
                                    ([trigger] if in_grid else []) + lits
                                )
                                continue
                        if len(options) == 1:
                            # Single allowed tuple: direct implications.
                            for idx, value in options[0]:
                                lit = member_vars[idx] + value + 1
                                self.clauses.append(
                                    [trigger, lit] if in_grid else [lit]
                                )
                            continue
                        selectors = []
                        for members in options:
                            sel = next_var
                            next_var += 1
                            selectors.append(sel)
                            for idx, value in members:
                                self.clauses.append(
                                    [-sel, member_vars[idx] + value + 1]
                                )
                        head = [trigger] if in_grid else []
                        self.clauses.append(head + selectors)
                        self.selector_count += len(selectors)
        self.next_var = next_var


def encode_patterns(
    width: int, height: int, ruleset: RuleSet, catalog: TileCatalog
) -> PatternEncoding:
    """Compile the local-pattern constraints for a grid size."""
    return PatternEncoding(width, height, ruleset, catalog)


def encode_cardinality(
    indicator_vars: list[int], lo: int, hi: int, first_aux: int
) -> tuple[list[list[int]], int]:
    """Sequential-counter bound lo <= popcount(indicators) <= hi.

    Register variable s[i][j] means "at least j true among the first i
    indicators"; clauses pin the registers in both directions, so
    models project exactly onto assignments within the bounds. Returns
    (clauses, next free variable).
    """
    n = len(indicator_vars)
    if not (0 <= lo <= hi):
        raise EncodeError(f"invalid bounds [{lo}, {hi}]")
    if hi > n or lo > n:
        raise EncodeError(f"bounds [{lo}, {hi}] exceed indicator count {n}")
    k = max(lo, hi + 1 if hi < n else 0)
    if k == 0:
        return [], first_aux

    clauses: list[list[int]] = []
    next_var = first_aux
    reg: dict[tuple[int, int], int] = {}
    for i in range(1, n + 1):
        for j in range(1, min(i, k) + 1):
            reg[(i, j)] = next_var
            next_var += 1

    for i in range(1, n + 1):
        x = indicator_vars[i - 1]
        for j in range(1, min(i, k) + 1):
            s = reg[(i, j)]
            prev_same = reg.get((i - 1, j))
            prev_down = reg.get((i - 1, j - 1))
            if j == 1:
                clauses.append([-x, s])
            elif prev_down is not None:
                clauses.append([-x, -prev_down, s])
            if prev_same is not None:
                clauses.append([-prev_same, s])
            # Downward direction: s implies the count really reaches j.
            if prev_same is not None:
                clauses.append([-s, prev_same, x])
            else:
                clauses.append([-s, x])
            if j >= 2:
                clauses.append([-s, prev_down])

    if lo > 0:
        clauses.append([reg[(n, lo)]])
    if hi < n:
        clauses.append([-reg[(n, hi + 1)]])
    return clauses, next_var


def _indicator_tiles(
    metric: str, catalog: TileCatalog, bottom_row: bool
) -> frozenset[int]:
    if metric == "density":
        return frozenset(range(catalog.tile_count)) - catalog.ids_with("background")
    threat = catalog.ids_with("enemy") | catalog.ids_with("hazard")
    if bottom_row:
        return threat | catalog.ids_with("background")
    return threat


def encode_task(
    width: int,
    height: int,
    ruleset: RuleSet,
    catalog: TileCatalog,
    density_bounds: CountConstraint | None = None,
    difficulty_bounds: CountConstraint | None = None,
    pattern_encoding: PatternEncoding | None = None,
) -> CnfInstance:
    """Compile a full generation task into one CNF instance.

    With both bounds omitted this is the pattern-only "random
    baseline" task. A priori infeasible bounds yield an instance
    flagged trivially UNSAT (and encoded as such) rather than an error.
    """
    tiles = catalog.tile_count
    if pattern_encoding is None:
        pattern_encoding = encode_patterns(width, height, ruleset, catalog)
    if (pattern_encoding.width, pattern_encoding.height) != (width, height):
        raise EncodeError("pattern encoding was built for a different grid size")

    clauses: list[list[int]] = []
    for cell in range(width * height):
        clauses.extend(
            encode_exactly_one([cell * tiles + t + 1 for t in range(tiles)])
        )
    clauses.extend(pattern_encoding.clauses)
    next_var = pattern_encoding.next_var
    trivially_unsat = pattern_encoding.trivially_unsat
    aux = {"selectors": pattern_encoding.selector_count, "indicators": 0, "registers": 0}

    for bounds in (density_bounds, difficulty_bounds):
        if bounds is None:
            continue
        indicators: list[int] = []
        bottom = height - 1
        for cell in range(width * height):
            wanted = _indicator_tiles(bounds.metric, catalog, cell // width == bottom)
            if not wanted:
                continue
            ind = next_var
            next_var += 1
            indicators.append(ind)
            for t in sorted(wanted):
                clauses.append([-(cell * tiles + t + 1), ind])
            clauses.append([-ind] + [cell * tiles + t + 1 for t in sorted(wanted)])
        aux["indicators"] += len(indicators)
        if bounds.lo > len(indicators):
            trivially_unsat = True
            clauses.append([1])
            clauses.append([-1])
            continue
        hi = min(bounds.hi, len(indicators))
        counter_clauses, next_var2 = encode_cardinality(
            indicators, bounds.lo, hi, next_var
        )
        aux["registers"] += next_var2 - next_var
        next_var = next_var2
        clauses.extend(counter_clauses)

    return CnfInstance(
        var_count=next_var - 1,
        clauses=clauses,
        width=width,
        height=height,
        tile_count=tiles,
        trivially_unsat=trivially_unsat,
        aux_summary=aux,
    )


class DecodeError(ValueError):
    pass


def decode(model: list[bool], instance: CnfInstance) -> TileGrid:
    """Read the generated grid out of a satisfying model.

    ``model`` is indexed by variable (slot 0 unused). A cell with zero
    or several true tile variables signals a solver or encoding bug.
    """
    tiles = instance.tile_count
    cells = []
    for cell in range(instance.width * instance.height):
        true_tiles = [
            t for t in range(tiles) if model[instance.primary_var(cell, t)]
        ]
        if len(true_tiles) != 1:
            raise DecodeError(
                f"cell {cell} has {len(true_tiles)} true tile variables"
            )
        cells.append(true_tiles[0])
    return TileGrid(instance.width, instance.height, tuple(cells))
