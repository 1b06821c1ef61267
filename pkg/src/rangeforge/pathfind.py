"""Player path search under a simplified platformer movement model.

States are supported cells: passable cells resting directly on a
support-category cell. Moves are walking one column sideways, falling
off a ledge straight down to the next support, and an envelope jump to
a supported landing within the height/span limits. A jump arc rises in
the takeoff column to its apex, crosses intermediate columns at apex
height, and descends in the landing column; every arc cell must be
passable. Multi-column jumps also require the walk support along the
lower of the two rows to be broken somewhere between the columns, so
jumping never shortcuts plain walking.

Vertical travel is bounded in both directions (falls and jump drops by
``max_fall_depth``, rises by ``max_jump_height``), which makes every
move reversible: a segment is exactly as traversable right-to-left as
left-to-right, and horizontal mirroring preserves path lengths.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .corpus import TileCatalog, TileGrid

Pos = tuple[int, int]
Move = tuple[Pos, str]  # position reached, move kind


@dataclass(frozen=True)
class PhysicsSpec:
    """Movement limits and the tile categories they read.

    ``max_fall_depth`` defaults to the jump height; equal bounds keep
    the move graph reversible (see module docstring).
    """

    max_jump_height: int = 4
    max_jump_span: int = 4
    max_fall_depth: int = 4
    passable_categories: tuple[str, ...] = ("passable",)
    support_categories: tuple[str, ...] = ("solid",)

    def __post_init__(self) -> None:
        if self.max_jump_height < 1 or self.max_jump_span < 1:
            raise ValueError("jump height and span must be >= 1")
        if self.max_fall_depth < 1:
            raise ValueError("fall depth must be >= 1")


@dataclass(frozen=True)
class PathResult:
    """A shortest path, or unplayability.

    ``moves`` starts with the start position (kind "start"); ``length``
    counts actual moves, so ``len(moves) == length + 1`` when playable.
    """

    playable: bool
    moves: tuple[Move, ...]
    length: int
    jumps: int


class _World:
    """Precomputed passability/support masks for one grid."""

    def __init__(self, grid: TileGrid, catalog: TileCatalog, physics: PhysicsSpec):
        self.grid = grid
        self.physics = physics
        passable_ids = frozenset().union(
            *(catalog.ids_with(c) for c in physics.passable_categories)
        )
        support_ids = frozenset().union(
            *(catalog.ids_with(c) for c in physics.support_categories)
        )
        self.passable = [t in passable_ids for t in grid.cells]
        self.support = [t in support_ids for t in grid.cells]

    def is_passable(self, x: int, y: int) -> bool:
        return self.grid.in_bounds(x, y) and self.passable[y * self.grid.width + x]

    def is_supported(self, x: int, y: int) -> bool:
        """Passable cell standing directly on a support tile."""
        return (
            self.is_passable(x, y)
            and self.grid.in_bounds(x, y + 1)
            and self.support[(y + 1) * self.grid.width + x]
        )

    def fall_landing(self, x: int, y: int) -> Pos | None:
        """Straight drop through passable cells to the next support."""
        yy = y
        while self.grid.in_bounds(x, yy):
            if not self.is_passable(x, yy):
                return None
            if self.is_supported(x, yy):
                if yy - y > self.physics.max_fall_depth:
                    return None
                return (x, yy)
            yy += 1
        return None  # fell out of the level

    def jump_ok(self, x0: int, y0: int, x1: int, y1: int) -> bool:
        """Feasibility of the jump envelope between supported cells.

        The apex row is the higher endpoint's row. The takeoff column
        must be clear up to the apex, intermediate columns clear at
        the apex, and the landing column clear from the apex down to
        the landing. Single-column jumps must rise (their reverse is a
        fall); multi-column jumps need broken walk support on the
        lower row strictly between the columns.
        """
        rise = y0 - y1
        if rise > self.physics.max_jump_height:
            return False
        if -rise > self.physics.max_fall_depth:
            return False
        step = 1 if x1 > x0 else -1
        between = range(x0 + step, x1, step)
        if x1 - x0 in (1, -1):
            if rise < 1:
                return False
        elif all(self.is_supported(xm, max(y0, y1)) for xm in between):
            return False
        apex = min(y0, y1)
        for yy in range(apex, y0):
            if not self.is_passable(x0, yy):
                return False
        for xm in between:
            if not self.is_passable(xm, apex):
                return False
        for yy in range(apex, y1):
            if not self.is_passable(x1, yy):
                return False
        return True

    def successors(self, x: int, y: int) -> list[Move]:
        """Legal moves from a supported cell, in a fixed documented order.

        Order: walk right, jumps right (span ascending, landing row
        top to bottom), fall right, walk left, jumps left, fall left.
        """
        out: list[Move] = []
        phys = self.physics
        for direction in (1, -1):
            x2 = x + direction
            if self.is_supported(x2, y):
                out.append(((x2, y), "walk"))
            for dx in range(1, phys.max_jump_span + 1):
                xj = x + direction * dx
                if not 0 <= xj < self.grid.width:
                    continue
                for yj in range(self.grid.height):
                    if not self.is_supported(xj, yj):
                        continue
                    if self.jump_ok(x, y, xj, yj):
                        out.append(((xj, yj), "jump"))
            if (
                self.grid.in_bounds(x2, y)
                and self.is_passable(x2, y)
                and not self.is_supported(x2, y)
            ):
                landing = self.fall_landing(x2, y)
                if landing is not None:
                    out.append((landing, "fall"))
        return out


def build_move_graph(
    grid: TileGrid, catalog: TileCatalog, physics: PhysicsSpec | None = None
):
    """Successor function over supported cells: (x, y) -> list of moves."""
    world = _World(grid, catalog, physics or PhysicsSpec())
    return world.successors


def find_path(
    grid: TileGrid, catalog: TileCatalog, physics: PhysicsSpec | None = None
) -> PathResult:
    """Breadth-first shortest path across the segment.

    Start set: supported cells in the leftmost column that has any;
    goal set: supported cells in the rightmost column that has any.
    The symmetric fallback keeps horizontal mirroring an invariant.
    """
    world = _World(grid, catalog, physics or PhysicsSpec())

    start_col = None
    goal_col = None
    for x in range(grid.width):
        if any(world.is_supported(x, y) for y in range(grid.height)):
            if start_col is None:
                start_col = x
            goal_col = x
    if start_col is None:
        return PathResult(False, (), 0, 0)
    starts = [(start_col, y) for y in range(grid.height) if world.is_supported(start_col, y)]

    parents: dict[Pos, Move | None] = {}
    queue: deque[Pos] = deque()
    for pos in starts:
        parents[pos] = None
        queue.append(pos)

    goal = None
    while queue:
        pos = queue.popleft()
        if pos[0] == goal_col:
            goal = pos
            break
        for nxt, kind in world.successors(*pos):
            if nxt not in parents:
                parents[nxt] = (pos, kind)
                queue.append(nxt)
    if goal is None:
        return PathResult(False, (), 0, 0)

    chain: list[Move] = []
    pos = goal
    while parents[pos] is not None:
        prev, kind = parents[pos]
        chain.append((pos, kind))
        pos = prev
    chain.append((pos, "start"))
    chain.reverse()
    moves = tuple(chain)
    length = len(moves) - 1
    jumps = sum(1 for _, kind in moves if kind == "jump")
    return PathResult(True, moves, length, jumps)
