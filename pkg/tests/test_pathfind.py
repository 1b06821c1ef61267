import random
from collections import deque

from rangeforge.corpus import TileGrid, default_catalog, parse_level
from rangeforge.pathfind import PathResult, PhysicsSpec, build_move_graph, find_path

CATALOG = default_catalog()
PHYSICS = PhysicsSpec()


# ----- independent exhaustive oracle -----

def oracle_shortest(grid, catalog, physics):
    """Brute-force BFS over explicitly enumerated state pairs."""

    def passable(x, y):
        if not (0 <= x < grid.width and 0 <= y < grid.height):
            return False
        cats = catalog.categories[grid.tile_at(x, y)]
        return any(c in cats for c in physics.passable_categories)

    def supporting(x, y):
        if not (0 <= x < grid.width and 0 <= y < grid.height):
            return False
        cats = catalog.categories[grid.tile_at(x, y)]
        return any(c in cats for c in physics.support_categories)

    def stands(x, y):
        return passable(x, y) and supporting(x, y + 1)

    states = [
        (x, y)
        for x in range(grid.width)
        for y in range(grid.height)
        if stands(x, y)
    ]
    edges = {s: set() for s in states}
    for sx, sy in states:
        for tx, ty in states:
            if (tx, ty) == (sx, sy):
                continue
            # walk
            if ty == sy and abs(tx - sx) == 1:
                edges[(sx, sy)].add((tx, ty))
                continue
            # jump envelope
            span = abs(tx - sx)
            rise = sy - ty
            if (
                1 <= span <= physics.max_jump_span
                and rise <= physics.max_jump_height
                and -rise <= physics.max_fall_depth
            ):
                between = list(range(min(sx, tx) + 1, max(sx, tx)))
                if span == 1:
                    if rise < 1:
                        continue  # the reverse move is a fall
                elif all(stands(xm, max(sy, ty)) for xm in between):
                    continue  # jumping may not shortcut plain walking
                apex = min(sy, ty)
                clear = all(passable(sx, yy) for yy in range(apex, sy))
                clear = clear and all(passable(xm, apex) for xm in between)
                clear = clear and all(passable(tx, yy) for yy in range(apex, ty))
                if clear:
                    edges[(sx, sy)].add((tx, ty))
        # fall off a ledge
        for step in (1, -1):
            x2 = sx + step
            if not passable(x2, sy) or stands(x2, sy):
                continue
            yy = sy
            target = None
            while passable(x2, yy):
                if stands(x2, yy):
                    target = (x2, yy)
                    break
                yy += 1
            if target is not None and target[1] - sy <= physics.max_fall_depth:
                edges[(sx, sy)].add(target)

    cols_with_states = sorted({x for x, _ in states})
    if not cols_with_states:
        return None
    start_col = cols_with_states[0]
    goal_col = cols_with_states[-1]
    dist = {}
    queue = deque()
    for y in range(grid.height):
        if (start_col, y) in edges:
            dist[(start_col, y)] = 0
            queue.append((start_col, y))
    best = None
    while queue:
        s = queue.popleft()
        if s[0] == goal_col:
            best = dist[s] if best is None else min(best, dist[s])
            continue
        for t in edges[s]:
            if t not in dist:
                dist[t] = dist[s] + 1
                queue.append(t)
    return best


def random_grid(rng, width, height):
    cells = []
    for y in range(height):
        for x in range(width):
            r = rng.random()
            if r < 0.55:
                ch = "-"
            elif r < 0.85:
                ch = "X"
            elif r < 0.92:
                ch = "S"
            elif r < 0.97:
                ch = "E"
            else:
                ch = "o"
            cells.append(CATALOG.id_of(ch))
    return TileGrid(width, height, tuple(cells))


class TestExamples:
    def test_flat_segment_walk(self):
        rows = ["-" * 20] * 13 + ["X" * 20]
        path = find_path(parse_level("\n".join(rows), CATALOG), CATALOG)
        assert path.playable
        assert path.length == 19
        assert path.jumps == 0
        assert all(kind in ("start", "walk") for _, kind in path.moves)

    def test_all_background_unplayable(self):
        rows = ["-" * 20] * 14
        path = find_path(parse_level("\n".join(rows), CATALOG), CATALOG)
        assert not path.playable

    def test_one_wide_gap_is_a_jump(self):
        rows = ["-" * 5] * 3 + ["XX-XX"]
        path = find_path(parse_level("\n".join(rows), CATALOG), CATALOG)
        assert path.playable
        assert path.jumps >= 1
        jump_moves = [(pos, k) for pos, k in path.moves if k == "jump"]
        assert jump_moves  # the rims are two columns apart: dx = 2

    def test_two_wide_gap_with_span_four(self):
        rows = ["-" * 8] * 3 + ["XXX--XXX"]
        path = find_path(parse_level("\n".join(rows), CATALOG), CATALOG)
        assert path.playable
        assert path.jumps >= 1

    def test_tall_wall_blocks(self):
        # Wall rises 6 above the walkway; max jump height is 4.
        rows = []
        for y in range(8):
            rows.append("---" + ("X" if y >= 2 else "-") + "---")
        rows.append("X" * 7)
        grid = parse_level("\n".join(rows), CATALOG)
        path = find_path(grid, CATALOG)
        oracle = oracle_shortest(grid, CATALOG, PHYSICS)
        assert not path.playable
        assert oracle is None

    def test_flat_corridor_successors_stay_on_row(self):
        rows = ["-" * 6] * 2 + ["X" * 6]
        grid = parse_level("\n".join(rows), CATALOG)
        successors = build_move_graph(grid, CATALOG)
        moves = successors(2, 1)
        walk_targets = [pos for pos, kind in moves if kind == "walk"]
        assert (3, 1) in walk_targets and (1, 1) in walk_targets


class TestOracleAgreement:
    def test_random_grids_match_exhaustive_search(self):
        rng = random.Random(2024)
        disagreements = []
        for i in range(100):
            width = rng.randrange(2, 9)
            height = rng.randrange(2, 9)
            grid = random_grid(rng, width, height)
            expected = oracle_shortest(grid, CATALOG, PHYSICS)
            path = find_path(grid, CATALOG)
            if (expected is not None) != path.playable:
                disagreements.append((i, grid, expected, path.playable))
            elif expected is not None and path.length != expected:
                disagreements.append((i, grid, expected, path.length))
        assert not disagreements, disagreements[:2]


class TestPathProperties:
    def test_path_is_replayable(self):
        rng = random.Random(5)
        for _ in range(30):
            grid = random_grid(rng, rng.randrange(3, 9), rng.randrange(3, 9))
            path = find_path(grid, CATALOG)
            if not path.playable:
                continue
            successors = build_move_graph(grid, CATALOG)
            for (prev, _), (pos, kind) in zip(path.moves, path.moves[1:]):
                assert (pos, kind) in successors(*prev)

    def test_mirror_symmetry(self):
        rng = random.Random(17)
        for _ in range(40):
            width = rng.randrange(2, 8)
            height = rng.randrange(2, 8)
            grid = random_grid(rng, width, height)
            mirrored_cells = []
            for y in range(height):
                row = list(grid.row(y))
                mirrored_cells.extend(reversed(row))
            mirrored = TileGrid(width, height, tuple(mirrored_cells))
            a = find_path(grid, CATALOG)
            b = find_path(mirrored, CATALOG)
            assert a.playable == b.playable
            if a.playable:
                assert a.length == b.length

    def test_deterministic(self):
        rng = random.Random(9)
        grid = random_grid(rng, 8, 8)
        assert find_path(grid, CATALOG) == find_path(grid, CATALOG)
