"""Prioritized exploration of the expressive-range grid.

The scheduler keeps a per-cell level count seeded from the initial
corpus, repeatedly picks a uniformly random cell among those with the
fewest levels, and asks the solver for a level inside that cell's
density/difficulty bounds. Failed and timed-out cells are blocklisted,
as are cells that reach the level threshold. A random baseline runs
the same generator with no count constraints at all.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field

from .corpus import Corpus, TileCatalog, TileGrid, parse_level
from .encoder import CountConstraint, decode, encode_patterns, encode_task
from .metrics import AxesSpec, CellKey, bin_cell, density, difficulty
from .patterns import RuleSet
from .solver import SAT, TIMEOUT, UNSAT, solve, verify_model

SUCCESS = "success"
FAILED = "failed"
TIMED_OUT = "timed_out"


class EncoderSoundnessError(RuntimeError):
    """A decoded level landed outside its targeted cell: encoder bug."""


@dataclass(frozen=True)
class AttemptRecord:
    """One generation attempt; level and metrics only on success."""

    cell: CellKey | None
    template: str
    seed: int
    outcome: str
    elapsed: float
    level: TileGrid | None = None
    density: int | None = None
    difficulty: int | None = None


@dataclass
class ExplorationState:
    """Mutable scheduler state: counts, blocklist, RNG, and budgets."""

    counts: dict[CellKey, int]
    blocklist: set[CellKey]
    threshold: int
    rng: random.Random
    budget: float
    attempt_timeout: float
    axes: AxesSpec
    in_flight: set[CellKey] = field(default_factory=set)


def init_state(
    corpus: Corpus | None,
    axes: AxesSpec,
    threshold: int = 10,
    budget: float = 43200.0,
    attempt_timeout: float = 900.0,
    seed: int = 0,
) -> ExplorationState:
    """Histogram the corpus into cells; already-full cells start blocklisted."""
    counts = {cell: 0 for cell in axes.all_cells()}
    if corpus is not None:
        for segment in corpus.segments:
            cell = bin_cell(
                density(segment, corpus.catalog),
                difficulty(segment, corpus.catalog),
                axes,
            )
            if cell is not None:
                counts[cell] += 1
    blocklist = {cell for cell, n in counts.items() if n >= threshold}
    return ExplorationState(
        counts=counts,
        blocklist=blocklist,
        threshold=threshold,
        rng=random.Random(seed),
        budget=budget,
        attempt_timeout=attempt_timeout,
        axes=axes,
    )


def select_cell(state: ExplorationState) -> CellKey | None:
    """Uniformly random cell among eligible cells with the fewest levels."""
    excluded = state.blocklist | state.in_flight
    eligible = [c for c in sorted(state.counts) if c not in excluded]
    if not eligible:
        return None
    fewest = min(state.counts[c] for c in eligible)
    ties = [c for c in eligible if state.counts[c] == fewest]
    return ties[state.rng.randrange(len(ties))]


def _attempt_once(
    axes: AxesSpec,
    cell: CellKey,
    ruleset: RuleSet,
    catalog: TileCatalog,
    width: int,
    height: int,
    pattern_encoding,
    seed: int,
    deadline: float | None,
) -> AttemptRecord:
    """Encode the cell's bounds, solve, verify, decode; no state touched."""
    d_lo, d_hi = axes.density_range(cell)
    h_lo, h_hi = axes.difficulty_range(cell)
    instance = encode_task(
        width,
        height,
        ruleset,
        catalog,
        CountConstraint("density", d_lo, d_hi),
        CountConstraint("difficulty", h_lo, h_hi),
        pattern_encoding,
    )
    outcome = solve(instance, seed, deadline)
    if outcome.status == SAT:
        if not verify_model(instance, outcome.model):
            raise EncoderSoundnessError("solver returned a non-model")
        grid = decode(outcome.model, instance)
        d = density(grid, catalog)
        h = difficulty(grid, catalog)
        measured = bin_cell(d, h, axes)
        if measured != cell:
            raise EncoderSoundnessError(
                f"targeted cell {cell}, decoded level measures "
                f"density={d} difficulty={h} -> {measured}"
            )
        return AttemptRecord(
            cell, ruleset.kind, seed, SUCCESS, outcome.elapsed, grid, d, h
        )
    kind = FAILED if outcome.status == UNSAT else TIMED_OUT
    return AttemptRecord(cell, ruleset.kind, seed, kind, outcome.elapsed)


def _apply_result(state: ExplorationState, record: AttemptRecord) -> None:
    if record.outcome == SUCCESS:
        state.counts[record.cell] += 1
        if state.counts[record.cell] >= state.threshold:
            state.blocklist.add(record.cell)
    else:
        state.blocklist.add(record.cell)


def run_attempt(
    state: ExplorationState,
    cell: CellKey,
    ruleset: RuleSet,
    catalog: TileCatalog,
    width: int,
    height: int,
    pattern_encoding=None,
    deadline: float | None = None,
) -> AttemptRecord:
    """One attempt at a cell, updating counts/blocklist from the outcome."""
    seed = state.rng.getrandbits(32)
    if deadline is None:
        deadline = state.attempt_timeout
    record = _attempt_once(
        state.axes, cell, ruleset, catalog, width, height,
        pattern_encoding, seed, deadline,
    )
    _apply_result(state, record)
    return record


def explore(
    state: ExplorationState,
    ruleset: RuleSet,
    catalog: TileCatalog,
    width: int,
    height: int,
    log_sink=None,
    max_attempts: int | None = None,
    workers: int = 1,
) -> list[AttemptRecord]:
    """Select-and-attempt until the budget, cells, or attempt cap runs out.

    Budget accounting uses wall-clock attempt durations, including
    failures and timeouts. Runs are deterministic (timing fields
    aside) only with a single worker; with more, attempts execute on a
    thread pool and completions apply in arrival order.
    """
    pattern_encoding = encode_patterns(width, height, ruleset, catalog)
    records: list[AttemptRecord] = []
    spent = 0.0

    def budget_left() -> float:
        return state.budget - spent

    def attempts_left() -> bool:
        return max_attempts is None or len(records) < max_attempts

    def finish(record: AttemptRecord) -> None:
        nonlocal spent
        spent += record.elapsed
        records.append(record)
        if log_sink is not None:
            log_sink(record)

    if workers <= 1:
        while budget_left() > 0 and attempts_left():
            cell = select_cell(state)
            if cell is None:
                break
            deadline = min(state.attempt_timeout, budget_left())
            finish(
                run_attempt(
                    state, cell, ruleset, catalog, width, height,
                    pattern_encoding, deadline,
                )
            )
        return records

    # Worker pool: selection, seed draws, and state updates all happen
    # on this coordinator thread; workers only encode and solve.
    from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait

    with ThreadPoolExecutor(max_workers=workers) as pool:
        pending: dict = {}
        submitted = 0
        while True:
            while (
                len(pending) < workers
                and budget_left() > 0
                and (max_attempts is None or submitted < max_attempts)
            ):
                cell = select_cell(state)
                if cell is None:
                    break
                state.in_flight.add(cell)
                seed = state.rng.getrandbits(32)
                future = pool.submit(
                    _attempt_once,
                    state.axes, cell, ruleset, catalog, width, height,
                    pattern_encoding, seed,
                    min(state.attempt_timeout, budget_left()),
                )
                pending[future] = cell
                submitted += 1
            if not pending:
                break
            done, _ = wait(pending, return_when=FIRST_COMPLETED)
            for future in done:
                cell = pending.pop(future)
                state.in_flight.discard(cell)
                record = future.result()
                _apply_result(state, record)
                finish(record)
    return records


def random_baseline(
    n_attempts: int,
    ruleset: RuleSet,
    catalog: TileCatalog,
    width: int,
    height: int,
    seed: int = 0,
    axes: AxesSpec | None = None,
    attempt_timeout: float | None = None,
    log_sink=None,
) -> list[AttemptRecord]:
    """Pattern-only generation with distinct seeds; no count constraints."""
    if n_attempts < 1:
        raise ValueError("need at least one attempt")
    axes = axes or AxesSpec()
    instance = encode_task(width, height, ruleset, catalog)
    rng = random.Random(seed)
    records = []
    for _ in range(n_attempts):
        attempt_seed = rng.getrandbits(32)
        outcome = solve(instance, attempt_seed, attempt_timeout)
        if outcome.status == SAT:
            if not verify_model(instance, outcome.model):
                raise EncoderSoundnessError("solver returned a non-model")
            grid = decode(outcome.model, instance)
            d = density(grid, catalog)
            h = difficulty(grid, catalog)
            record = AttemptRecord(
                bin_cell(d, h, axes), ruleset.kind, attempt_seed,
                SUCCESS, outcome.elapsed, grid, d, h,
            )
        else:
            kind = FAILED if outcome.status == UNSAT else TIMED_OUT
            record = AttemptRecord(None, ruleset.kind, attempt_seed, kind, outcome.elapsed)
        records.append(record)
        if log_sink is not None:
            log_sink(record)
    return records


def covered_cells(records: list[AttemptRecord]) -> set[CellKey]:
    """Cells hit by successful attempts."""
    return {r.cell for r in records if r.outcome == SUCCESS and r.cell is not None}


# ----- attempt log serialization (JSON lines) -----


def record_to_json(record: AttemptRecord, catalog: TileCatalog) -> str:
    payload = {
        "cell": list(record.cell) if record.cell is not None else None,
        "template": record.template,
        "seed": record.seed,
        "outcome": record.outcome,
        "elapsed": record.elapsed,
    }
    if record.level is not None:
        payload["level"] = record.level.to_text(catalog).splitlines()
        payload["density"] = record.density
        payload["difficulty"] = record.difficulty
    return json.dumps(payload)


def record_from_json(line: str, catalog: TileCatalog) -> AttemptRecord:
    payload = json.loads(line)
    level = None
    if payload.get("level") is not None:
        level = parse_level("\n".join(payload["level"]), catalog)
    cell = payload["cell"]
    return AttemptRecord(
        CellKey(*cell) if cell is not None else None,
        payload["template"],
        payload["seed"],
        payload["outcome"],
        payload["elapsed"],
        level,
        payload.get("density"),
        payload.get("difficulty"),
    )


class LogWriter:
    """Append-only JSONL attempt log, flushed per record."""

    def __init__(self, path, catalog: TileCatalog):
        self._fh = open(path, "a")
        self._catalog = catalog

    def __call__(self, record: AttemptRecord) -> None:
        self._fh.write(record_to_json(record, self._catalog) + "\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_log(path, catalog: TileCatalog) -> list[AttemptRecord]:
    with open(path) as fh:
        return [record_from_json(line, catalog) for line in fh if line.strip()]
