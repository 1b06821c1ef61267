"""SAT solving with seeded randomization, deadlines, and model checking.

Two interchangeable engines implement the same CDCL algorithm: a
compiled Cython core (``rangeforge.solver._core``) and a pure-Python
fallback (``core_py``). The compiled core is picked automatically when
importable; set ``RANGEFORGE_SOLVER=python`` or ``=native`` to force a
choice. Both produce identical outcomes and models for equal
(instance, seed) inputs.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass

from ..encoder import CnfInstance
from . import core_py

SAT = "sat"
UNSAT = "unsat"
TIMEOUT = "timeout"

_STATUS = {1: SAT, 0: UNSAT, -1: TIMEOUT}


def _pick_engine():
    choice = os.environ.get("RANGEFORGE_SOLVER", "auto")
    if choice == "python":
        return core_py.cdcl_solve, "python"
    try:
        from . import _core  # compiled extension
    except ImportError:
        if choice == "native":
            raise RuntimeError(
                "RANGEFORGE_SOLVER=native but the compiled core is not built"
            ) from None
        return core_py.cdcl_solve, "python"
    return _core.cdcl_solve, "native"


_ENGINE, ENGINE_NAME = _pick_engine()


def engine_name() -> str:
    """Which solver core is active: "native" or "python"."""
    return ENGINE_NAME


@dataclass(frozen=True)
class SolveOutcome:
    """Result of one solve: SAT with a model, UNSAT, or TIMEOUT.

    ``model`` is indexed by variable number (slot 0 unused), so
    ``len(model) == var_count + 1`` on SAT and None otherwise.
    """

    status: str
    model: list[bool] | None
    elapsed: float
    stats: dict[str, int] | None = None

    @property
    def is_sat(self) -> bool:
        return self.status == SAT


class SolverError(ValueError):
    pass


def solve(
    cnf: CnfInstance, seed: int = 0, deadline: float | None = None
) -> SolveOutcome:
    """Decide an instance with seeded, deterministic search.

    Equal (instance, seed) always give equal outcomes and models; the
    deadline (seconds) only bounds wall-clock time and yields TIMEOUT
    when exceeded.
    """
    start = time.monotonic()
    status_code, model, stats = _ENGINE(cnf.var_count, cnf.clauses, seed, deadline)
    elapsed = time.monotonic() - start
    return SolveOutcome(_STATUS[status_code], model, elapsed, stats)


def verify_model(cnf: CnfInstance, model: list[bool]) -> bool:
    """True iff every clause has at least one satisfied literal."""
    if len(model) != cnf.var_count + 1:
        raise SolverError(
            f"model length {len(model)} != var_count + 1 = {cnf.var_count + 1}"
        )
    for clause in cnf.clauses:
        for lit in clause:
            if model[lit] if lit > 0 else not model[-lit]:
                break
        else:
            return False
    return True


from .dimacs import (  # noqa: E402  (re-export of the file bridge)
    parse_dimacs,
    parse_external_model,
    run_external_solver,
    write_dimacs,
)

__all__ = [
    "SAT",
    "UNSAT",
    "TIMEOUT",
    "SolveOutcome",
    "SolverError",
    "engine_name",
    "solve",
    "verify_model",
    "write_dimacs",
    "parse_dimacs",
    "parse_external_model",
    "run_external_solver",
]
