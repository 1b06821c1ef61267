"""DIMACS CNF interchange and the external-solver subprocess bridge."""

from __future__ import annotations

import subprocess
import tempfile
import time
from pathlib import Path

from ..encoder import CnfInstance


class DimacsError(ValueError):
    pass


def write_dimacs(cnf: CnfInstance, legend: bool = False) -> str:
    """Serialize an instance: header line, then one 0-terminated clause per line.

    With ``legend`` set, comment lines mapping primary variables to
    (cell, tile) pairs precede the header.
    """
    lines = []
    if legend:
        lines.append("c rangeforge primary variables: var = cell * tiles + tile + 1")
        lines.append(
            f"c grid {cnf.width}x{cnf.height}, {cnf.tile_count} tiles, "
            f"aux {cnf.aux_summary}"
        )
        for (cell, tile), var in cnf.var_map.items():
            lines.append(f"c v {var} cell {cell} tile {tile}")
    lines.append(f"p cnf {cnf.var_count} {len(cnf.clauses)}")
    for clause in cnf.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    """Parse DIMACS CNF text into (var_count, clauses)."""
    var_count = None
    clause_count = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed problem line: {line!r}")
            var_count = int(parts[2])
            clause_count = int(parts[3])
            continue
        if line.startswith("%"):
            break
        for token in line.split():
            lit = int(token)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        raise DimacsError("trailing clause without 0 terminator")
    if var_count is None:
        raise DimacsError("missing problem line")
    if clause_count is not None and clause_count != len(clauses):
        raise DimacsError(
            f"header declares {clause_count} clauses, found {len(clauses)}"
        )
    return var_count, clauses


def parse_external_model(text: str, var_count: int) -> list[bool] | None:
    """Parse standard solver output lines ("s ...", "v ... 0").

    Returns a model indexed by variable (slot 0 unused) or None for
    UNSATISFIABLE. Raises when the output is malformed or the model is
    incomplete.
    """
    status = None
    values: dict[int, bool] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("s "):
            status = line[2:].strip()
        elif line.startswith("v") and (len(line) == 1 or line[1] in " \t"):
            for token in line[1:].split():
                lit = int(token)
                if lit == 0:
                    continue
                if abs(lit) > var_count:
                    raise DimacsError(f"literal {lit} out of declared range")
                values[abs(lit)] = lit > 0
    if status is None:
        raise DimacsError("no solution status line in solver output")
    if status.upper().startswith("UNSAT"):
        return None
    if not status.upper().startswith("SAT"):
        raise DimacsError(f"unrecognized solver status {status!r}")
    missing = [v for v in range(1, var_count + 1) if v not in values]
    if missing:
        raise DimacsError(f"incomplete model: missing variables {missing[:5]}...")
    model = [False] * (var_count + 1)
    for v, val in values.items():
        model[v] = val
    return model


def run_external_solver(command: list[str], cnf: CnfInstance):
    """Invoke an external DIMACS solver as ``command <cnf-file>``.

    Exit codes follow the SAT-competition convention (10 SAT, 20
    UNSAT) but the parsed "s"/"v" lines are authoritative. Returns a
    SolveOutcome; raises DimacsError on unusable output.
    """
    from . import SAT, UNSAT, SolveOutcome

    start = time.monotonic()
    with tempfile.TemporaryDirectory(prefix="rangeforge-cnf-") as tmp:
        path = Path(tmp) / "instance.cnf"
        path.write_text(write_dimacs(cnf))
        proc = subprocess.run(
            list(command) + [str(path)],
            capture_output=True,
            text=True,
        )
    model = parse_external_model(proc.stdout, cnf.var_count)
    elapsed = time.monotonic() - start
    if model is None:
        return SolveOutcome(UNSAT, None, elapsed)
    return SolveOutcome(SAT, model, elapsed)
