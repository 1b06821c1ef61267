#!/usr/bin/env python3
"""Benchmark: compiled solver core vs pure-Python fallback.

Times both engines on representative instances (pattern-generation
tasks from the bundled corpus plus random 3-SAT) and checks that they
return identical outcomes and models. Run from the repo root:

    python benchmarks/bench_solver.py
"""

from __future__ import annotations

import random
import time

from rangeforge.corpus import build_corpus, bundled_level_texts, default_catalog
from rangeforge.encoder import CountConstraint, encode_patterns, encode_task
from rangeforge.patterns import extract_rules
from rangeforge.solver import core_py

try:
    from rangeforge.solver import _core
except ImportError:
    _core = None


def pattern_instances():
    catalog = default_catalog()
    corpus = build_corpus(bundled_level_texts(), catalog, 20, 14)
    cases = []
    for kind, w, h, bounds in (
        ("nbr_plus", 12, 10, (30, 41, 3, 5)),
        ("block2", 12, 10, (30, 41, 3, 5)),
        ("ring", 12, 10, (30, 41, 3, 5)),
        ("nbr_plus", 20, 14, (60, 74, 12, 14)),
        ("block2", 20, 14, (60, 74, 12, 14)),
    ):
        rules = extract_rules(corpus, kind)
        enc = encode_patterns(w, h, rules, catalog)
        d_lo, d_hi, h_lo, h_hi = bounds
        inst = encode_task(
            w, h, rules, catalog,
            CountConstraint("density", d_lo, d_hi),
            CountConstraint("difficulty", h_lo, h_hi),
            enc,
        )
        cases.append((f"{kind} {w}x{h} targeted", inst.var_count, inst.clauses))
    return cases


def random_instances():
    rng = random.Random(7)
    cases = []
    for n, m in ((120, 480), (200, 840)):
        clauses = []
        for _ in range(m):
            vs = rng.sample(range(1, n + 1), 3)
            clauses.append([v if rng.random() < 0.5 else -v for v in vs])
        cases.append((f"random 3-SAT n={n} m={m}", n, clauses))
    return cases


def time_engine(engine, n_vars, clauses, seed, repeats=3):
    best = None
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = engine(n_vars, clauses, seed, None)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def main():
    print(f"{'instance':<32} {'vars':>7} {'clauses':>8} "
          f"{'python':>10} {'native':>10} {'speedup':>8}  agree")
    for name, n_vars, clauses in pattern_instances() + random_instances():
        t_py, r_py = time_engine(core_py.cdcl_solve, n_vars, clauses, seed=42)
        if _core is None:
            print(f"{name:<32} {n_vars:>7} {len(clauses):>8} {t_py:>9.3f}s "
                  f"{'—':>10} {'—':>8}  (native core not built)")
            continue
        t_nat, r_nat = time_engine(_core.cdcl_solve, n_vars, clauses, seed=42)
        agree = r_py[0] == r_nat[0] and r_py[1] == r_nat[1]
        print(f"{name:<32} {n_vars:>7} {len(clauses):>8} {t_py:>9.3f}s "
              f"{t_nat:>9.3f}s {t_py / t_nat:>7.1f}x  {agree}")


if __name__ == "__main__":
    main()
