import itertools
import os
import random
import stat
import textwrap

import pytest
from hypothesis import given, settings, strategies as st

from rangeforge.encoder import CnfInstance
from rangeforge.solver import (
    SAT,
    TIMEOUT,
    UNSAT,
    SolverError,
    engine_name,
    parse_dimacs,
    parse_external_model,
    run_external_solver,
    solve,
    verify_model,
    write_dimacs,
)
from rangeforge.solver.core_py import cdcl_solve as py_solve


def instance(n_vars, clauses):
    return CnfInstance(n_vars, [list(c) for c in clauses], 1, 1, 1)


def enumerate_sat(n_vars, clauses):
    """Exhaustive oracle: all satisfying assignments as bool tuples."""
    sats = []
    for bits in itertools.product([False, True], repeat=n_vars):
        model = [None, *bits]
        if all(any(model[abs(l)] == (l > 0) for l in c) for c in clauses):
            sats.append(bits)
    return sats


def random_3sat(rng, n_vars, n_clauses):
    clauses = []
    for _ in range(n_clauses):
        size = rng.choice([1, 2, 3, 3])
        lits = []
        for _ in range(size):
            v = rng.randrange(1, n_vars + 1)
            lits.append(v if rng.random() < 0.5 else -v)
        clauses.append(lits)
    return clauses


class TestSolveBasics:
    def test_single_unit_clause(self):
        out = solve(instance(1, [[1]]))
        assert out.status == SAT
        assert out.model[1] is True

    def test_contradictory_units(self):
        out = solve(instance(1, [[1], [-1]]))
        assert out.status == UNSAT

    def test_empty_instance_is_sat(self):
        out = solve(instance(3, []))
        assert out.status == SAT
        assert len(out.model) == 4

    def test_sat_models_always_verify(self):
        rng = random.Random(5)
        for _ in range(40):
            n = rng.randrange(3, 12)
            cls = random_3sat(rng, n, rng.randrange(2, 5 * n))
            inst = instance(n, cls)
            out = solve(inst, seed=rng.randrange(1 << 30))
            if out.status == SAT:
                assert verify_model(inst, out.model)

    def test_matches_enumeration_oracle(self):
        rng = random.Random(99)
        for _ in range(60):
            n = rng.randrange(2, 13)
            cls = random_3sat(rng, n, rng.randrange(2, 4 * n))
            inst = instance(n, cls)
            out = solve(inst, seed=17)
            expected = enumerate_sat(n, cls)
            assert (out.status == SAT) == bool(expected)
            if out.status == SAT:
                assert tuple(out.model[1:]) in expected

    def test_elapsed_nonnegative(self):
        assert solve(instance(1, [[1]])).elapsed >= 0


class TestDeterminism:
    def test_equal_seed_equal_model(self):
        rng = random.Random(3)
        for _ in range(10):
            n = rng.randrange(5, 15)
            cls = random_3sat(rng, n, 3 * n)
            inst = instance(n, cls)
            a = solve(inst, seed=1234)
            b = solve(inst, seed=1234)
            assert a.status == b.status
            assert a.model == b.model

    def test_seed_diversity(self):
        # x1..x4 unconstrained except one clause: 8+ models exist.
        inst = instance(4, [[1, 2, 3, 4]])
        assert len(enumerate_sat(4, inst.clauses)) >= 10
        models = set()
        for seed in range(32):
            out = solve(inst, seed=seed)
            assert out.status == SAT
            models.add(tuple(out.model[1:]))
        assert len(models) >= 2

    def test_deadline_monotone(self):
        rng = random.Random(8)
        cls = random_3sat(rng, 12, 40)
        inst = instance(12, cls)
        free = solve(inst, seed=5)
        bounded = solve(inst, seed=5, deadline=max(1.0, free.elapsed * 50 + 1.0))
        assert bounded.status == free.status
        assert bounded.model == free.model

    def test_timeout_reported(self):
        # Ternary clauses only: nothing propagates at level 0, so the
        # search must start and the 0-second deadline must fire.
        rng = random.Random(13)
        cls = []
        for _ in range(260):
            vs = rng.sample(range(1, 61), 3)
            cls.append([v if rng.random() < 0.5 else -v for v in vs])
        inst = instance(60, cls)
        out = solve(inst, seed=1, deadline=0.0)
        assert out.status == TIMEOUT
        assert out.model is None


class TestVerifyModel:
    def test_flipping_a_forced_variable_fails(self):
        inst = instance(1, [[1]])
        out = solve(inst)
        model = list(out.model)
        model[1] = not model[1]
        assert verify_model(inst, out.model)
        assert not verify_model(inst, model)

    def test_empty_clause_list_true_for_any_model(self):
        inst = instance(2, [])
        assert verify_model(inst, [False, True, False])

    def test_length_mismatch(self):
        inst = instance(2, [[1]])
        with pytest.raises(SolverError):
            verify_model(inst, [False, True])


class TestDimacs:
    def test_exact_format(self):
        inst = instance(2, [[1, -2]])
        assert write_dimacs(inst) == "p cnf 2 1\n1 -2 0\n"

    def test_parse_external_model_convention(self):
        model = parse_external_model("s SATISFIABLE\nv 1 -2 0\n", 2)
        assert model == [False, True, False]

    def test_parse_external_unsat(self):
        assert parse_external_model("s UNSATISFIABLE\n", 2) is None

    def test_incomplete_model_rejected(self):
        with pytest.raises(Exception):
            parse_external_model("s SATISFIABLE\nv 1 0\n", 2)

    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_roundtrip(self, data):
        n = data.draw(st.integers(1, 12))
        clauses = data.draw(
            st.lists(
                st.lists(
                    st.integers(-n, n).filter(lambda v: v != 0),
                    min_size=1,
                    max_size=4,
                ),
                min_size=0,
                max_size=12,
            )
        )
        inst = instance(n, clauses)
        var_count, parsed = parse_dimacs(write_dimacs(inst))
        assert var_count == n
        assert parsed == inst.clauses

    def test_external_bridge_with_stub_solver(self, tmp_path):
        stub = tmp_path / "stubsolver"
        stub.write_text(
            textwrap.dedent(
                """\
                #!/usr/bin/env python3
                import itertools, sys
                text = open(sys.argv[1]).read()
                clauses, n = [], 0
                for line in text.splitlines():
                    if line.startswith("p"):
                        n = int(line.split()[2])
                    elif line and not line.startswith("c"):
                        lits = [int(t) for t in line.split()[:-1]]
                        clauses.append(lits)
                for bits in itertools.product([False, True], repeat=n):
                    model = [None, *bits]
                    if all(any(model[abs(l)] == (l > 0) for l in c) for c in clauses):
                        lits = [v if bits[v - 1] else -v for v in range(1, n + 1)]
                        print("s SATISFIABLE")
                        print("v " + " ".join(map(str, lits)) + " 0")
                        sys.exit(10)
                print("s UNSATISFIABLE")
                sys.exit(20)
                """
            )
        )
        stub.chmod(stub.stat().st_mode | stat.S_IEXEC)
        inst = instance(2, [[1, -2], [-1, -2]])
        out = run_external_solver([str(stub)], inst)
        assert out.status == SAT
        assert verify_model(inst, out.model)
        inst2 = instance(1, [[1], [-1]])
        assert run_external_solver([str(stub)], inst2).status == UNSAT


@pytest.mark.skipif(
    engine_name() != "native", reason="compiled core not built"
)
class TestEngineAgreement:
    """The compiled and pure-Python cores must agree bit for bit."""

    def test_identical_outcomes_and_models(self):
        from rangeforge.solver import _core

        rng = random.Random(21)
        for _ in range(120):
            n = rng.randrange(2, 16)
            cls = random_3sat(rng, n, rng.randrange(2, 4 * n))
            seed = rng.randrange(1 << 32)
            s_native, m_native, _ = _core.cdcl_solve(n, cls, seed, None)
            s_py, m_py, _ = py_solve(n, cls, seed, None)
            assert s_native == s_py
            assert m_native == m_py
