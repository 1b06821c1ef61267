"""Pure-Python CDCL core: watched literals, 1-UIP learning, Luby restarts.

This is the reference engine; the optional compiled core in
``_core.pyx`` mirrors it operation for operation (same integer
activity scheme, same splitmix64 RNG, same tie-breaking), so both
engines return identical outcomes and models for a given seed.

Status codes: 1 = SAT, 0 = UNSAT, -1 = deadline exceeded.
"""

from __future__ import annotations

import time

_M64 = (1 << 64) - 1
_ACT_RESCALE = 1 << 52


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _M64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    z = z ^ (z >> 31)
    return state, z


def _luby(x: int) -> int:
    """Luby restart sequence 1,1,2,1,1,2,4,... (x from 0)."""
    size = 1
    seq = 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return 1 << seq


class CoreSolver:
    """One CDCL search over a fixed clause set."""

    def __init__(self, n_vars: int, clauses: list[list[int]], seed: int):
        self.n_vars = n_vars
        # Clause arena: flat literal array plus per-clause offset/size.
        self.lits: list[int] = []
        self.cla_start: list[int] = []
        self.cla_size: list[int] = []
        self.cla_lbd: list[int] = []
        self.n_orig = 0
        self.watches: list[list[int]] = [[] for _ in range(2 * n_vars + 2)]
        self.assign = [0] * (n_vars + 1)  # 0 unassigned, 1 true, -1 false
        self.level = [0] * (n_vars + 1)
        self.reason = [-1] * (n_vars + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.seen = [0] * (n_vars + 1)
        self.activity = [0] * (n_vars + 1)
        self.act_inc = 1
        self.phase = [0] * (n_vars + 1)
        self.rank = [0] * (n_vars + 1)
        self.heap: list[int] = []
        self.heap_pos = [-1] * (n_vars + 1)
        self.ok = True
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self.learned_live = 0

        rng = seed & _M64
        for v in range(1, n_vars + 1):
            rng, z = _splitmix64(rng)
            self.phase[v] = z & 1
        perm = list(range(1, n_vars + 1))
        for i in range(n_vars - 1, 0, -1):
            rng, z = _splitmix64(rng)
            j = z % (i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        for pos, v in enumerate(perm):
            self.rank[v] = pos
        for v in perm:
            self._heap_insert(v)

        for clause in clauses:
            if not self._add_clause(clause):
                self.ok = False
                return

    # ----- variable order heap (max activity, min rank tie-break) -----

    def _better(self, u: int, v: int) -> bool:
        if self.activity[u] != self.activity[v]:
            return self.activity[u] > self.activity[v]
        return self.rank[u] < self.rank[v]

    def _heap_sift_up(self, i: int) -> None:
        heap, pos = self.heap, self.heap_pos
        v = heap[i]
        while i > 0:
            parent = (i - 1) >> 1
            if not self._better(v, heap[parent]):
                break
            heap[i] = heap[parent]
            pos[heap[i]] = i
            i = parent
        heap[i] = v
        pos[v] = i

    def _heap_sift_down(self, i: int) -> None:
        heap, pos = self.heap, self.heap_pos
        v = heap[i]
        size = len(heap)
        while True:
            left = 2 * i + 1
            if left >= size:
                break
            best = left
            right = left + 1
            if right < size and self._better(heap[right], heap[left]):
                best = right
            if not self._better(heap[best], v):
                break
            heap[i] = heap[best]
            pos[heap[i]] = i
            i = best
        heap[i] = v
        pos[v] = i

    def _heap_insert(self, v: int) -> None:
        if self.heap_pos[v] >= 0:
            return
        self.heap.append(v)
        self.heap_pos[v] = len(self.heap) - 1
        self._heap_sift_up(len(self.heap) - 1)

    def _heap_pop(self) -> int:
        heap, pos = self.heap, self.heap_pos
        top = heap[0]
        last = heap.pop()
        pos[top] = -1
        if heap:
            heap[0] = last
            pos[last] = 0
            self._heap_sift_down(0)
        return top

    def _rebuild_heap(self) -> None:
        for i in range(len(self.heap) // 2 - 1, -1, -1):
            self._heap_sift_down(i)

    def _bump(self, v: int) -> None:
        self.activity[v] += self.act_inc
        if self.activity[v] >= _ACT_RESCALE:
            for u in range(1, self.n_vars + 1):
                self.activity[u] >>= 32
            self.act_inc >>= 32
            if self.act_inc == 0:
                self.act_inc = 1
            self._rebuild_heap()
        elif self.heap_pos[v] >= 0:
            self._heap_sift_up(self.heap_pos[v])

    # ----- clauses, watches, assignment -----

    @staticmethod
    def _watch_index(lit: int) -> int:
        return 2 * lit if lit > 0 else -2 * lit + 1

    def _value(self, lit: int) -> int:
        a = self.assign[abs(lit)]
        return a if lit > 0 else -a

    def _enqueue(self, lit: int, reason: int) -> None:
        v = abs(lit)
        self.assign[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _add_clause(self, clause: list[int]) -> bool:
        """Preprocess and attach one original clause; False on conflict."""
        out: list[int] = []
        seen_lits: set[int] = set()
        for lit in clause:
            v = abs(lit)
            if v < 1 or v > self.n_vars:
                raise ValueError(f"literal {lit} out of range")
            if lit in seen_lits:
                continue
            if -lit in seen_lits:
                return True  # tautology
            seen_lits.add(lit)
            out.append(lit)
        if not out:
            return False
        if len(out) == 1:
            val = self._value(out[0])
            if val == -1:
                return False
            if val == 0:
                self._enqueue(out[0], -1)
            return True
        ci = len(self.cla_start)
        self.cla_start.append(len(self.lits))
        self.cla_size.append(len(out))
        self.cla_lbd.append(0)
        self.lits.extend(out)
        self.watches[self._watch_index(out[0])].append(ci)
        self.watches[self._watch_index(out[1])].append(ci)
        self.n_orig += 1
        return True

    def _attach_learned(self, clause: list[int], lbd: int) -> int:
        ci = len(self.cla_start)
        self.cla_start.append(len(self.lits))
        self.cla_size.append(len(clause))
        self.cla_lbd.append(lbd)
        self.lits.extend(clause)
        self.watches[self._watch_index(clause[0])].append(ci)
        self.watches[self._watch_index(clause[1])].append(ci)
        self.learned_live += 1
        return ci

    def _propagate(self) -> int:
        """Unit propagation; returns conflicting clause index or -1."""
        lits = self.lits
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = -lit
            ws = self.watches[self._watch_index(false_lit)]
            i = 0
            j = 0
            n_ws = len(ws)
            while i < n_ws:
                ci = ws[i]
                i += 1
                size = self.cla_size[ci]
                if size == 0:
                    continue  # removed by reduce_db
                start = self.cla_start[ci]
                if lits[start] == false_lit:
                    lits[start] = lits[start + 1]
                    lits[start + 1] = false_lit
                first = lits[start]
                if self._value(first) == 1:
                    ws[j] = ci
                    j += 1
                    continue
                found = False
                for k in range(2, size):
                    if self._value(lits[start + k]) != -1:
                        lits[start + 1] = lits[start + k]
                        lits[start + k] = false_lit
                        self.watches[self._watch_index(lits[start + 1])].append(ci)
                        found = True
                        break
                if found:
                    continue
                ws[j] = ci
                j += 1
                if self._value(first) == -1:
                    while i < n_ws:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    self.qhead = len(self.trail)
                    return ci
                self._enqueue(first, ci)
            del ws[j:]
        return -1

    # ----- conflict analysis -----

    def _analyze(self, conflict: int) -> tuple[list[int], int, int]:
        """First-UIP learning; returns (clause, backjump level, lbd)."""
        learnt = [0]
        seen = self.seen
        counter = 0
        p = 0
        index = len(self.trail) - 1
        ci = conflict
        current = len(self.trail_lim)
        while True:
            start = self.cla_start[ci]
            for k in range(self.cla_size[ci]):
                q = self.lits[start + k]
                if q == p:
                    continue
                v = abs(q)
                if not seen[v] and self.level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if self.level[v] == current:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(self.trail[index])]:
                index -= 1
            p = self.trail[index]
            index -= 1
            seen[abs(p)] = 0
            counter -= 1
            if counter == 0:
                break
            ci = self.reason[abs(p)]
        learnt[0] = -p

        if len(learnt) == 1:
            back_level = 0
        else:
            # Move a max-level literal into the second watch slot.
            max_i = 1
            for k in range(2, len(learnt)):
                if self.level[abs(learnt[k])] > self.level[abs(learnt[max_i])]:
                    max_i = k
            learnt[1], learnt[max_i] = learnt[max_i], learnt[1]
            back_level = self.level[abs(learnt[1])]

        levels = set()
        for q in learnt:
            levels.add(self.level[abs(q)])
        for q in learnt:
            seen[abs(q)] = 0
        return learnt, back_level, len(levels)

    def _backtrack(self, target: int) -> None:
        if len(self.trail_lim) <= target:
            return
        limit = self.trail_lim[target]
        for idx in range(len(self.trail) - 1, limit - 1, -1):
            lit = self.trail[idx]
            v = abs(lit)
            self.phase[v] = 1 if lit > 0 else 0
            self.assign[v] = 0
            self.reason[v] = -1
            self._heap_insert(v)
        del self.trail[limit:]
        del self.trail_lim[target:]
        self.qhead = limit

    def _reduce_db(self) -> None:
        """Drop the older half of non-glue learned clauses."""
        removable = []
        for ci in range(self.n_orig, len(self.cla_start)):
            size = self.cla_size[ci]
            if size <= 2 or self.cla_lbd[ci] <= 2:
                continue
            start = self.cla_start[ci]
            first = self.lits[start]
            if self._value(first) == 1 and self.reason[abs(first)] == ci:
                continue  # locked as a reason
            removable.append(ci)
        for ci in removable[: len(removable) // 2]:
            self.cla_size[ci] = 0
            self.learned_live -= 1

    # ----- main search -----

    def solve(self, deadline: float | None) -> tuple[int, list[bool] | None]:
        start_time = time.monotonic()
        if not self.ok:
            return 0, None
        if self._propagate() != -1:
            return 0, None

        max_learnts = max(1000, self.n_orig // 3)
        restart_count = 0
        restart_limit = 64 * _luby(restart_count)
        conflicts_at_restart = 0

        while True:
            if deadline is not None and time.monotonic() - start_time >= deadline:
                return -1, None
            if len(self.trail) == self.n_vars:
                model = [False] * (self.n_vars + 1)
                for v in range(1, self.n_vars + 1):
                    model[v] = self.assign[v] == 1
                return 1, model
            if self.conflicts - conflicts_at_restart >= restart_limit:
                restart_count += 1
                restart_limit = 64 * _luby(restart_count)
                conflicts_at_restart = self.conflicts
                self._backtrack(0)
            if self.learned_live > max_learnts:
                self._reduce_db()
                max_learnts += max_learnts >> 1

            # Decide.
            v = 0
            while self.heap:
                v = self._heap_pop()
                if self.assign[v] == 0:
                    break
                v = 0
            if v == 0:
                # All remaining heap vars were assigned; trail is full.
                continue
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(v if self.phase[v] else -v, -1)

            while True:
                conflict = self._propagate()
                if conflict == -1:
                    break
                self.conflicts += 1
                if not self.trail_lim:
                    return 0, None
                learnt, back_level, lbd = self._analyze(conflict)
                self._backtrack(back_level)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    ci = self._attach_learned(learnt, lbd)
                    self._enqueue(learnt[0], ci)
                self.act_inc += self.act_inc >> 4
                if self.act_inc >= _ACT_RESCALE:
                    for u in range(1, self.n_vars + 1):
                        self.activity[u] >>= 32
                    self.act_inc >>= 32
                    if self.act_inc == 0:
                        self.act_inc = 1
                    self._rebuild_heap()


def cdcl_solve(
    n_vars: int,
    clauses: list[list[int]],
    seed: int,
    deadline: float | None = None,
) -> tuple[int, list[bool] | None, dict[str, int]]:
    """Decide a clause set; (status, model, stats).

    Model is indexed by variable number (slot 0 unused).
    """
    solver = CoreSolver(n_vars, clauses, seed)
    status, model = solver.solve(deadline)
    stats = {
        "conflicts": solver.conflicts,
        "decisions": solver.decisions,
        "propagations": solver.propagations,
    }
    return status, model, stats
