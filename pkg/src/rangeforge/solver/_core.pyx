# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled CDCL core.

A transliteration of ``core_py.CoreSolver`` into C storage: same
watched-literal propagation, 1-UIP learning, integer VSIDS with
seeded tie-breaking, Luby restarts, and clause-DB reduction, in the
same operation order, so outcomes and models match the pure-Python
engine bit for bit for equal (instance, seed). The search loop runs
without the GIL, so attempts can execute on real worker threads.
"""

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport calloc, free, malloc, realloc
from posix.time cimport CLOCK_MONOTONIC, clock_gettime, timespec

ctypedef uint64_t u64
ctypedef int64_t i64

DEF ACT_RESCALE_BITS = 52

cdef inline double _now() noexcept nogil:
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return ts.tv_sec + ts.tv_nsec * 1e-9

cdef inline u64 _splitmix64(u64 *state) noexcept nogil:
    cdef u64 z
    state[0] = state[0] + <u64>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EB
    return z ^ (z >> 31)

cdef inline int _luby(int x) noexcept nogil:
    cdef int size = 1
    cdef int seq = 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return 1 << seq


cdef struct WatchList:
    int *data
    int size
    int cap


cdef class Engine:
    cdef int n_vars
    cdef int *lits
    cdef i64 lits_size, lits_cap
    cdef i64 *cla_start
    cdef int *cla_size
    cdef int *cla_lbd
    cdef i64 n_clauses, cla_cap
    cdef i64 n_orig
    cdef WatchList *watches
    cdef signed char *assign
    cdef int *level
    cdef i64 *reason
    cdef int *trail
    cdef int trail_size
    cdef int *trail_lim
    cdef int trail_lim_size
    cdef int qhead
    cdef signed char *seen
    cdef u64 *activity
    cdef u64 act_inc
    cdef signed char *phase
    cdef int *rank
    cdef int *heap
    cdef int heap_size
    cdef int *heap_pos
    cdef int *learnt_buf
    cdef int learnt_size
    cdef bint ok
    cdef i64 learned_live
    cdef public u64 conflicts, decisions, propagations

    def __cinit__(self, int n_vars, clauses, u64 seed):
        cdef i64 total_lits = 0
        for clause in clauses:
            total_lits += len(clause)

        self.n_vars = n_vars
        self.lits_cap = total_lits + 64
        self.lits = <int *>malloc(self.lits_cap * sizeof(int))
        self.lits_size = 0
        self.cla_cap = len(clauses) + 64
        self.cla_start = <i64 *>malloc(self.cla_cap * sizeof(i64))
        self.cla_size = <int *>malloc(self.cla_cap * sizeof(int))
        self.cla_lbd = <int *>malloc(self.cla_cap * sizeof(int))
        self.n_clauses = 0
        self.n_orig = 0
        self.watches = <WatchList *>calloc(2 * n_vars + 2, sizeof(WatchList))
        self.assign = <signed char *>calloc(n_vars + 1, 1)
        self.level = <int *>calloc(n_vars + 1, sizeof(int))
        self.reason = <i64 *>malloc((n_vars + 1) * sizeof(i64))
        self.trail = <int *>malloc((n_vars + 1) * sizeof(int))
        self.trail_size = 0
        self.trail_lim = <int *>malloc((n_vars + 1) * sizeof(int))
        self.trail_lim_size = 0
        self.qhead = 0
        self.seen = <signed char *>calloc(n_vars + 1, 1)
        self.activity = <u64 *>calloc(n_vars + 1, sizeof(u64))
        self.act_inc = 1
        self.phase = <signed char *>calloc(n_vars + 1, 1)
        self.rank = <int *>calloc(n_vars + 1, sizeof(int))
        self.heap = <int *>malloc((n_vars + 1) * sizeof(int))
        self.heap_size = 0
        self.heap_pos = <int *>malloc((n_vars + 1) * sizeof(int))
        self.learnt_buf = <int *>malloc((n_vars + 1) * sizeof(int))
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self.learned_live = 0
        self.ok = True

        if (self.lits == NULL or self.cla_start == NULL or self.cla_size == NULL
                or self.cla_lbd == NULL or self.watches == NULL
                or self.assign == NULL or self.level == NULL
                or self.reason == NULL or self.trail == NULL
                or self.trail_lim == NULL or self.seen == NULL
                or self.activity == NULL or self.phase == NULL
                or self.rank == NULL or self.heap == NULL
                or self.heap_pos == NULL or self.learnt_buf == NULL):
            raise MemoryError()

        cdef int v, i, pos
        cdef u64 rng = seed
        cdef u64 z
        cdef int *perm = <int *>malloc((n_vars + 1) * sizeof(int))
        if perm == NULL:
            raise MemoryError()
        for v in range(1, n_vars + 1):
            self.reason[v] = -1
            self.heap_pos[v] = -1
        for v in range(1, n_vars + 1):
            z = _splitmix64(&rng)
            self.phase[v] = <signed char>(z & 1)
        for i in range(n_vars):
            perm[i] = i + 1
        cdef u64 j
        for i in range(n_vars - 1, 0, -1):
            z = _splitmix64(&rng)
            j = z % <u64>(i + 1)
            v = perm[i]
            perm[i] = perm[<int>j]
            perm[<int>j] = v
        for pos in range(n_vars):
            self.rank[perm[pos]] = pos
        for pos in range(n_vars):
            self._heap_insert(perm[pos])
        free(perm)

        # Clause conversion and preprocessing (GIL held).
        cdef signed char *mark = <signed char *>calloc(n_vars + 1, 1)
        if mark == NULL:
            raise MemoryError()
        cdef int lit, var, sign, out_size
        cdef int tautology
        cdef int *out = <int *>malloc((2 * n_vars + 2) * sizeof(int))
        if out == NULL:
            free(mark)
            raise MemoryError()
        try:
            for clause in clauses:
                out_size = 0
                tautology = 0
                for py_lit in clause:
                    lit = py_lit
                    var = lit if lit > 0 else -lit
                    if var < 1 or var > n_vars:
                        raise ValueError(f"literal {lit} out of range")
                    sign = 1 if lit > 0 else -1
                    if mark[var] == sign:
                        continue
                    if mark[var] == -sign:
                        tautology = 1
                        break
                    mark[var] = <signed char>sign
                    out[out_size] = lit
                    out_size += 1
                for i in range(out_size):
                    var = out[i] if out[i] > 0 else -out[i]
                    mark[var] = 0
                if tautology:
                    continue
                if not self._add_preprocessed(out, out_size):
                    self.ok = False
                    break
        finally:
            free(mark)
            free(out)

    def __dealloc__(self):
        cdef i64 i
        if self.watches != NULL:
            for i in range(2 * self.n_vars + 2):
                if self.watches[i].data != NULL:
                    free(self.watches[i].data)
            free(self.watches)
        free(self.lits)
        free(self.cla_start)
        free(self.cla_size)
        free(self.cla_lbd)
        free(self.assign)
        free(self.level)
        free(self.reason)
        free(self.trail)
        free(self.trail_lim)
        free(self.seen)
        free(self.activity)
        free(self.phase)
        free(self.rank)
        free(self.heap)
        free(self.heap_pos)
        free(self.learnt_buf)

    # ----- variable order heap -----

    cdef inline bint _better(self, int u, int v) noexcept nogil:
        if self.activity[u] != self.activity[v]:
            return self.activity[u] > self.activity[v]
        return self.rank[u] < self.rank[v]

    cdef void _heap_sift_up(self, int i) noexcept nogil:
        cdef int v = self.heap[i]
        cdef int parent
        while i > 0:
            parent = (i - 1) >> 1
            if not self._better(v, self.heap[parent]):
                break
            self.heap[i] = self.heap[parent]
            self.heap_pos[self.heap[i]] = i
            i = parent
        self.heap[i] = v
        self.heap_pos[v] = i

    cdef void _heap_sift_down(self, int i) noexcept nogil:
        cdef int v = self.heap[i]
        cdef int size = self.heap_size
        cdef int left, right, best
        while True:
            left = 2 * i + 1
            if left >= size:
                break
            best = left
            right = left + 1
            if right < size and self._better(self.heap[right], self.heap[left]):
                best = right
            if not self._better(self.heap[best], v):
                break
            self.heap[i] = self.heap[best]
            self.heap_pos[self.heap[i]] = i
            i = best
        self.heap[i] = v
        self.heap_pos[v] = i

    cdef void _heap_insert(self, int v) noexcept nogil:
        if self.heap_pos[v] >= 0:
            return
        self.heap[self.heap_size] = v
        self.heap_pos[v] = self.heap_size
        self.heap_size += 1
        self._heap_sift_up(self.heap_size - 1)

    cdef int _heap_pop(self) noexcept nogil:
        cdef int top = self.heap[0]
        cdef int last = self.heap[self.heap_size - 1]
        self.heap_size -= 1
        self.heap_pos[top] = -1
        if self.heap_size > 0:
            self.heap[0] = last
            self.heap_pos[last] = 0
            self._heap_sift_down(0)
        return top

    cdef void _rebuild_heap(self) noexcept nogil:
        cdef int i
        for i in range(self.heap_size // 2 - 1, -1, -1):
            self._heap_sift_down(i)

    cdef void _rescale_activity(self) noexcept nogil:
        cdef int u
        for u in range(1, self.n_vars + 1):
            self.activity[u] >>= 32
        self.act_inc >>= 32
        if self.act_inc == 0:
            self.act_inc = 1
        self._rebuild_heap()

    cdef void _bump(self, int v) noexcept nogil:
        self.activity[v] += self.act_inc
        if self.activity[v] >= (<u64>1 << ACT_RESCALE_BITS):
            self._rescale_activity()
        elif self.heap_pos[v] >= 0:
            self._heap_sift_up(self.heap_pos[v])

    # ----- clauses, watches, assignment -----

    cdef inline i64 _watch_index(self, int lit) noexcept nogil:
        return 2 * <i64>lit if lit > 0 else -2 * <i64>lit + 1

    cdef inline int _value(self, int lit) noexcept nogil:
        cdef int a = self.assign[lit if lit > 0 else -lit]
        return a if lit > 0 else -a

    cdef inline void _enqueue(self, int lit, i64 reason) noexcept nogil:
        cdef int v = lit if lit > 0 else -lit
        self.assign[v] = 1 if lit > 0 else -1
        self.level[v] = self.trail_lim_size
        self.reason[v] = reason
        self.trail[self.trail_size] = lit
        self.trail_size += 1

    cdef void _watch_push(self, i64 widx, i64 ci) noexcept nogil:
        cdef WatchList *wl = &self.watches[widx]
        cdef int *grown
        if wl.size == wl.cap:
            wl.cap = 4 if wl.cap == 0 else wl.cap * 2
            grown = <int *>realloc(wl.data, wl.cap * sizeof(int))
            wl.data = grown
        wl.data[wl.size] = <int>ci
        wl.size += 1

    cdef void _grow_arena(self, i64 need) noexcept nogil:
        cdef i64 cap = self.lits_cap
        while self.lits_size + need > cap:
            cap *= 2
        if cap != self.lits_cap:
            self.lits = <int *>realloc(self.lits, cap * sizeof(int))
            self.lits_cap = cap
        if self.n_clauses == self.cla_cap:
            self.cla_cap *= 2
            self.cla_start = <i64 *>realloc(self.cla_start, self.cla_cap * sizeof(i64))
            self.cla_size = <int *>realloc(self.cla_size, self.cla_cap * sizeof(int))
            self.cla_lbd = <int *>realloc(self.cla_lbd, self.cla_cap * sizeof(int))

    cdef bint _add_preprocessed(self, int *out, int out_size):
        cdef int val
        cdef i64 ci
        cdef int i
        if out_size == 0:
            return False
        if out_size == 1:
            val = self._value(out[0])
            if val == -1:
                return False
            if val == 0:
                self._enqueue(out[0], -1)
            return True
        self._grow_arena(out_size)
        ci = self.n_clauses
        self.cla_start[ci] = self.lits_size
        self.cla_size[ci] = out_size
        self.cla_lbd[ci] = 0
        for i in range(out_size):
            self.lits[self.lits_size] = out[i]
            self.lits_size += 1
        self._watch_push(self._watch_index(out[0]), ci)
        self._watch_push(self._watch_index(out[1]), ci)
        self.n_clauses += 1
        self.n_orig += 1
        return True

    cdef i64 _attach_learned(self, int *clause, int size, int lbd) noexcept nogil:
        cdef i64 ci
        cdef int i
        self._grow_arena(size)
        ci = self.n_clauses
        self.cla_start[ci] = self.lits_size
        self.cla_size[ci] = size
        self.cla_lbd[ci] = lbd
        for i in range(size):
            self.lits[self.lits_size] = clause[i]
            self.lits_size += 1
        self._watch_push(self._watch_index(clause[0]), ci)
        self._watch_push(self._watch_index(clause[1]), ci)
        self.n_clauses += 1
        self.learned_live += 1
        return ci

    cdef i64 _propagate(self) noexcept nogil:
        cdef int lit, false_lit, first, size, k
        cdef i64 ci, start
        cdef WatchList *ws
        cdef int i, j, n_ws
        cdef bint found
        while self.qhead < self.trail_size:
            lit = self.trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = -lit
            ws = &self.watches[self._watch_index(false_lit)]
            i = 0
            j = 0
            n_ws = ws.size
            while i < n_ws:
                ci = ws.data[i]
                i += 1
                size = self.cla_size[ci]
                if size == 0:
                    continue
                start = self.cla_start[ci]
                if self.lits[start] == false_lit:
                    self.lits[start] = self.lits[start + 1]
                    self.lits[start + 1] = false_lit
                first = self.lits[start]
                if self._value(first) == 1:
                    ws.data[j] = <int>ci
                    j += 1
                    continue
                found = False
                for k in range(2, size):
                    if self._value(self.lits[start + k]) != -1:
                        self.lits[start + 1] = self.lits[start + k]
                        self.lits[start + k] = false_lit
                        self._watch_push(self._watch_index(self.lits[start + 1]), ci)
                        found = True
                        break
                if found:
                    continue
                ws.data[j] = <int>ci
                j += 1
                if self._value(first) == -1:
                    while i < n_ws:
                        ws.data[j] = ws.data[i]
                        j += 1
                        i += 1
                    ws.size = j
                    self.qhead = self.trail_size
                    return ci
                self._enqueue(first, ci)
            ws.size = j
        return -1

    # ----- conflict analysis -----

    cdef int _analyze(self, i64 conflict, int *out_back_level, int *out_lbd) noexcept nogil:
        cdef int learnt_size = 1
        cdef int counter = 0
        cdef int p = 0
        cdef int index = self.trail_size - 1
        cdef i64 ci = conflict
        cdef int current = self.trail_lim_size
        cdef i64 start
        cdef int k, q, v
        while True:
            start = self.cla_start[ci]
            for k in range(self.cla_size[ci]):
                q = self.lits[start + k]
                if q == p:
                    continue
                v = q if q > 0 else -q
                if self.seen[v] == 0 and self.level[v] > 0:
                    self.seen[v] = 1
                    self._bump(v)
                    if self.level[v] == current:
                        counter += 1
                    else:
                        self.learnt_buf[learnt_size] = q
                        learnt_size += 1
            while True:
                v = self.trail[index]
                if v < 0:
                    v = -v
                if self.seen[v]:
                    break
                index -= 1
            p = self.trail[index]
            index -= 1
            v = p if p > 0 else -p
            self.seen[v] = 0
            counter -= 1
            if counter == 0:
                break
            ci = self.reason[v]
        self.learnt_buf[0] = -p

        cdef int max_i, tmp, back_level
        if learnt_size == 1:
            back_level = 0
        else:
            max_i = 1
            for k in range(2, learnt_size):
                q = self.learnt_buf[k]
                v = q if q > 0 else -q
                tmp = self.learnt_buf[max_i]
                if self.level[v] > self.level[tmp if tmp > 0 else -tmp]:
                    max_i = k
            tmp = self.learnt_buf[1]
            self.learnt_buf[1] = self.learnt_buf[max_i]
            self.learnt_buf[max_i] = tmp
            q = self.learnt_buf[1]
            back_level = self.level[q if q > 0 else -q]

        # Clear variable flags first: the seen array is then reused to
        # mark level numbers for the LBD count (levels <= n_vars).
        for k in range(learnt_size):
            q = self.learnt_buf[k]
            v = q if q > 0 else -q
            self.seen[v] = 0
        cdef int lbd = 0
        for k in range(learnt_size):
            q = self.learnt_buf[k]
            v = q if q > 0 else -q
            if self.seen[self.level[v]] == 0:
                self.seen[self.level[v]] = 1
                lbd += 1
        for k in range(learnt_size):
            q = self.learnt_buf[k]
            v = q if q > 0 else -q
            self.seen[self.level[v]] = 0
        out_back_level[0] = back_level
        out_lbd[0] = lbd
        return learnt_size

    cdef void _backtrack(self, int target) noexcept nogil:
        if self.trail_lim_size <= target:
            return
        cdef int limit = self.trail_lim[target]
        cdef int idx, lit, v
        for idx in range(self.trail_size - 1, limit - 1, -1):
            lit = self.trail[idx]
            v = lit if lit > 0 else -lit
            self.phase[v] = 1 if lit > 0 else 0
            self.assign[v] = 0
            self.reason[v] = -1
            self._heap_insert(v)
        self.trail_size = limit
        self.trail_lim_size = target
        self.qhead = limit

    cdef void _reduce_db(self) noexcept nogil:
        cdef i64 removable = 0
        cdef i64 ci
        cdef int first, v
        # First pass counts, second pass removes the older half.
        for ci in range(self.n_orig, self.n_clauses):
            if self.cla_size[ci] <= 2 or self.cla_lbd[ci] <= 2:
                continue
            first = self.lits[self.cla_start[ci]]
            v = first if first > 0 else -first
            if self._value(first) == 1 and self.reason[v] == ci:
                continue
            removable += 1
        cdef i64 to_remove = removable // 2
        for ci in range(self.n_orig, self.n_clauses):
            if to_remove == 0:
                break
            if self.cla_size[ci] <= 2 or self.cla_lbd[ci] <= 2:
                continue
            first = self.lits[self.cla_start[ci]]
            v = first if first > 0 else -first
            if self._value(first) == 1 and self.reason[v] == ci:
                continue
            self.cla_size[ci] = 0
            self.learned_live -= 1
            to_remove -= 1

    # ----- main search -----

    cdef int _search(self, double deadline, double start_time) noexcept nogil:
        cdef i64 max_learnts = self.n_orig // 3
        if max_learnts < 1000:
            max_learnts = 1000
        cdef int restart_count = 0
        cdef i64 restart_limit = 64 * _luby(restart_count)
        cdef u64 conflicts_at_restart = 0
        cdef int v, back_level, lbd, learnt_size
        cdef i64 conflict, ci

        if self._propagate() != -1:
            return 0

        while True:
            if deadline >= 0 and _now() - start_time >= deadline:
                return -1
            if self.trail_size == self.n_vars:
                return 1
            if self.conflicts - conflicts_at_restart >= <u64>restart_limit:
                restart_count += 1
                restart_limit = 64 * _luby(restart_count)
                conflicts_at_restart = self.conflicts
                self._backtrack(0)
            if self.learned_live > max_learnts:
                self._reduce_db()
                max_learnts += max_learnts >> 1

            v = 0
            while self.heap_size > 0:
                v = self._heap_pop()
                if self.assign[v] == 0:
                    break
                v = 0
            if v == 0:
                continue
            self.decisions += 1
            self.trail_lim[self.trail_lim_size] = self.trail_size
            self.trail_lim_size += 1
            self._enqueue(v if self.phase[v] else -v, -1)

            while True:
                conflict = self._propagate()
                if conflict == -1:
                    break
                self.conflicts += 1
                if self.trail_lim_size == 0:
                    return 0
                learnt_size = self._analyze(conflict, &back_level, &lbd)
                self._backtrack(back_level)
                if learnt_size == 1:
                    self._enqueue(self.learnt_buf[0], -1)
                else:
                    ci = self._attach_learned(self.learnt_buf, learnt_size, lbd)
                    self._enqueue(self.learnt_buf[0], ci)
                self.act_inc += self.act_inc >> 4
                if self.act_inc >= (<u64>1 << ACT_RESCALE_BITS):
                    self._rescale_activity()

    def run(self, deadline):
        """Search (GIL released); returns (status, model-or-None)."""
        cdef double c_deadline = -1.0 if deadline is None else <double>deadline
        cdef double start_time
        cdef int status
        cdef int v
        if not self.ok:
            return 0, None
        with nogil:
            start_time = _now()
            status = self._search(c_deadline, start_time)
        if status != 1:
            return status, None
        model = [False] * (self.n_vars + 1)
        for v in range(1, self.n_vars + 1):
            model[v] = self.assign[v] == 1
        return status, model


def cdcl_solve(n_vars, clauses, seed, deadline=None):
    """Decide a clause set; (status, model, stats). Mirrors core_py."""
    engine = Engine(n_vars, clauses, <u64>(seed & 0xFFFFFFFFFFFFFFFF))
    status, model = engine.run(deadline)
    stats = {
        "conflicts": engine.conflicts,
        "decisions": engine.decisions,
        "propagations": engine.propagations,
    }
    return status, model, stats
