# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled conflict-driven kernel; mirrors ``_engine_py.Search``."""

from cpython.bytearray cimport PyByteArray_AS_STRING
from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memset


cdef struct IVec:
    int *data
    int size
    int cap


cdef inline void ivec_push(IVec *v, int x):
    if v.size == v.cap:
        v.cap = v.cap * 2 if v.cap else 4
        v.data = <int *>realloc(v.data, v.cap * sizeof(int))
    v.data[v.size] = x
    v.size += 1


cdef inline int lix(int lit):
    return 2 * lit if lit > 0 else -2 * lit + 1


cdef int luby(int i):
    cdef int size = 1, seq = 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


cdef class Search:
    cdef int n
    cdef IVec hstart, hlen, hlits
    cdef IVec *watches
    cdef int nsoft
    cdef int *sstart
    cdef int *slits
    cdef long long *sw
    cdef int *nsat
    cdef int *nfalse
    cdef int *ostart
    cdef int *occ
    cdef long long base
    cdef long long cost
    cdef bint empty
    cdef IVec units, soft_units
    cdef public bytearray value
    cdef unsigned char *val
    cdef int *level
    cdef int *reason
    cdef int *tpos
    cdef int *trail
    cdef int ntrail
    cdef IVec lim
    cdef int qhead
    cdef int *fals_ci
    cdef int *fals_pos
    cdef int nfals
    cdef double *activity
    cdef double var_inc
    cdef int *heap
    cdef int *hpos
    cdef int nheap
    cdef unsigned char *phase
    cdef unsigned char *seen
    cdef IVec tmp, learnt, touched
    cdef public long long nodes

    def __cinit__(self, int nvars, clauses, weights):
        cdef int i, j, lit, si, total = 0, x
        cdef long long wt
        self.n = nvars
        self.hstart.data = NULL; self.hstart.size = 0; self.hstart.cap = 0
        self.hlen.data = NULL; self.hlen.size = 0; self.hlen.cap = 0
        self.hlits.data = NULL; self.hlits.size = 0; self.hlits.cap = 0
        self.units.data = NULL; self.units.size = 0; self.units.cap = 0
        self.soft_units.data = NULL; self.soft_units.size = 0; self.soft_units.cap = 0
        self.lim.data = NULL; self.lim.size = 0; self.lim.cap = 0
        self.tmp.data = NULL; self.tmp.size = 0; self.tmp.cap = 0
        self.learnt.data = NULL; self.learnt.size = 0; self.learnt.cap = 0
        self.touched.data = NULL; self.touched.size = 0; self.touched.cap = 0
        self.watches = <IVec *>malloc((2 * nvars + 2) * sizeof(IVec))
        for i in range(2 * nvars + 2):
            self.watches[i].data = NULL
            self.watches[i].size = 0
            self.watches[i].cap = 0
        self.empty = False
        self.base = 0
        self.nsoft = 0
        for i in range(len(clauses)):
            if weights[i] >= 0 and len(clauses[i]) > 0:
                self.nsoft += 1
                total += len(clauses[i])
        self.sstart = <int *>malloc((self.nsoft + 1) * sizeof(int))
        self.slits = <int *>malloc((total + 1) * sizeof(int))
        self.sw = <long long *>malloc((self.nsoft + 1) * sizeof(long long))
        self.nsat = <int *>malloc((self.nsoft + 1) * sizeof(int))
        self.nfalse = <int *>malloc((self.nsoft + 1) * sizeof(int))
        self.ostart = <int *>malloc((2 * nvars + 3) * sizeof(int))
        self.occ = <int *>malloc((total + 1) * sizeof(int))
        self.fals_ci = <int *>malloc((self.nsoft + 1) * sizeof(int))
        self.fals_pos = <int *>malloc((self.nsoft + 1) * sizeof(int))
        memset(self.nsat, 0, (self.nsoft + 1) * sizeof(int))
        memset(self.nfalse, 0, (self.nsoft + 1) * sizeof(int))
        memset(self.ostart, 0, (2 * nvars + 3) * sizeof(int))
        si = 0
        j = 0
        for i in range(len(clauses)):
            c = clauses[i]
            wt = weights[i]
            if wt < 0:
                if len(c) == 0:
                    self.empty = True
                elif len(c) == 1:
                    ivec_push(&self.units, c[0])
                else:
                    self._attach_py(c)
            elif len(c) == 0:
                self.base += wt
            else:
                self.sstart[si] = j
                self.sw[si] = wt
                for lit in c:
                    self.slits[j] = lit
                    j += 1
                    self.ostart[lix(lit) + 1] += 1
                if len(c) == 1:
                    ivec_push(&self.soft_units, si)
                si += 1
        self.sstart[si] = j
        for i in range(1, 2 * nvars + 3):
            self.ostart[i] += self.ostart[i - 1]
        cdef int *fill = <int *>malloc((2 * nvars + 3) * sizeof(int))
        for i in range(2 * nvars + 3):
            fill[i] = self.ostart[i]
        for si in range(self.nsoft):
            for j in range(self.sstart[si], self.sstart[si + 1]):
                x = lix(self.slits[j])
                self.occ[fill[x]] = si
                fill[x] += 1
        free(fill)
        self.value = bytearray(nvars + 1)
        self.val = <unsigned char *>PyByteArray_AS_STRING(self.value)
        self.level = <int *>malloc((nvars + 1) * sizeof(int))
        self.reason = <int *>malloc((nvars + 1) * sizeof(int))
        self.tpos = <int *>malloc((nvars + 1) * sizeof(int))
        self.trail = <int *>malloc((nvars + 1) * sizeof(int))
        self.activity = <double *>malloc((nvars + 1) * sizeof(double))
        self.heap = <int *>malloc((nvars + 1) * sizeof(int))
        self.hpos = <int *>malloc((nvars + 1) * sizeof(int))
        self.phase = <unsigned char *>malloc((nvars + 1) * sizeof(unsigned char))
        self.seen = <unsigned char *>malloc((nvars + 1) * sizeof(unsigned char))
        memset(self.seen, 0, (nvars + 1) * sizeof(unsigned char))
        for i in range(nvars + 1):
            self.activity[i] = 0.0
            self.hpos[i] = -1
            self.level[i] = 0
            self.reason[i] = -1
        self.nheap = 0
        self.ntrail = 0
        self.qhead = 0
        self.nfals = 0
        self.cost = 0
        self.var_inc = 1.0
        self.nodes = 0

    def __dealloc__(self):
        cdef int i
        if self.watches != NULL:
            for i in range(2 * self.n + 2):
                free(self.watches[i].data)
            free(self.watches)
        free(self.hstart.data); free(self.hlen.data); free(self.hlits.data)
        free(self.units.data); free(self.soft_units.data); free(self.lim.data)
        free(self.tmp.data); free(self.learnt.data); free(self.touched.data)
        free(self.sstart); free(self.slits); free(self.sw); free(self.nsat); free(self.nfalse)
        free(self.ostart); free(self.occ); free(self.fals_ci); free(self.fals_pos)
        free(self.level); free(self.reason); free(self.tpos); free(self.trail)
        free(self.activity); free(self.heap); free(self.hpos); free(self.phase); free(self.seen)

    # -- clause store ------------------------------------------------------------------

    cdef int _attach_py(self, c):
        cdef int lit
        ivec_push(&self.tmp, 0)
        self.tmp.size = 0
        for lit in c:
            ivec_push(&self.tmp, lit)
        return self._attach(self.tmp.data, self.tmp.size)

    cdef int _attach(self, int *lits, int ln):
        cdef int ci = self.hstart.size, k
        ivec_push(&self.hstart, self.hlits.size)
        ivec_push(&self.hlen, ln)
        for k in range(ln):
            ivec_push(&self.hlits, lits[k])
        ivec_push(&self.watches[lix(lits[0])], ci)
        ivec_push(&self.watches[lix(lits[1])], ci)
        return ci

    cdef inline int _lval(self, int lit):
        cdef int x = self.val[lit if lit > 0 else -lit]
        if x == 0 or lit > 0:
            return x
        return 3 - x

    # -- activity heap (max-heap on activity) --------------------------------------------

    cdef void _heap_up(self, int i):
        cdef int v = self.heap[i], p
        cdef double a = self.activity[v]
        while i > 0:
            p = (i - 1) >> 1
            if self.activity[self.heap[p]] >= a:
                break
            self.heap[i] = self.heap[p]
            self.hpos[self.heap[i]] = i
            i = p
        self.heap[i] = v
        self.hpos[v] = i

    cdef void _heap_down(self, int i):
        cdef int v = self.heap[i], c
        cdef double a = self.activity[v]
        while True:
            c = 2 * i + 1
            if c >= self.nheap:
                break
            if c + 1 < self.nheap and self.activity[self.heap[c + 1]] > self.activity[self.heap[c]]:
                c += 1
            if self.activity[self.heap[c]] <= a:
                break
            self.heap[i] = self.heap[c]
            self.hpos[self.heap[i]] = i
            i = c
        self.heap[i] = v
        self.hpos[v] = i

    cdef void _heap_insert(self, int v):
        if self.hpos[v] >= 0:
            return
        self.heap[self.nheap] = v
        self.hpos[v] = self.nheap
        self.nheap += 1
        self._heap_up(self.nheap - 1)

    cdef int _heap_pop(self):
        cdef int v = self.heap[0]
        self.hpos[v] = -1
        self.nheap -= 1
        if self.nheap > 0:
            self.heap[0] = self.heap[self.nheap]
            self.hpos[self.heap[0]] = 0
            self._heap_down(0)
        return v

    cdef void _bump(self, int v):
        cdef int i
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for i in range(1, self.n + 1):
                self.activity[i] *= 1e-100
            self.var_inc *= 1e-100
        if self.hpos[v] >= 0:
            self._heap_up(self.hpos[v])

    cdef int _pick(self):
        cdef int v
        while self.nheap > 0:
            v = self._heap_pop()
            if self.val[v] == 0:
                return v
        return 0

    # -- trail -----------------------------------------------------------------------

    cdef inline void _enqueue(self, int lit, int why):
        cdef int v = lit if lit > 0 else -lit
        self.val[v] = 1 if lit > 0 else 2
        self.level[v] = self.lim.size
        self.reason[v] = why
        self.tpos[v] = self.ntrail
        self.trail[self.ntrail] = lit
        self.ntrail += 1

    cdef void _cancel_until(self, int lvl):
        cdef int stop, pos, lit, v, k, ci, x
        if self.lim.size <= lvl:
            return
        stop = self.lim.data[lvl]
        pos = self.ntrail - 1
        while pos >= stop:
            lit = self.trail[pos]
            v = lit if lit > 0 else -lit
            if pos < self.qhead:
                x = lix(lit)
                for k in range(self.ostart[x], self.ostart[x + 1]):
                    self.nsat[self.occ[k]] -= 1
                x = lix(-lit)
                for k in range(self.ostart[x], self.ostart[x + 1]):
                    ci = self.occ[k]
                    if self.nsat[ci] == 0 and self.nfalse[ci] == self.sstart[ci + 1] - self.sstart[ci]:
                        self.cost -= self.sw[ci]
                    self.nfalse[ci] -= 1
            self.val[v] = 0
            self.phase[v] = 1 if lit > 0 else 2
            self._heap_insert(v)
            pos -= 1
        self.ntrail = stop
        self.lim.size = lvl
        if self.qhead > stop:
            self.qhead = stop
        while self.nfals > 0 and self.fals_pos[self.nfals - 1] >= stop:
            self.nfals -= 1

    # -- propagation -------------------------------------------------------------------

    cdef int _propagate(self, long long budget):
        """-1: no conflict, -2: cost conflict, otherwise a hard clause index."""
        cdef int pos, lit, k, ci, j, left, l2, false_lit, i, jj, nws, ln, x
        cdef int conflict = -1
        cdef bint moved
        cdef IVec *ws
        cdef int *c
        while self.qhead < self.ntrail:
            pos = self.qhead
            lit = self.trail[pos]
            self.qhead += 1
            x = lix(lit)
            for k in range(self.ostart[x], self.ostart[x + 1]):
                self.nsat[self.occ[k]] += 1
            x = lix(-lit)
            for k in range(self.ostart[x], self.ostart[x + 1]):
                ci = self.occ[k]
                self.nfalse[ci] += 1
                if self.nsat[ci]:
                    continue
                left = self.sstart[ci + 1] - self.sstart[ci] - self.nfalse[ci]
                if left == 0:
                    self.cost += self.sw[ci]
                    self.fals_ci[self.nfals] = ci
                    self.fals_pos[self.nfals] = pos
                    self.nfals += 1
                    if self.cost > budget:
                        conflict = -2
                elif left == 1 and conflict == -1 and self.cost + self.sw[ci] > budget:
                    for j in range(self.sstart[ci], self.sstart[ci + 1]):
                        l2 = self.slits[j]
                        if self._lval(l2) == 0:
                            self._enqueue(l2, -2 - ci)
                            break
            if conflict != -1:
                return conflict
            false_lit = -lit
            ws = &self.watches[lix(false_lit)]
            i = 0
            jj = 0
            nws = ws.size
            while i < nws:
                ci = ws.data[i]
                i += 1
                c = self.hlits.data + self.hstart.data[ci]
                ln = self.hlen.data[ci]
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                if self._lval(c[0]) == 1:
                    ws.data[jj] = ci
                    jj += 1
                    continue
                moved = False
                for k in range(2, ln):
                    if self._lval(c[k]) != 2:
                        c[1] = c[k]
                        c[k] = false_lit
                        ivec_push(&self.watches[lix(c[1])], ci)
                        moved = True
                        break
                if moved:
                    continue
                ws.data[jj] = ci
                jj += 1
                if self._lval(c[0]) == 2:
                    while i < nws:
                        ws.data[jj] = ws.data[i]
                        jj += 1
                        i += 1
                    conflict = ci
                else:
                    self._enqueue(c[0], ci)
            ws.size = jj
            if conflict != -1:
                return conflict
        return -1

    # -- explanations ------------------------------------------------------------------

    cdef void _cost_prefix(self, IVec *out, long long limit, int before, long long extra):
        cdef long long total = extra + self.base
        cdef int f, ci, j
        for f in range(self.nfals):
            if self.fals_pos[f] >= before:
                break
            ci = self.fals_ci[f]
            for j in range(self.sstart[ci], self.sstart[ci + 1]):
                ivec_push(out, self.slits[j])
            total += self.sw[ci]
            if total > limit:
                break

    cdef void _reason_lits(self, IVec *out, int v, long long budget):
        cdef int r = self.reason[v], ci, j, st
        out.size = 0
        if r >= 0:
            st = self.hstart.data[r]
            for j in range(st, st + self.hlen.data[r]):
                ivec_push(out, self.hlits.data[j])
        else:
            ci = -2 - r
            for j in range(self.sstart[ci], self.sstart[ci + 1]):
                ivec_push(out, self.slits[j])
            self._cost_prefix(out, budget, self.tpos[v], self.sw[ci])

    cdef int _analyze(self, long long budget):
        """Analyse the conflict literals in ``tmp``; leaves the learned clause
        in ``learnt`` and returns the backjump level."""
        cdef int cur = self.lim.size, counter = 0, p = 0, idx = self.ntrail - 1
        cdef int k, q, v, lit = 0, best, t
        self.learnt.size = 0
        ivec_push(&self.learnt, 0)
        self.touched.size = 0
        while True:
            for k in range(self.tmp.size):
                q = self.tmp.data[k]
                v = q if q > 0 else -q
                if q == p or self.seen[v] or self.level[v] == 0:
                    continue
                self.seen[v] = 1
                ivec_push(&self.touched, v)
                self._bump(v)
                if self.level[v] >= cur:
                    counter += 1
                else:
                    ivec_push(&self.learnt, q)
            while True:
                lit = self.trail[idx]
                idx -= 1
                v = lit if lit > 0 else -lit
                if self.seen[v] and self.level[v] >= cur:
                    break
            p = lit
            counter -= 1
            if counter <= 0:
                break
            self._reason_lits(&self.tmp, v, budget)
        self.learnt.data[0] = -p
        for k in range(self.touched.size):
            self.seen[self.touched.data[k]] = 0
        if self.learnt.size == 1:
            return 0
        best = 1
        for k in range(2, self.learnt.size):
            q = self.learnt.data[k]
            t = self.learnt.data[best]
            if self.level[q if q > 0 else -q] > self.level[t if t > 0 else -t]:
                best = k
        t = self.learnt.data[1]
        self.learnt.data[1] = self.learnt.data[best]
        self.learnt.data[best] = t
        q = self.learnt.data[1]
        return self.level[q if q > 0 else -q]

    cdef void _decision_clause(self):
        cdef int k
        self.tmp.size = 0
        for k in range(self.lim.size):
            ivec_push(&self.tmp, -self.trail[self.lim.data[k]])

    # -- main loop ---------------------------------------------------------------------

    def run(self, long long budget, bint minimize, order, pref, checker=None, long long max_nodes=0):
        cdef int v, lit, k, rank, conflict, top, back, ci, x
        cdef int restart_no = 0
        cdef long long conflicts_left
        cdef long long best_cost = -1
        cdef bint have_lits
        best = None
        if self.empty or budget < self.base:
            return 0, None, -1
        self.cost = self.base
        rank = len(order)
        for v in order:
            self.activity[v] = rank * 1e-9
            rank -= 1
        for v in range(1, self.n + 1):
            x = pref[v]
            self.phase[v] = x if (x == 1 or x == 2) else 2
            self._heap_insert(v)
        for k in range(self.units.size):
            lit = self.units.data[k]
            x = self._lval(lit)
            if x == 2:
                return 0, None, -1
            if x == 0:
                self._enqueue(lit, -1)
        for k in range(self.soft_units.size):
            ci = self.soft_units.data[k]
            if self.sw[ci] > budget:
                lit = self.slits[self.sstart[ci]]
                x = self._lval(lit)
                if x == 2:
                    return 0, None, -1
                if x == 0:
                    self._enqueue(lit, -2 - ci)
        conflicts_left = 100 * luby(restart_no)
        while True:
            conflict = self._propagate(budget)
            have_lits = False
            if conflict == -1 and checker is not None and self.lim.size > 0 and not checker(self.value, False):
                self._decision_clause()
                have_lits = True
            elif conflict == -2:
                self.tmp.size = 0
                self._cost_prefix(&self.tmp, budget, self.ntrail + 1, 0)
                have_lits = True
            elif conflict >= 0:
                self.tmp.size = 0
                for k in range(self.hstart.data[conflict], self.hstart.data[conflict] + self.hlen.data[conflict]):
                    ivec_push(&self.tmp, self.hlits.data[k])
                have_lits = True
            if not have_lits:
                v = self._pick()
                if v == 0:
                    if checker is None or checker(self.value, True):
                        best = bytes(self.value)
                        best_cost = self.cost
                        if not minimize or best_cost == 0:
                            return 1, best, best_cost
                        budget = best_cost - 1
                        self.tmp.size = 0
                        self._cost_prefix(&self.tmp, budget, self.ntrail + 1, 0)
                    else:
                        self._decision_clause()
                else:
                    self.nodes += 1
                    if max_nodes and self.nodes > max_nodes:
                        return (1 if best is not None else -1), best, best_cost
                    ivec_push(&self.lim, self.ntrail)
                    self._enqueue(v if self.phase[v] == 1 else -v, -1)
                    continue
            self.nodes += 1
            if max_nodes and self.nodes > max_nodes:
                return (1 if best is not None else -1), best, best_cost
            if self.lim.size == 0 or self.tmp.size == 0:
                return (1 if best is not None else 0), best, best_cost
            top = 0
            for k in range(self.tmp.size):
                lit = self.tmp.data[k]
                x = self.level[lit if lit > 0 else -lit]
                if x > top:
                    top = x
            if top == 0:
                return (1 if best is not None else 0), best, best_cost
            if top < self.lim.size:
                self._cancel_until(top)
            back = self._analyze(budget)
            self._cancel_until(back)
            if self.learnt.size == 1:
                self._enqueue(self.learnt.data[0], -1)
            else:
                ci = self._attach(self.learnt.data, self.learnt.size)
                self._enqueue(self.learnt.data[0], ci)
            self.var_inc *= 1.0 / 0.95
            conflicts_left -= 1
            if conflicts_left <= 0:
                restart_no += 1
                conflicts_left = 100 * luby(restart_no)
                self._cancel_until(0)
