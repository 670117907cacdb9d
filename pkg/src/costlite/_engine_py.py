"""Pure-Python conflict-driven search over weighted clauses.

Variables are numbered from 1.  A clause is a list of signed ints; its weight
is -1 for hard clauses and a non-negative integer otherwise.  The value array
holds 0 (unassigned), 1 (true) or 2 (false).

The search is CDCL with a cost bound: hard clauses use two watched literals,
soft clauses keep counters of true and false literals.  When the falsified
soft clauses exceed the budget the conflict is explained by those clauses,
and a soft clause whose last open literal the budget cannot pay for is
propagated with the same kind of explanation.  Learned clauses are therefore
valid for every assignment within the budget, and stay valid while
minimisation lowers the budget.  ``_core.pyx`` is a port of this file.
"""

from __future__ import annotations

import heapq


def _luby(i: int) -> int:
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class Search:
    def __init__(self, nvars, clauses, weights):
        n = self.n = nvars
        self.hard: list[list[int]] = []
        self.soft: list[list[int]] = []
        self.sw: list[int] = []
        self.units: list[int] = []
        self.soft_units: list[int] = []
        self.empty = False
        self.base = 0  # weight of empty soft clauses, always paid
        self.watches: list[list[int]] = [[] for _ in range(2 * n + 2)]
        self.occ_soft: list[list[int]] = [[] for _ in range(2 * n + 2)]
        for c, w in zip(clauses, weights):
            c = list(c)
            if w < 0:
                if not c:
                    self.empty = True
                elif len(c) == 1:
                    self.units.append(c[0])
                else:
                    self._attach(c)
            elif not c:
                self.base += w
            else:
                si = len(self.soft)
                self.soft.append(c)
                self.sw.append(w)
                for lit in c:
                    self.occ_soft[self._ix(lit)].append(si)
                if len(c) == 1:
                    self.soft_units.append(si)
        self.nsat = [0] * len(self.soft)
        self.nfalse = [0] * len(self.soft)
        self.value = bytearray(n + 1)
        self.level = [0] * (n + 1)
        self.reason = [-1] * (n + 1)  # -1 decision, >=0 hard clause, <=-2 soft clause
        self.tpos = [0] * (n + 1)
        self.trail: list[int] = []
        self.lim: list[int] = []
        self.qhead = 0
        self.cost = 0
        self.fals: list[tuple[int, int]] = []  # (soft clause, trail position)
        self.activity = [0.0] * (n + 1)
        self.var_inc = 1.0
        self.heap: list[tuple[float, int]] = []
        self.phase = bytearray(n + 1)
        self.seen = bytearray(n + 1)
        self.nodes = 0

    @staticmethod
    def _ix(lit: int) -> int:
        return 2 * lit if lit > 0 else -2 * lit + 1

    def _attach(self, c: list[int]) -> int:
        ci = len(self.hard)
        self.hard.append(c)
        self.watches[self._ix(c[0])].append(ci)
        self.watches[self._ix(c[1])].append(ci)
        return ci

    def _val(self, lit: int) -> int:
        """1 if lit is true, 2 if false, 0 if open."""
        x = self.value[lit if lit > 0 else -lit]
        if x == 0 or lit > 0:
            return x
        return 3 - x

    # -- trail -----------------------------------------------------------------------

    def _enqueue(self, lit: int, reason: int) -> None:
        v = lit if lit > 0 else -lit
        self.value[v] = 1 if lit > 0 else 2
        self.level[v] = len(self.lim)
        self.reason[v] = reason
        self.tpos[v] = len(self.trail)
        self.trail.append(lit)

    def _cancel_until(self, lvl: int) -> None:
        if len(self.lim) <= lvl:
            return
        stop = self.lim[lvl]
        trail = self.trail
        for pos in range(len(trail) - 1, stop - 1, -1):
            lit = trail[pos]
            v = lit if lit > 0 else -lit
            if pos < self.qhead:
                for ci in self.occ_soft[self._ix(lit)]:
                    self.nsat[ci] -= 1
                for ci in self.occ_soft[self._ix(-lit)]:
                    if self.nsat[ci] == 0 and self.nfalse[ci] == len(self.soft[ci]):
                        self.cost -= self.sw[ci]
                    self.nfalse[ci] -= 1
            self.value[v] = 0
            self.phase[v] = 1 if lit > 0 else 2
            heapq.heappush(self.heap, (-self.activity[v], v))
        del trail[stop:]
        del self.lim[lvl:]
        if self.qhead > stop:
            self.qhead = stop
        while self.fals and self.fals[-1][1] >= stop:
            self.fals.pop()

    # -- propagation -------------------------------------------------------------------

    def _propagate(self, budget):
        """Return None, a hard clause index, or 'cost' on conflict."""
        conflict = None
        trail = self.trail
        while self.qhead < len(trail):
            pos = self.qhead
            lit = trail[pos]
            self.qhead += 1
            for ci in self.occ_soft[self._ix(lit)]:
                self.nsat[ci] += 1
            for ci in self.occ_soft[self._ix(-lit)]:
                self.nfalse[ci] += 1
                if self.nsat[ci]:
                    continue
                c = self.soft[ci]
                left = len(c) - self.nfalse[ci]
                w = self.sw[ci]
                if left == 0:
                    self.cost += w
                    self.fals.append((ci, pos))
                    if self.cost > budget:
                        conflict = "cost"
                elif left == 1 and conflict is None and self.cost + w > budget:
                    for l2 in c:
                        if self._val(l2) == 0:
                            self._enqueue(l2, -2 - ci)
                            break
            if conflict is not None:
                return conflict
            false_lit = -lit
            ws = self.watches[self._ix(false_lit)]
            i = j = 0
            nws = len(ws)
            while i < nws:
                ci = ws[i]
                i += 1
                c = self.hard[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if self._val(c[0]) == 1:
                    ws[j] = ci
                    j += 1
                    continue
                moved = False
                for k in range(2, len(c)):
                    if self._val(c[k]) != 2:
                        c[1], c[k] = c[k], c[1]
                        self.watches[self._ix(c[1])].append(ci)
                        moved = True
                        break
                if moved:
                    continue
                ws[j] = ci
                j += 1
                if self._val(c[0]) == 2:
                    while i < nws:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    conflict = ci
                else:
                    self._enqueue(c[0], ci)
            del ws[j:]
            if conflict is not None:
                return conflict
        return None

    # -- explanations ------------------------------------------------------------------

    def _cost_prefix(self, limit, before: int, extra: int = 0) -> list[int]:
        """Literals of the earliest falsified soft clauses (falsified before
        trail position ``before``) whose weight plus ``extra`` exceeds ``limit``."""
        out: list[int] = []
        total = extra + self.base
        for ci, pos in self.fals:
            if pos >= before:
                break
            out.extend(self.soft[ci])
            total += self.sw[ci]
            if total > limit:
                break
        return out

    def _reason_lits(self, v: int, budget) -> list[int]:
        r = self.reason[v]
        if r >= 0:
            return self.hard[r]
        ci = -2 - r
        return self.soft[ci] + self._cost_prefix(budget, self.tpos[v], self.sw[ci])

    def _analyze(self, conflict_lits: list[int], budget) -> tuple[list[int], int]:
        seen = self.seen
        cur = len(self.lim)
        learnt = [0]
        counter = 0
        p = 0
        idx = len(self.trail) - 1
        lits = conflict_lits
        touched = []
        while True:
            for q in lits:
                v = q if q > 0 else -q
                if q == p or seen[v] or self.level[v] == 0:
                    continue
                seen[v] = 1
                touched.append(v)
                self._bump(v)
                if self.level[v] >= cur:
                    counter += 1
                else:
                    learnt.append(q)
            while True:
                lit = self.trail[idx]
                idx -= 1
                v = lit if lit > 0 else -lit
                if seen[v] and self.level[v] >= cur:
                    break
            p = lit
            counter -= 1
            if counter <= 0:
                break
            lits = [x for x in self._reason_lits(v, budget) if x != lit]
        learnt[0] = -p
        for v in touched:
            seen[v] = 0
        if len(learnt) == 1:
            return learnt, 0
        best = 1
        for i in range(2, len(learnt)):
            if self.level[abs(learnt[i])] > self.level[abs(learnt[best])]:
                best = i
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for u in range(1, self.n + 1):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-self.activity[u], u) for u in range(1, self.n + 1) if not self.value[u]]
            heapq.heapify(self.heap)
        else:
            heapq.heappush(self.heap, (-self.activity[v], v))

    def _pick(self) -> int:
        heap = self.heap
        while heap:
            negact, v = heapq.heappop(heap)
            if not self.value[v] and -negact == self.activity[v]:
                return v
        return 0

    def _decision_clause(self) -> list[int]:
        return [-self.trail[p] for p in self.lim]

    # -- main loop ---------------------------------------------------------------------

    def run(self, budget, minimize, order, pref, checker=None, max_nodes=0):
        """Return (status, best_value_array, best_cost).

        ``status`` is 1 when a solution was found, 0 when the space is
        exhausted without one, and -1 when ``max_nodes`` was hit first.
        """
        best = None
        best_cost = -1
        n = self.n
        if self.empty or budget < self.base:
            return 0, None, -1
        self.cost = self.base
        rank = len(order)
        for v in order:
            self.activity[v] = rank * 1e-9
            rank -= 1
        for v in range(1, n + 1):
            self.phase[v] = pref[v] if pref[v] in (1, 2) else 2
        self.heap = [(-self.activity[v], v) for v in range(1, n + 1)]
        heapq.heapify(self.heap)
        for lit in self.units:
            x = self._val(lit)
            if x == 2:
                return 0, None, -1
            if x == 0:
                self._enqueue(lit, -1)
        for si in self.soft_units:
            if self.sw[si] > budget:
                lit = self.soft[si][0]
                x = self._val(lit)
                if x == 2:
                    return 0, None, -1
                if x == 0:
                    self._enqueue(lit, -2 - si)
        restart_no = 0
        conflicts_left = 100 * _luby(restart_no)
        while True:
            conflict = self._propagate(budget)
            lits = None
            if conflict is None and checker is not None and self.lim and not checker(self.value, False):
                lits = self._decision_clause()
            elif conflict == "cost":
                lits = self._cost_prefix(budget, len(self.trail) + 1)
            elif conflict is not None:
                lits = self.hard[conflict]
            if lits is None:
                v = self._pick()
                if v == 0:
                    if checker is None or checker(self.value, True):
                        best = bytes(self.value)
                        best_cost = self.cost
                        if not minimize or best_cost == 0:
                            return 1, best, best_cost
                        budget = best_cost - 1
                        lits = self._cost_prefix(budget, len(self.trail) + 1)
                    else:
                        lits = self._decision_clause()
                else:
                    self.nodes += 1
                    if max_nodes and self.nodes > max_nodes:
                        return (1 if best is not None else -1), best, best_cost
                    self.lim.append(len(self.trail))
                    self._enqueue(v if self.phase[v] == 1 else -v, -1)
                    continue
            # conflict handling
            self.nodes += 1
            if max_nodes and self.nodes > max_nodes:
                return (1 if best is not None else -1), best, best_cost
            if not self.lim:
                return (1 if best is not None else 0), best, best_cost
            if not lits:
                return (1 if best is not None else 0), best, best_cost
            top = max(self.level[abs(x)] for x in lits)
            if top == 0:
                return (1 if best is not None else 0), best, best_cost
            if top < len(self.lim):
                # the conflict lives below the current level (e.g. after the
                # budget was lowered); analyse it there
                self._cancel_until(top)
            learnt, back = self._analyze(lits, budget)
            self._cancel_until(back)
            if len(learnt) == 1:
                self._enqueue(learnt[0], -1)
            else:
                ci = self._attach(learnt)
                self._enqueue(learnt[0], ci)
            self.var_inc *= 1.0 / 0.95
            conflicts_left -= 1
            if conflicts_left <= 0:
                restart_no += 1
                conflicts_left = 100 * _luby(restart_no)
                self._cancel_until(0)
