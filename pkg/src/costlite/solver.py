"""Exact decision procedures over bounded-domain interpretations.

Every problem is reduced to a search over interpretations whose domain is the
set of named individuals plus a bounded number of anonymous elements.  The
interpretation is grounded into weighted clauses (one variable per concept
atom and per role atom, plus definitional variables for complex concepts) and
handed to the conflict-driven search kernel in ``engine``.

Two kinds of anonymous elements are used:

* generic elements, which may take any concept and role membership; they are
  ordered by an existence chain so that unused elements trail the used ones;
* witness slots (DL-Lite dialects only), one per pair (concept set C, role set
  K).  A slot interprets exactly the concept names in C and may only carry
  edges whose direction is listed in K.  Any interpretation can be folded onto
  the named individuals plus at most one element per slot without raising its
  cost, which is what makes the DL-Lite searches complete.
"""

from __future__ import annotations

import itertools
import logging
import os
import random
from dataclasses import dataclass
from typing import Iterable, Iterator

from . import engine
from .interp import Interpretation, cost as interp_cost, cq_match
from .kb import (
    CQ, INF, And, Bottom, CAtom, ConceptAssertion, ConceptInclusion, Exists, ExistsQ, Ind,
    Name, Nominal, Not, Or, Role, Top, Var, Weight, WeightedKB,
    role_closure, polarity_roles, subconcepts, tbox_concept_names, tbox_role_names,
    validate_kb,
)

log = logging.getLogger(__name__)

ENV_MAX_ANON = "COSTLITE_MAX_ANON"
DEFAULT_MAX_ANON = 2
HARD = -1
# grounded queries with more variable assignments than this fall back to a
# lazy check during the search instead of clauses
MAX_GROUND_ASSIGNMENTS = 20000

MODES = ("certain", "possible")


def default_max_anonymous() -> int:
    raw = os.environ.get(ENV_MAX_ANON)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_ANON
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_MAX_ANON} must be a non-negative integer, got {raw!r}") from None
    if value < 0:
        raise ValueError(f"{ENV_MAX_ANON} must be a non-negative integer, got {raw!r}")
    return value


@dataclass(frozen=True)
class SearchConfig:
    """``max_anonymous`` caps the generic anonymous elements (the environment
    variable ``COSTLITE_MAX_ANON`` supplies the default).  With ``exhaustive``
    an insufficient cap raises ``IncompleteSearch`` instead of logging."""

    max_anonymous: int | None = None
    exhaustive: bool = False
    seed: int = 0
    backend: str | None = None

    def __post_init__(self) -> None:
        if self.max_anonymous is not None and self.max_anonymous < 0:
            raise ValueError("max_anonymous must be >= 0")

    def cap(self) -> int:
        return default_max_anonymous() if self.max_anonymous is None else self.max_anonymous


class IncompleteSearch(RuntimeError):
    pass


@dataclass(frozen=True)
class Verdict:
    answer: bool
    witness: Interpretation | None = None
    complete: bool = True
    cost: Weight | None = None


@dataclass(frozen=True)
class BoundInfo:
    task: str
    dialect: str
    anonymous: int | None
    note: str

    @property
    def known(self) -> bool:
        return self.anonymous is not None


# ---------------------------------------------------------------- bounds


def tbox_size(tbox) -> int:
    n = 0
    for ax, _ in tbox:
        if isinstance(ax, ConceptInclusion):
            n += sum(1 for _ in subconcepts(ax.lhs)) + sum(1 for _ in subconcepts(ax.rhs))
        else:
            n += 2
    return n


def domain_bound(kb: WeightedKB, q: CQ | None = None, task: str = "possible") -> BoundInfo:
    """Number of anonymous elements that provably suffices for ``task``.

    For DL-Lite this is the number of 1-types over the TBox signature; for
    richer dialects the filtration bound (possible and optimal tasks) and no
    closed form for the certain task.
    """
    if task not in ("possible", "certain", "optimal", "sat"):
        raise ValueError(f"unknown task {task!r}")
    rep = validate_kb(kb)
    if rep.dl_lite:
        nc = len(tbox_concept_names(kb.tbox))
        nr = len(tbox_role_names(kb.tbox))
        return BoundInfo(task, rep.dialect, 2 ** (nc + 2 * nr), "one witness per 1-type")
    if task == "certain":
        return BoundInfo(task, rep.dialect, None, "unknown-polynomial")
    size = tbox_size(kb.tbox)
    n_ind = len(kb.individuals())
    return BoundInfo(task, rep.dialect, n_ind + size + 2 ** (2 * size * size), "filtration")


# ---------------------------------------------------------------- propositional CI checks


def type_satisfies(c, t: frozenset) -> bool:
    """Truth of a Boolean DL-Lite concept at an element of 1-type ``t``."""
    if isinstance(c, Top):
        return True
    if isinstance(c, Bottom):
        return False
    if isinstance(c, Name):
        return c.name in t
    if isinstance(c, Exists):
        return c.role in t
    if isinstance(c, Not):
        return not type_satisfies(c.arg, t)
    if isinstance(c, And):
        return type_satisfies(c.left, t) and type_satisfies(c.right, t)
    if isinstance(c, Or):
        return type_satisfies(c.left, t) or type_satisfies(c.right, t)
    raise TypeError(f"not a Boolean DL-Lite concept: {c}")


def type_ci_cost(tbox, t: frozenset) -> Weight:
    total = 0
    for ax, w in tbox:
        if isinstance(ax, ConceptInclusion):
            if type_satisfies(ax.lhs, t) and not type_satisfies(ax.rhs, t):
                if w is INF:
                    return INF
                total += w
    return total


def _within(c: Weight, budget: Weight | None) -> bool:
    if c is INF:
        return False
    return budget is None or budget is INF or c <= budget


def witness_slots(tbox, budget: Weight | None = None) -> list[tuple[frozenset, frozenset]]:
    """Witness slots (C, K) for a DL-Lite TBox.

    Only roles whose existential occurs positively (and their super-roles)
    ever need anonymous successors, and a witness is always the target of such
    an edge, so K must contain some inverse ``r-`` with ``exists r`` positive.
    Slots whose best case already exceeds ``budget`` are dropped.
    """
    pos, _ = polarity_roles(tbox)
    if not pos:
        return []
    closure = role_closure(tbox)
    up = {s for (r, s) in closure if r in pos} | set(pos)
    r_w = sorted(up | {r.inv() for r in up}, key=lambda r: (r.name, r.inverted))
    serve = {r.inv() for r in pos}
    names = tbox_concept_names(tbox)
    slots = []
    for cbits in range(2 ** len(names)):
        cset = frozenset(n for i, n in enumerate(names) if cbits >> i & 1)
        for kbits in range(1, 2 ** len(r_w)):
            kset = frozenset(r for i, r in enumerate(r_w) if kbits >> i & 1)
            if not kset & serve:
                continue
            best = None
            # cheapest realisable type: any flag subset of K that serves
            flags = sorted(kset, key=lambda r: (r.name, r.inverted))
            for fbits in range(1, 2 ** len(flags)):
                fset = frozenset(r for i, r in enumerate(flags) if fbits >> i & 1)
                if not fset & serve:
                    continue
                c = type_ci_cost(tbox, cset | fset)
                if c is not INF and (best is None or c < best):
                    best = c
            if best is not None and _within(best, budget):
                slots.append((cset, kset))
    return slots


# ---------------------------------------------------------------- planning


@dataclass(frozen=True)
class _Plan:
    n_generic: int
    slots: tuple
    complete: bool
    reason: str


def _plan(kb: WeightedKB, q: CQ | None, task: str, budget, cfg: SearchConfig) -> _Plan:
    rep = validate_kb(kb)
    if not rep.valid:
        raise ValueError("invalid KB: " + "; ".join(rep.diagnostics))
    pos, _ = polarity_roles(kb.tbox)
    n_exist = len(q.existential()) if (q is not None and task == "possible") else 0
    is_iq = q is None or len(q.atoms) <= 1
    if not pos:
        # nothing forces anonymous successors: dropping anonymous elements only
        # removes violations, so the named part plus the match images suffice
        return _Plan(n_exist, (), True, "no positive existentials")
    if rep.dl_lite:
        slots = tuple(witness_slots(kb.tbox, budget))
        if task == "certain" and not is_iq:
            return _Plan(0, slots, False, "certain mode with a non-IQ query over witness slots")
        return _Plan(n_exist, slots, True, "witness slots")
    cap = cfg.cap()
    bound = domain_bound(kb, q, "certain" if task == "certain" else "possible")
    complete = bound.anonymous is not None and cap >= bound.anonymous
    reason = f"cap {cap} vs bound {_fmt_bound(bound.anonymous) if bound.known else bound.note}"
    return _Plan(cap, (), complete, reason)


def _fmt_bound(n: int) -> str:
    # the filtration bound is astronomically large; print its magnitude only
    return str(n) if n.bit_length() <= 64 else f"about 2^{n.bit_length() - 1}"


def _report_plan(plan: _Plan, cfg: SearchConfig, what: str) -> None:
    if plan.complete:
        return
    msg = f"{what}: search bound not proven sufficient ({plan.reason})"
    if cfg.exhaustive:
        raise IncompleteSearch(msg)
    log.warning(msg)


# ---------------------------------------------------------------- grounding


def _neg(lit):
    if lit is True:
        return False
    if lit is False:
        return True
    return -lit


class Grounding:
    """Weighted clauses describing interpretations over a fixed domain."""

    def __init__(self, kb: WeightedKB, q: CQ | None, n_generic: int, slots, extra_named=()):
        self.kb = kb
        self.q = q
        named: dict[str, None] = {}
        for x in kb.individuals():
            named.setdefault(x)
        if q is not None:
            for x in q.individuals():
                named.setdefault(x)
        for x in extra_named:
            named.setdefault(x)
        self.named = list(named)
        taken = set(self.named)
        self.generic = [self._fresh(f"_n{i}", taken) for i in range(n_generic)]
        self.slots = [self._fresh(f"_w{i}", taken) for i in range(len(slots))]
        self.slot_of = dict(zip(self.slots, slots))
        self.domain = self.named + self.generic + self.slots
        self.concepts = list(dict.fromkeys(kb.concept_names() + (q.concept_names() if q else [])))
        self.roles = list(dict.fromkeys(kb.role_names() + (q.role_names() if q else [])))
        self._concept_set = set(self.concepts)
        self._role_set = set(self.roles)
        self.nv = 0
        self.group: list[int] = [0]
        self.desc: list = [None]
        self.clauses: list[list[int]] = []
        self.weights: list[int] = []
        self.base = 0
        self.unsat = False
        self.cvar: dict = {}
        self.rvar: dict = {}
        self._ex: dict = {}
        self._enc: dict = {}
        self.exist: dict = {d: True for d in self.named}
        for d in self.generic + self.slots:
            self.exist[d] = self.new_var(2, ("exist", d))
        for a, b in zip(self.generic, self.generic[1:]):
            self.add([-self.exist[b], self.exist[a]], HARD)

    @staticmethod
    def _fresh(base: str, taken: set) -> str:
        name = base
        while name in taken:
            name = "_" + name
        taken.add(name)
        return name

    # -- variables and clauses -----------------------------------------------------

    def new_var(self, group: int, desc=None) -> int:
        self.nv += 1
        self.group.append(group)
        self.desc.append(desc)
        return self.nv

    def add(self, lits, weight) -> None:
        out: list[int] = []
        seen: set[int] = set()
        for lit in lits:
            if lit is True:
                return
            if lit is False:
                continue
            if -lit in seen:
                return
            if lit not in seen:
                seen.add(lit)
                out.append(lit)
        if weight is INF:
            weight = HARD
        if not out:
            if weight == HARD:
                self.unsat = True
            else:
                self.base += weight
            return
        self.clauses.append(out)
        self.weights.append(weight)

    def concept(self, name: str, d: str):
        key = (name, d)
        lit = self.cvar.get(key)
        if lit is not None:
            return lit
        if d in self.slot_of:
            lit = name in self.slot_of[d][0]
        elif name not in self._concept_set:
            lit = False
        else:
            lit = self.new_var(0 if d in self.exist and self.exist[d] is True else 3, ("c", name, d))
            if self.exist[d] is not True:
                self.add([-lit, self.exist[d]], HARD)
        self.cvar[key] = lit
        return lit

    def role(self, name: str, d: str, e: str):
        key = (name, d, e)
        lit = self.rvar.get(key)
        if lit is not None:
            return lit
        lit = None
        if name not in self._role_set:
            lit = False
        elif d in self.slot_of and Role(name) not in self.slot_of[d][1]:
            lit = False
        elif e in self.slot_of and Role(name, True) not in self.slot_of[e][1]:
            lit = False
        if lit is None:
            both_named = self.exist[d] is True and self.exist[e] is True
            lit = self.new_var(1 if both_named else 3, ("r", name, d, e))
            for x in {d, e}:
                if self.exist[x] is not True:
                    self.add([-lit, self.exist[x]], HARD)
        self.rvar[key] = lit
        return lit

    def role_lit(self, r: Role, d: str, e: str):
        return self.role(r.name, e, d) if r.inverted else self.role(r.name, d, e)

    def exists(self, r: Role, d: str):
        """Exact literal for ``d in (exists r)``."""
        key = (r, d)
        if key in self._ex:
            return self._ex[key]
        lits = [self.role_lit(r, d, e) for e in self.domain]
        if any(x is True for x in lits):
            out = True
        else:
            lits = [x for x in lits if x is not False]
            if not lits:
                out = False
            elif len(lits) == 1:
                out = lits[0]
            else:
                out = self.new_var(4, ("ex", r, d))
                self.add([-out] + lits, HARD)
                for x in lits:
                    self.add([-x, out], HARD)
        self._ex[key] = out
        return out

    def enc(self, c, d: str, positive: bool):
        """A literal that implies ``d in C`` (positive) or is implied by it."""
        if isinstance(c, Top):
            return True
        if isinstance(c, Bottom):
            return False
        if isinstance(c, Name):
            return self.concept(c.name, d)
        if isinstance(c, Nominal):
            return d == c.ind
        if isinstance(c, Exists):
            return self.exists(c.role, d)
        if isinstance(c, Not):
            return _neg(self.enc(c.arg, d, not positive))
        key = (c, d, positive)
        if key in self._enc:
            return self._enc[key]
        if isinstance(c, (And, Or)):
            a = self.enc(c.left, d, positive)
            b = self.enc(c.right, d, positive)
            out = self._gate(isinstance(c, And), a, b, positive)
        elif isinstance(c, ExistsQ):
            out = self._exists_q(c, d, positive)
        else:
            raise TypeError(f"not a concept: {c!r}")
        self._enc[key] = out
        return out

    def _gate(self, is_and: bool, a, b, positive: bool):
        if is_and:
            if a is False or b is False:
                return False
            if a is True:
                return b
            if b is True:
                return a
        else:
            if a is True or b is True:
                return True
            if a is False:
                return b
            if b is False:
                return a
        x = self.new_var(4, ("gate",))
        if positive:
            if is_and:  # x -> a, x -> b
                self.add([-x, a], HARD)
                self.add([-x, b], HARD)
            else:  # x -> a | b
                self.add([-x, a, b], HARD)
        else:
            if is_and:  # a & b -> x
                self.add([-a, -b, x], HARD)
            else:  # a -> x, b -> x
                self.add([-a, x], HARD)
                self.add([-b, x], HARD)
        return x

    def _exists_q(self, c: ExistsQ, d: str, positive: bool):
        parts = []
        for e in self.domain:
            r = self.role_lit(c.role, d, e)
            if r is False:
                continue
            f = self.enc(c.filler, e, positive)
            if f is False:
                continue
            parts.append((r, f))
        if not parts:
            return False
        x = self.new_var(4, ("exq",))
        if positive:
            picks = []
            for r, f in parts:
                if f is True:
                    picks.append(r)
                    continue
                p = self.new_var(4, ("pick",))
                self.add([-p, r], HARD)
                self.add([-p, f], HARD)
                picks.append(p)
            self.add([-x] + picks, HARD)
        else:
            for r, f in parts:
                self.add([_neg(r), _neg(f), x], HARD)
        return x

    # -- the knowledge base ----------------------------------------------------------

    def encode_kb(self) -> None:
        for ax, w in self.kb.tbox:
            if isinstance(ax, ConceptInclusion):
                for d in self.domain:
                    self.add(
                        [_neg(self.enc(ax.lhs, d, False)), self.enc(ax.rhs, d, True),
                         _neg(self.exist[d])],
                        w,
                    )
            else:
                for d in self.domain:
                    for e in self.domain:
                        lhs = self.role_lit(ax.lhs, d, e)
                        if lhs is False:
                            continue
                        self.add([_neg(lhs), self.role_lit(ax.rhs, d, e)], w)
        for a, w in self.kb.abox:
            if isinstance(a, ConceptAssertion):
                self.add([self.concept(a.concept, a.ind)], w)
            else:
                self.add([self.role(a.role, a.subj, a.obj)], w)

    # -- queries ---------------------------------------------------------------------

    def atom_lit(self, atom, h: dict):
        def val(t):
            return t.name if isinstance(t, Ind) else h[t]

        if isinstance(atom, CAtom):
            return self.concept(atom.concept, val(atom.term))
        return self.role(atom.role, val(atom.left), val(atom.right))

    def require_query(self, q: CQ) -> dict:
        """Hard clauses stating that ``q`` has a match (selector encoding).

        Returns the selector variables, ``sel[v][d]`` meaning ``v`` maps to ``d``."""
        sel: dict = {}
        for v in q.variables():
            sel[v] = {d: self.new_var(4, ("sel", v, d)) for d in self.domain}
            self.add(list(sel[v].values()), HARD)
            for d, s in sel[v].items():
                self.add([-s, self.exist[d]], HARD)

        def choices(t):
            if isinstance(t, Ind):
                return [(True, t.name)]
            return [(sel[t][d], d) for d in self.domain]

        for atom in q.atoms:
            if isinstance(atom, CAtom):
                for s, d in choices(atom.term):
                    self.add([_neg(s), self.concept(atom.concept, d)], HARD)
            elif atom.left == atom.right:
                for s, d in choices(atom.left):
                    self.add([_neg(s), self.role(atom.role, d, d)], HARD)
            else:
                for s1, d in choices(atom.left):
                    for s2, e in choices(atom.right):
                        self.add([_neg(s1), _neg(s2), self.role(atom.role, d, e)], HARD)
        return sel

    def forbid_query(self, q: CQ) -> bool:
        """Hard clauses stating that ``q`` has no match.

        Returns False when some component is too large to ground; the caller
        then checks the query lazily during the search.
        """
        comps = _components(q)
        indicators = []
        for atoms, vs in comps:
            h = self.new_var(4, ("holds",))
            indicators.append(h)
            tree = _tree_shape(atoms, vs)
            if tree is not None:
                self._forbid_tree(atoms, tree, h)
            elif len(self.domain) ** len(vs) <= MAX_GROUND_ASSIGNMENTS:
                for combo in itertools.product(self.domain, repeat=len(vs)):
                    env = dict(zip(vs, combo))
                    self.add([_neg(self.atom_lit(a, env)) for a in atoms]
                             + [_neg(self.exist[d]) for d in set(combo)] + [h], HARD)
            else:
                return False
        self.add([-h for h in indicators], HARD)
        return True

    def _forbid_tree(self, atoms, tree, holds: int) -> None:
        root, children, local, links = tree
        match: dict = {}

        def build(y: Var) -> None:
            for z in children[y]:
                build(z)
            for d in self.domain:
                body = [_neg(self.atom_lit(a, {y: d})) for a in local[y]] + [_neg(self.exist[d])]
                for z in children[y]:
                    cz = self.new_var(4, ("child",))
                    for e in self.domain:
                        env = {y: d, z: e}
                        self.add([_neg(self.atom_lit(a, env)) for a in links[z]]
                                 + [_neg(match[(z, e)]), cz], HARD)
                    body.append(-cz)
                if y == root:
                    self.add(body + [holds], HARD)
                else:
                    m = self.new_var(4, ("match",))
                    self.add(body + [m], HARD)
                    match[(y, d)] = m

        build(root)

    # -- decoding --------------------------------------------------------------------

    def decode(self, value) -> Interpretation:
        def true(lit) -> bool:
            if lit is True or lit is False:
                return lit
            return (value[lit] == 1) if lit > 0 else (value[-lit] == 2)

        present = [d for d in self.generic + self.slots if true(self.exist[d])]
        keep = set(self.named) | set(present)
        cs: dict = {c: set() for c in self.concepts}
        rs: dict = {r: set() for r in self.roles}
        for (name, d), lit in self.cvar.items():
            if d in keep and name in cs and true(lit):
                cs[name].add(d)
        for d in self.slots:
            if d in keep:
                for name in self.slot_of[d][0]:
                    cs.setdefault(name, set()).add(d)
        for (name, d, e), lit in self.rvar.items():
            if d in keep and e in keep and true(lit):
                rs[name].add((d, e))
        anon_order = [d for d in self.generic + self.slots if d in keep]
        return Interpretation(tuple(self.named), tuple(anon_order), cs, rs)

    def order_and_pref(self, seed: int = 0) -> tuple[list[int], list[int]]:
        order = sorted(range(1, self.nv + 1), key=lambda v: (self.group[v], v))
        if seed:
            rng = random.Random(seed)
            groups: dict = {}
            for v in order:
                groups.setdefault(self.group[v], []).append(v)
            order = []
            for g in sorted(groups):
                part = groups[g]
                rng.shuffle(part)
                order.extend(part)
        pref = [2] * (self.nv + 1)
        return order, pref


def _components(q: CQ) -> list[tuple[list, list[Var]]]:
    """Connected components of the query (atoms, variables in first-use order)."""
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v in q.variables():
        parent[v] = v
    for a in q.atoms:
        vs = [t for t in a.terms if isinstance(t, Var)]
        for x, y in zip(vs, vs[1:]):
            parent[find(x)] = find(y)
    groups: dict = {}
    out = []
    for a in q.atoms:
        vs = [t for t in a.terms if isinstance(t, Var)]
        if not vs:
            out.append(([a], []))
            continue
        key = find(vs[0])
        if key not in groups:
            groups[key] = ([], [])
            out.append(groups[key])
        atoms, order = groups[key]
        atoms.append(a)
        for v in vs:
            if v not in order:
                order.append(v)
    return out


def _tree_shape(atoms, vs):
    """Rooted tree over the variables of a component, or None when cyclic."""
    if not vs:
        return None
    local: dict = {v: [] for v in vs}
    pair_atoms: dict = {}
    for a in atoms:
        avs = [t for t in a.terms if isinstance(t, Var)]
        if len(set(avs)) <= 1:
            local[avs[0]].append(a)
        else:
            pair_atoms.setdefault(frozenset(avs), []).append(a)
    adj: dict = {v: [] for v in vs}
    for pair in pair_atoms:
        x, y = tuple(pair)
        adj[x].append(y)
        adj[y].append(x)
    if len(pair_atoms) != len(vs) - 1:
        return None
    root = vs[0]
    children: dict = {v: [] for v in vs}
    links: dict = {}
    seen = {root}
    stack = [root]
    while stack:
        y = stack.pop()
        for z in adj[y]:
            if z not in seen:
                seen.add(z)
                children[y].append(z)
                links[z] = pair_atoms[frozenset((y, z))]
                stack.append(z)
    if len(seen) != len(vs):
        return None
    return root, children, local, links


class _QueryChecker:
    """Lazy CQ test on a partial assignment of the grounding's atoms."""

    def __init__(self, g: Grounding, q: CQ, want: bool):
        self.g = g
        self.q = q
        self.want = want  # True: q must hold; False: q must fail
        self.vars = q.variables()
        self.atom_lits = {}

    def _holds(self, value, lit, optimistic: bool) -> bool:
        if lit is True or lit is False:
            return lit
        x = value[lit]
        return x == 1 or (optimistic and x == 0)

    def matches(self, value, optimistic: bool) -> bool:
        g, q = self.g, self.q
        h: dict = {}
        vs = self.vars

        def ok_atoms(bound) -> bool:
            for a in q.atoms:
                if all(not isinstance(t, Var) or t in bound for t in a.terms):
                    if not self._holds(value, g.atom_lit(a, h), optimistic):
                        return False
            return True

        def go(i: int) -> bool:
            if i == len(vs):
                return True
            v = vs[i]
            for d in g.domain:
                if not self._holds(value, g.exist[d], optimistic):
                    continue
                h[v] = d
                if ok_atoms(h) and go(i + 1):
                    return True
            del h[v]
            return False

        if not ok_atoms(h):
            return False
        return go(0)

    def __call__(self, value, final: bool) -> bool:
        if self.want:
            return self.matches(value, optimistic=not final)
        return not self.matches(value, optimistic=False)


# ---------------------------------------------------------------- running a search


@dataclass(frozen=True)
class _Outcome:
    found: bool
    witness: Interpretation | None
    cost: Weight | None
    complete: bool


def _search(kb: WeightedKB, q: CQ | None, want: str | None, budget, cfg: SearchConfig,
            task: str, minimize: bool = False) -> _Outcome:
    """Find an interpretation of cost <= budget where ``q`` holds (want='holds')
    or fails (want='fails'); with ``minimize`` find one of least cost."""
    plan = _plan(kb, q, task, None if minimize else budget, cfg)
    g = Grounding(kb, q, plan.n_generic, plan.slots)
    g.encode_kb()
    checker = None
    if q is not None and want == "holds":
        g.require_query(q)
    elif q is not None and want == "fails":
        if not g.forbid_query(q):
            checker = _QueryChecker(g, q, want=False)
    if g.unsat:
        return _Outcome(False, None, None, plan.complete)
    soft_total = sum(w for w in g.weights if w != HARD)
    if minimize:
        limit = soft_total
    else:
        if budget is INF:
            limit = soft_total
        else:
            limit = budget - g.base
            if limit < 0:
                return _Outcome(False, None, None, plan.complete)
    order, pref = g.order_and_pref(cfg.seed)
    search = engine.make_search(g.nv, g.clauses, g.weights, backend=cfg.backend)
    status, best, best_cost = search.run(limit, minimize, order, pref, checker)
    if status != 1:
        return _Outcome(False, None, None, plan.complete)
    witness = g.decode(best)
    c = interp_cost(kb, witness)
    # one-sided gate definitions can only overstate the cost of an assignment
    if c is INF or c > best_cost + g.base or (minimize and c != best_cost + g.base):
        raise AssertionError(f"internal error: grounded cost {best_cost + g.base} vs {c}")
    if q is not None and want is not None:
        holds = cq_match(witness, q)
        if holds != (want == "holds"):
            raise AssertionError("internal error: witness disagrees with the query condition")
    return _Outcome(True, witness, c, plan.complete)


def _check_k(k) -> None:
    if k is INF:
        return
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise ValueError(f"k must be a non-negative integer, got {k!r}")


def _check_query(q: CQ) -> None:
    if not q.boolean:
        raise ValueError("expected a Boolean query")


# ---------------------------------------------------------------- decision procedures


def k_satisfiable(kb: WeightedKB, k, cfg: SearchConfig | None = None) -> Verdict:
    cfg = cfg or SearchConfig()
    _check_k(k)
    out = _search(kb, None, None, k, cfg, "sat")
    if not out.found:
        _report_plan(_plan(kb, None, "sat", k, cfg), cfg, "k_satisfiable")
    return Verdict(out.found, out.witness, out.complete or out.found, out.cost)


def entails_bounded(kb: WeightedKB, q: CQ, k, mode: str, cfg: SearchConfig | None = None) -> Verdict:
    """Bounded-cost entailment: possible (some cost-<=k interpretation satisfies
    q) or certain (all of them do).  A certain-mode witness is a countermodel."""
    cfg = cfg or SearchConfig()
    _check_k(k)
    _check_query(q)
    if mode == "possible":
        out = _search(kb, q, "holds", k, cfg, "possible")
        if not out.found:
            _report_plan(_plan(kb, q, "possible", k, cfg), cfg, "entails_bounded")
        return Verdict(out.found, out.witness, out.complete or out.found, out.cost)
    if mode == "certain":
        out = _search(kb, q, "fails", k, cfg, "certain")
        if not out.found:
            _report_plan(_plan(kb, q, "certain", k, cfg), cfg, "entails_bounded")
        return Verdict(not out.found, out.witness, out.complete or out.found, out.cost)
    raise ValueError(f"mode must be 'certain' or 'possible', got {mode!r}")


@dataclass(frozen=True)
class OptimalCost:
    cost: Weight
    witness: Interpretation | None
    complete: bool


def solve_optimal(kb: WeightedKB, cfg: SearchConfig | None = None) -> OptimalCost:
    cfg = cfg or SearchConfig()
    out = _search(kb, None, None, INF, cfg, "optimal", minimize=True)
    if not out.found:
        return OptimalCost(INF, None, out.complete)
    return OptimalCost(out.cost, out.witness, out.complete)


def optimal_cost(kb: WeightedKB, cfg: SearchConfig | None = None) -> Weight:
    return solve_optimal(kb, cfg).cost


def entails_opt(kb: WeightedKB, q: CQ, mode: str, cfg: SearchConfig | None = None) -> Verdict:
    """Entailment over the interpretations of optimal cost.  No interpretation
    is cheaper than the optimum, so this is bounded entailment at k = opt."""
    cfg = cfg or SearchConfig()
    _check_query(q)
    if mode not in MODES:
        raise ValueError(f"mode must be 'certain' or 'possible', got {mode!r}")
    opt = solve_optimal(kb, cfg)
    if opt.cost is INF:
        return Verdict(mode == "certain", None, opt.complete)
    v = entails_bounded(kb, q, opt.cost, mode, cfg)
    return Verdict(v.answer, v.witness, v.complete and opt.complete, v.cost)


# ---------------------------------------------------------------- explicit enumeration


def _canonical(bits: tuple, n_named: int, n_anon: int, concepts, roles) -> tuple:
    """Least re-encoding of ``bits`` over permutations of the anonymous part."""
    size = n_named + n_anon
    best = bits
    for perm in itertools.permutations(range(n_anon)):
        if all(i == p for i, p in enumerate(perm)):
            continue
        m = list(range(n_named)) + [n_named + p for p in perm]
        moved = [0] * len(bits)
        for ci in range(len(concepts)):
            for d in range(size):
                moved[ci * size + m[d]] = bits[ci * size + d]
        base = len(concepts) * size
        for ri in range(len(roles)):
            for d in range(size):
                for e in range(size):
                    moved[base + ri * size * size + m[d] * size + m[e]] = (
                        bits[base + ri * size * size + d * size + e]
                    )
        cand = tuple(moved)
        if cand < best:
            best = cand
    return best


def enumerate_interpretations(kb: WeightedKB, m: int, k=INF, exact: bool = False,
                              concepts: Iterable[str] = (), roles: Iterable[str] = ()
                              ) -> Iterator[Interpretation]:
    """Every interpretation over Ind(K) plus up to ``m`` anonymous elements
    (exactly ``m`` with ``exact``), one per isomorphism class of the anonymous
    part, whose cost is at most ``k``.  Intended for tiny signatures."""
    if m < 0:
        raise ValueError("m must be >= 0")
    named = kb.individuals()
    cnames = list(dict.fromkeys(kb.concept_names() + list(concepts)))
    rnames = list(dict.fromkeys(kb.role_names() + list(roles)))
    taken = set(named)
    anon_all = []
    for i in range(m):
        name = f"_n{i}"
        while name in taken:
            name = "_" + name
        taken.add(name)
        anon_all.append(name)
    counts = [m] if exact else range(m + 1)
    for j in counts:
        anon = anon_all[:j]
        dom = named + anon
        size = len(dom)
        n_atoms = len(cnames) * size + len(rnames) * size * size
        for bits in itertools.product((0, 1), repeat=n_atoms):
            if j > 1 and _canonical(bits, len(named), j, cnames, rnames) != bits:
                continue
            cs = {
                c: {dom[d] for d in range(size) if bits[ci * size + d]}
                for ci, c in enumerate(cnames)
            }
            base = len(cnames) * size
            rs = {
                r: {
                    (dom[d], dom[e])
                    for d in range(size) for e in range(size)
                    if bits[base + ri * size * size + d * size + e]
                }
                for ri, r in enumerate(rnames)
            }
            interp = Interpretation(tuple(named), tuple(anon), cs, rs)
            c = interp_cost(kb, interp)
            if c is INF or (k is not INF and c > k):
                continue
            yield interp


__all__ = [
    "SearchConfig", "Verdict", "BoundInfo", "IncompleteSearch", "OptimalCost",
    "ENV_MAX_ANON", "default_max_anonymous", "domain_bound", "witness_slots",
    "type_satisfies", "type_ci_cost", "enumerate_interpretations", "k_satisfiable",
    "entails_bounded", "optimal_cost", "solve_optimal", "entails_opt", "Grounding",
]
