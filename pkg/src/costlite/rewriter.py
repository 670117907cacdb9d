"""First-order rewriting of fixed-cost query answering over DL-Lite_bool^H.

For a weighted TBox, a query and a cost bound k the compiler produces one
closed FO formula over the weight-annotated ABox signature.  Evaluating that
formula on the encoding of any weighted ABox decides possible CQ answering
(mode ``p``) or, negated, certain IQ answering (mode ``c``).

The formula is a disjunction with one disjunct per *strategy* (M, Gamma, V):
a small interpretation M, its individual part Gamma and the ABox violations V
that Gamma is allowed to carry.  A disjunct matches Gamma inside the ABox and
asks every other individual to have a *safe* ABox type, one that can be
completed without violations.

Strategies are found with the search kernel rather than by listing every
interpretation: the compiler enumerates the *maximal* strategies under the
order in > V@n > out on memberships, true > false on frontier flags and set
inclusion on the available roles.  A smaller strategy's disjunct implies the
disjunct of any larger one, so the maximal ones give an equivalent formula.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from . import engine
from . import fo as F
from .interp import Interpretation, abox_interpretation, cq_match, tbox_cost
from .kb import (
    CQ, INF, CAtom, ConceptAssertion, ConceptInclusion, Ind, Role, RoleAssertion,
    Var, Weight, WeightedKB, all_roles, normalize_iq, role_closure, tbox_concept_names,
    tbox_role_names, validate_kb,
)
from .solver import HARD, Grounding, _neg, type_ci_cost, type_satisfies

MODES = {"p": "p", "possible": "p", "c": "c", "certain": "c"}
TYPE_FORMS = ("exact", "compact")
DEFAULT_MAX_INDIVIDUALS = 4


def _mode(mode: str) -> str:
    try:
        return MODES[mode]
    except KeyError:
        raise ValueError(f"mode must be 'p' or 'c', got {mode!r}") from None


def _role_key(r: Role) -> tuple:
    return (r.name, r.inverted)


# ---------------------------------------------------------------- ABox types


@dataclass(frozen=True)
class ABoxType:
    """The 1-type an individual gets from the ABox, plus the roles along
    which it has more than k distinct ABox successors."""

    one_type: frozenset
    many_succ: frozenset

    def __str__(self) -> str:
        parts = sorted(x for x in self.one_type if isinstance(x, str))
        parts += [f"exists {r}" for r in sorted((x for x in self.one_type if isinstance(x, Role)), key=_role_key)]
        parts += [f"exists>k {r}" for r in sorted(self.many_succ, key=_role_key)]
        return "{" + ", ".join(parts) + "}"


def _abox_of(a):
    return a.abox if isinstance(a, WeightedKB) else tuple(a)


def _signature_of(abox, signature):
    if signature is not None:
        concepts, roles = signature
        return list(concepts), list(roles)
    cs: dict = {}
    rs: dict = {}
    for ax, _ in abox:
        if isinstance(ax, ConceptAssertion):
            cs.setdefault(ax.concept)
        else:
            rs.setdefault(ax.role)
    return list(cs), list(rs)


def _individuals(abox) -> list[str]:
    return list(abox_interpretation(abox).named)


def abox_type(abox, a: str, k: int, signature=None) -> ABoxType:
    """ABox type of ``a``.  ``signature`` is a pair (concept names, role names)
    restricting the type; by default the ABox's own names are used."""
    abox = _abox_of(abox)
    I = abox_interpretation(abox)
    if a not in I.domain_set:
        raise ValueError(f"unknown individual {a!r}")
    return _abox_types(I, k, *_signature_of(abox, signature))[a]


def _abox_types(I: Interpretation, k: int, concepts, roles) -> dict:
    out = {}
    rr = all_roles(roles)
    for a in I.domain:
        one = {c for c in concepts if a in I.ext(c)}
        many = set()
        for r in rr:
            n = len(I.successors(a, r))
            if n:
                one.add(r)
            if n > k:
                many.add(r)
        out[a] = ABoxType(frozenset(one), frozenset(many))
    return out


def rare_types(abox, k: int, signature=None) -> set:
    """ABox types realised by at most 2k individuals."""
    abox = _abox_of(abox)
    I = abox_interpretation(abox)
    counts: dict = {}
    for t in _abox_types(I, k, *_signature_of(abox, signature)).values():
        counts[t] = counts.get(t, 0) + 1
    return {t for t, n in counts.items() if n <= 2 * k}


def core(abox, q: CQ | None, k: int, signature=None) -> tuple[frozenset, frozenset]:
    """(pre-core, core): rare-typed and query individuals, then everything
    reachable from them in at most k+1 steps along ABox edges that do not
    leave an individual through a role it has more than k successors for."""
    abox = _abox_of(abox)
    I = abox_interpretation(abox)
    concepts, roles = _signature_of(abox, signature)
    types = _abox_types(I, k, concepts, roles)
    counts: dict = {}
    for t in types.values():
        counts[t] = counts.get(t, 0) + 1
    pre = {a for a, t in types.items() if counts[t] <= 2 * k}
    if q is not None:
        pre |= set(q.individuals())
    rr = all_roles(roles)
    seen = set(pre)
    frontier = set(pre)
    for _ in range(k + 1):
        nxt = set()
        for a in frontier:
            if a not in types:
                continue
            for r in rr:
                if r in types[a].many_succ:
                    continue
                for b in I.successors(a, r):
                    if b not in seen:
                        nxt.add(b)
        seen |= nxt
        frontier = nxt
    return frozenset(pre), frozenset(seen)


def _q_size(q: CQ | None) -> int:
    return 0 if q is None else len(q.atoms)


def precore_bound(tbox, q: CQ | None, k: int) -> int:
    nc = len(tbox_concept_names(tbox))
    nr = len(tbox_role_names(tbox))
    return 2 * k * 2 ** (nc + 4 * nr) + _q_size(q)


def core_bound(tbox, q: CQ | None, k: int) -> int:
    nr = len(tbox_role_names(tbox))
    return precore_bound(tbox, q, k) * (2 * k * nr) ** k


def m_bound(tbox, q: CQ | None, k: int) -> int:
    """Domain size that suffices for every ABox (|q| counts query atoms)."""
    nc = len(tbox_concept_names(tbox))
    nr = len(tbox_role_names(tbox))
    return core_bound(tbox, q, k) + 2 ** (nc + 2 * nr)


# ---------------------------------------------------------------- compilation context


class RewriteContext:
    """Everything a strategy needs to know about (T, q, k, mode)."""

    def __init__(self, tbox, q: CQ, k: int, mode: str):
        self.tbox = tuple(tbox)
        self.q = q
        self.k = k
        self.mode = _mode(mode)
        self.concepts = list(dict.fromkeys(tbox_concept_names(self.tbox) + q.concept_names()))
        self.role_names = list(dict.fromkeys(tbox_role_names(self.tbox) + q.role_names()))
        self.roles = all_roles(self.role_names)
        closure = role_closure(self.tbox)
        self.up = {r: sorted({s for (x, s) in closure if x == r} | {r}, key=_role_key) for r in self.roles}
        self.excluded = None
        if self.mode == "c":
            (atom,) = q.atoms
            if isinstance(atom, CAtom) and isinstance(atom.term, Var):
                self.excluded = atom.concept
        self._good = None
        self._safe_cache: dict = {}

    # 1-types as bit masks: concept i -> bit i, role j -> bit (nc + j)
    def mask(self, t) -> int:
        m = 0
        for i, c in enumerate(self.concepts):
            if c in t:
                m |= 1 << i
        nc = len(self.concepts)
        for j, r in enumerate(self.roles):
            if r in t:
                m |= 1 << (nc + j)
        return m

    def unmask(self, m: int) -> frozenset:
        nc = len(self.concepts)
        out = {c for i, c in enumerate(self.concepts) if m >> i & 1}
        out |= {r for j, r in enumerate(self.roles) if m >> (nc + j) & 1}
        return frozenset(out)

    def n_types(self) -> int:
        return 2 ** (len(self.concepts) + len(self.roles))

    def role_mask(self, roles: Iterable[Role]) -> int:
        nc = len(self.concepts)
        m = 0
        for r in roles:
            m |= 1 << (nc + self.roles.index(r))
        return m

    def good_types(self) -> list[tuple[int, int]]:
        """(type mask, role mask) of the 1-types meeting the conditions that
        do not depend on the strategy: no CI violated, existentials closed
        under the role hierarchy, and the excluded query concept absent."""
        if self._good is None:
            good = []
            for m in range(self.n_types()):
                t = self.unmask(m)
                if self.excluded is not None and self.excluded in t:
                    continue
                flags = [r for r in self.roles if r in t]
                if any(s not in t for r in flags for s in self.up[r]):
                    continue
                if type_ci_cost(self.tbox, t) != 0:
                    continue
                good.append((m, self.role_mask(flags)))
            self._good = good
        return self._good

    def safe_masks(self, r_avail: frozenset) -> tuple[list[int], list[int]]:
        """All safe 1-type masks and the maximal ones, for the given set of
        roles whose inverse-closure some element of M realises."""
        key = r_avail
        hit = self._safe_cache.get(key)
        if hit is not None:
            return hit
        allowed = self.role_mask(r_avail)
        tops = [m for m, rm in self.good_types() if rm & ~allowed == 0]
        maximal = [m for m in tops if not any(o != m and o & m == m for o in tops)]
        safe = [m for m in range(self.n_types()) if any(m & o == m for o in maximal)]
        out = (safe, sorted(maximal))
        self._safe_cache[key] = out
        return out

    def slots(self) -> list[tuple[frozenset, frozenset]]:
        """One witness slot per 1-type whose CI cost fits the budget."""
        out = []
        nc = len(self.concepts)
        for m in range(self.n_types()):
            t = self.unmask(m)
            c = type_ci_cost(self.tbox, t)
            if c is INF or c > self.k:
                continue
            cset = frozenset(x for x in t if isinstance(x, str))
            kset = frozenset(x for x in t if isinstance(x, Role))
            out.append((m >> nc, cset, kset))
        out.sort(key=lambda x: (bin(x[0]).count("1"), x[0], sorted(x[1])))
        return [(c, r) for _, c, r in out]


# ---------------------------------------------------------------- strategies


@dataclass(frozen=True, eq=False)
class Strategy:
    """(M, Gamma, V): ``gamma`` lists the individual part of ``model`` (its
    named elements), ``labels`` maps Gamma elements to the query constants
    they stand for, ``violations`` holds the allowed ABox violations."""

    model: Interpretation
    gamma: tuple[str, ...]
    violations: tuple[tuple[object, int], ...]
    labels: Mapping[str, str]
    context: RewriteContext = field(repr=False)

    @cached_property
    def nu(self) -> dict:
        return dict(self.violations)

    @cached_property
    def types(self) -> dict:
        ctx = self.context
        out = {}
        for d in self.model.domain:
            t = {c for c in ctx.concepts if d in self.model.ext(c)}
            t |= {r for r in ctx.roles if self.model.successors(d, r)}
            out[d] = frozenset(t)
        return out

    @cached_property
    def r_avail(self) -> frozenset:
        """Roles r such that some element of M has exists s- for every s above r."""
        ctx = self.context
        out = set()
        for r in ctx.roles:
            if any(all(s.inv() in t for s in ctx.up[r]) for t in self.types.values()):
                out.add(r)
        return frozenset(out)

    def frontier(self, d: str, r: Role) -> bool:
        t = self.types[d]
        return all(s in t for s in self.context.up[r])

    def cost(self) -> Weight:
        c = tbox_cost(self.context.tbox, self.model)
        if c is INF:
            return INF
        return c + sum(self.nu.values())

    def check(self) -> None:
        """Raise AssertionError unless the strategy invariants hold."""
        ctx = self.context
        gset = set(self.gamma)
        for a, _ in self.violations:
            inds = {a.ind} if isinstance(a, ConceptAssertion) else {a.subj, a.obj}
            assert inds <= gset, f"violation {a} outside Gamma"
            if isinstance(a, ConceptAssertion):
                assert a.ind not in self.model.ext(a.concept), f"{a} holds in M"
            else:
                assert (a.subj, a.obj) not in self.model.pairs(a.role), f"{a} holds in M"
        c = self.cost()
        assert c is not INF and c <= ctx.k, f"strategy cost {c} exceeds {ctx.k}"
        assert set(self.labels.values()) == set(ctx.q.individuals()), "query constants not in Gamma"
        holds = cq_match(self.model, ctx.q)
        assert holds == (ctx.mode == "p"), "query condition fails"


def check_safe(t: ABoxType, t_prime: frozenset, sigma: Strategy, mode: str) -> bool:
    """Re-check the safe-type conditions for a proposed completion ``t_prime``."""
    ctx = sigma.context
    if not t.one_type <= t_prime:
        return False
    ci_ok = all(
        not type_satisfies(ax.lhs, t_prime) or type_satisfies(ax.rhs, t_prime)
        for ax, _ in ctx.tbox if isinstance(ax, ConceptInclusion)
    )
    if not ci_ok:
        return False
    for r in ctx.roles:
        if r not in t_prime:
            continue
        if any(s not in t_prime for s in ctx.up[r]):
            return False
        if not any(all(s.inv() in tp for s in ctx.up[r]) for tp in sigma.types.values()):
            return False
    if _mode(mode) == "c" and ctx.excluded is not None and ctx.excluded in t_prime:
        return False
    return True


def safe_type(t: ABoxType, sigma: Strategy, mode: str) -> frozenset | None:
    """A 1-type completing ``t`` without violations, or None."""
    ctx = sigma.context
    if _mode(mode) != ctx.mode:
        raise ValueError("mode differs from the strategy's mode")
    want = ctx.mask(t.one_type)
    _, maximal = ctx.safe_masks(sigma.r_avail)
    # least completion: intersect every maximal safe type above t
    cands = [m for m in maximal if m & want == want]
    if not cands:
        return None
    best = min(cands, key=lambda m: (bin(m).count("1"), m))
    return ctx.unmask(best)


# ---------------------------------------------------------------- strategy search


class _Status:
    IN = "in"
    OUT = "out"


class _PatternSearch:
    """Maximal strategies with a fixed number of unlabeled Gamma elements."""

    def __init__(self, ctx: RewriteContext, n_free: int, backend: str | None = None):
        self.ctx = ctx
        self.backend = backend
        labels = ctx.q.individuals()
        taken = set(labels)
        free = []
        for i in range(n_free):
            name = f"_g{i}"
            while name in taken:
                name = "_" + name
            taken.add(name)
            free.append(name)
        self.labeled = list(labels)
        self.free = free
        self.gamma = self.labeled + free
        kb = WeightedKB(ctx.tbox, ())
        g = Grounding(kb, ctx.q, 0, ctx.slots(), extra_named=free)
        self.g = g
        k = ctx.k
        free_set = set(free)
        involved: dict = {d: [] for d in free}

        def indicator(lits, w, touched):
            if w is INF or not touched:
                g.add(lits, w)
                return
            y = g.new_var(4, ("viol",))
            g.add(list(lits) + [y], HARD)
            g.add([-y], w)
            for x in touched:
                involved[x].append(y)

        for ax, w in ctx.tbox:
            if isinstance(ax, ConceptInclusion):
                for d in g.domain:
                    lits = [_neg(g.enc(ax.lhs, d, False)), g.enc(ax.rhs, d, True), _neg(g.exist[d])]
                    indicator(lits, w, {d} & free_set)
            else:
                for d in g.domain:
                    for e in g.domain:
                        lhs = g.role_lit(ax.lhs, d, e)
                        if lhs is False:
                            continue
                        indicator([_neg(lhs), g.role_lit(ax.rhs, d, e)], w, {d, e} & free_set)

        # allowed ABox violations on Gamma, one weight per membership
        self.comps: list[tuple] = []
        self.atom: dict = {}
        self.vvars: dict = {}
        for d in self.gamma:
            for c in ctx.concepts:
                self._membership(("c", c, d), g.concept(c, d), k, involved, (d,))
        for r in ctx.role_names:
            for d in self.gamma:
                for e in self.gamma:
                    self._membership(("r", r, d, e), g.role(r, d, e), k, involved, (d, e))
        # frontier flags and available roles
        self.fvar: dict = {}
        for d in self.gamma:
            for r in ctx.roles:
                f = g.new_var(5, ("front", d, r))
                for s in ctx.up[r]:
                    g.add([-f, g.exists(s, d)], HARD)
                self.fvar[(d, r)] = f
                self.comps.append(("f", d, r))
        self.rvar: dict = {}
        for r in ctx.roles:
            a = g.new_var(5, ("avail", r))
            zs = []
            for x in g.domain:
                z = g.new_var(4, ("availz", r, x))
                for s in ctx.up[r]:
                    g.add([-z, g.exists(s.inv(), x)], HARD)
                zs.append(z)
            g.add([-a] + zs, HARD)
            self.rvar[r] = a
            self.comps.append(("a", r))
        # the query condition
        if ctx.mode == "p":
            sel = g.require_query(ctx.q)
            for d in free:
                involved[d].extend(s[d] for s in sel.values())
        else:
            if not g.forbid_query(ctx.q):
                raise RuntimeError("query too large to ground")
        # every unlabeled element takes part in a violation (or in the match)
        for d in free:
            g.add(involved[d], HARD)
        self.base_clauses = list(g.clauses)
        self.base_weights = list(g.weights)
        self.blocks: list[list[int]] = []
        order, pref = g.order_and_pref()
        for key in self.comps:
            if key[0] in "cr":
                pref[self.atom[key]] = 1
            elif key[0] == "f":
                pref[self.fvar[(key[1], key[2])]] = 1
            else:
                pref[self.rvar[key[1]]] = 1
        self.order = order
        self.pref = pref
        self.perms = [dict(zip(free, p)) for p in itertools.permutations(free)]
        for m in self.perms:
            for x in self.labeled:
                m[x] = x

    def _membership(self, key, lit, k, involved, elems) -> None:
        g = self.g
        if lit is True or lit is False:
            return
        self.atom[key] = lit
        vs = []
        for n in range(1, k + 1):
            v = g.new_var(5, ("V", key, n))
            g.add([-v, -lit], HARD)
            g.add([-v], n)
            for u in vs:
                g.add([-u, -v], HARD)
            vs.append(v)
            for x in set(elems):
                if x in involved:
                    involved[x].append(v)
        self.vvars[key] = vs
        self.comps.append(key)

    # -- solving -------------------------------------------------------------------

    def solve(self, extra: list[list[int]]):
        g = self.g
        if g.unsat:
            return None
        limit = self.ctx.k - g.base
        if limit < 0:
            return None
        clauses = self.base_clauses + self.blocks + extra
        weights = self.base_weights + [HARD] * (len(self.blocks) + len(extra))
        search = engine.make_search(g.nv, clauses, weights, backend=self.backend)
        status, best, _ = search.run(limit, False, self.order, self.pref, None)
        return best if status == 1 else None

    def _true(self, value, lit) -> bool:
        if lit is True or lit is False:
            return lit
        return value[lit] == 1 if lit > 0 else value[-lit] == 2

    def pattern(self, value) -> dict:
        """Status of every component in the assignment ``value``."""
        out = {}
        for key in self.comps:
            if key[0] in "cr":
                if self._true(value, self.atom[key]):
                    out[key] = _Status.IN
                else:
                    out[key] = _Status.OUT
                    for n, v in enumerate(self.vvars[key], 1):
                        if value[v] == 1:
                            out[key] = n
                            break
            elif key[0] == "f":
                out[key] = all(self._true(value, self.g.exists(s, key[1])) for s in self.ctx.up[key[2]])
            else:
                r = key[1]
                out[key] = any(
                    all(self._true(value, self.g.exists(s.inv(), x)) for s in self.ctx.up[r])
                    for x in self.g.domain
                )
        return out

    def _at_least(self, key, status) -> list[list[int]]:
        if key[0] in "cr":
            lit = self.atom[key]
            if status == _Status.IN:
                return [[lit]]
            if status == _Status.OUT:
                return []
            return [[lit, self.vvars[key][status - 1]]]
        if key[0] == "f":
            return [[self.fvar[(key[1], key[2])]]] if status else []
        return [[self.rvar[key[1]]]] if status else []

    def _upgrades(self, key, status) -> list[list[list[int]]]:
        if key[0] in "cr":
            lit = self.atom[key]
            if status == _Status.IN:
                return []
            ups = [[[lit]]]
            if status == _Status.OUT:
                ups += [[[v]] for v in self.vvars[key]]
            return ups
        if status:
            return []
        if key[0] == "f":
            return [[[self.fvar[(key[1], key[2])]]]]
        return [[[self.rvar[key[1]]]]]

    def _moved(self, key, perm):
        if key[0] == "c":
            return ("c", key[1], perm[key[2]])
        if key[0] == "r":
            return ("r", key[1], perm[key[2]], perm[key[3]])
        if key[0] == "f":
            return ("f", perm[key[1]], key[2])
        return key

    def _block(self, pat: dict) -> None:
        for perm in self.perms:
            clause: list[int] = []
            for key, status in pat.items():
                mk = self._moved(key, perm)
                if mk[0] in "cr":
                    if status == _Status.IN:
                        continue
                    clause.append(self.atom[mk])
                    clause.extend(v for n, v in enumerate(self.vvars[mk], 1) if n != status)
                elif not status:
                    clause.append(self.fvar[(mk[1], mk[2])] if mk[0] == "f" else self.rvar[mk[1]])
            self.blocks.append(clause)

    def run(self) -> list[tuple[Interpretation, dict]]:
        found = []
        while True:
            value = self.solve([])
            if value is None:
                return found
            pat = self.pattern(value)
            for key in self.comps:
                ups = self._upgrades(key, pat[key])
                if not ups:
                    continue
                fixed = [c for k2, s in pat.items() for c in self._at_least(k2, s)]
                for up in ups:
                    nv = self.solve(fixed + up)
                    if nv is not None:
                        value = nv
                        pat = self.pattern(value)
                        break
            found.append((self.g.decode(value), pat))
            self._block(pat)


def _strategy_from(search: _PatternSearch, model: Interpretation, pat: dict) -> Strategy:
    ctx = search.ctx
    viol = []
    for key, status in pat.items():
        if key[0] in "cr" and status not in (_Status.IN, _Status.OUT):
            if key[0] == "c":
                viol.append((ConceptAssertion(key[1], key[2]), status))
            else:
                viol.append((RoleAssertion(key[1], key[2], key[3]), status))
    named = tuple(search.gamma)
    m = Interpretation(named, model.anonymous, model.concepts, model.roles)
    m = m.with_signature(ctx.concepts, ctx.role_names)
    labels = {x: x for x in search.labeled}
    return Strategy(m, named, tuple(viol), labels, ctx)


def max_free_elements(ctx: RewriteContext, max_individuals: int) -> int:
    """Unlabeled Gamma elements ever needed: the individuals of at most 2k
    violations, plus the query's match in mode p."""
    extra = 2 * ctx.k + (len(ctx.q.variables()) if ctx.mode == "p" else 0)
    return max(0, min(max_individuals - len(ctx.q.individuals()), extra))


def _prepare(tbox, q: CQ, k: int, mode: str):
    mode = _mode(mode)
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise ValueError(f"k must be a non-negative integer, got {k!r}")
    tbox = tuple(tbox)
    rep = validate_kb(WeightedKB(tbox, ()))
    if not rep.valid or not rep.dl_lite:
        raise ValueError(f"rewriting needs a DL-Lite_bool^H TBox, got {rep.dialect}")
    if not q.boolean:
        raise ValueError("expected a Boolean query")
    if mode == "c":
        if len(q.atoms) != 1:
            raise ValueError("mode c needs a Boolean instance query")
        tbox, q = normalize_iq(tbox, q)
    return tbox, q, mode


def enumerate_strategies(tbox, q: CQ, k: int, mode: str,
                         max_individuals: int = DEFAULT_MAX_INDIVIDUALS,
                         backend: str | None = None) -> list[Strategy]:
    """Maximal strategies whose individual part has at most
    ``max_individuals`` elements (the rewriting then serves every ABox with at
    most that many individuals, query constants included)."""
    tbox, q, mode = _prepare(tbox, q, k, mode)
    ctx = RewriteContext(tbox, q, k, mode)
    if max_individuals < len(q.individuals()):
        raise ValueError("max_individuals is smaller than the number of query constants")
    out = []
    for n_free in range(max_free_elements(ctx, max_individuals) + 1):
        search = _PatternSearch(ctx, n_free, backend)
        for model, pat in search.run():
            out.append(_strategy_from(search, model, pat))
    return out


# ---------------------------------------------------------------- strategy queries


def _ratom(r: Role, a, b) -> F.Formula:
    return F.FRole(r.name, b, a) if r.inverted else F.FRole(r.name, a, b)


def _type_query(ctx: RewriteContext, m: int, many: frozenset, v: Var, k: int) -> F.Formula:
    t = ctx.unmask(m)
    w = Var("w")
    parts = []
    for c in ctx.concepts:
        parts.append(F.mk_iff(F.FConcept(c, v), F.Truth(c in t)))
    for r in ctx.roles:
        parts.append(F.mk_iff(F.FExists(w, _ratom(r, v, w)), F.Truth(r in t)))
    for r in ctx.roles:
        parts.append(F.mk_iff(F.FCount(k, w, _ratom(r, v, w)), F.Truth(r in many)))
    return F.mk_and(*parts)


def _below_query(ctx: RewriteContext, m: int, v: Var) -> F.Formula:
    t = ctx.unmask(m)
    w = Var("w")
    parts = [F.mk_not(F.FConcept(c, v)) for c in ctx.concepts if c not in t]
    parts += [F.mk_not(F.FExists(w, _ratom(r, v, w))) for r in ctx.roles if r not in t]
    return F.mk_and(*parts)


def safe_type_query(ctx: RewriteContext, r_avail: frozenset, v: Var, type_form: str = "exact") -> F.Formula:
    """Formula true of an individual iff its ABox type is safe."""
    safe, maximal = ctx.safe_masks(r_avail)
    if type_form == "compact":
        return F.mk_or(*[_below_query(ctx, m, v) for m in maximal])
    if type_form != "exact":
        raise ValueError(f"type_form must be one of {TYPE_FORMS}")
    parts = []
    for m in safe:
        flags = [r for r in ctx.roles if r in ctx.unmask(m)]
        for bits in range(2 ** len(flags)):
            many = frozenset(r for i, r in enumerate(flags) if bits >> i & 1)
            parts.append(_type_query(ctx, m, many, v, ctx.k))
    return F.mk_or(*parts)


def build_strategy_query(sigma: Strategy, k: int, mode: str, type_form: str = "exact") -> F.Formula:
    """The disjunct q_sigma of a strategy."""
    ctx = sigma.context
    if k != ctx.k or _mode(mode) != ctx.mode:
        raise ValueError("k or mode differs from the strategy's")
    M = sigma.model
    vs = {d: Var(f"g{i}") for i, d in enumerate(sigma.gamma)}
    parts: list[F.Formula] = []
    for d in sigma.gamma:
        if d in sigma.labels:
            parts.append(F.FEq(vs[d], Ind(sigma.labels[d])))
    for d, e in itertools.combinations(sigma.gamma, 2):
        parts.append(F.mk_not(F.FEq(vs[d], vs[e])))
    nu = sigma.nu
    for c in ctx.concepts:
        for d in sigma.gamma:
            held = d in M.ext(c)
            alpha = ConceptAssertion(c, d)
            rhs = F.FWConcept(c, nu[alpha], vs[d]) if alpha in nu else F.FALSE
            parts.append(F.mk_implies(F.mk_and(F.FConcept(c, vs[d]), F.Truth(not held)), rhs))
    for r in ctx.role_names:
        for d in sigma.gamma:
            for e in sigma.gamma:
                held = (d, e) in M.pairs(r)
                alpha = RoleAssertion(r, d, e)
                rhs = F.FWRole(r, nu[alpha], vs[d], vs[e]) if alpha in nu else F.FALSE
                parts.append(F.mk_implies(F.mk_and(F.FRole(r, vs[d], vs[e]), F.Truth(not held)), rhs))
    v = Var("v")
    outside = F.mk_and(*[F.mk_not(F.FEq(v, vs[d])) for d in sigma.gamma])
    parts.append(F.mk_forall(v, F.mk_implies(outside, safe_type_query(ctx, sigma.r_avail, v, type_form))))
    u = Var("u")
    for r in ctx.roles:
        for d in sigma.gamma:
            away = F.mk_and(_ratom(r, vs[d], u), *[F.mk_not(F.FEq(u, vs[e])) for e in sigma.gamma])
            parts.append(F.mk_forall(u, F.mk_implies(away, F.Truth(sigma.frontier(d, r)))))
    return F.mk_exists([vs[d] for d in sigma.gamma], F.mk_and(*parts))


# ---------------------------------------------------------------- the rewriting


@dataclass(frozen=True)
class Rewriting:
    formula: F.Formula
    mode: str
    k: int
    meta: dict
    strategies: tuple = ()


def rewrite(tbox, q: CQ, k: int, mode: str, max_individuals: int = DEFAULT_MAX_INDIVIDUALS,
            type_form: str = "exact", backend: str | None = None) -> Rewriting:
    """Compile (T, q, k) into an FO query over weight-annotated ABoxes.

    The result is exact for every ABox with at most ``max_individuals``
    individuals (query constants included): the domain cap is that number plus
    one element per 1-type.
    """
    if type_form not in TYPE_FORMS:
        raise ValueError(f"type_form must be one of {TYPE_FORMS}")
    t2, q2, m = _prepare(tbox, q, k, mode)
    strategies = enumerate_strategies(tbox, q, k, mode, max_individuals, backend)
    disjuncts = [build_strategy_query(s, k, m, type_form) for s in strategies]
    phi = F.mk_or(*disjuncts)
    cap = max_individuals + RewriteContext(t2, q2, k, m).n_types()
    # with no role names the displayed core bound degenerates to 0, so never
    # claim full completeness below the pre-core bound plus the witness types
    bound = max(m_bound(t2, q2, k), m_bound(t2, q2, k) - core_bound(t2, q2, k) + precore_bound(t2, q2, k))
    meta = {
        "mode": m,
        "k": k,
        "cap": cap,
        "regime": "full" if cap >= bound else f"bounded (ABoxes with at most {max_individuals} individuals)",
        "max-individuals": max_individuals,
        "strategies": len(strategies),
        "type-form": type_form,
    }
    return Rewriting(phi, m, k, meta, tuple(strategies))


def encode_weighted_abox(abox, k: int, individuals: Iterable[str] = ()) -> Interpretation:
    """I_A with weight predicates: W[A,n] for weights n <= k, W[A,inf] for the
    rest, and likewise w[r,n] for role assertions."""
    abox = _abox_of(abox)
    base = abox_interpretation(abox, individuals)
    cs: dict = {c: set(v) for c, v in base.concepts.items()}
    rs: dict = {r: set(v) for r, v in base.roles.items()}

    def level(w) -> str:
        return str(w) if w is not INF and w <= k else "inf"

    for c in list(base.concepts):
        for n in list(range(1, k + 1)) + ["inf"]:
            cs.setdefault(f"W[{c},{n}]", set())
    for r in list(base.roles):
        for n in list(range(1, k + 1)) + ["inf"]:
            rs.setdefault(f"w[{r},{n}]", set())
    for a, w in abox:
        if isinstance(a, ConceptAssertion):
            cs[f"W[{a.concept},{level(w)}]"].add(a.ind)
        else:
            rs[f"w[{a.role},{level(w)}]"].add((a.subj, a.obj))
    return Interpretation(base.named, (), cs, rs)


def _check_weights(phi: F.Formula, k: int) -> None:
    for f in F.walk(phi):
        if isinstance(f, (F.FWConcept, F.FWRole)) and f.weight is not INF and f.weight > k:
            raise ValueError(f"weight predicate {f.predicate} does not fit k={k}")


def answer_rewritten(q_prime, abox, k: int, mode: str) -> bool:
    """Evaluate a rewriting on a weighted ABox.  Mode p returns the formula's
    value; mode c returns its negation (the formula detects countermodels)."""
    from .interp import fo_eval

    m = _mode(mode)
    phi = q_prime
    if isinstance(q_prime, Rewriting):
        if q_prime.k != k or q_prime.mode != m:
            raise ValueError(f"rewriting was built for k={q_prime.k}, mode {q_prime.mode}")
        phi = q_prime.formula
    _check_weights(phi, k)
    I = encode_weighted_abox(abox, k, F.constants(phi))
    unary, binary = F.predicates(phi)
    I = I.with_signature(unary, binary)
    value = fo_eval(I, phi)
    return value if m == "p" else not value


__all__ = [
    "ABoxType", "Strategy", "Rewriting", "RewriteContext", "abox_type", "rare_types", "core",
    "precore_bound", "core_bound", "m_bound", "safe_type", "check_safe", "enumerate_strategies",
    "build_strategy_query", "safe_type_query", "rewrite", "encode_weighted_abox",
    "answer_rewritten", "role_closure", "max_free_elements",
]
