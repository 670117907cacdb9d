"""Finite interpretations: concept extents, violations, cost, CQ and FO evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Union

from . import fo as F
from .kb import (
    CQ, INF, And, Bottom, CAtom, ConceptAssertion, ConceptInclusion, Exists, ExistsQ, Ind,
    Name, Nominal, Not, Or, RAtom, Role, RoleInclusion, Top, Var, Weight,
    WeightedKB,
)

Element = str
OneType = frozenset  # of concept names (str) and roles (Role) standing for "exists r"
ExtendedWeight = Weight


@dataclass(frozen=True)
class Interpretation:
    """A finite interpretation; named individuals interpret themselves."""

    named: tuple[Element, ...]
    anonymous: tuple[Element, ...] = ()
    concepts: Mapping[str, frozenset] = field(default_factory=dict)
    roles: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "named", tuple(self.named))
        object.__setattr__(self, "anonymous", tuple(self.anonymous))
        object.__setattr__(self, "concepts", {k: frozenset(v) for k, v in self.concepts.items()})
        object.__setattr__(self, "roles", {k: frozenset(v) for k, v in self.roles.items()})
        dom = set(self.named) | set(self.anonymous)
        if len(dom) != len(self.named) + len(self.anonymous):
            raise ValueError("domain elements must be distinct")
        for name, ext in self.concepts.items():
            if not ext <= dom:
                raise ValueError(f"extent of {name} leaves the domain")
        for name, ext in self.roles.items():
            for d, e in ext:
                if d not in dom or e not in dom:
                    raise ValueError(f"extent of {name} leaves the domain")

    @cached_property
    def domain(self) -> tuple[Element, ...]:
        return self.named + self.anonymous

    @cached_property
    def domain_set(self) -> frozenset:
        return frozenset(self.domain)

    def ext(self, concept: str) -> frozenset:
        return self.concepts.get(concept, frozenset())

    def pairs(self, role: Role | str) -> frozenset:
        if isinstance(role, str):
            return self.roles.get(role, frozenset())
        base = self.roles.get(role.name, frozenset())
        if role.inverted:
            return frozenset((e, d) for d, e in base)
        return base

    @cached_property
    def _succ(self) -> dict:
        out: dict = {}
        for name, ext in self.roles.items():
            fwd: dict = {}
            bwd: dict = {}
            for d, e in ext:
                fwd.setdefault(d, set()).add(e)
                bwd.setdefault(e, set()).add(d)
            out[Role(name)] = fwd
            out[Role(name, True)] = bwd
        return out

    def successors(self, d: Element, role: Role) -> set:
        return self._succ.get(role, {}).get(d, set())

    def restrict(self, keep: Iterable[Element]) -> Interpretation:
        keep = set(keep)
        return Interpretation(
            tuple(x for x in self.named if x in keep),
            tuple(x for x in self.anonymous if x in keep),
            {k: v & keep for k, v in self.concepts.items()},
            {k: frozenset(p for p in v if p[0] in keep and p[1] in keep) for k, v in self.roles.items()},
        )

    def with_signature(self, concepts: Iterable[str] = (), roles: Iterable[str] = ()) -> Interpretation:
        cs = dict(self.concepts)
        rs = dict(self.roles)
        for c in concepts:
            cs.setdefault(c, frozenset())
        for r in roles:
            rs.setdefault(r, frozenset())
        return Interpretation(self.named, self.anonymous, cs, rs)

    def with_named(self, extra: Iterable[Element]) -> Interpretation:
        have = self.domain_set
        add = tuple(x for x in dict.fromkeys(extra) if x not in have)
        if not add:
            return self
        return Interpretation(self.named + add, self.anonymous, self.concepts, self.roles)


def abox_interpretation(kb_or_abox, individuals: Iterable[str] = ()) -> Interpretation:
    """The interpretation I_A whose extents are exactly the ABox assertions."""
    abox = kb_or_abox.abox if isinstance(kb_or_abox, WeightedKB) else kb_or_abox
    named: dict = {}
    cs: dict = {}
    rs: dict = {}
    for a, _ in abox:
        if isinstance(a, ConceptAssertion):
            named.setdefault(a.ind)
            cs.setdefault(a.concept, set()).add(a.ind)
        else:
            named.setdefault(a.subj)
            named.setdefault(a.obj)
            rs.setdefault(a.role, set()).add((a.subj, a.obj))
    for x in individuals:
        named.setdefault(x)
    return Interpretation(tuple(named), (), cs, rs)


# ---------------------------------------------------------------- concepts


def eval_concept(I: Interpretation, c) -> frozenset:
    if isinstance(c, Top):
        return I.domain_set
    if isinstance(c, Bottom):
        return frozenset()
    if isinstance(c, Name):
        return I.ext(c.name)
    if isinstance(c, Nominal):
        if c.ind not in I.named:
            raise ValueError(f"unknown individual {c.ind!r} in nominal")
        return frozenset((c.ind,))
    if isinstance(c, Exists):
        return frozenset(d for d, _ in I.pairs(c.role))
    if isinstance(c, ExistsQ):
        filler = eval_concept(I, c.filler)
        return frozenset(d for d, e in I.pairs(c.role) if e in filler)
    if isinstance(c, Not):
        return I.domain_set - eval_concept(I, c.arg)
    if isinstance(c, And):
        return eval_concept(I, c.left) & eval_concept(I, c.right)
    if isinstance(c, Or):
        return eval_concept(I, c.left) | eval_concept(I, c.right)
    raise TypeError(f"not a concept: {c!r}")


# ---------------------------------------------------------------- violations and cost


@dataclass(frozen=True)
class ViolationReport:
    """Violations per TBox position and the set of violated assertions."""

    concept_inclusions: tuple[tuple[ConceptInclusion, Weight, frozenset], ...]
    role_inclusions: tuple[tuple[RoleInclusion, Weight, frozenset], ...]
    assertions: tuple[tuple[object, Weight], ...]

    def is_empty(self) -> bool:
        return (
            all(not s for _, _, s in self.concept_inclusions)
            and all(not s for _, _, s in self.role_inclusions)
            and not self.assertions
        )


def _check_individuals(kb: WeightedKB, I: Interpretation) -> None:
    named = set(I.named)
    for a, _ in kb.abox:
        inds = (a.ind,) if isinstance(a, ConceptAssertion) else (a.subj, a.obj)
        for x in inds:
            if x not in named:
                raise ValueError(f"individual {x!r} missing from the interpretation")


def violations(kb: WeightedKB, I: Interpretation) -> ViolationReport:
    _check_individuals(kb, I)
    cis = []
    ris = []
    for ax, w in kb.tbox:
        if isinstance(ax, ConceptInclusion):
            cis.append((ax, w, eval_concept(I, ax.lhs) - eval_concept(I, ax.rhs)))
        else:
            ris.append((ax, w, I.pairs(ax.lhs) - I.pairs(ax.rhs)))
    bad = []
    for a, w in kb.abox:
        if isinstance(a, ConceptAssertion):
            ok = a.ind in I.ext(a.concept)
        else:
            ok = (a.subj, a.obj) in I.pairs(a.role)
        if not ok:
            bad.append((a, w))
    return ViolationReport(tuple(cis), tuple(ris), tuple(bad))


def report_cost(rep: ViolationReport) -> ExtendedWeight:
    total = 0
    for _, w, s in rep.concept_inclusions + rep.role_inclusions:
        if s:
            if w is INF:
                return INF
            total += w * len(s)
    for _, w in rep.assertions:
        if w is INF:
            return INF
        total += w
    return total


def cost(kb: WeightedKB, I: Interpretation) -> ExtendedWeight:
    return report_cost(violations(kb, I))


def tbox_cost(tbox, I: Interpretation) -> ExtendedWeight:
    return cost(WeightedKB(tuple(tbox), ()), I)


# ---------------------------------------------------------------- 1-types


def one_type(I: Interpretation, d: Element, concepts: Iterable[str] | None = None,
             roles: Iterable[str] | None = None) -> OneType:
    if d not in I.domain_set:
        raise ValueError(f"{d!r} is not a domain element")
    cnames = I.concepts.keys() if concepts is None else concepts
    rnames = I.roles.keys() if roles is None else roles
    out: set = {A for A in cnames if d in I.ext(A)}
    for r in rnames:
        for role in (Role(r), Role(r, True)):
            if I.successors(d, role):
                out.add(role)
    return frozenset(out)


def type_key(t: OneType) -> tuple:
    """Deterministic sort key for a 1-type."""
    return tuple(sorted((0, x, False) if isinstance(x, str) else (1, x.name, x.inverted) for x in t))


def format_type(t: OneType) -> str:
    parts = []
    for kind, name, inv in type_key(t):
        parts.append(name if kind == 0 else f"exists {name}{'-' if inv else ''}")
    return "{" + ", ".join(parts) + "}"


# ---------------------------------------------------------------- conjunctive queries


def _atom_holds(I: Interpretation, atom, h: dict) -> bool:
    def val(t):
        return h[t] if isinstance(t, Var) else t.name

    if isinstance(atom, CAtom):
        return val(atom.term) in I.ext(atom.concept)
    return (val(atom.left), val(atom.right)) in I.pairs(atom.role)


def cq_homomorphisms(I: Interpretation, q: CQ, fixed: dict | None = None):
    """Yield every assignment of q's variables that maps all atoms into I."""
    for t in q.individuals():
        if t not in I.domain_set:
            raise ValueError(f"query individual {t!r} not in the interpretation")
    h: dict = dict(fixed or {})
    variables = [v for v in q.variables() if v not in h]
    # order atoms so each one is checked as soon as its variables are bound
    order: list[Var] = []
    for at in sorted(q.atoms, key=lambda a: isinstance(a, CAtom), reverse=False):
        for t in at.terms:
            if isinstance(t, Var) and t in variables and t not in order:
                order.append(t)
    for v in variables:
        if v not in order:
            order.append(v)
    checks: list[list] = [[] for _ in range(len(order) + 1)]
    pos = {v: i for i, v in enumerate(order)}
    for at in q.atoms:
        level = max((pos[t] + 1 for t in at.terms if isinstance(t, Var) and t in pos), default=0)
        checks[level].append(at)
    if not all(_atom_holds(I, at, h) for at in checks[0]):
        return

    def candidates(v: Var) -> Iterable:
        # use an already-bound neighbour to narrow the search
        for at in q.atoms:
            if isinstance(at, RAtom):
                if at.right == v and (isinstance(at.left, Ind) or at.left in h):
                    src = at.left.name if isinstance(at.left, Ind) else h[at.left]
                    return sorted(I.successors(src, Role(at.role)))
                if at.left == v and (isinstance(at.right, Ind) or at.right in h):
                    src = at.right.name if isinstance(at.right, Ind) else h[at.right]
                    return sorted(I.successors(src, Role(at.role, True)))
        for at in q.atoms:
            if isinstance(at, CAtom) and at.term == v:
                return sorted(I.ext(at.concept))
        return I.domain

    def go(i: int):
        if i == len(order):
            yield dict(h)
            return
        v = order[i]
        for d in candidates(v):
            h[v] = d
            if all(_atom_holds(I, at, h) for at in checks[i + 1]):
                yield from go(i + 1)
            del h[v]

    yield from go(0)


def cq_match(I: Interpretation, q: CQ) -> bool:
    if not q.boolean:
        raise ValueError("cq_match expects a Boolean CQ")
    for _ in cq_homomorphisms(I, q):
        return True
    return False


def cq_to_fo(q: CQ) -> F.Formula:
    """Standard FO translation of a Boolean CQ."""
    atoms = [
        F.FConcept(a.concept, a.term) if isinstance(a, CAtom) else F.FRole(a.role, a.left, a.right)
        for a in q.atoms
    ]
    body = F.FAnd(tuple(atoms)) if len(atoms) > 1 else (atoms[0] if atoms else F.TRUE)
    for v in reversed(q.existential()):
        body = F.FExists(v, body)
    return body


# ---------------------------------------------------------------- FO evaluation


class _Compiled:
    """Hash-consed DAG of a formula with per-node free variables.

    Structurally equal subformulas share one node, so the memo table in
    :func:`fo_eval` works across the disjuncts of large rewritings.
    """

    def __init__(self) -> None:
        self.ops: list[str] = []
        self.data: list = []
        self.kids: list[tuple[int, ...]] = []
        self.fv: list[tuple] = []
        self.table: dict = {}
        self.by_obj: dict = {}

    def node(self, op: str, data, kids: tuple[int, ...], fv: tuple) -> int:
        key = (op, data, kids)
        nid = self.table.get(key)
        if nid is None:
            nid = len(self.ops)
            self.table[key] = nid
            self.ops.append(op)
            self.data.append(data)
            self.kids.append(kids)
            self.fv.append(fv)
        return nid

    def _fv_union(self, kids, drop=None) -> tuple:
        seen: dict = {}
        for k in kids:
            for v in self.fv[k]:
                if v != drop:
                    seen.setdefault(v)
        return tuple(sorted(seen))

    def compile(self, phi: F.Formula) -> int:
        key = id(phi)
        hit = self.by_obj.get(key)
        if hit is not None and hit[0] is phi:
            return hit[1]
        nid = self._compile(phi)
        self.by_obj[key] = (phi, nid)
        return nid

    def _terms_fv(self, terms) -> tuple:
        return tuple(sorted({t for t in terms if isinstance(t, Var)}))

    def _compile(self, phi: F.Formula) -> int:
        if isinstance(phi, F.Truth):
            return self.node("T" if phi.value else "F", None, (), ())
        if isinstance(phi, F.FConcept):
            return self.node("c", (phi.name, phi.term), (), self._terms_fv((phi.term,)))
        if isinstance(phi, F.FWConcept):
            return self.node("c", (phi.predicate, phi.term), (), self._terms_fv((phi.term,)))
        if isinstance(phi, F.FRole):
            return self.node("r", (phi.name, phi.left, phi.right), (), self._terms_fv((phi.left, phi.right)))
        if isinstance(phi, F.FWRole):
            return self.node("r", (phi.predicate, phi.left, phi.right), (), self._terms_fv((phi.left, phi.right)))
        if isinstance(phi, F.FEq):
            return self.node("=", (phi.left, phi.right), (), self._terms_fv((phi.left, phi.right)))
        if isinstance(phi, F.FNot):
            k = self.compile(phi.arg)
            return self.node("!", None, (k,), self.fv[k])
        if isinstance(phi, (F.FAnd, F.FOr)):
            ks = [self.compile(a) for a in phi.args]
            # cheap conjuncts first; evaluation order never changes the value
            ks.sort(key=lambda k: (self.ops[k] not in "cr=TF", len(self.fv[k])))
            op = "&" if isinstance(phi, F.FAnd) else "|"
            return self.node(op, None, tuple(ks), self._fv_union(ks))
        if isinstance(phi, F.FImplies):
            a, b = self.compile(phi.left), self.compile(phi.right)
            return self.node(">", None, (a, b), self._fv_union((a, b)))
        if isinstance(phi, F.FIff):
            a, b = self.compile(phi.left), self.compile(phi.right)
            return self.node("=>", None, (a, b), self._fv_union((a, b)))
        body = self.compile(phi.body)
        v = phi.var
        if isinstance(phi, F.FExists):
            return self._exists(v, body)
        if isinstance(phi, F.FForall):
            return self.node("A", v, (body,), self._fv_union((body,), drop=v))
        return self.node("#", (phi.k, v), (body,), self._fv_union((body,), drop=v))

    def _exists(self, v: Var, body: int) -> int:
        # miniscoping: conjuncts that do not mention v move out of the quantifier
        if self.ops[body] == "&":
            inside = [k for k in self.kids[body] if v in self.fv[k]]
            outside = [k for k in self.kids[body] if v not in self.fv[k]]
            if outside:
                if not inside:
                    inner = self.node("E", v, (self.node("T", None, (), ()),), ())
                else:
                    ib = inside[0] if len(inside) == 1 else self.node("&", None, tuple(inside), self._fv_union(inside))
                    inner = self._exists(v, ib)
                ks = outside + [inner]
                return self.node("&", None, tuple(ks), self._fv_union(ks))
        return self.node("E", v, (body,), self._fv_union((body,), drop=v))


def fo_eval(I: Interpretation, phi: F.Formula, strict: bool = True) -> bool:
    """Evaluate a closed formula; ``strict`` rejects predicates unknown to ``I``."""
    free = F.free_vars(phi)
    if free:
        raise ValueError(f"formula has free variables: {', '.join(v.name for v in free)}")
    unary, binary = F.predicates(phi)
    if strict:
        missing = sorted((unary - set(I.concepts)) | (binary - set(I.roles)))
        if missing:
            raise ValueError(f"unknown predicate(s): {', '.join(missing)}")
    for c in F.constants(phi):
        if c not in I.domain_set:
            raise ValueError(f"unknown individual {c!r}")
    comp = _Compiled()
    root = comp.compile(phi)
    return _Evaluator(I, comp).eval(root, {})


class _Evaluator:
    def __init__(self, I: Interpretation, comp: _Compiled):
        self.I = I
        self.c = comp
        self.domain = I.domain
        self.memo: dict = {}
        self.cext = {k: v for k, v in I.concepts.items()}
        self.rext = {k: v for k, v in I.roles.items()}

    def eval(self, nid: int, env: dict) -> bool:
        c = self.c
        op = c.ops[nid]
        if op in "cr=TF":
            if op == "T":
                return True
            if op == "F":
                return False
            data = c.data[nid]
            if op == "c":
                t = data[1]
                x = env[t] if isinstance(t, Var) else t.name
                return x in self.cext.get(data[0], ())
            if op == "r":
                a, b = data[1], data[2]
                x = env[a] if isinstance(a, Var) else a.name
                y = env[b] if isinstance(b, Var) else b.name
                return (x, y) in self.rext.get(data[0], ())
            a, b = data
            x = env[a] if isinstance(a, Var) else a.name
            y = env[b] if isinstance(b, Var) else b.name
            return x == y
        fv = c.fv[nid]
        key = (nid,) + tuple(env[v] for v in fv)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        kids = c.kids[nid]
        if op == "!":
            res = not self.eval(kids[0], env)
        elif op == "&":
            res = True
            for k in kids:
                if not self.eval(k, env):
                    res = False
                    break
        elif op == "|":
            res = False
            for k in kids:
                if self.eval(k, env):
                    res = True
                    break
        elif op == ">":
            res = (not self.eval(kids[0], env)) or self.eval(kids[1], env)
        elif op == "=>":
            res = self.eval(kids[0], env) == self.eval(kids[1], env)
        else:
            v = c.data[nid] if op != "#" else c.data[nid][1]
            old = env.get(v, _UNSET)
            body = kids[0]
            if op == "E":
                res = False
                for d in self.domain:
                    env[v] = d
                    if self.eval(body, env):
                        res = True
                        break
            elif op == "A":
                res = True
                for d in self.domain:
                    env[v] = d
                    if not self.eval(body, env):
                        res = False
                        break
            else:
                k = c.data[nid][0]
                n = 0
                res = False
                for d in self.domain:
                    env[v] = d
                    if self.eval(body, env):
                        n += 1
                        if n > k:
                            res = True
                            break
            if old is _UNSET:
                env.pop(v, None)
            else:
                env[v] = old
        self.memo[key] = res
        return res


_UNSET = object()


def fo_eval_naive(I: Interpretation, phi: F.Formula, env: dict | None = None) -> bool:
    """Direct recursive evaluation without compilation; used as a cross-check."""
    env = dict(env or {})

    def t(x):
        return env[x] if isinstance(x, Var) else x.name

    if isinstance(phi, F.Truth):
        return phi.value
    if isinstance(phi, F.FConcept):
        return t(phi.term) in I.ext(phi.name)
    if isinstance(phi, F.FWConcept):
        return t(phi.term) in I.ext(phi.predicate)
    if isinstance(phi, F.FRole):
        return (t(phi.left), t(phi.right)) in I.pairs(phi.name)
    if isinstance(phi, F.FWRole):
        return (t(phi.left), t(phi.right)) in I.pairs(phi.predicate)
    if isinstance(phi, F.FEq):
        return t(phi.left) == t(phi.right)
    if isinstance(phi, F.FNot):
        return not fo_eval_naive(I, phi.arg, env)
    if isinstance(phi, F.FAnd):
        return all(fo_eval_naive(I, a, env) for a in phi.args)
    if isinstance(phi, F.FOr):
        return any(fo_eval_naive(I, a, env) for a in phi.args)
    if isinstance(phi, F.FImplies):
        return (not fo_eval_naive(I, phi.left, env)) or fo_eval_naive(I, phi.right, env)
    if isinstance(phi, F.FIff):
        return fo_eval_naive(I, phi.left, env) == fo_eval_naive(I, phi.right, env)
    vals = [fo_eval_naive(I, phi.body, {**env, phi.var: d}) for d in I.domain]
    if isinstance(phi, F.FExists):
        return any(vals)
    if isinstance(phi, F.FForall):
        return all(vals)
    return sum(vals) > phi.k


Formula = F.Formula
AnyAtom = Union[CAtom, RAtom]
