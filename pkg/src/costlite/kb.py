"""Weighted knowledge bases, concepts, queries and dialect checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union


class Infinite:
    """The weight that can never be paid."""

    _instance: "Infinite | None" = None

    def __new__(cls) -> "Infinite":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __hash__(self) -> int:
        return hash("costlite.INF")

    def __eq__(self, other: object) -> bool:
        return other is self

    def __lt__(self, other: object) -> bool:
        if other is self or isinstance(other, int):
            return False
        return NotImplemented

    def __le__(self, other: object) -> bool:
        if other is self:
            return True
        if isinstance(other, int):
            return False
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if other is self:
            return False
        if isinstance(other, int):
            return True
        return NotImplemented

    def __ge__(self, other: object) -> bool:
        if other is self or isinstance(other, int):
            return True
        return NotImplemented

    def __add__(self, other: object) -> "Infinite":
        if other is self or isinstance(other, int):
            return self
        return NotImplemented

    __radd__ = __add__

    def __reduce__(self):
        return (Infinite, ())


INF = Infinite()
Weight = Union[int, Infinite]


def add_weights(a: Weight, b: Weight) -> Weight:
    if a is INF or b is INF:
        return INF
    return a + b


def weight_str(w: Weight) -> str:
    return "inf" if w is INF else str(w)


# ---------------------------------------------------------------- roles


@dataclass(frozen=True, order=True)
class Role:
    name: str
    inverted: bool = False

    def inv(self) -> Role:
        return Role(self.name, not self.inverted)

    def __str__(self) -> str:
        return self.name + ("-" if self.inverted else "")


# ---------------------------------------------------------------- concepts


@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "top"


@dataclass(frozen=True)
class Bottom:
    def __str__(self) -> str:
        return "bot"


@dataclass(frozen=True)
class Name:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Nominal:
    ind: str

    def __str__(self) -> str:
        return "{" + self.ind + "}"


@dataclass(frozen=True)
class Exists:
    """Unqualified existential restriction, the DL-Lite basic concept."""

    role: Role

    def __str__(self) -> str:
        return f"exists {self.role}"


@dataclass(frozen=True)
class ExistsQ:
    role: Role
    filler: "Concept"

    def __str__(self) -> str:
        return f"exists {self.role} . {self.filler}"


@dataclass(frozen=True)
class Not:
    arg: "Concept"

    def __str__(self) -> str:
        return f"not {self.arg}"


@dataclass(frozen=True)
class And:
    left: "Concept"
    right: "Concept"

    def __str__(self) -> str:
        return f"({self.left} and {self.right})"


@dataclass(frozen=True)
class Or:
    left: "Concept"
    right: "Concept"

    def __str__(self) -> str:
        return f"({self.left} or {self.right})"


Concept = Union[Top, Bottom, Name, Nominal, Exists, ExistsQ, Not, And, Or]

TOP = Top()
BOTTOM = Bottom()


def conj(*parts: Concept) -> Concept:
    """Left-nested conjunction; the empty conjunction is top."""
    if not parts:
        return TOP
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Concept) -> Concept:
    if not parts:
        return BOTTOM
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def subconcepts(c: Concept) -> Iterator[Concept]:
    yield c
    if isinstance(c, ExistsQ):
        yield from subconcepts(c.filler)
    elif isinstance(c, Not):
        yield from subconcepts(c.arg)
    elif isinstance(c, (And, Or)):
        yield from subconcepts(c.left)
        yield from subconcepts(c.right)


# ---------------------------------------------------------------- axioms


@dataclass(frozen=True)
class ConceptInclusion:
    lhs: Concept
    rhs: Concept

    def __str__(self) -> str:
        return f"{self.lhs} [= {self.rhs}"


@dataclass(frozen=True)
class RoleInclusion:
    lhs: Role
    rhs: Role

    def __str__(self) -> str:
        return f"{self.lhs} [= {self.rhs}"


Axiom = Union[ConceptInclusion, RoleInclusion]


@dataclass(frozen=True, order=True)
class ConceptAssertion:
    concept: str
    ind: str

    def __str__(self) -> str:
        return f"{self.concept}({self.ind})"


@dataclass(frozen=True, order=True)
class RoleAssertion:
    role: str
    subj: str
    obj: str

    def __str__(self) -> str:
        return f"{self.role}({self.subj},{self.obj})"


Assertion = Union[ConceptAssertion, RoleAssertion]


@dataclass(frozen=True)
class WeightedKB:
    tbox: tuple[tuple[Axiom, Weight], ...] = ()
    abox: tuple[tuple[Assertion, Weight], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "tbox", tuple(self.tbox))
        object.__setattr__(self, "abox", tuple(self.abox))

    def concept_inclusions(self) -> list[tuple[ConceptInclusion, Weight]]:
        return [(ax, w) for ax, w in self.tbox if isinstance(ax, ConceptInclusion)]

    def role_inclusions(self) -> list[tuple[RoleInclusion, Weight]]:
        return [(ax, w) for ax, w in self.tbox if isinstance(ax, RoleInclusion)]

    def individuals(self) -> list[str]:
        seen: dict[str, None] = {}
        for a, _ in self.abox:
            if isinstance(a, ConceptAssertion):
                seen.setdefault(a.ind)
            else:
                seen.setdefault(a.subj)
                seen.setdefault(a.obj)
        for ax, _ in self.tbox:
            if isinstance(ax, ConceptInclusion):
                for side in (ax.lhs, ax.rhs):
                    for c in subconcepts(side):
                        if isinstance(c, Nominal):
                            seen.setdefault(c.ind)
        return list(seen)

    def concept_names(self) -> list[str]:
        return tbox_concept_names(self.tbox, self.abox)

    def role_names(self) -> list[str]:
        return tbox_role_names(self.tbox, self.abox)

    def with_abox(self, abox: Iterable[tuple[Assertion, Weight]]) -> WeightedKB:
        return WeightedKB(self.tbox, tuple(abox))

    def with_tbox(self, tbox: Iterable[tuple[Axiom, Weight]]) -> WeightedKB:
        return WeightedKB(tuple(tbox), self.abox)


def tbox_concept_names(tbox, abox=()) -> list[str]:
    seen: dict[str, None] = {}
    for ax, _ in tbox:
        if isinstance(ax, ConceptInclusion):
            for side in (ax.lhs, ax.rhs):
                for c in subconcepts(side):
                    if isinstance(c, Name):
                        seen.setdefault(c.name)
    for a, _ in abox:
        if isinstance(a, ConceptAssertion):
            seen.setdefault(a.concept)
    return list(seen)


def tbox_role_names(tbox, abox=()) -> list[str]:
    seen: dict[str, None] = {}
    for ax, _ in tbox:
        if isinstance(ax, RoleInclusion):
            seen.setdefault(ax.lhs.name)
            seen.setdefault(ax.rhs.name)
        else:
            for side in (ax.lhs, ax.rhs):
                for c in subconcepts(side):
                    if isinstance(c, (Exists, ExistsQ)):
                        seen.setdefault(c.role.name)
    for a, _ in abox:
        if isinstance(a, RoleAssertion):
            seen.setdefault(a.role)
    return list(seen)


# ---------------------------------------------------------------- queries


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Ind:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[Var, Ind]


@dataclass(frozen=True)
class CAtom:
    concept: str
    term: Term

    def __str__(self) -> str:
        return f"{self.concept}({self.term})"

    @property
    def terms(self) -> tuple[Term, ...]:
        return (self.term,)


@dataclass(frozen=True)
class RAtom:
    role: str
    left: Term
    right: Term

    def __str__(self) -> str:
        return f"{self.role}({self.left},{self.right})"

    @property
    def terms(self) -> tuple[Term, ...]:
        return (self.left, self.right)


QAtom = Union[CAtom, RAtom]


@dataclass(frozen=True)
class CQ:
    """A conjunctive query; variables not listed as free are existential."""

    free: tuple[Var, ...] = ()
    atoms: tuple[QAtom, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "free", tuple(self.free))
        object.__setattr__(self, "atoms", tuple(self.atoms))

    @property
    def boolean(self) -> bool:
        return not self.free

    def variables(self) -> list[Var]:
        seen: dict[Var, None] = {v: None for v in self.free}
        for at in self.atoms:
            for t in at.terms:
                if isinstance(t, Var):
                    seen.setdefault(t)
        return list(seen)

    def existential(self) -> list[Var]:
        free = set(self.free)
        return [v for v in self.variables() if v not in free]

    def individuals(self) -> list[str]:
        seen: dict[str, None] = {}
        for at in self.atoms:
            for t in at.terms:
                if isinstance(t, Ind):
                    seen.setdefault(t.name)
        return list(seen)

    def concept_names(self) -> list[str]:
        return list(dict.fromkeys(a.concept for a in self.atoms if isinstance(a, CAtom)))

    def role_names(self) -> list[str]:
        return list(dict.fromkeys(a.role for a in self.atoms if isinstance(a, RAtom)))

    def is_iq(self) -> bool:
        return len(self.atoms) == 1

    def _graph_edges(self) -> list[tuple[Term, Term]]:
        return [(a.left, a.right) for a in self.atoms if isinstance(a, RAtom)]

    def is_connected(self) -> bool:
        terms = {t for a in self.atoms for t in a.terms}
        if len(terms) <= 1:
            return True
        parent = {t: t for t in terms}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self._graph_edges():
            parent[find(a)] = find(b)
        return len({find(t) for t in terms}) == 1

    def is_acyclic(self) -> bool:
        parent: dict[Term, Term] = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        seen_edges = set()
        for a, b in self._graph_edges():
            key = frozenset((a, b))
            if key in seen_edges or a == b:
                return False
            seen_edges.add(key)
            ra, rb = find(a), find(b)
            if ra == rb:
                return False
            parent[ra] = rb
        return True

    def __str__(self) -> str:
        head = "cq[" + ",".join(v.name for v in self.free) + "]:"
        ex = self.existential()
        body = ", ".join(str(a) for a in self.atoms)
        if ex:
            return f"{head} exists {','.join(v.name for v in ex)} . {body}"
        return f"{head} {body}" if body else head


# ---------------------------------------------------------------- dialects

DIALECTS = (
    "DL-Lite_core",
    "DL-Lite_core^H",
    "DL-Lite_bool",
    "DL-Lite_bool^H",
    "EL",
    "EL_bot",
    "ALCHIO",
    "invalid",
)

DL_LITE = frozenset(DIALECTS[:4])


@dataclass(frozen=True)
class DialectReport:
    dialect: str
    diagnostics: tuple[str, ...] = field(default_factory=tuple)

    @property
    def valid(self) -> bool:
        return self.dialect != "invalid"

    @property
    def dl_lite(self) -> bool:
        return self.dialect in DL_LITE


def _is_basic(c: Concept) -> bool:
    return isinstance(c, (Name, Exists))


def _is_bool(c: Concept) -> bool:
    if isinstance(c, (Name, Exists, Top, Bottom)):
        return True
    if isinstance(c, Not):
        return _is_bool(c.arg)
    if isinstance(c, (And, Or)):
        return _is_bool(c.left) and _is_bool(c.right)
    return False


def _is_el(c: Concept, bottom: bool) -> bool:
    if isinstance(c, (Top, Name)):
        return True
    if isinstance(c, Bottom):
        return bottom
    if isinstance(c, Exists):
        return not c.role.inverted
    if isinstance(c, ExistsQ):
        return not c.role.inverted and _is_el(c.filler, bottom)
    if isinstance(c, And):
        return _is_el(c.left, bottom) and _is_el(c.right, bottom)
    return False


def _core_ci(ax: ConceptInclusion) -> bool:
    lhs, rhs = ax.lhs, ax.rhs
    if _is_basic(lhs) and (_is_basic(rhs) or isinstance(rhs, Bottom)):
        return True
    if _is_basic(lhs) and isinstance(rhs, Not) and _is_basic(rhs.arg):
        return True
    return (
        isinstance(lhs, And)
        and _is_basic(lhs.left)
        and _is_basic(lhs.right)
        and isinstance(rhs, Bottom)
    )


def validate_kb(kb: WeightedKB) -> DialectReport:
    diags: list[str] = []
    seen_ax: set = set()
    for ax, w in kb.tbox:
        if not isinstance(ax, (ConceptInclusion, RoleInclusion)):
            diags.append(f"not an axiom: {ax!r}")
            continue
        if not (w is INF or (isinstance(w, int) and not isinstance(w, bool))):
            diags.append(f"bad weight {w!r} on {ax}")
        elif w is not INF and w <= 0:
            diags.append(f"non-positive weight {w} on {ax}")
        if ax in seen_ax:
            diags.append(f"duplicate axiom {ax}")
        seen_ax.add(ax)
    seen_as: set = set()
    for a, w in kb.abox:
        if not isinstance(a, (ConceptAssertion, RoleAssertion)):
            diags.append(f"not an assertion: {a!r}")
            continue
        if not (w is INF or (isinstance(w, int) and not isinstance(w, bool))):
            diags.append(f"bad weight {w!r} on {a}")
        elif w is not INF and w <= 0:
            diags.append(f"non-positive weight {w} on {a}")
        if a in seen_as:
            diags.append(f"duplicate assertion {a}")
        seen_as.add(a)
    if diags:
        return DialectReport("invalid", tuple(diags))

    cis = [ax for ax, _ in kb.tbox if isinstance(ax, ConceptInclusion)]
    has_ri = any(isinstance(ax, RoleInclusion) for ax, _ in kb.tbox)
    if all(_core_ci(ax) for ax in cis):
        return DialectReport("DL-Lite_core^H" if has_ri else "DL-Lite_core")
    if all(_is_bool(ax.lhs) and _is_bool(ax.rhs) for ax in cis):
        return DialectReport("DL-Lite_bool^H" if has_ri else "DL-Lite_bool")
    if not has_ri:
        if all(_is_el(ax.lhs, False) and _is_el(ax.rhs, False) for ax in cis):
            return DialectReport("EL")
        if all(_is_el(ax.lhs, True) and _is_el(ax.rhs, True) for ax in cis):
            return DialectReport("EL_bot")
    return DialectReport("ALCHIO")


# ---------------------------------------------------------------- IQ normalization


def fresh_name(base: str, taken: set[str]) -> str:
    if base not in taken:
        return base
    i = 0
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def _names_of(tbox, q: CQ) -> set[str]:
    taken = set(tbox_concept_names(tbox)) | set(tbox_role_names(tbox))
    taken |= set(q.concept_names()) | set(q.role_names()) | set(q.individuals())
    for ax, _ in tbox:
        if isinstance(ax, ConceptInclusion):
            for side in (ax.lhs, ax.rhs):
                for c in subconcepts(side):
                    if isinstance(c, Nominal):
                        taken.add(c.ind)
    return taken


def normalize_iq(tbox, q: CQ):
    """Turn a Boolean IQ into a concept IQ (or leave ``r(a,b)`` alone).

    Returns the extended TBox (a tuple of weighted axioms) and the new query.
    """
    tbox = tuple(tbox)
    if not q.boolean or len(q.atoms) != 1:
        raise ValueError(f"not a Boolean IQ: {q}")
    (atom,) = q.atoms
    if isinstance(atom, CAtom):
        return tbox, q
    left, right = atom.left, atom.right
    if isinstance(left, Ind) and isinstance(right, Ind):
        return tbox, q
    if isinstance(left, Var) and isinstance(right, Var) and left == right:
        raise ValueError(f"not an IQ shape: {q}")
    if isinstance(left, Ind):
        role, target = Role(atom.role), left
    elif isinstance(right, Ind):
        role, target = Role(atom.role, True), right
    else:
        role, target = Role(atom.role), None
    b = fresh_name("B_" + atom.role + ("_inv" if role.inverted else ""), _names_of(tbox, q))
    extra = (
        (ConceptInclusion(Exists(role), Name(b)), INF),
        (ConceptInclusion(Name(b), Exists(role)), INF),
    )
    term = target if target is not None else left
    return tbox + extra, CQ((), (CAtom(b, term),))


# ---------------------------------------------------------------- role hierarchy


def all_roles(names: Iterable[str]) -> list[Role]:
    """N_R^± over the given role names, in a fixed order."""
    out: list[Role] = []
    for r in names:
        out.append(Role(r))
        out.append(Role(r, True))
    return out


def role_closure(tbox) -> frozenset[tuple[Role, Role]]:
    """Reflexive-transitive closure of the TBox RIs, closed under inverses.

    Weights are ignored: the relation is purely syntactic.
    """
    roles = all_roles(tbox_role_names(tbox))
    edges: dict[Role, set[Role]] = {r: set() for r in roles}
    for ax, _ in tbox:
        if isinstance(ax, RoleInclusion):
            edges[ax.lhs].add(ax.rhs)
            edges[ax.lhs.inv()].add(ax.rhs.inv())
    out: set[tuple[Role, Role]] = set()
    for r in roles:
        seen = {r}
        stack = [r]
        while stack:
            x = stack.pop()
            for y in edges[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.update((r, s) for s in seen)
    return frozenset(out)


def polarity_roles(tbox) -> tuple[set[Role], set[Role]]:
    """Roles r whose existential ``exists r`` (plain or qualified) occurs
    positively, resp. negatively, in the clause form ``not C or D`` of some CI."""
    pos: set[Role] = set()
    neg: set[Role] = set()

    def go(c: Concept, positive: bool) -> None:
        if isinstance(c, (Exists, ExistsQ)):
            (pos if positive else neg).add(c.role)
            if isinstance(c, ExistsQ):
                go(c.filler, positive)
        elif isinstance(c, Not):
            go(c.arg, not positive)
        elif isinstance(c, (And, Or)):
            go(c.left, positive)
            go(c.right, positive)

    for ax, _ in tbox:
        if isinstance(ax, ConceptInclusion):
            go(ax.lhs, False)
            go(ax.rhs, True)
    return pos, neg
