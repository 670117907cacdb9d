"""First-order formulas with equality, weight atoms and counting quantifiers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .kb import INF, Ind, Term, Var, Weight, weight_str


@dataclass(frozen=True)
class Truth:
    value: bool


@dataclass(frozen=True)
class FConcept:
    name: str
    term: Term


@dataclass(frozen=True)
class FRole:
    name: str
    left: Term
    right: Term


@dataclass(frozen=True)
class FWConcept:
    """``W[A,n](t)``: the ABox asserts ``A(t)`` with weight ``n``."""

    name: str
    weight: Weight
    term: Term

    @property
    def predicate(self) -> str:
        return f"W[{self.name},{weight_str(self.weight)}]"


@dataclass(frozen=True)
class FWRole:
    name: str
    weight: Weight
    left: Term
    right: Term

    @property
    def predicate(self) -> str:
        return f"w[{self.name},{weight_str(self.weight)}]"


@dataclass(frozen=True)
class FEq:
    left: Term
    right: Term


@dataclass(frozen=True)
class FNot:
    arg: "Formula"


@dataclass(frozen=True)
class FAnd:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class FOr:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class FImplies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class FIff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class FExists:
    var: Var
    body: "Formula"


@dataclass(frozen=True)
class FForall:
    var: Var
    body: "Formula"


@dataclass(frozen=True)
class FCount:
    """``exists>k v. body``: more than ``k`` elements satisfy the body."""

    k: int
    var: Var
    body: "Formula"


Formula = Union[
    Truth, FConcept, FRole, FWConcept, FWRole, FEq,
    FNot, FAnd, FOr, FImplies, FIff, FExists, FForall, FCount,
]

TRUE = Truth(True)
FALSE = Truth(False)

ATOMS = (Truth, FConcept, FRole, FWConcept, FWRole, FEq)
QUANTIFIERS = (FExists, FForall, FCount)


def terms_of(phi: Formula) -> tuple[Term, ...]:
    if isinstance(phi, (FConcept, FWConcept)):
        return (phi.term,)
    if isinstance(phi, (FRole, FWRole, FEq)):
        return (phi.left, phi.right)
    return ()


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, FNot):
        return (phi.arg,)
    if isinstance(phi, (FAnd, FOr)):
        return phi.args
    if isinstance(phi, (FImplies, FIff)):
        return (phi.left, phi.right)
    if isinstance(phi, QUANTIFIERS):
        return (phi.body,)
    return ()


def free_vars(phi: Formula) -> list[Var]:
    """Free variables in order of first occurrence."""
    out: dict[Var, None] = {}

    def walk(f: Formula, bound: frozenset) -> None:
        if isinstance(f, QUANTIFIERS):
            walk(f.body, bound | {f.var})
            return
        for t in terms_of(f):
            if isinstance(t, Var) and t not in bound:
                out.setdefault(t)
        for c in children(f):
            walk(c, bound)

    walk(phi, frozenset())
    return list(out)


def constants(phi: Formula) -> list[str]:
    out: dict[str, None] = {}
    for f in walk(phi):
        for t in terms_of(f):
            if isinstance(t, Ind):
                out.setdefault(t.name)
    return list(out)


def walk(phi: Formula) -> Iterator[Formula]:
    stack = [phi]
    while stack:
        f = stack.pop()
        yield f
        stack.extend(reversed(children(f)))


def predicates(phi: Formula) -> tuple[set[str], set[str]]:
    """Concept-like and role-like predicate names used in ``phi``."""
    unary: set[str] = set()
    binary: set[str] = set()
    for f in walk(phi):
        if isinstance(f, FConcept):
            unary.add(f.name)
        elif isinstance(f, FWConcept):
            unary.add(f.predicate)
        elif isinstance(f, FRole):
            binary.add(f.name)
        elif isinstance(f, FWRole):
            binary.add(f.predicate)
    return unary, binary


def size(phi: Formula) -> int:
    return sum(1 for _ in walk(phi))


# ---------------------------------------------------------------- smart constructors


def mk_not(a: Formula) -> Formula:
    if isinstance(a, Truth):
        return Truth(not a.value)
    if isinstance(a, FNot):
        return a.arg
    return FNot(a)


def mk_and(*args: Formula) -> Formula:
    flat: list[Formula] = []
    for a in args:
        if isinstance(a, Truth):
            if not a.value:
                return FALSE
            continue
        if isinstance(a, FAnd):
            flat.extend(a.args)
        else:
            flat.append(a)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return FAnd(tuple(flat))


def mk_or(*args: Formula) -> Formula:
    flat: list[Formula] = []
    for a in args:
        if isinstance(a, Truth):
            if a.value:
                return TRUE
            continue
        if isinstance(a, FOr):
            flat.extend(a.args)
        else:
            flat.append(a)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return FOr(tuple(flat))


def mk_implies(a: Formula, b: Formula) -> Formula:
    if isinstance(a, Truth):
        return b if a.value else TRUE
    if isinstance(b, Truth):
        return TRUE if b.value else mk_not(a)
    return FImplies(a, b)


def mk_iff(a: Formula, b: Formula) -> Formula:
    if isinstance(b, Truth):
        return a if b.value else mk_not(a)
    if isinstance(a, Truth):
        return b if a.value else mk_not(b)
    return FIff(a, b)


def mk_exists(vs, body: Formula) -> Formula:
    if isinstance(vs, Var):
        vs = [vs]
    for v in reversed(list(vs)):
        if isinstance(body, Truth) and not body.value:
            return FALSE
        body = FExists(v, body)
    return body


def mk_forall(vs, body: Formula) -> Formula:
    if isinstance(vs, Var):
        vs = [vs]
    for v in reversed(list(vs)):
        if isinstance(body, Truth) and body.value:
            return TRUE
        body = FForall(v, body)
    return body


def simplify(phi: Formula) -> Formula:
    """Fold truth constants bottom-up (``p & true``, ``p | false``, ``false -> p``, ...)."""
    if isinstance(phi, ATOMS):
        return phi
    if isinstance(phi, FNot):
        arg = simplify(phi.arg)
        return Truth(not arg.value) if isinstance(arg, Truth) else FNot(arg)
    if isinstance(phi, FAnd):
        parts = [simplify(a) for a in phi.args]
        if any(isinstance(p, Truth) for p in parts):
            return mk_and(*parts)
        return FAnd(tuple(parts))
    if isinstance(phi, FOr):
        parts = [simplify(a) for a in phi.args]
        if any(isinstance(p, Truth) for p in parts):
            return mk_or(*parts)
        return FOr(tuple(parts))
    if isinstance(phi, FImplies):
        return mk_implies(simplify(phi.left), simplify(phi.right))
    if isinstance(phi, FIff):
        return mk_iff(simplify(phi.left), simplify(phi.right))
    body = simplify(phi.body)
    if isinstance(phi, FCount):
        if isinstance(body, Truth) and not body.value:
            return FALSE
        return FCount(phi.k, phi.var, body)
    if isinstance(phi, FExists):
        return FALSE if body == FALSE else FExists(phi.var, body)
    return TRUE if body == TRUE else FForall(phi.var, body)


def rename(phi: Formula, mapping: dict[Var, Term]) -> Formula:
    """Capture-naive substitution of free variables (callers keep names disjoint)."""

    def t(x: Term) -> Term:
        return mapping.get(x, x) if isinstance(x, Var) else x

    def go(f: Formula, shadow: frozenset) -> Formula:
        if isinstance(f, Truth):
            return f

        def tt(x: Term) -> Term:
            return x if x in shadow else t(x)

        if isinstance(f, FConcept):
            return FConcept(f.name, tt(f.term))
        if isinstance(f, FWConcept):
            return FWConcept(f.name, f.weight, tt(f.term))
        if isinstance(f, FRole):
            return FRole(f.name, tt(f.left), tt(f.right))
        if isinstance(f, FWRole):
            return FWRole(f.name, f.weight, tt(f.left), tt(f.right))
        if isinstance(f, FEq):
            return FEq(tt(f.left), tt(f.right))
        if isinstance(f, FNot):
            return FNot(go(f.arg, shadow))
        if isinstance(f, FAnd):
            return FAnd(tuple(go(a, shadow) for a in f.args))
        if isinstance(f, FOr):
            return FOr(tuple(go(a, shadow) for a in f.args))
        if isinstance(f, FImplies):
            return FImplies(go(f.left, shadow), go(f.right, shadow))
        if isinstance(f, FIff):
            return FIff(go(f.left, shadow), go(f.right, shadow))
        inner = go(f.body, shadow | {f.var})
        return type(f)(f.k, f.var, inner) if isinstance(f, FCount) else type(f)(f.var, inner)

    return go(phi, frozenset())


__all__ = [
    "Truth", "FConcept", "FRole", "FWConcept", "FWRole", "FEq", "FNot", "FAnd", "FOr",
    "FImplies", "FIff", "FExists", "FForall", "FCount", "Formula", "TRUE", "FALSE", "INF",
    "free_vars", "constants", "predicates", "walk", "children", "terms_of", "size",
    "mk_not", "mk_and", "mk_or", "mk_implies", "mk_iff", "mk_exists", "mk_forall",
    "simplify", "rename",
]
