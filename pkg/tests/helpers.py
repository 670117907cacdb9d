"""Shared generators for the tests."""

import random

from costlite import fo as F
from costlite.interp import Interpretation
from costlite.kb import INF, Ind, Var

CONCEPTS = ("A", "B")
ROLES = ("r", "s")


def random_interpretation(rng: random.Random, named=("a", "b"), n_anon=None) -> Interpretation:
    n_anon = rng.randint(0, 2) if n_anon is None else n_anon
    anon = tuple(f"_e{i}" for i in range(n_anon))
    dom = tuple(named) + anon
    cs = {c: {d for d in dom if rng.random() < 0.4} for c in CONCEPTS}
    rs = {r: {(d, e) for d in dom for e in dom if rng.random() < 0.25} for r in ROLES}
    cs["W[A,1]"] = {d for d in named if rng.random() < 0.3}
    rs["w[r,inf]"] = {(d, e) for d in named for e in named if rng.random() < 0.3}
    return Interpretation(tuple(named), anon, cs, rs)


def random_formula(rng: random.Random, depth: int, bound: tuple, consts=("a", "b")) -> F.Formula:
    terms = [*bound, *(Ind(c) for c in consts)]

    def t():
        return rng.choice(terms)

    if depth == 0 or rng.random() < 0.25:
        kind = rng.randrange(6)
        if kind == 0:
            return F.FConcept(rng.choice(CONCEPTS), t())
        if kind == 1:
            return F.FRole(rng.choice(ROLES), t(), t())
        if kind == 2:
            return F.FEq(t(), t())
        if kind == 3:
            return F.FWConcept("A", 1, t())
        if kind == 4:
            return F.FWRole("r", INF, t(), t())
        return F.Truth(rng.random() < 0.5)
    kind = rng.randrange(9)
    sub = lambda b=bound: random_formula(rng, depth - 1, b, consts)  # noqa: E731
    if kind == 0:
        return F.FNot(sub())
    if kind == 1:
        return F.FAnd((sub(), sub()))
    if kind == 2:
        return F.FOr((sub(), sub()))
    if kind == 3:
        return F.FImplies(sub(), sub())
    if kind == 4:
        return F.FIff(sub(), sub())
    v = Var(f"x{len(bound)}")
    body = sub(bound + (v,))
    if kind in (5, 6):
        return F.FExists(v, body)
    if kind == 7:
        return F.FForall(v, body)
    return F.FCount(rng.randint(0, 2), v, body)
