"""Pseudo-random weighted KBs and queries for cross-validation runs.

All generators take a ``random.Random`` so that runs are reproducible from a
seed.  The defaults match the desk-scale regime used by ``oracle-check``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .kb import (
    CQ, INF, And, CAtom, ConceptAssertion, ConceptInclusion, Exists, Ind, Name, Not, Or,
    RAtom, Role, RoleAssertion, RoleInclusion, Var, WeightedKB,
)


@dataclass(frozen=True)
class HarnessParams:
    max_individuals: int = 4
    concepts: tuple[str, ...] = ("A", "B")
    roles: tuple[str, ...] = ("r",)
    weights: tuple = (1, 2, INF)
    max_cis: int = 3
    max_ris: int = 1
    max_assertions: int = 5
    ks: tuple[int, ...] = (1, 2)
    max_query_atoms: int = 2


def _basic(rng: random.Random, p: HarnessParams):
    if rng.random() < 0.5 or not p.roles:
        return Name(rng.choice(p.concepts))
    return Exists(Role(rng.choice(p.roles), rng.random() < 0.5))


def random_bool_concept(rng: random.Random, p: HarnessParams, depth: int = 2):
    """A Boolean combination of basic concepts."""
    roll = rng.random()
    if depth <= 0 or roll < 0.5:
        return _basic(rng, p)
    if roll < 0.65:
        return Not(random_bool_concept(rng, p, depth - 1))
    left = random_bool_concept(rng, p, depth - 1)
    right = random_bool_concept(rng, p, depth - 1)
    return And(left, right) if roll < 0.85 else Or(left, right)


def random_dllite_kb(rng: random.Random, p: HarnessParams | None = None) -> WeightedKB:
    """A DL-Lite_bool^H WKB over the signature in ``p``."""
    p = p or HarnessParams()
    tbox: dict = {}
    for _ in range(rng.randint(1, p.max_cis)):
        ax = ConceptInclusion(random_bool_concept(rng, p, 1), random_bool_concept(rng, p, 2))
        tbox.setdefault(ax, rng.choice(p.weights))
    roles = [Role(r, inv) for r in p.roles for inv in (False, True)]
    for _ in range(rng.randint(0, p.max_ris) if p.roles else 0):
        lhs = Role(rng.choice(p.roles))
        rhs = rng.choice(roles)
        if lhs != rhs:
            tbox.setdefault(RoleInclusion(lhs, rhs), rng.choice(p.weights))
    inds = [f"a{i}" for i in range(rng.randint(1, p.max_individuals))]
    abox: dict = {}
    for _ in range(rng.randint(1, p.max_assertions)):
        if p.roles and rng.random() < 0.4:
            a = RoleAssertion(rng.choice(p.roles), rng.choice(inds), rng.choice(inds))
        else:
            a = ConceptAssertion(rng.choice(p.concepts), rng.choice(inds))
        abox.setdefault(a, rng.choice(p.weights))
    return WeightedKB(tuple(tbox.items()), tuple(abox.items()))


def _term(rng: random.Random, inds: list[str], vars_: list[Var]):
    if inds and rng.random() < 0.5:
        return Ind(rng.choice(inds))
    return rng.choice(vars_)


def random_bcq(rng: random.Random, kb: WeightedKB, p: HarnessParams | None = None) -> CQ:
    """A Boolean CQ with at most ``p.max_query_atoms`` atoms."""
    p = p or HarnessParams()
    inds = kb.individuals()
    vars_ = [Var("x"), Var("y")]
    atoms = []
    for _ in range(rng.randint(1, p.max_query_atoms)):
        if p.roles and rng.random() < 0.5:
            atoms.append(RAtom(rng.choice(p.roles), _term(rng, inds, vars_), _term(rng, inds, vars_)))
        else:
            atoms.append(CAtom(rng.choice(p.concepts), _term(rng, inds, vars_)))
    return CQ((), tuple(dict.fromkeys(atoms)))


IQ_SHAPES = ("A(a)", "A(x)", "r(a,b)", "r(a,x)", "r(x,a)", "r(x,y)")


def random_biq(rng: random.Random, kb: WeightedKB, p: HarnessParams | None = None,
               shape: str | None = None) -> CQ:
    """A Boolean instance query of the given (or a random) shape."""
    p = p or HarnessParams()
    inds = kb.individuals()
    shape = shape or rng.choice(IQ_SHAPES if p.roles else IQ_SHAPES[:2])
    a, b = rng.choice(inds), rng.choice(inds)
    x, y = Var("x"), Var("y")
    if shape == "A(a)":
        atom = CAtom(rng.choice(p.concepts), Ind(a))
    elif shape == "A(x)":
        atom = CAtom(rng.choice(p.concepts), x)
    else:
        r = rng.choice(p.roles)
        left, right = {
            "r(a,b)": (Ind(a), Ind(b)),
            "r(a,x)": (Ind(a), x),
            "r(x,a)": (x, Ind(a)),
            "r(x,y)": (x, y),
        }[shape]
        atom = RAtom(r, left, right)
    return CQ((), (atom,))


__all__ = [
    "HarnessParams", "IQ_SHAPES", "random_bool_concept", "random_dllite_kb", "random_bcq",
    "random_biq",
]
