import random

import pytest

from helpers import random_formula, random_interpretation
from costlite import fo as F
from costlite.harness import random_bcq, random_dllite_kb
from costlite.interp import (
    Interpretation, cost, cq_match, cq_to_fo, eval_concept, fo_eval, fo_eval_naive,
    one_type, violations,
)
from costlite.kb import (
    CQ, INF, TOP, And, CAtom, ConceptAssertion, ConceptInclusion, Exists, Ind, Name, Not,
    RAtom, Role, RoleAssertion, RoleInclusion, Var, WeightedKB,
)

A, B = Name("A"), Name("B")
x, y = Var("x"), Var("y")


def test_eval_concept_examples():
    I = Interpretation(("a", "b"), (), {}, {"r": {("a", "b")}})
    assert eval_concept(I, TOP) == {"a", "b"}
    assert eval_concept(I, Exists(Role("r", True))) == {"b"}
    assert eval_concept(I, Exists(Role("r"))) == {"a"}
    J = Interpretation(("a", "b"), (), {"A": {"a"}, "B": {"a", "b"}})
    assert eval_concept(J, And(A, Not(B))) == frozenset()


def test_violation_examples():
    I = Interpretation(("a", "b"), (), {"A": {"a", "b"}, "B": {"b"}})
    kb = WeightedKB(((ConceptInclusion(A, B), 1),))
    assert violations(kb, I).concept_inclusions[0][2] == {"a"}
    J = Interpretation(("a", "b", "c"), (), {}, {"r": {("a", "b"), ("b", "c")}})
    kb = WeightedKB(((RoleInclusion(Role("r"), Role("s")), 1),))
    assert violations(kb, J).role_inclusions[0][2] == {("a", "b"), ("b", "c")}
    K = Interpretation(("b",), (), {"B": set()})
    kb = WeightedKB((), ((ConceptAssertion("B", "b"), 1),))
    assert [a for a, _ in violations(kb, K).assertions] == [ConceptAssertion("B", "b")]


def test_cost_examples():
    kb = WeightedKB(((ConceptInclusion(A, B), 2),),
                    ((ConceptAssertion("A", "a"), INF), (ConceptAssertion("B", "b"), 1)))
    I = Interpretation(("a", "b"), (), {"A": {"a"}, "B": set()})
    assert cost(kb, I) == 3
    M = Interpretation(("a", "b"), (), {"A": {"a"}, "B": {"a", "b"}})
    assert cost(kb, M) == 0
    N = Interpretation(("a", "b"), (), {"A": set(), "B": {"a", "b"}})
    assert cost(kb, N) is INF


def test_role_assertion_violation_cost():
    kb = WeightedKB((), ((RoleAssertion("r", "a", "b"), 2),))
    assert cost(kb, Interpretation(("a", "b"))) == 2
    assert cost(kb, Interpretation(("a", "b"), (), {}, {"r": {("a", "b")}})) == 0


def test_cost_needs_every_individual():
    kb = WeightedKB((), ((ConceptAssertion("A", "z"), 1),))
    with pytest.raises(ValueError):
        cost(kb, Interpretation(("a",)))


def test_cq_examples():
    I = Interpretation(("a",), (), {"A": {"a"}})
    assert cq_match(I, CQ((), (CAtom("A", y),)))
    J = Interpretation(("a", "b"), (), {}, {"r": {("a", "b")}})
    assert not cq_match(J, CQ((), (RAtom("r", Ind("b"), Ind("a")),)))
    assert cq_match(J, CQ((), (RAtom("r", Ind("a"), Ind("b")),)))
    K = Interpretation(("a", "b"), (), {"A": {"a"}, "B": {"b"}})
    assert not cq_match(K, CQ((), (CAtom("A", y), CAtom("B", y))))


def test_cq_match_agrees_with_fo_translation():
    rng = random.Random(21)
    for _ in range(300):
        kb = random_dllite_kb(rng)
        q = random_bcq(rng, kb)
        I = random_interpretation(rng, named=tuple(dict.fromkeys(["a", "b"] + q.individuals())))
        assert cq_match(I, q) == fo_eval_naive(I, cq_to_fo(q))


def test_fo_examples():
    I = Interpretation(("a", "b"), (), {"A": {"a"}})
    assert fo_eval(I, F.FExists(x, F.FConcept("A", x)))
    assert not fo_eval(I, F.FCount(1, x, F.FConcept("A", x)))
    assert fo_eval(I, F.FCount(0, x, F.FConcept("A", x)))
    assert fo_eval(I, F.FForall(x, F.FImplies(F.FConcept("A", x), F.FEq(x, x))))


def test_fo_eval_matches_naive_evaluator():
    rng = random.Random(22)
    for _ in range(400):
        I = random_interpretation(rng)
        phi = random_formula(rng, 4, ())
        assert fo_eval(I, phi) == fo_eval_naive(I, phi)


def test_fo_de_morgan():
    rng = random.Random(23)
    for _ in range(100):
        I = random_interpretation(rng)
        p = random_formula(rng, 3, ())
        q = random_formula(rng, 3, ())
        lhs = F.FNot(F.FAnd((p, q)))
        rhs = F.FOr((F.FNot(p), F.FNot(q)))
        assert fo_eval(I, lhs) == fo_eval(I, rhs)
        v = Var("z")
        body = random_formula(rng, 2, (v,))
        assert fo_eval(I, F.FNot(F.FExists(v, body))) == fo_eval(I, F.FForall(v, F.FNot(body)))


def test_fo_unknown_constant_is_an_error():
    with pytest.raises(ValueError):
        fo_eval(Interpretation(("a",)), F.FConcept("A", Ind("zz")))


def test_one_type_examples():
    I = Interpretation(("d", "e", "f"), (), {"A": {"d"}}, {"r": {("d", "e")}})
    assert one_type(I, "f") == frozenset()
    assert one_type(I, "d") == {"A", Role("r")}
    assert one_type(I, "e") == {Role("r", True)}


def test_interpretation_checks_extents():
    with pytest.raises(ValueError):
        Interpretation(("a",), (), {"A": {"b"}})
    with pytest.raises(ValueError):
        Interpretation(("a",), ("a",))
