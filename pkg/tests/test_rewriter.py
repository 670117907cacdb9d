import random

import pytest

from conftest import fixture_path
from costlite import fo as F
from costlite.harness import HarnessParams, random_bcq, random_biq, random_dllite_kb
from costlite.interp import Interpretation
from costlite.kb import INF, ConceptAssertion, Role, RoleAssertion
from costlite.rewriter import (
    ABoxType, RewriteContext, Strategy, abox_type, answer_rewritten, check_safe, core,
    core_bound, encode_weighted_abox, enumerate_strategies, m_bound, precore_bound,
    rare_types, rewrite, safe_type,
)
from costlite.solver import entails_bounded
from costlite.textio import parse_kb, parse_query, read_text, serialize_fo

r = Role("r")


def kb_of(text):
    return parse_kb(text)


def q_of(text):
    return parse_query(text)


EX1 = parse_kb(read_text(fixture_path("ex1.wkb")))
FAN = kb_of("[abox]\n1 | r(a,b1)\n1 | r(a,b2)\n1 | r(a,b3)\n")


def test_abox_type_many_successors():
    assert r in abox_type(FAN, "a", 2).many_succ
    assert abox_type(FAN, "a", 3).many_succ == frozenset()
    assert abox_type(FAN, "b1", 2).one_type == {r.inv()}
    with pytest.raises(ValueError):
        abox_type(FAN, "zz", 1)


def test_example_one_types_and_core():
    t = abox_type(EX1, "a0", 3)
    assert {"A", r} <= t.one_type and t.many_succ == frozenset()
    rare = rare_types(EX1, 3)
    assert t in rare
    assert all(abox_type(EX1, x, 3) not in rare for x in ("a1", "b0", "b5", "c0", "c7"))
    pre, full = core(EX1, None, 3)
    assert pre == {"a0"} and full == {"a0", "b0", "c0"}


def test_rare_type_edge_cases():
    assert rare_types((), 1) == set()
    single = kb_of("[abox]\n1 | A(a)\n")
    assert rare_types(single, 1) == {abox_type(single, "a", 1)}


def test_core_of_frequent_disconnected_individuals():
    abox = kb_of("[abox]\n" + "".join(f"1 | A(a{i})\n" for i in range(5)))
    q = q_of("cq[]: A(a2)")
    pre, full = core(abox, q, 2)
    assert pre == full == {"a2"}


def test_bound_arithmetic():
    tbox = kb_of("[tbox]\n1 | A [= exists r\n").tbox
    q = q_of("cq[]: A(a)")
    assert precore_bound(tbox, q, 1) == 65
    assert core_bound(tbox, q, 1) == 130
    assert m_bound(tbox, q, 1) == 138
    assert precore_bound((), q, 1) == 3 and m_bound((), q, 1) == 1
    q2 = q_of("cq[]: A(a), A(b)")
    assert m_bound(tbox, q2, 1) - m_bound(tbox, q, 1) == 2


def test_encode_weighted_abox_examples():
    I = encode_weighted_abox(kb_of("[abox]\n2 | A(a)\n"), 3)
    assert I.ext("W[A,2]") == {"a"} and I.ext("A") == {"a"} and I.ext("W[A,inf]") == frozenset()
    J = encode_weighted_abox(kb_of("[abox]\n5 | A(a)\n"), 3)
    assert J.ext("W[A,inf]") == {"a"}
    K = encode_weighted_abox(kb_of("[abox]\ninf | r(a,b)\n"), 1)
    assert K.pairs("w[r,inf]") == {("a", "b")} and K.pairs("w[r,1]") == frozenset()


def _ctx_strategy(tbox, q, k, mode, model):
    ctx = RewriteContext(tbox, q, k, mode)
    return Strategy(model, model.named, (), {}, ctx)


def test_safe_types_without_tbox():
    q = q_of("cq[]: exists y . A(y)")
    sigma = _ctx_strategy((), q, 1, "p", Interpretation(("d",), (), {"A": {"d"}}))
    for ot in ({"A"}, set()):
        t = ABoxType(frozenset(ot), frozenset())
        tp = safe_type(t, sigma, "p")
        assert tp is not None and t.one_type <= tp
        assert check_safe(t, frozenset(t.one_type), sigma, "p")


def test_bottom_concept_never_safe():
    tbox = kb_of("[tbox]\ninf | A [= bot\n").tbox
    q = q_of("cq[]: exists y . B(y)")
    sigma = _ctx_strategy(tbox, q, 1, "p", Interpretation(("d",), (), {"B": {"d"}}))
    assert safe_type(ABoxType(frozenset({"A"}), frozenset()), sigma, "p") is None
    assert safe_type(ABoxType(frozenset({"B"}), frozenset()), sigma, "p") is not None


def test_role_inclusion_safety():
    tbox = kb_of("[tbox]\n1 | r [= s\n").tbox
    s = Role("s")
    q = q_of("cq[]: exists y . A(y)")
    t = ABoxType(frozenset({r}), frozenset())
    with_pred = Interpretation(("d", "e"), (), {"A": {"d"}}, {"r": {("d", "e")}, "s": {("d", "e")}})
    sigma = _ctx_strategy(tbox, q, 1, "p", with_pred)
    tp = safe_type(t, sigma, "p")
    assert tp is not None and {r, s} <= tp
    assert not check_safe(t, frozenset({r}), sigma, "p")
    assert check_safe(t, frozenset({r, s}), sigma, "p")
    no_pred = Interpretation(("d",), (), {"A": {"d"}})
    assert safe_type(t, _ctx_strategy(tbox, q, 1, "p", no_pred), "p") is None


def test_zero_budget_strategies():
    q = q_of("cq[]: A(a)")
    strategies = enumerate_strategies((), q, 0, "p", max_individuals=1)
    assert strategies
    for sigma in strategies:
        sigma.check()
        (d,) = [x for x, lab in sigma.labels.items() if lab == "a"]
        assert d in sigma.model.ext("A") and sigma.violations == ()


def test_strategy_invariants_on_random_instances():
    rng = random.Random(41)
    for i in range(15):
        kb = random_dllite_kb(rng)
        mode = "p" if i % 2 else "c"
        q = random_bcq(rng, kb) if mode == "p" else random_biq(rng, kb)
        if len(q.individuals()) > 2:
            continue
        for sigma in enumerate_strategies(kb.tbox, q, 1, mode, max_individuals=2):
            sigma.check()


def test_violation_becomes_weight_atom():
    tbox = kb_of("[tbox]\ninf | A [= bot\n").tbox
    q = q_of("cq[]: exists y . B(y)")
    found = False
    for sigma in enumerate_strategies(tbox, q, 1, "p", max_individuals=1):
        if any(isinstance(a, ConceptAssertion) and a.concept == "A" and w == 1
               for a, w in sigma.violations):
            found = True
    rw = rewrite(tbox, q, 1, "p", max_individuals=1)
    assert found and "W[A,1](" in serialize_fo(rw.formula)


def test_rewrite_examples():
    tbox = kb_of("[tbox]\ninf | (A and B) [= bot\n").tbox
    abox = kb_of("[abox]\n1 | A(a)\ninf | B(a)\n").abox
    rw_a = rewrite(tbox, q_of("cq[]: A(a)"), 1, "c")
    assert not answer_rewritten(rw_a, abox, 1, "c")
    rw_b = rewrite(tbox, q_of("cq[]: B(a)"), 1, "c")
    assert answer_rewritten(rw_b, abox, 1, "c")
    rw_p = rewrite((), q_of("cq[]: exists y . A(y)"), 1, "p")
    assert answer_rewritten(rw_p, kb_of("[abox]\ninf | A(a)\n").abox, 1, "p")
    # without a TBox any element may be made an A at no cost
    assert answer_rewritten(rw_p, kb_of("[abox]\ninf | B(a)\n").abox, 1, "p")
    banned = kb_of("[tbox]\ninf | A [= bot\n").tbox
    rw_banned = rewrite(banned, q_of("cq[]: exists y . A(y)"), 1, "p")
    assert not answer_rewritten(rw_banned, kb_of("[abox]\ninf | B(a)\n").abox, 1, "p")


def test_rewrite_metadata():
    rw = rewrite((), q_of("cq[]: A(a)"), 1, "p", max_individuals=2)
    assert rw.meta["mode"] == "p" and rw.meta["k"] == 1 and rw.meta["max-individuals"] == 2
    assert rw.meta["strategies"] == len(rw.strategies)
    assert rw.meta["regime"] in ("full",) or rw.meta["regime"].startswith("bounded")


def test_rewrite_errors():
    el = kb_of("[tbox]\n1 | A [= exists r.B\n").tbox
    with pytest.raises(ValueError):
        rewrite(el, q_of("cq[]: A(a)"), 1, "p")
    with pytest.raises(ValueError):
        rewrite((), q_of("cq[]: A(a), B(a)"), 1, "c")
    with pytest.raises(ValueError):
        rewrite((), q_of("cq[]: A(a)"), 1, "x")
    with pytest.raises(ValueError):
        enumerate_strategies((), q_of("cq[]: r(a,b)"), 1, "p", max_individuals=1)
    rw = rewrite((), q_of("cq[]: A(a)"), 1, "p")
    with pytest.raises(ValueError):
        answer_rewritten(rw, (), 2, "p")
    with pytest.raises(ValueError):
        answer_rewritten(rw, (), 1, "c")


def test_weight_predicate_beyond_budget_rejected():
    from costlite.kb import Ind
    with pytest.raises(ValueError):
        answer_rewritten(F.FWConcept("A", 3, Ind("a")), kb_of("[abox]\n1 | A(a)\n").abox, 1, "p")


def test_exact_and_compact_forms_agree():
    rng = random.Random(42)
    p = HarnessParams(max_individuals=3)
    for i in range(12):
        kb = random_dllite_kb(rng, p)
        mode = "p" if i % 2 else "c"
        q = random_bcq(rng, kb, p) if mode == "p" else random_biq(rng, kb, p)
        k = rng.choice(p.ks)
        a = rewrite(kb.tbox, q, k, mode, max_individuals=3, type_form="exact")
        b = rewrite(kb.tbox, q, k, mode, max_individuals=3, type_form="compact")
        for _ in range(4):
            abox = random_dllite_kb(rng, p).abox
            assert answer_rewritten(a, abox, k, mode) == answer_rewritten(b, abox, k, mode)


def test_small_oracle_agreement():
    rng = random.Random(43)
    p = HarnessParams()
    for i in range(30):
        kb = random_dllite_kb(rng, p)
        mode = "p" if i % 2 else "c"
        q = random_bcq(rng, kb, p) if mode == "p" else random_biq(rng, kb, p)
        k = rng.choice(p.ks)
        rw = rewrite(kb.tbox, q, k, mode)
        want = entails_bounded(kb, q, k, "possible" if mode == "p" else "certain").answer
        assert answer_rewritten(rw, kb.abox, k, mode) == want


def test_role_assertion_encoding_used_by_rewriting():
    tbox = kb_of("[tbox]\ninf | exists r [= bot\n").tbox
    q = q_of("cq[]: exists y . A(y)")
    rw = rewrite(tbox, q, 1, "p", max_individuals=2)
    abox_cheap = ((ConceptAssertion("A", "a"), INF), (RoleAssertion("r", "a", "b"), 1))
    abox_dear = ((ConceptAssertion("A", "a"), INF), (RoleAssertion("r", "a", "b"), INF))
    assert answer_rewritten(rw, abox_cheap, 1, "p")
    assert not answer_rewritten(rw, abox_dear, 1, "p")
