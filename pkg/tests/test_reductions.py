import itertools

import pytest

from costlite import reductions as R
from costlite.kb import BOTTOM, INF, validate_kb
from costlite.kb import subconcepts
from costlite.solver import entails_bounded, entails_opt, k_satisfiable, optimal_cost
from costlite.textio import parse_kb, parse_query


def kb_of(text):
    return parse_kb(text)


def q_of(text):
    return parse_query(text)


def dialect(kb):
    return validate_kb(kb).dialect


# ---------------------------------------------------------------- formats


def test_dimacs_round_trip_and_padding():
    phi = R.parse_cnf("c demo\np cnf 3 2\n1 -2 0\n3 0\n")
    assert phi.clauses == ((1, -2, -2), (3, 3, 3))
    assert R.parse_cnf(R.format_dimacs(phi)) == phi
    psi = R.parse_dnf("p dnf 2 1\n1 2 -1 0\n")
    assert psi.terms == ((1, 2, -1),)
    assert R.format_dimacs(psi).startswith("p dnf 2 1")


@pytest.mark.parametrize("text", [
    "1 2 0\n", "p cnf 2 1\n1 5 0\n", "p cnf 2 2\n1 0\n", "p cnf x 1\n1 0\n",
    "p cnf 1 1\n1 1 1 1 0\n", "p cnf 1 1\n1 a 0\n",
])
def test_dimacs_errors(text):
    with pytest.raises(ValueError):
        R.parse_cnf(text)


def test_edge_list():
    g = R.parse_edge_list("# triangle\n1 2\n2 3\n3,1\n4\n")
    assert g.vertices == ("1", "2", "3", "4")
    assert g.edges == (("1", "2"), ("1", "3"), ("2", "3"))
    assert R.parse_edge_list(R.format_edge_list(g)) == g
    with pytest.raises(ValueError):
        R.parse_edge_list("1 1\n")
    with pytest.raises(ValueError):
        R.parse_edge_list("1 2 3\n")
    with pytest.raises(ValueError):
        R.Graph(("a-b",), ())


# ---------------------------------------------------------------- truth helpers


def test_truth_helpers():
    assert R.cnf_satisfiable(R.CNFFormula(1, ((1, 1, 1),)))
    assert not R.cnf_satisfiable(R.CNFFormula(1, ((1, 1, 1), (-1, -1, -1))))
    assert R.dnf_tautology(R.DNFFormula(1, ((1, 1, 1), (-1, -1, -1))))
    assert not R.dnf_tautology(R.DNFFormula(1, ((1, 1, 1),)))
    assert R.three_colorable(R.Graph.from_edges([(1, 2), (2, 3), (1, 3)]))
    k4 = R.Graph.from_edges(list(itertools.combinations(range(1, 5), 2)))
    assert not R.three_colorable(k4)
    assert R.lexmax_assignment(R.CNFFormula(2, ((1, 2, 2), (-1, -1, -1)))) == (False, True)
    assert R.lexmax_assignment(R.CNFFormula(1, ((1, 1, 1), (-1, -1, -1)))) is None


# ---------------------------------------------------------------- generators


def test_gen_3sat_examples():
    sat = R.gen_3sat(R.CNFFormula(1, ((1, 1, 1),)))
    assert dialect(sat) == "EL_bot"
    assert k_satisfiable(sat, 1).answer
    unsat = R.gen_3sat(R.CNFFormula.padded(1, [(1,), (-1,)]))
    assert not k_satisfiable(unsat, 1).answer
    weights = {w for _, w in sat.tbox}
    assert weights == {1, INF}
    assert sum(1 for _, w in sat.tbox if w == 1) == 1
    assert all(w is INF for _, w in sat.abox)


def test_gen_3dnf_certain_examples():
    taut = R.DNFFormula(1, ((1, 1, 1), (-1, -1, -1)))
    kb, q, k = R.gen_3dnf_certain(taut)
    assert k == 1 and dialect(kb) == "EL"
    assert all(not isinstance(c, type(BOTTOM)) for ax, _ in kb.tbox for c in subconcepts(ax.rhs))
    assert entails_bounded(kb, q, k, "certain").answer
    kb2, q2, k2 = R.gen_3dnf_certain(R.DNFFormula(1, ((1, 1, 1),)))
    assert not entails_bounded(kb2, q2, k2, "certain").answer


def test_gen_3col_examples():
    tri = R.Graph.from_edges([(1, 2), (2, 3), (1, 3)])
    kb, k = R.gen_3col(tri)
    assert k == 12 and dialect(kb) == "DL-Lite_core"
    assert len(kb.abox) == 6 * 3 and all(w == 1 for _, w in kb.abox)
    assert k_satisfiable(kb, k).answer
    k4 = R.Graph.from_edges(list(itertools.combinations(range(1, 5), 2)))
    kb4, k_4 = R.gen_3col(k4)
    assert k_4 == 24 and not k_satisfiable(kb4, k_4).answer
    kb1, k1 = R.gen_3col(R.Graph.from_edges([("x", "y")]))
    assert k1 == 4 and k_satisfiable(kb1, 4).answer and not k_satisfiable(kb1, 3).answer


def test_gen_lexmax_example():
    phi = R.CNFFormula(2, ((1, 2, 2),))
    kb, q = R.gen_lexmax(phi, 1)
    assert dialect(kb) == "DL-Lite_core"
    assert entails_opt(kb, q, "certain").answer and entails_opt(kb, q, "possible").answer
    kb2, q2 = R.gen_lexmax(phi, 2)
    assert entails_opt(kb2, q2, "certain").answer == entails_opt(kb2, q2, "possible").answer
    # weights grow geometrically with u = 3m + 1 = 4
    t_weights = sorted(w for a, w in kb.abox if getattr(a, "concept", None) == "T")
    assert t_weights == [1, 4]
    role_weights = {w for a, w in kb.abox if hasattr(a, "role")}
    assert role_weights == {16}


def test_gen_3dnf_cq_examples():
    taut = R.DNFFormula(1, ((1, 1, 1), (-1, -1, -1)))
    kb, q, k = R.gen_3dnf_cq_certain(taut)
    assert k == 1 and q.boolean and q.is_connected() and q.is_acyclic()
    assert dialect(kb) == "DL-Lite_core"
    assert entails_bounded(kb, q, k, "certain").answer
    kb2, q2, _ = R.gen_3dnf_cq_certain(R.DNFFormula(1, ((1, 1, 1),)))
    assert not entails_bounded(kb2, q2, 1, "certain").answer


# ---------------------------------------------------------------- problem transformations


def test_bcs_to_iqa_p():
    kb = kb_of("[tbox]\ninf | A [= bot\n[abox]\n1 | A(a)\n")
    kb2, q, k = R.bcs_to_iqa_p(kb, 1)
    assert k == 1 and q.atoms[0].concept not in kb.concept_names()
    assert entails_bounded(kb2, q, 1, "possible").answer
    assert not entails_bounded(kb2, q, 0, "possible").answer
    kb_sat = R.gen_3sat(R.CNFFormula(1, ((1, 1, 1),)))
    assert entails_bounded(*R.bcs_to_iqa_p(kb_sat, 1), "possible").answer
    kb_unsat = R.gen_3sat(R.CNFFormula.padded(1, [(1,), (-1,)]))
    assert not entails_bounded(*R.bcs_to_iqa_p(kb_unsat, 1), "possible").answer


def _iqa_to_co_iqa(kb, q, k):
    kb2, q2, k2 = R.iqa_p_to_co_iqa_c(kb, q, k)
    assert k2 == k + 1
    assert dialect(kb2) in ("DL-Lite_core", "DL-Lite_core^H", "EL", "EL_bot")
    before = entails_bounded(kb, q, k, "possible").answer
    after = entails_bounded(kb2, q2, k2, "certain").answer
    assert before == (not after)
    return before


def test_iqa_to_co_iqa_shape_examples():
    kb = kb_of("[tbox]\ninf | A [= bot\n[abox]\n1 | A(a)\n")
    assert _iqa_to_co_iqa(kb, q_of("cq[]: A(a)"), 0) is False
    assert _iqa_to_co_iqa(kb_of("[abox]\n1 | A(a)\n"), q_of("cq[]: A(a)"), 0) is True
    assert _iqa_to_co_iqa(kb_of("[tbox]\ninf | A [= B\n[abox]\n1 | A(a)\n"),
                   q_of("cq[]: exists y . B(y)"), 0) is True
    assert _iqa_to_co_iqa(kb_of("[tbox]\ninf | B [= bot\n[abox]\n1 | A(a)\n"),
                   q_of("cq[]: exists y . B(y)"), 1) is False
    assert _iqa_to_co_iqa(kb_of("[abox]\n2 | r(a,b)\n"), q_of("cq[]: r(a,b)"), 1) is True
    assert _iqa_to_co_iqa(kb_of("[tbox]\ninf | exists r [= bot\n[abox]\n2 | r(a,b)\n"),
                   q_of("cq[]: r(a,b)"), 3) is False


def test_iqa_to_co_iqa_successor_shapes_are_normalized():
    kb = kb_of("[tbox]\ninf | A [= exists r\n[abox]\n1 | A(a)\n")
    assert _iqa_to_co_iqa(kb, q_of("cq[]: exists y . r(a,y)"), 0) is True
    assert _iqa_to_co_iqa(kb, q_of("cq[]: exists y . r(y,a)"), 0) is True


def test_iqa_to_co_iqa_el_variant():
    kb = kb_of("[tbox]\n1 | A [= exists r.B\n[abox]\ninf | A(a)\n")
    kb2, q2, k2 = R.iqa_p_to_co_iqa_c(kb, q_of("cq[]: exists y . B(y)"), 0)
    assert dialect(kb2) in ("EL", "EL_bot")
    assert _iqa_to_co_iqa(kb, q_of("cq[]: exists y . B(y)"), 0) is True
    banned = kb_of("[tbox]\ninf | B [= bot\n1 | A [= exists r.B\n[abox]\ninf | A(a)\n")
    assert _iqa_to_co_iqa(banned, q_of("cq[]: exists y . B(y)"), 1) is False


def test_iqa_to_co_iqa_rejects_el_role_iq_with_variable():
    kb = kb_of("[tbox]\n1 | A [= exists r.B\n[abox]\ninf | A(a)\n")
    with pytest.raises(ValueError):
        R.iqa_p_to_co_iqa_c(kb, q_of("cq[]: exists y . r(y,a)"), 0)


def test_pad_cost():
    kb = kb_of("[tbox]\ninf | A [= bot\n[abox]\n1 | A(a)\n2 | B(a)\n")
    kb2, k2 = R.pad_cost(kb, 1)
    assert k2 == 2
    assert optimal_cost(kb2) == optimal_cost(kb) + 1
    for k in range(3):
        assert k_satisfiable(kb, k).answer == k_satisfiable(R.pad_cost(kb, k)[0], k + 1).answer
    hopeless = kb_of("[tbox]\ninf | A [= bot\n[abox]\ninf | A(a)\n")
    assert optimal_cost(R.pad_cost(hopeless, 0)[0]) is INF


def test_generators_reject_malformed_input():
    with pytest.raises(ValueError):
        R.CNFFormula(1, ((1, 2, 1),))
    with pytest.raises(ValueError):
        R.DNFFormula(1, ((1, 1),))
    with pytest.raises(ValueError):
        R.gen_lexmax(R.CNFFormula(2, ((1, 1, 1),)), 3)
