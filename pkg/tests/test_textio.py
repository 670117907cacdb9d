import random

import pytest

from helpers import random_formula
from conftest import fixture_path
from costlite import fo as F
from costlite import reductions as R
from costlite.harness import HarnessParams, random_bcq, random_dllite_kb
from costlite.kb import (
    INF, And, CAtom, ConceptAssertion, ConceptInclusion, Exists, Ind, Name, RAtom,
    Role, RoleInclusion, Var, BOTTOM,
)
from costlite.textio import (
    ParseError, format_header, parse_fo, parse_header, parse_kb, parse_query,
    read_text, serialize_fo, serialize_kb, serialize_query,
)


def single_axiom(line):
    kb = parse_kb(f"[tbox]\n{line}\n")
    (item,) = kb.tbox
    return item


def test_axiom_examples():
    assert single_axiom("1 | Bool [= True") == (ConceptInclusion(Name("Bool"), Name("True")), 1)
    ax, w = single_axiom("inf | (exists s1 and exists t2) [= bot")
    assert w is INF and ax == ConceptInclusion(And(Exists(Role("s1")), Exists(Role("t2"))), BOTTOM)
    assert single_axiom("2 | r [= s") == (RoleInclusion(Role("r"), Role("s")), 2)
    assert single_axiom("1 | r- [= s") == (RoleInclusion(Role("r", True), Role("s")), 1)


def test_bare_name_disambiguation():
    kb = parse_kb("[tbox]\n1 | A [= B\n1 | r [= s\n")
    assert isinstance(kb.tbox[0][0], ConceptInclusion)
    assert isinstance(kb.tbox[1][0], RoleInclusion)
    kb = parse_kb("[tbox]\n1 | p [= q\n[abox]\n1 | p(a)\n")
    assert isinstance(kb.tbox[0][0], ConceptInclusion)


def test_query_examples():
    q = parse_query("cq[]: A(a)")
    assert q.boolean and q.atoms == (CAtom("A", Ind("a")),)
    q = parse_query("cq[]: exists y . clause(a,y), False(y)")
    assert q.boolean and len(q.atoms) == 2
    assert q.atoms[0] == RAtom("clause", Ind("a"), Var("y"))
    q = parse_query("cq[x]: T(x)")
    assert q.free == (Var("x"),) and q.atoms == (CAtom("T", Var("x")),)


def test_fo_examples():
    v, u = Var("v"), Var("u")
    assert serialize_fo(F.FExists(v, F.FConcept("A", v))) == "exists v0. A(v0)"
    assert serialize_fo(F.FCount(2, v, F.FRole("r", u, v))) == "exists>2 v1. r(u0,v1)"
    assert serialize_fo(F.FExists(v, F.FWConcept("A", 1, v))) == "exists v0. W[A,1](v0)"
    assert serialize_fo(F.FWRole("r", INF, Ind("a"), Ind("b"))) == "w[r,inf](a,b)"


def test_fo_quotes_variable_like_constants():
    phi = F.FConcept("A", Ind("v0"))
    text = serialize_fo(phi)
    assert text == 'A("v0")'
    assert parse_fo(text) == phi


def test_kb_round_trip_on_harness_kbs():
    rng = random.Random(3)
    params = HarnessParams(max_cis=5, max_ris=2)
    for _ in range(200):
        kb = random_dllite_kb(rng, params)
        text = serialize_kb(kb)
        back = parse_kb(text)
        assert back == kb
        assert serialize_kb(back) == text


def test_kb_round_trip_on_generated_kbs():
    phi = R.CNFFormula(2, ((1, -2, 2), (-1, -1, 2)))
    kbs = [R.gen_3sat(phi), R.gen_3col(R.Graph.from_edges([("1", "2"), ("2", "3")]))[0],
           R.gen_lexmax(phi, 1)[0], R.gen_3dnf_cq_certain(R.DNFFormula(1, ((1, 1, 1),)))[0]]
    for kb in kbs:
        text = serialize_kb(kb)
        assert parse_kb(text) == kb and serialize_kb(parse_kb(text)) == text


def test_query_round_trip():
    rng = random.Random(4)
    for _ in range(200):
        kb = random_dllite_kb(rng)
        q = random_bcq(rng, kb)
        text = serialize_query(q)
        assert parse_query(text) == q
    q = R.gen_3dnf_cq_certain(R.DNFFormula(2, ((1, 2, -1),)))[1]
    assert parse_query(serialize_query(q)) == q


def test_fo_round_trip_random():
    rng = random.Random(5)
    for _ in range(300):
        phi = random_formula(rng, 4, ())
        text = serialize_fo(phi, simplify=False)
        back = parse_fo(text)
        assert serialize_fo(back, simplify=False) == text
        assert serialize_fo(parse_fo(serialize_fo(phi))) == serialize_fo(phi)


def test_fixture_parses():
    kb = parse_kb(read_text(fixture_path("ex1.wkb")))
    assert len(kb.tbox) == 4 and len(kb.abox) == 17
    assert parse_query(read_text(fixture_path("tb0c0.q"))).atoms == (RAtom("t", Ind("b0"), Ind("c0")),)


@pytest.mark.parametrize("text,line,col", [
    ("[tbox]\n1 | A [= \n", 2, 9),
    ("[tbox]\n1 | A [= B\n0 | B [= C\n", 3, 1),
    ("[abox]\nx | A(a)\n", 2, 1),
    ("[nope]\n", 1, 2),
])
def test_kb_parse_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as ei:
        parse_kb(text)
    assert (ei.value.line, ei.value.col) == (line, col)
    assert str(ei.value).startswith(f"{line}:{col}:")


@pytest.mark.parametrize("text", ["cq[]: A(a", "cq[x]: A(y)", "A(a)", "cq[]: exists y . "])
def test_query_parse_errors(text):
    with pytest.raises(ParseError):
        parse_query(text)


@pytest.mark.parametrize("text", ["exists . A(v)", "A(v0) &", "exists v0 A(v0)", "W[A,x](a)"])
def test_fo_parse_errors(text):
    with pytest.raises(ParseError):
        parse_fo(text)


def test_header_round_trip():
    meta = {"mode": "p", "k": 2, "cap": 12}
    text = format_header(meta) + "true\n"
    assert parse_header(text) == {"mode": "p", "k": "2", "cap": "12"}


def test_comments_ignored():
    kb = parse_kb("# head\n[tbox]\n1 | A [= B  # trailing\n[abox]\n# nothing\ninf | A(a)\n")
    assert kb.abox == ((ConceptAssertion("A", "a"), INF),)
