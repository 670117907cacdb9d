"""Reductions between the decision problems and hardness instance generators.

The transformations rewrite a weighted KB (and query) so that the answer to
one problem can be read off another.  The generators build WKBs from
propositional formulas and graphs; the brute-force helpers at the bottom give
the ground truth those instances are checked against.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .kb import (
    BOTTOM,
    CQ,
    INF,
    CAtom,
    ConceptAssertion,
    ConceptInclusion,
    Exists,
    ExistsQ,
    Ind,
    Name,
    Not,
    RAtom,
    Role,
    RoleAssertion,
    Var,
    WeightedKB,
    conj,
    fresh_name,
    normalize_iq,
    validate_kb,
)

# ---------------------------------------------------------------- formulas and graphs


def _check_literal(lit: int, n: int) -> None:
    if not isinstance(lit, int) or isinstance(lit, bool) or lit == 0 or abs(lit) > n:
        raise ValueError(f"literal {lit!r} out of range for {n} variables")


def _pad(clause) -> tuple[int, int, int]:
    clause = tuple(clause)
    if not 1 <= len(clause) <= 3:
        raise ValueError(f"expected 1 to 3 literals, got {len(clause)}")
    return (clause + (clause[-1],) * 3)[:3]


@dataclass(frozen=True)
class CNFFormula:
    """A 3-CNF over variables 1..n_vars; literal ``-i`` is the negation of ``i``."""

    n_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.n_vars < 0:
            raise ValueError("n_vars must be >= 0")
        for c in self.clauses:
            if len(c) != 3:
                raise ValueError(f"clause {c} does not have exactly 3 literals")
            for lit in c:
                _check_literal(lit, self.n_vars)

    @classmethod
    def padded(cls, n_vars: int, clauses) -> CNFFormula:
        """Build from clauses of 1 to 3 literals, repeating the last literal."""
        return cls(n_vars, tuple(_pad(c) for c in clauses))

    def holds(self, nu) -> bool:
        """``nu[i - 1]`` is the value of variable ``i``."""
        return all(any(nu[abs(x) - 1] == (x > 0) for x in c) for c in self.clauses)


@dataclass(frozen=True)
class DNFFormula:
    """A 3-DNF over variables 1..n_vars; each term is a conjunction of 3 literals."""

    n_vars: int
    terms: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(tuple(t) for t in self.terms))
        if self.n_vars < 0:
            raise ValueError("n_vars must be >= 0")
        for t in self.terms:
            if len(t) != 3:
                raise ValueError(f"term {t} does not have exactly 3 literals")
            for lit in t:
                _check_literal(lit, self.n_vars)

    @classmethod
    def padded(cls, n_vars: int, terms) -> DNFFormula:
        return cls(n_vars, tuple(_pad(t) for t in terms))

    def holds(self, nu) -> bool:
        return any(all(nu[abs(x) - 1] == (x > 0) for x in t) for t in self.terms)


_VERTEX_RE = re.compile(r"[A-Za-z0-9_]+")


@dataclass(frozen=True)
class Graph:
    """An undirected graph; edges are stored as pairs ordered by vertex position."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        verts = tuple(str(v) for v in self.vertices)
        if len(set(verts)) != len(verts):
            raise ValueError("duplicate vertex")
        for v in verts:
            if not _VERTEX_RE.fullmatch(v):
                raise ValueError(f"vertex name {v!r} must match [A-Za-z0-9_]+")
        pos = {v: i for i, v in enumerate(verts)}
        seen = set()
        for u, v in self.edges:
            u, v = str(u), str(v)
            if u not in pos or v not in pos:
                raise ValueError(f"edge ({u},{v}) uses an unknown vertex")
            if u == v:
                raise ValueError(f"self-loop on {u}")
            seen.add((u, v) if pos[u] < pos[v] else (v, u))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple(sorted(seen, key=lambda e: (pos[e[0]], pos[e[1]]))))

    @classmethod
    def from_edges(cls, edges, vertices=()) -> Graph:
        """Vertices are ordered numerically when they all look like integers."""
        verts = {str(v) for v in vertices}
        for u, v in edges:
            verts.update((str(u), str(v)))
        return cls(tuple(sorted(verts, key=_vertex_key)), tuple((str(u), str(v)) for u, v in edges))


def _vertex_key(v: str):
    return (0, int(v), "") if v.isdigit() else (1, 0, v)


# ---------------------------------------------------------------- text formats


def parse_dimacs(text: str) -> tuple[str, int, list[tuple[int, ...]]]:
    """Parse ``p cnf n m`` (or ``p dnf n m``) followed by zero-terminated lines.

    Returns the header kind, the variable count and the clauses as read.
    Lines starting with ``c`` are comments.
    """
    kind = None
    n = m = 0
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if kind is not None or len(parts) != 4 or parts[1] not in ("cnf", "dnf"):
                raise ValueError(f"line {lineno}: bad header {line!r}")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ValueError(f"line {lineno}: bad header {line!r}") from None
            kind = parts[1]
            continue
        if kind is None:
            raise ValueError(f"line {lineno}: clause before the 'p' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ValueError(f"line {lineno}: not a literal: {tok!r}") from None
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > n:
                    raise ValueError(f"line {lineno}: literal {lit} exceeds {n} variables")
                current.append(lit)
    if kind is None:
        raise ValueError("missing 'p cnf n m' header")
    if current:
        clauses.append(tuple(current))
    if len(clauses) != m:
        raise ValueError(f"header announces {m} clauses, found {len(clauses)}")
    return kind, n, clauses


def parse_cnf(text: str) -> CNFFormula:
    _, n, clauses = parse_dimacs(text)
    return CNFFormula.padded(n, clauses)


def parse_dnf(text: str) -> DNFFormula:
    """Same layout as DIMACS; each line is read as a conjunctive term."""
    _, n, terms = parse_dimacs(text)
    return DNFFormula.padded(n, terms)


def format_dimacs(phi: CNFFormula | DNFFormula) -> str:
    kind, rows = ("dnf", phi.terms) if isinstance(phi, DNFFormula) else ("cnf", phi.clauses)
    lines = [f"p {kind} {phi.n_vars} {len(rows)}"]
    lines += [" ".join(str(x) for x in row) + " 0" for row in rows]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    """One edge ``u v`` per line; a line with a single name adds an isolated
    vertex.  Blank lines and ``#`` comments are ignored."""
    edges = []
    verts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) == 1:
            verts.append(parts[0])
        elif len(parts) == 2:
            edges.append((parts[0], parts[1]))
        else:
            raise ValueError(f"line {lineno}: expected 'u v', got {raw!r}")
    return Graph.from_edges(edges, verts)


def format_edge_list(g: Graph) -> str:
    used = {v for e in g.edges for v in e}
    lines = [f"{u} {v}" for u, v in g.edges] + [v for v in g.vertices if v not in used]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- problem reductions


def _taken(kb: WeightedKB, q: CQ | None = None) -> set[str]:
    names = set(kb.individuals()) | set(kb.concept_names()) | set(kb.role_names())
    if q is not None:
        names |= set(q.individuals()) | set(q.concept_names()) | set(q.role_names())
    return names


def bcs_to_iqa_p(kb: WeightedKB, k):
    """k-satisfiability as possible entailment of a fresh concept at any individual."""
    taken = _taken(kb)
    a_name = fresh_name("A", taken)
    inds = kb.individuals()
    ind = inds[0] if inds else fresh_name("a", taken | {a_name})
    return kb, CQ((), (CAtom(a_name, Ind(ind)),)), k


_EL = ("EL", "EL_bot")


def iqa_p_to_co_iqa_c(kb: WeightedKB, iq: CQ, k):
    """Return ``(kb2, iq2, k + 1)`` with ``kb |=_p^k iq`` iff not ``kb2 |=_c^(k+1) iq2``.

    Queries of the shapes ``r(a,x)``, ``r(x,a)`` and ``r(x,y)`` are first
    turned into concept IQs through a fresh ``B == exists r``.  EL and EL_bot
    KBs get the qualified-existential gadget for ``exists y A(y)``; every
    other dialect the inverse-role one.  ``r(x,a)`` has no EL counterpart.
    """
    if k is INF or not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise ValueError(f"k must be a non-negative integer, got {k!r}")
    if not iq.boolean or len(iq.atoms) != 1:
        raise ValueError(f"not a Boolean IQ: {iq}")
    rep = validate_kb(kb)
    if not rep.valid:
        raise ValueError("invalid KB: " + "; ".join(rep.diagnostics))
    el = rep.dialect in _EL
    (atom,) = iq.atoms
    if el and isinstance(atom, RAtom) and isinstance(atom.right, Ind) and isinstance(atom.left, Var):
        raise ValueError(f"IQ shape r(x,a) is not supported for {rep.dialect}: {iq}")
    tbox, q = normalize_iq(kb.tbox, iq)
    taken = _taken(kb.with_tbox(tbox), q)
    abox = list(kb.abox)
    (atom,) = q.atoms
    a_bar = fresh_name(_concept_name(atom) + "_bar", taken)
    taken.add(a_bar)
    if isinstance(atom, CAtom) and isinstance(atom.term, Ind):
        # shape (i): A(a)
        a, ind = atom.concept, atom.term.name
        tbox += ((ConceptInclusion(conj(Name(a), Name(a_bar)), BOTTOM), INF),)
        abox = _add_assertion(abox, ConceptAssertion(a, ind), INF)
        abox = _add_assertion(abox, ConceptAssertion(a_bar, ind), 1)
        q2 = CQ((), (CAtom(a_bar, Ind(ind)),))
    elif isinstance(atom, CAtom):
        # shape (ii): exists y A(y)
        a = atom.concept
        a0 = fresh_name(a + "_0", taken)
        taken.add(a0)
        r = fresh_name("r", taken)
        taken.add(r)
        s = fresh_name("s", taken)
        taken.add(s)
        ind = fresh_name("a", taken)
        if el:
            a1 = fresh_name(a + "_1", taken | {ind})
            tbox += (
                (ConceptInclusion(Name(a0), ExistsQ(Role(s), Name(a))), INF),
                (ConceptInclusion(Name(a), ExistsQ(Role(r), Name(a1))), INF),
                (ConceptInclusion(Name(a1), Name(a_bar)), 1),
            )
        else:
            tbox += (
                (ConceptInclusion(Name(a0), Exists(Role(s))), INF),
                (ConceptInclusion(Exists(Role(s, True)), Name(a)), INF),
                (ConceptInclusion(Name(a), Exists(Role(r))), INF),
                (ConceptInclusion(Exists(Role(r, True)), Name(a_bar)), 1),
            )
        abox.append((ConceptAssertion(a0, ind), INF))
        y = fresh_name("y", set())
        q2 = CQ((), (CAtom(a_bar, Var(y)),))
    else:
        # shape (iii): r(a,b)
        r, a, b = atom.role, atom.left.name, atom.right.name
        tbox += ((ConceptInclusion(conj(Name(a_bar), Exists(Role(r))), BOTTOM), INF),)
        abox = _add_assertion(abox, RoleAssertion(r, a, b), INF)
        abox.append((ConceptAssertion(a_bar, a), 1))
        q2 = CQ((), (CAtom(a_bar, Ind(a)),))
    return WeightedKB(tbox, tuple(abox)), q2, k + 1


def _concept_name(atom) -> str:
    return atom.concept if isinstance(atom, CAtom) else "A"


def _add_assertion(abox: list, a, w) -> list:
    """Add ``a`` with weight ``w``; an existing copy takes the larger weight."""
    for i, (b, v) in enumerate(abox):
        if b == a:
            abox[i] = (a, INF if INF in (v, w) else max(v, w))
            return abox
    abox.append((a, w))
    return abox


def pad_cost(kb: WeightedKB, k):
    """Return ``(kb2, k + 1)``: a fresh assertion of weight 1 that must be violated."""
    taken = _taken(kb)
    a = fresh_name("A", taken)
    ind = fresh_name("a", taken | {a})
    kb2 = WeightedKB(
        kb.tbox + ((ConceptInclusion(Name(a), BOTTOM), INF),),
        kb.abox + ((ConceptAssertion(a, ind), 1),),
    )
    return kb2, (k if k is INF else k + 1)


# ---------------------------------------------------------------- hardness generators

_SIGNS = ("pos", "neg")


def _literal_roles(rows, n_vars: int, vname, rname, cname):
    """Role assertions linking each row to the variables of its literals."""
    out = []
    for i, row in enumerate(rows, 1):
        for j, lit in enumerate(row, 1):
            out.append((RoleAssertion(rname(lit > 0, j), cname(i), vname(abs(lit))), INF))
    return out


def _dedupe(abox):
    seen = {}
    for a, w in abox:
        if a in seen:
            w = INF if INF in (w, seen[a]) else max(w, seen[a])
        seen[a] = w
    return tuple(seen.items())


def _var_tbox(el_bot: bool):
    true, false, bool_ = Name("True"), Name("False"), Name("Bool")
    val = Role("val")
    tbox = [(ConceptInclusion(bool_, true), 1)]
    if el_bot:
        tbox.append((ConceptInclusion(conj(true, false), BOTTOM), INF))
    tbox += [
        (ConceptInclusion(Name("Var"), ExistsQ(val, bool_)), INF),
        (ConceptInclusion(ExistsQ(val, true), true), INF),
        (ConceptInclusion(ExistsQ(val, false), false), INF),
    ]
    return tbox


def _value_abox(n_vars: int, n_rows: int):
    abox = [(ConceptAssertion("False", "a"), INF), (ConceptAssertion("Bool", "a"), INF)]
    abox += [(ConceptAssertion("Var", f"v{i}"), INF) for i in range(1, n_vars + 1)]
    abox += [(RoleAssertion("clause", "a", f"c{i}"), INF) for i in range(1, n_rows + 1)]
    return abox


def gen_3sat(phi: CNFFormula) -> WeightedKB:
    """EL_bot WKB that is 1-satisfiable iff ``phi`` is satisfiable."""
    tbox = _var_tbox(el_bot=True)
    true, false = Name("True"), Name("False")
    tbox.append((ConceptInclusion(ExistsQ(Role("clause"), false), true), INF))
    # a clause is false when every literal is: pos_j points to False, neg_j to True
    for signs in itertools.product(_SIGNS, repeat=3):
        lhs = conj(*(ExistsQ(Role(f"{s}{j}"), false if s == "pos" else true)
                     for j, s in enumerate(signs, 1)))
        tbox.append((ConceptInclusion(lhs, false), INF))
    abox = _value_abox(phi.n_vars, len(phi.clauses))
    abox += _literal_roles(phi.clauses, phi.n_vars, lambda v: f"v{v}",
                           lambda pos, j: f"{'pos' if pos else 'neg'}{j}", lambda i: f"c{i}")
    return WeightedKB(tuple(tbox), _dedupe(abox))


def gen_3dnf_certain(phi: DNFFormula):
    """EL WKB, query ``True(a)`` and k = 1; certain entailment iff ``phi`` is a tautology."""
    tbox = _var_tbox(el_bot=False)
    true, false = Name("True"), Name("False")
    tbox.append((ConceptInclusion(ExistsQ(Role("clause"), true), true), INF))
    # a term is true when every literal is: pos_j points to True, neg_j to False
    for signs in itertools.product(_SIGNS, repeat=3):
        lhs = conj(*(ExistsQ(Role(f"{s}{j}"), true if s == "pos" else false)
                     for j, s in enumerate(signs, 1)))
        tbox.append((ConceptInclusion(lhs, true), INF))
    abox = _value_abox(phi.n_vars, len(phi.terms))
    abox += _literal_roles(phi.terms, phi.n_vars, lambda v: f"v{v}",
                           lambda pos, j: f"{'pos' if pos else 'neg'}{j}", lambda i: f"c{i}")
    q = CQ((), (CAtom("True", Ind("a")),))
    return WeightedKB(tuple(tbox), _dedupe(abox)), q, 1


COLORS = ("r", "g", "b")


def _vertex_ind(v: str) -> str:
    return "v_" + v


def _edge_ind(u: str, v: str) -> str:
    return f"e_{u}_{v}"


def gen_3col(g: Graph):
    """DL-Lite_core WKB and k = 4|E|; k-satisfiable iff ``g`` is 3-colourable.

    Each edge is oriented from the earlier to the later vertex of ``g.vertices``.
    """
    tbox = []
    slots = [(c, i) for c in COLORS for i in (1, 2)]
    for (s, i), (t, j) in itertools.combinations(slots, 2):
        if s != t:
            tbox.append((ConceptInclusion(conj(Exists(Role(f"{s}{i}")), Exists(Role(f"{t}{j}"))),
                                          BOTTOM), INF))
    for s in COLORS:
        tbox.append((ConceptInclusion(conj(Exists(Role(f"{s}1", True)), Exists(Role(f"{s}2", True))),
                                      BOTTOM), INF))
    abox = []
    for u, v in g.edges:
        e = _edge_ind(u, v)
        for s in COLORS:
            abox.append((RoleAssertion(f"{s}1", _vertex_ind(u), e), 1))
            abox.append((RoleAssertion(f"{s}2", _vertex_ind(v), e), 1))
    return WeightedKB(tuple(tbox), tuple(abox)), 4 * len(g.edges)


def gen_lexmax(phi: CNFFormula, k_index: int):
    """DL-Lite_core WKB and IQ ``T(x_k)``; under optimal cost, certain and
    possible entailment both hold iff the lexicographically maximum model of
    ``phi`` sets ``x_k`` true.  ``phi`` must be satisfiable (not checked)."""
    n, m = phi.n_vars, len(phi.clauses)
    if not 1 <= k_index <= n:
        raise ValueError(f"variable index {k_index} out of range 1..{n}")
    tbox = []
    for l in (1, 2, 3):
        tbox.append((ConceptInclusion(Exists(Role(f"n{l}", True)), Not(Name("T"))), INF))
    for l in (1, 2, 3):
        for l2 in (1, 2, 3):
            tbox.append((ConceptInclusion(Exists(Role(f"p{l}")), Not(Exists(Role(f"n{l2}")))), INF))
            tbox.append((ConceptInclusion(Exists(Role(f"p{l}", True)),
                                          Not(Exists(Role(f"n{l2}", True)))), INF))
    for l in (1, 2, 3):
        for l2 in (1, 2, 3):
            if l != l2:
                tbox.append((ConceptInclusion(Exists(Role(f"p{l}")), Not(Exists(Role(f"p{l2}")))), INF))
                tbox.append((ConceptInclusion(Exists(Role(f"n{l}")), Not(Exists(Role(f"n{l2}")))), INF))
    u = 3 * m + 1
    abox = [(a, u ** n) for a, _ in _literal_roles(
        phi.clauses, n, lambda v: f"x{v}", lambda pos, j: f"{'p' if pos else 'n'}{j}",
        lambda i: f"c{i}")]
    # T(x_i) sits at priority level i + 1, weighted u^(n + 1 - (i + 1))
    abox += [(ConceptAssertion("T", f"x{i}"), u ** (n - i)) for i in range(1, n + 1)]
    return WeightedKB(tuple(tbox), _dedupe(abox)), CQ((), (CAtom("T", Ind(f"x{k_index}")),))


def _sign_str(s) -> str:
    return "".join(str(b) for b in s)


def gen_3dnf_cq_certain(phi: DNFFormula):
    """DL-Lite_core WKB, connected acyclic BCQ and k = 1; certain entailment
    iff ``phi`` is a tautology."""
    tbox = (
        (ConceptInclusion(Name("Bool"), Name("True")), 1),
        (ConceptInclusion(Name("Var"), Exists(Role("val"))), INF),
        (ConceptInclusion(Exists(Role("val", True)), Name("Bool")), INF),
    )
    signs = list(itertools.product((0, 1), repeat=3))
    abox = [
        (ConceptAssertion("False", "a"), INF),
        (ConceptAssertion("True", "b"), INF),
        (ConceptAssertion("Bool", "a"), INF),
        (ConceptAssertion("Bool", "b"), INF),
        (RoleAssertion("val", "a", "a"), INF),
        (RoleAssertion("val", "a", "b"), INF),
        (RoleAssertion("val", "d", "a"), INF),
    ]
    abox += [(ConceptAssertion("Var", f"v{i}"), INF) for i in range(1, phi.n_vars + 1)]
    for i, term in enumerate(phi.terms, 1):
        s = tuple(1 if lit > 0 else 0 for lit in term)
        abox.append((RoleAssertion(f"clause_{_sign_str(s)}", f"a_{_sign_str(s)}", f"c{i}"), INF))
        for j, lit in enumerate(term, 1):
            abox.append((RoleAssertion(f"lit{j}_{1 if lit > 0 else 0}", f"c{i}", f"v{abs(lit)}"), INF))
    for s in signs:
        for s2 in signs:
            if s != s2:
                abox.append((RoleAssertion(f"clause_{_sign_str(s)}", f"a_{_sign_str(s2)}", "a"), INF))
        abox.append((RoleAssertion(f"clause_{_sign_str(s)}", "d", "d"), INF))
    for j in (1, 2, 3):
        for b in (0, 1):
            abox.append((RoleAssertion(f"lit{j}_{b}", "a", "a"), INF))
            abox.append((RoleAssertion(f"lit{j}_{b}", "d", "d"), INF))
    y = Var("y")
    atoms = []
    for s in signs:
        tag = _sign_str(s)
        y0 = Var(f"y{tag}_0")
        atoms.append(RAtom(f"clause_{tag}", y, y0))
        for j, bit in enumerate(s, 1):
            yj, yj2 = Var(f"y{tag}_{j}"), Var(f"y{tag}_{j}p")
            atoms.append(RAtom(f"lit{j}_{bit}", y0, yj))
            atoms.append(RAtom("val", yj, yj2))
            atoms.append(CAtom("True" if bit else "False", yj2))
    return WeightedKB(tbox, _dedupe(abox)), CQ((), tuple(atoms)), 1


# ---------------------------------------------------------------- ground truth by brute force


def _assignments(n: int):
    return itertools.product((False, True), repeat=n)


def cnf_satisfiable(phi: CNFFormula) -> bool:
    return any(phi.holds(nu) for nu in _assignments(phi.n_vars))


def dnf_tautology(phi: DNFFormula) -> bool:
    return all(phi.holds(nu) for nu in _assignments(phi.n_vars))


def three_colorable(g: Graph) -> bool:
    pos = {v: i for i, v in enumerate(g.vertices)}
    for col in itertools.product(range(3), repeat=len(g.vertices)):
        if all(col[pos[u]] != col[pos[v]] for u, v in g.edges):
            return True
    return False


def lexmax_assignment(phi: CNFFormula) -> tuple[bool, ...] | None:
    """The satisfying assignment that is largest for the order x_1 > x_2 > ...,
    with true above false; None when ``phi`` is unsatisfiable."""
    # product over (True, False) lists assignments in decreasing lexicographic order
    for nu in itertools.product((True, False), repeat=phi.n_vars):
        if phi.holds(nu):
            return nu
    return None


__all__ = [
    "CNFFormula", "DNFFormula", "Graph", "parse_dimacs", "parse_cnf", "parse_dnf",
    "format_dimacs", "parse_edge_list", "format_edge_list", "bcs_to_iqa_p",
    "iqa_p_to_co_iqa_c", "pad_cost", "gen_3sat", "gen_3dnf_certain", "gen_3col",
    "gen_lexmax", "gen_3dnf_cq_certain", "cnf_satisfiable", "dnf_tautology",
    "three_colorable", "lexmax_assignment",
]
