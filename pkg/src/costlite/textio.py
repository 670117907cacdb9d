"""Text formats: ``.wkb`` knowledge bases, ``.q`` queries and ``.fo`` formulas.

All three grammars are tiny, so each gets a regex tokenizer and a
recursive-descent parser that reports errors with line and column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from . import fo as F
from .kb import (
    BOTTOM, CQ, INF, TOP, And, CAtom, ConceptAssertion, ConceptInclusion,
    Exists, ExistsQ, Ind, Name, Nominal, Not, Or, RAtom, Role, RoleAssertion,
    RoleInclusion, Var, WeightedKB, weight_str,
)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col
        self.msg = msg


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<sub>\[=)
  | (?P<arrow><->|->)
  | (?P<wpred>[Ww]\[[A-Za-z_][A-Za-z0-9_]*,(?:inf|[0-9]+)\])
  | (?P<count>exists>[0-9]+)
  | (?P<int>[0-9]+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<quoted>"[A-Za-z_][A-Za-z0-9_]*")
  | (?P<punct>[()\[\]{},.:|&!=\-])
    """,
    re.VERBOSE,
)


def tokenize(text: str, keep_newlines: bool = False) -> list[Tok]:
    out: list[Tok] = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            if keep_newlines:
                out.append(Tok("nl", s, line, col))
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Tok(kind, s, line, col))
        pos = m.end()
    out.append(Tok("eof", "", line, pos - line_start + 1))
    return out


class _Stream:
    def __init__(self, toks: list[Tok]):
        self.toks = toks
        self.i = 0

    @property
    def cur(self) -> Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        t = self.cur
        return t.text == text and t.kind in ("punct", "name", "sub", "arrow")

    def next(self) -> Tok:
        t = self.cur
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, text: str) -> Tok:
        t = self.cur
        if not self.at(text):
            self.fail(f"expected {text!r}, found {t.text or 'end of input'!r}")
        return self.next()

    def expect_name(self, what: str = "name") -> Tok:
        t = self.cur
        if t.kind != "name":
            self.fail(f"expected {what}, found {t.text or 'end of input'!r}")
        return self.next()

    def fail(self, msg: str, tok: Tok | None = None):
        t = tok or self.cur
        raise ParseError(msg, t.line, t.col)


# ---------------------------------------------------------------- knowledge bases

KEYWORDS = {"top", "bot", "exists", "not", "and", "or", "inf", "forall", "true", "false", "cq"}


def _parse_role(s: _Stream) -> Role:
    t = s.expect_name("role name")
    if t.text in KEYWORDS:
        s.fail(f"keyword {t.text!r} used as a role name", t)
    if s.at("-"):
        s.next()
        return Role(t.text, True)
    return Role(t.text)


def _parse_unary(s: _Stream):
    t = s.cur
    if t.kind == "name":
        if t.text == "top":
            s.next()
            return TOP
        if t.text == "bot":
            s.next()
            return BOTTOM
        if t.text == "not":
            s.next()
            return Not(_parse_unary(s))
        if t.text == "exists":
            s.next()
            r = _parse_role(s)
            if s.at("."):
                s.next()
                return ExistsQ(r, _parse_unary(s))
            return Exists(r)
        if t.text in KEYWORDS:
            s.fail(f"unexpected keyword {t.text!r}")
        s.next()
        return Name(t.text)
    if s.at("{"):
        s.next()
        a = s.expect_name("individual")
        s.expect("}")
        return Nominal(a.text)
    if s.at("("):
        s.next()
        left = _parse_unary(s)
        op = s.cur
        if op.text not in ("and", "or") or op.kind != "name":
            s.fail("expected 'and' or 'or'")
        s.next()
        right = _parse_unary(s)
        s.expect(")")
        return And(left, right) if op.text == "and" else Or(left, right)
    s.fail(f"expected a concept, found {t.text or 'end of input'!r}")


def _parse_weight(s: _Stream):
    t = s.cur
    if t.kind == "name" and t.text == "inf":
        s.next()
        w = INF
    elif t.kind == "int":
        if int(t.text) == 0:
            s.fail("weights must be positive")
        s.next()
        w = int(t.text)
    else:
        s.fail("expected a weight ('inf' or an integer)")
    s.expect("|")
    return w


def _split_lines(toks: list[Tok]) -> list[list[Tok]]:
    lines: list[list[Tok]] = [[]]
    for t in toks:
        if t.kind == "nl":
            lines.append([])
        elif t.kind != "eof":
            lines[-1].append(t)
    return [ln for ln in lines if ln]


def _line_stream(ln: list[Tok]) -> _Stream:
    last = ln[-1]
    return _Stream(ln + [Tok("eof", "", last.line, last.col + len(last.text))])


def _is_bare_name_axiom(ln: list[Tok]) -> bool:
    # "w | X [= Y" with both sides plain names
    return (
        len(ln) == 5
        and ln[2].kind == "name"
        and ln[3].kind == "sub"
        and ln[4].kind == "name"
        and ln[2].text not in KEYWORDS
        and ln[4].text not in KEYWORDS
    )


def _names_in(c, roles: set, concepts: set) -> None:
    from .kb import subconcepts

    for x in subconcepts(c):
        if isinstance(x, Name):
            concepts.add(x.name)
        elif isinstance(x, (Exists, ExistsQ)):
            roles.add(x.role.name)


def parse_kb(text: str) -> WeightedKB:
    """Parse a ``.wkb`` document.

    ``X [= Y`` with two plain names is ambiguous.  It is read as a role
    inclusion when one side is used as a role elsewhere and neither as a
    concept; if neither name is used elsewhere it is a role inclusion exactly
    when both names start with a lowercase letter.
    """
    lines = _split_lines(tokenize(text, keep_newlines=True))
    items: list = []
    section = None
    for ln in lines:
        s = _line_stream(ln)
        if s.at("["):
            s.next()
            name = s.expect_name("section name")
            if name.text not in ("tbox", "abox"):
                s.fail(f"unknown section {name.text!r}", name)
            s.expect("]")
            if s.cur.kind != "eof":
                s.fail("junk after section header")
            section = name.text
            continue
        if section is None:
            s.fail("statement outside of a [tbox] or [abox] section")
        w = _parse_weight(s)
        if section == "abox":
            pred = s.expect_name("predicate")
            s.expect("(")
            a = s.expect_name("individual")
            if s.at(","):
                s.next()
                b = s.expect_name("individual")
                s.expect(")")
                items.append(("a", RoleAssertion(pred.text, a.text, b.text), w))
            else:
                s.expect(")")
                items.append(("a", ConceptAssertion(pred.text, a.text), w))
        elif _is_bare_name_axiom(ln):
            items.append(("?", (ln[2].text, ln[4].text), w))
            continue
        elif _looks_like_ri(s):
            r1 = _parse_role(s)
            s.expect("[=")
            r2 = _parse_role(s)
            items.append(("t", RoleInclusion(r1, r2), w))
        else:
            lhs = _parse_unary(s)
            s.expect("[=")
            rhs = _parse_unary(s)
            items.append(("t", ConceptInclusion(lhs, rhs), w))
        if s.cur.kind != "eof":
            s.fail(f"unexpected {s.cur.text!r} at end of statement")

    roles: set[str] = set()
    concepts: set[str] = set()
    for kind, it, _ in items:
        if isinstance(it, RoleAssertion):
            roles.add(it.role)
        elif isinstance(it, ConceptAssertion):
            concepts.add(it.concept)
        elif isinstance(it, RoleInclusion):
            roles.update((it.lhs.name, it.rhs.name))
        elif isinstance(it, ConceptInclusion):
            _names_in(it.lhs, roles, concepts)
            _names_in(it.rhs, roles, concepts)
    tbox: list = []
    abox: list = []
    for kind, it, w in items:
        if kind == "a":
            abox.append((it, w))
        elif kind == "t":
            tbox.append((it, w))
        else:
            x, y = it
            if x in concepts or y in concepts:
                as_role = False
            elif x in roles or y in roles:
                as_role = True
            else:
                as_role = x[0].islower() and y[0].islower()
            if as_role:
                tbox.append((RoleInclusion(Role(x), Role(y)), w))
            else:
                tbox.append((ConceptInclusion(Name(x), Name(y)), w))
    return WeightedKB(tuple(tbox), tuple(abox))


def _looks_like_ri(s: _Stream) -> bool:
    # NAME ['-'] '[=' NAME ['-'] with at least one inverse marker
    rest = [t for t in s.toks[s.i:] if t.kind != "eof"]
    shape = "".join(
        "n" if t.kind == "name" and t.text not in KEYWORDS else
        "-" if t.text == "-" else
        "=" if t.kind == "sub" else "?"
        for t in rest
    )
    return shape in ("n-=n", "n=n-", "n-=n-")


def serialize_concept(c) -> str:
    return str(c)


def serialize_kb(kb: WeightedKB) -> str:
    out = ["[tbox]"]
    for ax, w in kb.tbox:
        out.append(f"{weight_str(w)} | {ax}")
    out.append("[abox]")
    for a, w in kb.abox:
        out.append(f"{weight_str(w)} | {a}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- queries


def parse_query(text: str) -> CQ:
    s = _Stream(tokenize(text))
    head = s.expect_name("'cq'")
    if head.text != "cq":
        s.fail("a query starts with 'cq'", head)
    s.expect("[")
    free: list[str] = []
    while not s.at("]"):
        free.append(s.expect_name("variable").text)
        if not s.at("]"):
            s.expect(",")
    s.expect("]")
    s.expect(":")
    exist: list[str] = []
    if s.cur.kind == "name" and s.cur.text == "exists":
        s.next()
        exist.append(s.expect_name("variable").text)
        while s.at(","):
            s.next()
            exist.append(s.expect_name("variable").text)
        s.expect(".")
    declared = free + exist
    if len(set(declared)) != len(declared):
        s.fail("variable declared twice")
    atoms = []
    used: set[str] = set()
    if s.cur.kind == "name" and s.cur.text == "true":
        s.next()
    elif s.cur.kind != "eof":
        while True:
            pred = s.expect_name("predicate")
            s.expect("(")
            args = [s.expect_name("term")]
            if s.at(","):
                s.next()
                args.append(s.expect_name("term"))
            s.expect(")")
            terms = []
            for a in args:
                if a.text in declared:
                    terms.append(Var(a.text))
                    used.add(a.text)
                else:
                    terms.append(Ind(a.text))
            atoms.append(CAtom(pred.text, terms[0]) if len(terms) == 1 else RAtom(pred.text, *terms))
            if s.at(","):
                s.next()
                continue
            break
    if s.cur.kind != "eof":
        s.fail(f"unexpected {s.cur.text!r}")
    for v in declared:
        if v not in used:
            raise ParseError(f"variable {v!r} does not occur in any atom", head.line, head.col)
    return CQ(tuple(Var(v) for v in free), tuple(atoms))


def serialize_query(q: CQ) -> str:
    return str(q) + "\n"


# ---------------------------------------------------------------- FO formulas

_VAR_LIKE = re.compile(r"[uv][0-9]+")


def serialize_fo(phi: F.Formula, simplify: bool = True) -> str:
    """Fully parenthesized text; free variables become u0,u1,.. and bound ones v<i>."""
    if simplify:
        phi = F.simplify(phi)
    free = F.free_vars(phi)
    names: dict = {v: f"u{i}" for i, v in enumerate(free)}
    counter = [len(free)]
    parts: list[str] = []

    def term(t, env) -> str:
        if isinstance(t, Var):
            if t in env:
                return env[t]
            return names[t]
        return f'"{t.name}"' if _VAR_LIKE.fullmatch(t.name) or t.name in KEYWORDS else t.name

    def go(f, env) -> None:
        if isinstance(f, F.Truth):
            parts.append("true" if f.value else "false")
        elif isinstance(f, F.FConcept):
            parts.append(f"{f.name}({term(f.term, env)})")
        elif isinstance(f, F.FWConcept):
            parts.append(f"{f.predicate}({term(f.term, env)})")
        elif isinstance(f, F.FRole):
            parts.append(f"{f.name}({term(f.left, env)},{term(f.right, env)})")
        elif isinstance(f, F.FWRole):
            parts.append(f"{f.predicate}({term(f.left, env)},{term(f.right, env)})")
        elif isinstance(f, F.FEq):
            parts.append(f"({term(f.left, env)} = {term(f.right, env)})")
        elif isinstance(f, F.FNot):
            parts.append("!")
            go(f.arg, env)
        elif isinstance(f, (F.FAnd, F.FOr)):
            op = " & " if isinstance(f, F.FAnd) else " | "
            parts.append("(")
            for i, a in enumerate(f.args):
                if i:
                    parts.append(op)
                go(a, env)
            parts.append(")")
        elif isinstance(f, (F.FImplies, F.FIff)):
            op = " -> " if isinstance(f, F.FImplies) else " <-> "
            parts.append("(")
            go(f.left, env)
            parts.append(op)
            go(f.right, env)
            parts.append(")")
        else:
            name = f"v{counter[0]}"
            counter[0] += 1
            if isinstance(f, F.FExists):
                parts.append(f"exists {name}. ")
            elif isinstance(f, F.FForall):
                parts.append(f"forall {name}. ")
            else:
                parts.append(f"exists>{f.k} {name}. ")
            go(f.body, {**env, f.var: name})

    go(phi, {})
    return "".join(parts)


def parse_fo(text: str) -> F.Formula:
    toks = tokenize(text)
    s = _Stream(toks)
    phi = _fo_formula(s, {})
    if s.cur.kind != "eof":
        s.fail(f"unexpected {s.cur.text!r}")
    return phi


def _fo_term(s: _Stream, env: dict):
    t = s.cur
    if t.kind == "quoted":
        s.next()
        return Ind(t.text[1:-1])
    name = s.expect_name("term").text
    if name in env:
        return env[name]
    if re.fullmatch(r"u[0-9]+", name):
        return Var(name)
    return Ind(name)


def _parse_weight_pred(text: str):
    m = re.fullmatch(r"([Ww])\[([A-Za-z_][A-Za-z0-9_]*),(inf|[0-9]+)\]", text)
    w = INF if m.group(3) == "inf" else int(m.group(3))
    return m.group(1), m.group(2), w


def _fo_args(s: _Stream, env: dict) -> list:
    s.expect("(")
    args = [_fo_term(s, env)]
    while s.at(","):
        s.next()
        args.append(_fo_term(s, env))
    s.expect(")")
    return args


def _fo_formula(s: _Stream, env: dict) -> F.Formula:
    t = s.cur
    if t.kind == "count":
        s.next()
        k = int(t.text.split(">")[1])
        v = s.expect_name("variable").text
        s.expect(".")
        var = Var(v)
        return F.FCount(k, var, _fo_formula(s, {**env, v: var}))
    if t.kind == "name" and t.text in ("exists", "forall"):
        s.next()
        v = s.expect_name("variable").text
        s.expect(".")
        var = Var(v)
        body = _fo_formula(s, {**env, v: var})
        return F.FExists(var, body) if t.text == "exists" else F.FForall(var, body)
    if s.at("!"):
        s.next()
        return F.FNot(_fo_formula(s, env))
    if t.kind == "name" and t.text in ("true", "false"):
        s.next()
        return F.Truth(t.text == "true")
    if t.kind == "wpred":
        s.next()
        kind, name, w = _parse_weight_pred(t.text)
        args = _fo_args(s, env)
        if kind == "W":
            if len(args) != 1:
                s.fail("W[...] takes one argument", t)
            return F.FWConcept(name, w, args[0])
        if len(args) != 2:
            s.fail("w[...] takes two arguments", t)
        return F.FWRole(name, w, args[0], args[1])
    if t.kind == "name" and s.peek().text == "(":
        s.next()
        args = _fo_args(s, env)
        if len(args) == 1:
            return F.FConcept(t.text, args[0])
        if len(args) == 2:
            return F.FRole(t.text, args[0], args[1])
        s.fail("atoms take one or two arguments", t)
    if s.at("("):
        s.next()
        # equality inside parentheses
        if (s.cur.kind in ("name", "quoted") and s.peek().text == "=" and s.peek().kind == "punct"):
            left = _fo_term(s, env)
            s.expect("=")
            right = _fo_term(s, env)
            s.expect(")")
            return F.FEq(left, right)
        first = _fo_formula(s, env)
        if s.at(")"):
            s.next()
            return first
        op = s.cur
        if op.text in ("->", "<->"):
            s.next()
            second = _fo_formula(s, env)
            s.expect(")")
            return F.FImplies(first, second) if op.text == "->" else F.FIff(first, second)
        if op.text not in ("&", "|"):
            s.fail("expected '&', '|', '->' or '<->'")
        args = [first]
        while s.at(op.text):
            s.next()
            args.append(_fo_formula(s, env))
        s.expect(")")
        return F.FAnd(tuple(args)) if op.text == "&" else F.FOr(tuple(args))
    s.fail(f"expected a formula, found {t.text or 'end of input'!r}")


def format_header(meta: dict) -> str:
    return "".join(f"# {k}: {v}\n" for k, v in meta.items())


def parse_header(text: str) -> dict:
    meta = {}
    for line in text.splitlines():
        if not line.startswith("#"):
            break
        body = line[1:].strip()
        if ":" in body:
            k, v = body.split(":", 1)
            meta[k.strip()] = v.strip()
    return meta


def write_fo_file(path: str, phi: F.Formula, meta: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if meta:
            fh.write(format_header(meta))
        fh.write(serialize_fo(phi))
        fh.write("\n")


def read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def join_lines(lines: Iterable[str]) -> str:
    return "".join(ln + "\n" for ln in lines)
