"""Command-line driver: ``costlite <subcommand> ...``.

Exit codes: 2 on usage or input errors, 1 when a checking subcommand gives a
negative verdict, 0 otherwise.  Every subcommand accepts ``--json`` for a
structured report on stdout.
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import random
import sys

from . import fo as F
from . import reductions as R
from .harness import HarnessParams, random_bcq, random_biq, random_dllite_kb
from .kb import INF, CQ, CAtom, Ind, RAtom, WeightedKB, weight_str
from .rewriter import DEFAULT_MAX_INDIVIDUALS, TYPE_FORMS, answer_rewritten, rewrite
from .solver import (
    ENV_MAX_ANON,
    SearchConfig,
    default_max_anonymous,
    entails_bounded,
    entails_opt,
    k_satisfiable,
    solve_optimal,
)
from .textio import (
    ParseError,
    format_header,
    parse_fo,
    parse_header,
    parse_kb,
    parse_query,
    read_text,
    serialize_fo,
    serialize_kb,
    serialize_query,
    write_text,
)

log = logging.getLogger("costlite")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

_MODE_NAMES = {"p": "possible", "c": "certain", "possible": "possible", "certain": "certain"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return value


def _pos_int(text: str) -> int:
    value = _nonneg_int(text)
    if value == 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


# ---------------------------------------------------------------- reports


class Report:
    """Collects human-readable lines and the matching JSON fields."""

    def __init__(self, command: str):
        self.lines: list[str] = []
        self.data: dict = {"command": command}

    def line(self, text: str) -> None:
        self.lines.append(text)

    def set(self, **fields) -> None:
        self.data.update(fields)

    def emit(self, as_json: bool, out) -> None:
        if as_json:
            out.write(json.dumps(_jsonable(self.data), indent=2, sort_keys=True) + "\n")
        else:
            for ln in self.lines:
                out.write(ln + "\n")


def _jsonable(x):
    if x is INF:
        return "inf"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _qtext(q: CQ) -> str:
    text = str(q)
    return text if len(text) <= 100 else f"<query with {len(q.atoms)} atoms>"


def _yes(b: bool) -> str:
    return "yes" if b else "no"


# ---------------------------------------------------------------- inputs


def _load_kb(path: str) -> WeightedKB:
    return parse_kb(read_text(path))


def _load_query(path: str) -> CQ:
    return parse_query(read_text(path))


def _config(args) -> SearchConfig:
    # resolve the environment default now so a bad value fails on every path
    cap = args.max_anon if args.max_anon is not None else default_max_anonymous()
    return SearchConfig(max_anonymous=cap, exhaustive=False, seed=args.seed)


def _completeness(rep: Report, complete: bool) -> None:
    rep.set(complete=complete)
    if not complete:
        rep.line("note: the search space is not proven large enough, so this verdict is not"
                 f" guaranteed (for EL and ALCHIO KBs raise --max-anon or {ENV_MAX_ANON})")


def _budget(args):
    return "opt" if args.opt else args.k


# ---------------------------------------------------------------- subcommands


def cmd_sat(args, rep: Report) -> int:
    kb = _load_kb(args.kb)
    v = k_satisfiable(kb, args.k, _config(args))
    rep.line(f"{args.k}-satisfiable: {_yes(v.answer)}")
    rep.set(k=args.k, satisfiable=v.answer)
    if v.answer:
        rep.line(f"witness cost: {weight_str(v.cost)}")
        rep.set(witness_cost=v.cost)
    _completeness(rep, v.complete)
    return EXIT_OK if v.answer else EXIT_NEGATIVE


def _entail(kb: WeightedKB, q: CQ, mode: str, args):
    cfg = _config(args)
    if args.opt:
        return entails_opt(kb, q, mode, cfg)
    return entails_bounded(kb, q, args.k, mode, cfg)


def cmd_entail(args, rep: Report) -> int:
    kb = _load_kb(args.kb)
    q = _load_query(args.query)
    if not q.boolean:
        raise UsageError("entail needs a Boolean query; use 'answers' for free variables")
    mode = _MODE_NAMES[args.mode]
    v = _entail(kb, q, mode, args)
    budget = _budget(args)
    rep.line(f"{mode} entailment (k={budget}) of {_qtext(q)}: {_yes(v.answer)}")
    rep.set(mode=mode, k=budget, query=str(q), entailed=v.answer)
    if args.opt:
        opt = solve_optimal(kb, _config(args)).cost
        rep.line(f"optimal cost: {weight_str(opt)}")
        rep.set(optimal_cost=opt)
    _completeness(rep, v.complete)
    return EXIT_OK if v.answer else EXIT_NEGATIVE


def cmd_answers(args, rep: Report) -> int:
    kb = _load_kb(args.kb)
    q = _load_query(args.query)
    mode = _MODE_NAMES[args.mode]
    inds = sorted(kb.individuals())
    answers = []
    complete = True
    for combo in itertools.product(inds, repeat=len(q.free)):
        sub = dict(zip(q.free, (Ind(a) for a in combo)))
        atoms = tuple(_subst_atom(at, sub) for at in q.atoms)
        v = _entail(kb, CQ((), atoms), mode, args)
        complete = complete and v.complete
        if v.answer:
            answers.append(list(combo))
    head = ",".join(v.name for v in q.free)
    rep.line(f"{mode} answers (k={_budget(args)}) to {_qtext(q)}: {len(answers)}")
    for a in answers:
        rep.line(f"  ({head}) = ({','.join(a)})")
    rep.set(mode=mode, k=_budget(args), query=str(q), free=[v.name for v in q.free],
            answers=answers)
    _completeness(rep, complete)
    return EXIT_OK


def _subst_atom(at, sub: dict):
    def t(x):
        return sub.get(x, x)

    if isinstance(at, CAtom):
        return CAtom(at.concept, t(at.term))
    return RAtom(at.role, t(at.left), t(at.right))


def cmd_rewrite(args, rep: Report) -> int:
    kb = _load_kb(args.tbox)
    q = _load_query(args.query)
    rw = rewrite(kb.tbox, q, args.k, args.mode, max_individuals=args.max_abox,
                 type_form=args.type_form)
    meta = {"query": str(q), **rw.meta}
    text = format_header(meta) + serialize_fo(rw.formula) + "\n"
    write_text(args.output, text)
    rep.line(f"rewrote {_qtext(q)} (mode {rw.mode}, k={rw.k}) into {args.output}")
    for key, value in rw.meta.items():
        rep.line(f"  {key}: {value}")
    rep.line(f"  formula size: {F.size(rw.formula)}")
    rep.set(output=args.output, meta=dict(meta), size=F.size(rw.formula))
    return EXIT_OK


def cmd_eval(args, rep: Report) -> int:
    text = read_text(args.fo)
    meta = parse_header(text)
    mode = "p" if args.mode in ("p", "possible") else "c"
    if "mode" in meta and meta["mode"] != mode:
        raise UsageError(f"{args.fo} was rewritten for mode {meta['mode']}, not {mode}")
    if "k" in meta and meta["k"] != str(args.k):
        raise UsageError(f"{args.fo} was rewritten for k={meta['k']}, not {args.k}")
    phi = parse_fo("\n".join(ln for ln in text.splitlines() if not ln.startswith("#")))
    abox = _load_kb(args.abox).abox
    names = set(WeightedKB((), abox).individuals()) | set(F.constants(phi))
    limit = meta.get("max-individuals")
    if limit is not None and len(names) > int(limit):
        rep.line(f"warning: {len(names)} individuals exceed the {limit} the rewriting is exact for")
        rep.set(warning="ABox outside the exact regime")
    answer = answer_rewritten(phi, abox, args.k, mode)
    rep.line(f"{_MODE_NAMES[mode]} entailment (k={args.k}) via rewriting: {_yes(answer)}")
    rep.set(mode=_MODE_NAMES[mode], k=args.k, entailed=answer, query=meta.get("query"))
    return EXIT_OK if answer else EXIT_NEGATIVE


# -- generators


def _emit_instance(args, rep: Report, kb: WeightedKB, q: CQ | None, k, truth: dict) -> None:
    header = {"generator": args.kind, **{key: _yes(v) if isinstance(v, bool) else v
                                         for key, v in truth.items()}}
    if k is not None:
        header["k"] = k
    if q is not None:
        header["query"] = _qtext(q)
    kb_text = format_header(header) + serialize_kb(kb)
    if args.output:
        kb_path = args.output + ".wkb"
        write_text(kb_path, kb_text)
        files = [kb_path]
        if q is not None:
            q_path = args.output + ".q"
            write_text(q_path, serialize_query(q))
            files.append(q_path)
        rep.line(f"wrote {' and '.join(files)}")
        rep.set(files=files)
    else:
        rep.line(kb_text.rstrip("\n"))
    if args.output:
        rep.lines += [f"  {key}: {value}" for key, value in header.items() if key != "generator"]
    rep.set(generator=args.kind, k=k, query=str(q) if q is not None else None,
            assertions=len(kb.abox), axioms=len(kb.tbox), truth=truth)


def cmd_gen(args, rep: Report) -> int:
    kind = args.kind
    if kind in ("3sat", "lexmax"):
        if not args.cnf:
            raise UsageError(f"gen {kind} needs --cnf FILE")
        phi = R.parse_cnf(read_text(args.cnf))
        if kind == "3sat":
            _emit_instance(args, rep, R.gen_3sat(phi), None, 1,
                           {"satisfiable": R.cnf_satisfiable(phi)})
        else:
            if args.var is None:
                raise UsageError("gen lexmax needs --var K")
            best = R.lexmax_assignment(phi)
            if best is None:
                raise UsageError("gen lexmax needs a satisfiable formula")
            kb, q = R.gen_lexmax(phi, args.var)
            _emit_instance(args, rep, kb, q, "opt", {"lexmax-true": best[args.var - 1]})
    elif kind in ("3dnf-iq", "3dnf-cq"):
        if not args.dnf:
            raise UsageError(f"gen {kind} needs --dnf FILE")
        phi = R.parse_dnf(read_text(args.dnf))
        gen = R.gen_3dnf_certain if kind == "3dnf-iq" else R.gen_3dnf_cq_certain
        kb, q, k = gen(phi)
        _emit_instance(args, rep, kb, q, k, {"tautology": R.dnf_tautology(phi)})
    else:
        if not args.graph:
            raise UsageError("gen 3col needs --graph FILE")
        g = R.parse_edge_list(read_text(args.graph))
        kb, k = R.gen_3col(g)
        _emit_instance(args, rep, kb, None, k, {"3-colorable": R.three_colorable(g)})
    return EXIT_OK


# -- cross-validation


def oracle_instances(seed: int, count: int, mode: str, params: HarnessParams | None = None):
    """The pseudo-random (kb, query, k) triples used by ``oracle-check``."""
    params = params or HarnessParams()
    rng = random.Random(seed)
    for _ in range(count):
        kb = random_dllite_kb(rng, params)
        k = rng.choice(params.ks)
        q = random_bcq(rng, kb, params) if mode == "p" else random_biq(rng, kb, params)
        yield kb, q, k


def cmd_oracle_check(args, rep: Report) -> int:
    mode = "p" if args.mode in ("p", "possible") else "c"
    semantics = _MODE_NAMES[mode]
    params = HarnessParams(max_individuals=args.max_abox)
    disagreements = []
    entailed = 0
    strategies = 0
    for i, (kb, q, k) in enumerate(oracle_instances(args.seed, args.count, mode, params)):
        rw = rewrite(kb.tbox, q, k, mode, max_individuals=args.max_abox, type_form=args.type_form)
        via_rewriting = answer_rewritten(rw, kb.abox, k, mode)
        oracle = entails_bounded(kb, q, k, semantics, _config(args)).answer
        entailed += oracle
        strategies += rw.meta["strategies"]
        if args.verbose:
            rep.line(f"[{i}] k={k} {q} rewriting={_yes(via_rewriting)} oracle={_yes(oracle)}")
        if via_rewriting != oracle:
            disagreements.append({"index": i, "k": k, "query": str(q), "kb": serialize_kb(kb),
                                  "rewriting": via_rewriting, "oracle": oracle})
            rep.line(f"DISAGREEMENT at instance {i}: k={k} query {q}: "
                     f"rewriting {_yes(via_rewriting)}, oracle {_yes(oracle)}")
            for ln in serialize_kb(kb).splitlines():
                rep.line("    " + ln)
    rep.line(f"oracle-check mode={mode} seed={args.seed}: {args.count} instances, "
             f"{len(disagreements)} disagreements, {entailed} entailed, {strategies} strategies")
    rep.set(mode=mode, seed=args.seed, count=args.count, disagreements=disagreements,
            entailed=entailed, strategies=strategies)
    return EXIT_OK if not disagreements else EXIT_NEGATIVE


# ---------------------------------------------------------------- argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured report on stdout")
    common.add_argument("--max-anon", type=_nonneg_int, default=None,
                        help=f"anonymous-element cap (default: ${ENV_MAX_ANON} or 2)")
    common.add_argument("--seed", type=int, default=0, help="seed for search heuristics")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="costlite", description="Cost-based reasoning over weighted knowledge bases.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("sat", parents=[common], help="k-satisfiability")
    s.add_argument("--kb", required=True)
    s.add_argument("--k", type=_nonneg_int, required=True)
    s.set_defaults(func=cmd_sat)

    def budget(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--k", type=_nonneg_int)
        g.add_argument("--opt", action="store_true", help="optimal-cost semantics")

    s = sub.add_parser("entail", parents=[common], help="Boolean query entailment")
    s.add_argument("--kb", required=True)
    s.add_argument("--query", required=True)
    s.add_argument("--mode", required=True, choices=("certain", "possible"))
    budget(s)
    s.set_defaults(func=cmd_entail)

    s = sub.add_parser("answers", parents=[common], help="answers to a non-Boolean CQ")
    s.add_argument("--kb", required=True)
    s.add_argument("--query", required=True)
    s.add_argument("--mode", required=True, choices=("certain", "possible"))
    budget(s)
    s.set_defaults(func=cmd_answers)

    s = sub.add_parser("rewrite", parents=[common], help="FO-rewrite a query over a TBox")
    s.add_argument("--tbox", required=True, help=".wkb file; its ABox is ignored")
    s.add_argument("--query", required=True)
    s.add_argument("--k", type=_nonneg_int, required=True)
    s.add_argument("--mode", required=True, choices=("p", "c"))
    s.add_argument("--max-abox", type=_pos_int, default=DEFAULT_MAX_INDIVIDUALS,
                   help="largest ABox (in individuals) the rewriting must be exact for")
    s.add_argument("--type-form", choices=TYPE_FORMS, default="exact")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_rewrite)

    s = sub.add_parser("eval", parents=[common], help="evaluate a rewriting on an ABox")
    s.add_argument("--fo", required=True)
    s.add_argument("--abox", required=True, help=".wkb file; its TBox is ignored")
    s.add_argument("--k", type=_nonneg_int, required=True)
    s.add_argument("--mode", required=True, choices=("p", "c"))
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("gen", parents=[common], help="hardness instance generators")
    s.add_argument("kind", choices=("3sat", "3dnf-iq", "3dnf-cq", "3col", "lexmax"))
    s.add_argument("--cnf", help="DIMACS CNF file (3sat, lexmax)")
    s.add_argument("--dnf", help="DIMACS-style DNF file, one term per line (3dnf-iq, 3dnf-cq)")
    s.add_argument("--graph", help="edge list file (3col)")
    s.add_argument("--var", type=_pos_int, help="variable index for lexmax")
    s.add_argument("-o", "--output", help="output prefix; writes PREFIX.wkb and PREFIX.q")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("oracle-check", parents=[common],
                       help="rewriting versus brute force on random instances")
    s.add_argument("--count", type=_nonneg_int, required=True)
    s.add_argument("--mode", required=True, choices=("p", "c"))
    s.add_argument("--max-abox", type=_pos_int, default=DEFAULT_MAX_INDIVIDUALS)
    s.add_argument("--type-form", choices=TYPE_FORMS, default="exact")
    s.set_defaults(func=cmd_oracle_check)
    return p


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        parser.print_usage(err)
        err.write(f"{e}\n")
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=err)
    rep = Report(args.command)
    try:
        code = args.func(args, rep)
    except UsageError as e:
        err.write(f"costlite {args.command}: {e}\n")
        return EXIT_USAGE
    except (OSError, ParseError, ValueError) as e:
        err.write(f"costlite {args.command}: error: {e}\n")
        return EXIT_USAGE
    rep.set(exit_code=code)
    rep.emit(args.json, out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
