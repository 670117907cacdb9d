import io
import json
import os
import subprocess
import sys

import pytest

from conftest import SRC, fixture_path
from costlite.cli import run
from costlite.textio import parse_header, parse_kb, read_text


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_sat_example_one():
    code, out, _ = cli("sat", "--kb", fixture_path("ex1.wkb"), "--k", 3)
    assert code == 0 and "3-satisfiable: yes" in out
    code, out, _ = cli("sat", "--kb", fixture_path("ex1.wkb"), "--k", 2)
    assert code == 1 and "2-satisfiable: no" in out


def test_entail_example_one():
    code, out, _ = cli("entail", "--kb", fixture_path("ex1.wkb"), "--query", fixture_path("tb0c0.q"),
                       "--mode", "possible", "--k", 3)
    assert code == 1 and out.rstrip().endswith("no")


def test_entail_opt_and_json():
    code, out, _ = cli("entail", "--kb", fixture_path("disjoint.wkb"), "--query",
                       fixture_path("b_of_a.q"), "--mode", "certain", "--opt", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["entailed"] is True and data["exit_code"] == 0


def test_answers():
    code, out, _ = cli("answers", "--kb", fixture_path("chain.wkb"), "--query",
                       fixture_path("answers_b.q"), "--mode", "possible", "--k", 2, "--json")
    data = json.loads(out)
    assert code == 0 and isinstance(data["answers"], list)


@pytest.mark.parametrize("argv", [
    ["sat", "--kb", "nope.wkb", "--k", "1"],
    ["sat", "--kb", fixture_path("ex1.wkb")],
    ["sat", "--kb", fixture_path("ex1.wkb"), "--k", "-1"],
    ["entail", "--kb", fixture_path("ex1.wkb"), "--query", fixture_path("tb0c0.q"),
     "--mode", "possible", "--k", "1", "--opt"],
    ["frobnicate"],
    ["gen", "3sat"],
])
def test_usage_errors_exit_2(argv):
    code, _, err = cli(*argv)
    assert code == 2 and err


def test_parse_error_exit_2(tmp_path):
    bad = tmp_path / "bad.wkb"
    bad.write_text("[tbox]\n1 | A [= \n")
    code, _, err = cli("sat", "--kb", bad, "--k", 1)
    assert code == 2 and "2:" in err


def test_max_anon_env_validated(monkeypatch):
    monkeypatch.setenv("COSTLITE_MAX_ANON", "many")
    code, _, err = cli("sat", "--kb", fixture_path("ex1.wkb"), "--k", 3)
    assert code == 2 and "COSTLITE_MAX_ANON" in err


CASES = [
    ("disjoint.wkb", "a_of_a.q"), ("disjoint.wkb", "b_of_a.q"), ("disjoint.wkb", "some_a.q"),
    ("chain.wkb", "b_of_b.q"), ("chain.wkb", "r_succ_b.q"), ("chain.wkb", "a_of_a.q"),
]


@pytest.mark.parametrize("wkb,query", CASES)
@pytest.mark.parametrize("k", [0, 1, 2])
def test_rewrite_then_eval_matches_entail(tmp_path, wkb, query, k):
    for mode, semantics in (("p", "possible"), ("c", "certain")):
        q = read_text(fixture_path(query))
        if mode == "c" and q.count("(") > 1:
            continue
        target = tmp_path / f"{mode}.fo"
        code, _, err = cli("rewrite", "--tbox", fixture_path(wkb), "--query", fixture_path(query),
                           "--k", k, "--mode", mode, "-o", target)
        assert code == 0, err
        meta = parse_header(read_text(target))
        assert meta["mode"] == mode and meta["k"] == str(k)
        code_eval, _, _ = cli("eval", "--fo", target, "--abox", fixture_path(wkb), "--k", k,
                              "--mode", mode)
        code_ent, _, _ = cli("entail", "--kb", fixture_path(wkb), "--query", fixture_path(query),
                             "--mode", semantics, "--k", k)
        assert code_eval == code_ent


def test_eval_rejects_mismatched_header(tmp_path):
    target = tmp_path / "x.fo"
    cli("rewrite", "--tbox", fixture_path("disjoint.wkb"), "--query", fixture_path("a_of_a.q"),
        "--k", 1, "--mode", "p", "-o", target)
    code, _, err = cli("eval", "--fo", target, "--abox", fixture_path("disjoint.wkb"), "--k", 2,
                       "--mode", "p")
    assert code == 2
    code, _, _ = cli("eval", "--fo", target, "--abox", fixture_path("disjoint.wkb"), "--k", 1,
                     "--mode", "c")
    assert code == 2


def test_rewrite_is_deterministic(tmp_path):
    outs = []
    for name in ("one.fo", "two.fo"):
        cli("rewrite", "--tbox", fixture_path("chain.wkb"), "--query", fixture_path("r_succ_b.q"),
            "--k", 1, "--mode", "p", "-o", tmp_path / name)
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]


def test_gen_writes_instance_files(tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 2 2\n1 2 0\n-1 0\n")
    prefix = tmp_path / "inst"
    code, _, err = cli("gen", "3sat", "--cnf", cnf, "-o", prefix)
    assert code == 0, err
    text = read_text(f"{prefix}.wkb")
    meta = parse_header(text)
    assert meta["generator"] == "3sat" and meta["satisfiable"] == "yes" and meta["k"] == "1"
    assert parse_kb(text).tbox
    code, out, _ = cli("sat", "--kb", f"{prefix}.wkb", "--k", meta["k"])
    assert code == 0


def test_gen_3col_and_lexmax(tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("1 2\n2 3\n1 3\n")
    code, out, _ = cli("gen", "3col", "--graph", g, "--json")
    assert code == 0 and json.loads(out)["k"] == 12
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 2 1\n1 2 2 0\n")
    code, _, _ = cli("gen", "lexmax", "--cnf", cnf, "--var", 1, "-o", tmp_path / "lm")
    assert code == 0
    code, out, _ = cli("entail", "--kb", tmp_path / "lm.wkb", "--query", tmp_path / "lm.q",
                       "--mode", "certain", "--opt")
    assert code == 0


def test_oracle_check_small():
    code, out, _ = cli("oracle-check", "--seed", 7, "--count", 5, "--mode", "p")
    assert code == 0 and "0 disagreements" in out


def test_console_entry_point():
    env = dict(os.environ, PYTHONPATH=SRC)
    proc = subprocess.run([sys.executable, "-m", "costlite.cli", "sat", "--kb",
                           fixture_path("ex1.wkb"), "--k", "3"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0 and "3-satisfiable: yes" in proc.stdout
