"""The command-line verbs, their exit codes, and report determinism."""

import io
from contextlib import redirect_stderr, redirect_stdout

import pytest

from mulingua.cli import main


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def test_model_check_gis_passes():
    code, out, _ = run(["model-check", "gis", "z12gis"])
    assert code == 0
    assert "interval-uniqueness: pass" in out
    assert "6 pass, 0 fail" in out


def test_model_check_reports_counterexample():
    code, out, _ = run(["model-check", "group", "z12-sub"])
    assert code == 1
    assert "associativity: FAIL counterexample ((a " in out


def test_model_check_unknown_names():
    code, _, err = run(["model-check", "nope", "z12"])
    assert code == 2 and "unknown theory" in err
    code, _, err = run(["model-check", "group", "nope"])
    assert code == 2 and "unknown structure" in err


def test_prove_all_interval_tetrachord():
    code, out, _ = run(["prove", "z12music", "(allInterval 0 1 4 6)"])
    assert code == 0
    assert out.startswith("inhabited\n")
    assert "ic6 => " in out


def test_prove_reports_missing_interval_class():
    code, out, _ = run(["prove", "z12music", "(allInterval 0 1 2 3)"])
    assert code == 1
    assert "uninhabited" in out and "ic4" in out


def test_prove_dominant_leading_tone():
    code, out, _ = run(["prove", "domfunc-harm", "(domfunc-leading-tone A)"])
    assert code == 0 and "inhabited" in out
    code, out, _ = run(["prove", "domfunc-empty", "(domfunc-leading-tone A)"])
    assert code == 0 and "proof: {}" in out
    code, out, _ = run(
        ["prove", "domfunc-adversarial", "(domfunc-leading-tone A)"])
    assert code == 1 and "A:5" in out


def test_prove_plain_type_expression():
    code, out, _ = run(["prove", "z12", "(* G G)"])
    assert code == 0
    code, out, _ = run(["prove", "z12", "0"])
    assert code == 1


def test_eval_dominance_depends_on_model():
    code, out, _ = run(["eval", "harm-minor", "dominance"])
    assert code == 0 and out.strip() == "true"
    code, out, _ = run(["eval", "nat-minor", "dominance"])
    assert code == 1 and out.startswith("false counterexample ((n C))")


def test_vls_stats():
    code, out, _ = run(["vls", "ti-quiver"])
    assert code == 0
    assert out == "vertices: 12\narrows: 288\n"
    code, out, _ = run(["vls", "winding12"])
    assert out == "vertices: 12\narrows: 432\n"


def test_autos_budget_refusal():
    code, _, err = run(["autos", "ti-quiver", "--budget", "1"])
    assert code == 2
    assert "budget" in err and "conjugation" in err


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.mul"
    bad.write_text("(")
    code, _, err = run(["check", str(bad)])
    assert code == 2
    assert "1:1" in err


def test_check_reports_declarations(tmp_path):
    src = tmp_path / "ok.mul"
    src.write_text("""
    (theory commutative over group
      (axiom commutes (ctx (a G) (b G)) (= G (star a b) (star b a))))
    (context pcpair (x PC) (y PC))
    """)
    code, out, _ = run(["check", str(src)])
    assert code == 0
    assert "theory commutative: ok" in out
    assert "context pcpair: parsed" in out


def test_check_flags_ill_formed_theory(tmp_path):
    src = tmp_path / "bad.mul"
    src.write_text("""
    (theory broken over group
      (axiom oops (ctx (a G)) (= G a missing)))
    """)
    code, out, _ = run(["check", str(src)])
    assert code == 1
    assert "FAIL" in out and "unbound variable" in out


def test_dot_and_autos_on_declared_quiver(tmp_path):
    src = tmp_path / "q.mul"
    src.write_text("""
    (structure two of vls
      (carrier Pitch (p))
      (carrier Arrow (a b))
      (fun vlr ((p p) (set a b))))
    (quiver loops table two)
    """)
    code, out, _ = run(["dot", "loops", str(src)])
    assert code == 0
    assert out.startswith("digraph loops {")
    assert 'label="a"' in out and 'label="b"' in out
    code, out, _ = run(["autos", "loops", str(src)])
    assert code == 0
    assert out.startswith("automorphisms: 2\n")


def test_vls_with_rule_argument(tmp_path):
    code, out, _ = run(["vls", "z12", "winding:12:1"])
    assert code == 0 and out == "vertices: 12\narrows: 432\n"
    src = tmp_path / "rot.mul"
    src.write_text("""
    (signature cyc2 (types H X)
      (fun (star (H H) H) (e () H) (inv (H) H) (act (H X) X)))
    (structure r2 of cyc2
      (carrier H (a b)) (carrier X (x y))
      (fun star ((a a) a) ((a b) b) ((b a) b) ((b b) a))
      (fun e (() a))
      (fun inv ((a) a) ((b) b))
      (fun act ((a x) x) ((a y) y) ((b x) y) ((b y) x)))
    """)
    code, out, _ = run(["vls", "r2", "action:X:act", str(src)])
    assert code == 0 and out == "vertices: 2\narrows: 4\n"


def test_reports_are_byte_deterministic():
    for argv in (["model-check", "gis", "z12gis"],
                 ["prove", "z12music", "(allInterval 0 1 4 6)"],
                 ["dot", "winding12"],
                 ["eval", "nat-minor", "dominance"]):
        first = run(argv)
        second = run(argv)
        assert first == second


def test_files_load_into_shared_workspace(tmp_path):
    sig = tmp_path / "sig.mul"
    sig.write_text("(signature pair-sig (types P))")
    use = tmp_path / "use.mul"
    use.write_text("""
    (structure pt of pair-sig (carrier P (only)))
    """)
    code, out, _ = run(["check", str(sig), str(use)])
    assert code == 0
    assert "signature pair-sig: ok" in out
    assert "structure pt: ok" in out


def test_usage_error_exits_two():
    with pytest.raises(SystemExit) as exc:
        run(["model-check"])  # missing arguments
    assert exc.value.code == 2


def test_shipped_demo_file():
    import pathlib
    demo = str(pathlib.Path(__file__).resolve().parent.parent / "demo.mul")
    assert run(["check", demo])[0] == 0
    assert run(["model-check", "group", "s3ish", demo])[0] == 0
    code, out, _ = run(["model-check", "commutative", "s3ish", demo])
    assert code == 1 and "counterexample" in out
    assert run(["prove", "z4", "has-idempotent", demo])[0] == 0
    code, out, _ = run(["eval", "z4", "squares-cover", demo])
    assert code == 1 and "((a 1))" in out
