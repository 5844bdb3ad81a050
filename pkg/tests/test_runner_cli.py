"""Program execution, report rendering (against frozen goldens), and the
command-line interface with its exit-code contract."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from polyfuse.cli import main
from polyfuse.coeffring import CoeffExpr, P0Poly
from polyfuse.dsl import parse
from polyfuse.runner import (DEFAULT_PARAMS, ExecutionError, QueryResult,
                             VerifyResult, render_report, run)
from polyfuse.selftest import corpus_sources

GOLDEN = Path(__file__).parent / "golden"


def run_source(source: str, **kwargs):
    return run(parse(source), **kwargs)


# -- execution ----------------------------------------------------------------

def test_query_results():
    report = run_source("phi su2; order higgs; centrals quadratic; g boson;")
    values = {(r.what, r.target): r.value for r in report.results}
    assert values[("phi", "su2")] == P0Poly((0, 2))
    assert values[("order", "higgs")] == 3
    assert values[("centrals", "quadratic")] == ["a", "b", "c"]
    assert values[("g", "boson")] == P0Poly((0, -1))


def test_pipeline_fuse_specialize_query():
    report = run_source("""
        let q = fuse(J, su2, su11);
        let hp = specialize(q, C_M = -C_L, mu2 = h);
        phi hp;
    """)
    h = CoeffExpr.symbol("h")
    lam, c_l = CoeffExpr.symbol("Lambda"), CoeffExpr.symbol("C_L")
    final = report.results[-1]
    assert isinstance(final, QueryResult)
    assert final.value == P0Poly((0, -4 * h * (c_l + lam ** 2), 0, 4 * h))


def test_custom_algebra_execution():
    report = run_source("algebra w(r) { phi = r*P0; } g w; order w;")
    assert report.results[1].value == \
        P0Poly((0, CoeffExpr.symbol("r") / 2, CoeffExpr.symbol("r") / 2))
    assert report.results[2].value == 1


def test_verify_default_params_pass():
    report = run_source("verify su2; verify boson; verify su11;")
    assert report.ok
    for result in report.results:
        assert isinstance(result, VerifyResult) and result.passed
        assert result.params["j"] == DEFAULT_PARAMS["j"]


def test_verify_inline_fusion_and_second_factor_params():
    report = run_source(
        "verify fuse(J, su11, su11) with (k = 1, k2 = 3/2, cutoff = 10);")
    result = report.results[0]
    assert result.passed
    assert result.params["k2"] == Fraction(3, 2)
    assert result.target == "fuse(J, su11, su11)"
    targets = [rep.target for rep in result.reports]
    assert targets == ["fuse(J, su11, su11)", "casimir(fuse(J, su11, su11))",
                       "centrality"]


def test_verify_nested_fusion():
    report = run_source("""
        let inner = fuse(J, su2, boson);
        let outer = fuse(J, inner, boson);
        verify outer with (j = 1, cutoff = 6);
    """)
    assert report.ok


def test_base_params_override():
    report = run_source("verify su2;", base_params={"j": Fraction(7, 2)})
    assert report.results[0].params["j"] == Fraction(7, 2)
    assert report.ok


@pytest.mark.parametrize("source,fragment", [
    ("verify higgs;", "no finite matrix model"),
    ("verify su2 with (j = 1/3);", "nonnegative half-integer"),
    ("verify su11 with (cutoff = 5/2);", "must be an integer"),
    ("verify boson with (cutoff = 2);", "cutoff must be an integer >= 3"),
    ("verify su2 with (spin = 2);", "unknown verify parameter"),
    ("let s = specialize(su2, nope = 1); phi s;", "not central symbol"),
])
def test_execution_errors(source, fragment):
    with pytest.raises(ExecutionError, match=fragment):
        run_source(source)


def test_execution_error_positions():
    with pytest.raises(ExecutionError) as err:
        run_source("phi su2;\nverify higgs;")
    assert "line 2, col 1" in str(err.value)


def test_bad_base_param_rejected():
    with pytest.raises(ExecutionError, match="unknown verify parameter"):
        run_source("verify su2;", base_params={"frob": Fraction(1)})


def test_specialize_cycle_reported_with_position():
    with pytest.raises(ExecutionError) as err:
        run_source("let q = fuse(J, su2, boson);\n"
                   "let p = specialize(q, Lambda = Lambda);")
    assert "line 2" in str(err.value)


# -- rendering ----------------------------------------------------------------

@pytest.fixture(scope="module")
def golden_report():
    source = (GOLDEN / "eval_program.pfa").read_text(encoding="utf-8")
    return run_source(source)


def test_json_rendering_matches_golden(golden_report):
    rendered = render_report(golden_report, "json")
    frozen = json.loads((GOLDEN / "eval_report.json").read_text())
    assert json.loads(json.dumps(rendered, sort_keys=True)) == frozen


def test_latex_rendering_matches_golden(golden_report):
    rendered = render_report(golden_report, "latex")
    assert rendered == (GOLDEN / "eval_report.tex").read_text()


def test_text_rendering_shape(golden_report):
    text = render_report(golden_report, "text")
    assert text.endswith("result: ok\n")
    assert "phi q = -3*mu2*P0^2" in text


def test_render_rejects_unknown_mode(golden_report):
    with pytest.raises(ValueError):
        render_report(golden_report, "yaml")


def test_corpus_programs_run_clean():
    for name, source in corpus_sources().items():
        report = run_source(source)
        assert report.ok, f"{name} failed: " + "; ".join(
            failure for r in report.results
            if isinstance(r, VerifyResult) for failure in r.failures)


# -- CLI ----------------------------------------------------------------------

@pytest.fixture()
def program_file(tmp_path):
    def write(source: str) -> str:
        path = tmp_path / "program.pfa"
        path.write_text(source, encoding="utf-8")
        return str(path)
    return write


def test_cli_check_ok(program_file, capsys):
    assert main(["check", program_file("phi su2;")]) == 0
    assert "ok: 1 statement" in capsys.readouterr().out


def test_cli_check_parse_error(program_file, capsys):
    assert main(["check", program_file("phi nope;")]) == 2
    err = capsys.readouterr().err
    assert "line 1, col 5" in err


def test_cli_eval_text(program_file, capsys):
    code = main(["eval", program_file("phi su2; verify su2 with (j = 1);")])
    assert code == 0
    out = capsys.readouterr().out
    assert "phi su2 = 2*P0" in out
    assert out.strip().endswith("result: ok")


def test_cli_eval_json(program_file, capsys):
    assert main(["eval", program_file("order su2;"), "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["ok"] is True
    assert payload["results"][0] == {"kind": "query", "query": "order",
                                     "target": "su2", "value": 1}


def test_cli_eval_latex(program_file, capsys):
    assert main(["eval", program_file("phi higgs;"), "--format",
                 "latex"]) == 0
    assert "4 h P_0^{3}" in capsys.readouterr().out


def test_cli_eval_params_flag(program_file, capsys):
    code = main(["eval", program_file("verify su2;"),
                 "--params", "j=9/2"])
    assert code == 0
    assert "j=9/2" in capsys.readouterr().out


def test_cli_eval_execution_error(program_file, capsys):
    assert main(["eval", program_file("verify higgs;")]) == 2
    assert "no finite matrix model" in capsys.readouterr().err


def test_cli_verify_pass(program_file, capsys):
    code = main(["verify", program_file(
        "verify fuse(J, su2, boson) with (j = 1, cutoff = 10);")])
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("PASS fuse(J, su2, boson)")
    assert "result: ok" in out


def test_cli_verify_failure_exit_code(program_file, capsys, monkeypatch):
    # tighten every tolerance beyond reach so honest residuals trip it
    monkeypatch.setattr("polyfuse.runner.TOL_EXACT", 1e-30)
    monkeypatch.setattr("polyfuse.runner.TOL_CENTRAL", 1e-30)
    code = main(["verify", program_file("verify su2 with (j = 5/2);")])
    assert code == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "VERIFICATION FAILED" in out


def test_cli_verify_no_statements(program_file, capsys):
    assert main(["verify", program_file("phi su2;")]) == 0
    assert "no verify statements" in capsys.readouterr().out


def test_cli_missing_file(capsys):
    assert main(["eval", "/nonexistent/file.pfa"]) == 2
    assert "error" in capsys.readouterr().err


def test_cli_bad_params_flag(program_file, capsys):
    assert main(["eval", program_file("phi su2;"),
                 "--params", "j=banana"]) == 2
    assert "bad --params" in capsys.readouterr().err
    assert main(["eval", program_file("phi su2;"), "--params", "j"]) == 2


def test_cli_usage_error_exit_2(capsys):
    assert main([]) == 2
    assert main(["frobnicate"]) == 2


def test_cli_stdin(monkeypatch, capsys):
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO("order boson;"))
    assert main(["eval", "-"]) == 0
    assert "order boson = 0" in capsys.readouterr().out


def test_cli_selftest_passes(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    lines = [line for line in out.splitlines()
             if line.startswith("criterion")]
    assert len(lines) == 9
    assert all("PASS" in line for line in lines)
