#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import io
import json
from pathlib import Path

import pytest
from conftest import PATHS_SOURCE, WORKED_SOURCE

from src.cli.commands import RunConfig, execute, main
from src.semantics.operators import SemanticsKind
from src.utils.config_manager import ConfigError


@pytest.fixture
def write(tmp_path):
    def _write(text, name="program.lp"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write


@pytest.fixture
def run(tmp_path):
    def _run(*argv):
        out = io.StringIO()
        code = main(["--config-dir", str(tmp_path / "config"), *argv], stdout=out)
        return code, out.getvalue()
    return _run


def test_eval_well_founded_text(run, write):
    code, out = run("eval", write(WORKED_SOURCE), "--semantics", "wf")
    assert code == 0
    assert "true: ∅" in out
    assert "false: {p, q}" in out
    assert "undefined: ∅" in out
    assert "Q -> P" in out


def test_eval_well_founded_json(run, write):
    code, out = run("eval", write(WORKED_SOURCE), "--semantics", "wf", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["semantics"] == "wf"
    assert data["false"] == ["p", "q"]
    assert data["true"] == [] and data["undefined"] == []
    assert data["plan"] == ["Q", "P"]


def test_eval_fitting_leaves_atoms_undefined(run, write):
    code, out = run("eval", write(WORKED_SOURCE), "--semantics", "fitting", "--mode", "monolithic",
                    "--format", "json")
    assert code == 0
    assert json.loads(out)["undefined"] == ["p", "q"]


def test_eval_least_model(run, write):
    code, out = run("eval", write(PATHS_SOURCE), "--format", "json")
    assert code == 0
    assert json.loads(out)["true"] == ["e(1,2)", "e(2,3)", "path(1,2)", "path(1,3)", "path(2,3)"]


def test_eval_is_deterministic(run, write):
    path = write(PATHS_SOURCE)
    assert run("eval", path) == run("eval", path)


def test_eval_with_assumed_literals(run, write):
    path = write("module P defines p/0 { p :- r. }")
    code, out = run("eval", path, "--assume", "r", "--format", "json")
    assert code == 0
    assert json.loads(out)["true"] == ["p", "r"]


def test_residualize_with_assumed_literals(run, write):
    path = write("module Q defines q/0 { q :- r. }\nmodule P defines p/0 { p :- q. }")
    code, out = run("residualize", path, "--module", "Q", "--verify", "P", "--assume", "r", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["residual"] == ["q.", "r."]
    assert data["equal"]


def test_query_with_assumed_literals(run, write):
    path = write("module P defines p/1 { p(X) :- r(X). }")
    code, out = run("query", path, "--goal", "p(Y)", "--assume", "r(a), r(b)")
    assert code == 0
    assert out.splitlines() == ["goal: p(Y)", "Y=a", "Y=b"]


def test_compare_prints_equal(run, write):
    code, out = run("compare", write(PATHS_SOURCE))
    assert code == 0
    assert out.rstrip().endswith("EQUAL")


def test_eval_compare_mode_json(run, write):
    code, out = run("eval", write(WORKED_SOURCE), "--semantics", "wf", "--mode", "compare", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["equal"] is True
    assert data["monolithic"]["false"] == ["p", "q"]


def test_residualize_with_verification(run, write):
    code, out = run("residualize", write(WORKED_SOURCE), "--module", "Q", "--verify", "P", "--semantics", "wf")
    assert code == 0
    assert "q :- q." in out
    assert "residual precedes: true" in out
    assert out.rstrip().endswith("EQUAL")


def test_residualize_json(run, write):
    code, out = run("residualize", write(PATHS_SOURCE), "--module", "edges", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["residual"] == ["e(1,2).", "e(2,3)."]
    assert data["defines"] == ["e/2"]


def test_query_answers(run, write):
    code, out = run("query", write(PATHS_SOURCE), "--goal", "path(1,Y)")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "goal: path(1,Y)"
    assert lines[1:] == ["Y=2", "Y=3"]


def test_query_without_answers(run, write):
    code, out = run("query", write(PATHS_SOURCE), "--goal", "path(3,Y)")
    assert code == 0
    assert out.splitlines()[1:] == ["no"]


def test_query_undefined_answers(run, write):
    code, out = run("query", write(WORKED_SOURCE), "--goal", "p", "--semantics", "fitting")
    assert code == 0
    assert "undefined: yes" in out


def test_syntax_error_exit_code(run, write):
    code, out = run("eval", write("module m defines p/1 {\n  p(X) :- q(X,\n}\n"))
    assert code == 2
    assert out == ""


def test_semantic_error_exit_code(run, write):
    assert run("eval", write("module m defines p/0 { q. }"))[0] == 2


def test_negation_under_least_model_fails(run, write):
    code, _ = run("eval", write("module m defines p/0 { p :- not q. }"))
    assert code == 1


def test_inconsistent_assumption_fails(run, write):
    code, _ = run("eval", write("module P defines p/0 { p :- r. }"), "--semantics", "wf", "--assume", "r, not r")
    assert code == 1


def test_missing_file_fails(run, tmp_path):
    assert run("eval", str(tmp_path / "missing.lp"))[0] == 1


def test_unknown_semantics_fails(run, write):
    assert run("eval", write(WORKED_SOURCE), "--semantics", "stable")[0] == 1


def test_argument_errors_exit_through_argparse(run):
    with pytest.raises(SystemExit) as excinfo:
        run("eval")
    assert excinfo.value.code == 2


def test_lab_passes(run):
    code, out = run("lab", "--lattice", "chain(2)")
    assert code == 0
    assert "== example: appendix" in out
    assert "[✗]" not in out
    assert out.rstrip().endswith("ALL PASSED")


def test_lab_json(run):
    code, out = run("lab", "--lattice", "chain(3)", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["ok"] is True
    assert [e["name"] for e in data["examples"]] == ["duality", "appendix", "well-founded"]
    assert data["censuses"][0]["lattice"] == "chain(3)"


def test_corpus_command(run):
    code, out = run("corpus", "--count", "3", "--seed", "5", "--pairs", "20")
    assert code == 0
    assert "corpus: 3 programs, seed 5" in out
    assert out.rstrip().endswith("ALL PASSED")


def test_config_file_supplies_defaults(run, tmp_path):
    config = tmp_path / "config"
    config.mkdir()
    (config / "config.json").write_text(json.dumps({"corpus_count": 2, "monotonicity_pairs": 10}), encoding="utf-8")
    code, out = run("corpus", "--format", "json")
    assert code == 0
    assert json.loads(out)["count"] == 2


def test_run_config_validation():
    with pytest.raises(ConfigError, match="count"):
        RunConfig(command="corpus", count=0).validate()
    with pytest.raises(ConfigError, match="--module"):
        RunConfig(command="residualize", program_path="x.lp").validate()
    with pytest.raises(ConfigError):
        execute(RunConfig(command="eval"))


def test_execute_returns_report(write):
    report = execute(RunConfig(command="eval", program_path=write(WORKED_SOURCE),
                               semantics=SemanticsKind.WELL_FOUNDED))
    assert report.ok
    assert report.model.false == ["p", "q"]


def test_sample_program_with_assumption(run):
    sample = str(Path(__file__).resolve().parent.parent / "samples" / "reachable.lp")
    code, out = run("eval", sample, "--semantics", "wf", "--format", "json")
    assert code == 0
    assert "reach(2)" in json.loads(out)["undefined"]
    code, out = run("eval", sample, "--semantics", "wf", "--assume", "not blocked(2), not blocked(3)",
                    "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert "reach(3)" in data["true"]
    assert "unreachable(3)" in data["false"]


def test_sample_worked_program(run):
    sample = str(Path(__file__).resolve().parent.parent / "samples" / "worked.lp")
    code, out = run("eval", sample, "--semantics=wf")
    assert code == 0
    assert "false: {p, q}" in out
