#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import random

import pytest

from src.logic.modules import precedes
from src.semantics.corpus import (check_equivalences, check_fitting_below_wf, check_goal_wrapper,
                                  check_monotonicity, check_unfounded, generate_corpus, generate_program,
                                  random_goal, run_corpus)


@pytest.fixture(scope="module")
def corpus():
    return generate_corpus(12, seed=7)


def test_generation_is_deterministic():
    assert generate_corpus(5, seed=3) == generate_corpus(5, seed=3)
    assert generate_corpus(5, seed=3) != generate_corpus(5, seed=4)


def test_generated_programs_respect_limits(corpus):
    for program in corpus:
        assert precedes(program.upper, program.lower)
        predicates = program.upper.defines | program.lower.defines | set(program.external)
        assert len(predicates) <= 6
        assert len(program.upper.rules) + len(program.lower.rules) <= 12
        assert 1 <= len(program.constants) <= 4
        assert all(not (l.atom.signature in program.upper.defines | program.lower.defines) for l in program.start)
        for module in program.modules:
            for rule in module.rules:
                rule.check_safety()


def test_generation_limits_are_configurable():
    program = generate_program(random.Random(1), max_predicates=3, max_rules=2, max_constants=1)
    assert len(program.constants) == 1
    assert len(program.upper.rules) + len(program.lower.rules) <= 2
    assert (program.upper.name, program.lower.name) == ("p0", "q0")


def test_each_check_passes(corpus):
    for program in corpus[:4]:
        assert all(check_equivalences(program).values()), program.to_text()
        assert all(check_monotonicity(program, pairs=40).values()), program.to_text()
        assert check_fitting_below_wf(program) == {"fitting⊑wf": True}
        assert check_unfounded(program) == {"unfounded_extension": True}
        assert set(check_goal_wrapper(program)) == {"goal/lfp", "goal/wf"}


def test_random_goal_is_safe(corpus):
    rng = random.Random(0)
    for program in corpus:
        goal = random_goal(rng, program, definite=False)
        assert goal[0].positive
        assert all(l.positive for l in random_goal(rng, program, definite=True))


def test_run_corpus():
    report = run_corpus(count=6, seed=11, pairs=40, goal_programs=3)
    assert report.ok, report.failures
    frame = report.to_frame()
    assert list(frame.columns) == ["check", "passed", "failed"]
    assert "partial_eval/wf" in set(frame["check"])
    assert frame["failed"].sum() == 0
    goal_row = frame[frame["check"] == "goal/wf"].iloc[0]
    assert goal_row["passed"] == 3
    data = report.to_dict()
    assert data["ok"] is True
    assert data["count"] == 6


def test_default_corpus_passes_every_check():
    report = run_corpus(count=200, seed=0, goal_programs=20)
    assert report.ok, report.failures
    assert len(report.rows) == 200
    frame = report.to_frame().set_index("check")
    assert frame.loc["modular/wf", "passed"] == 200
    assert frame.loc["partial_eval/lfp", "passed"] == 200
    assert frame.loc["monotone/fitting", "passed"] == 200
    assert frame.loc["goal/lfp", "passed"] == 20
    assert frame.loc["goal/wf", "passed"] == 20


def test_parallel_run_matches_sequential():
    sequential = run_corpus(count=4, seed=2, pairs=20, goal_programs=1, workers=1)
    parallel = run_corpus(count=4, seed=2, pairs=20, goal_programs=1, workers=2)
    assert sequential.rows == parallel.rows
