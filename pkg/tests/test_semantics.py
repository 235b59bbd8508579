#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import pytest
from conftest import bit, load

from src.lattice.orders import LiteralSet
from src.logic.grounding import Herbrand
from src.logic.modules import stratify, union_all
from src.logic.syntax import Atom, Constant, Literal
from src.semantics.evaluation import (Model, compare, evaluate, fitting_lfp, modular_eval, monolithic_eval,
                                      start_element, tp_lfp, wf)
from src.semantics.operators import (NegationNotSupportedError, SemanticsError, SemanticsFactory, SemanticsKind,
                                     StartElementError, fitting_apply, greatest_unfounded, tp_apply, wp_apply)
from src.semantics.worked_example import reproduce_worked_example, worked_modules


def test_parse_semantics_names():
    assert SemanticsKind.parse("LFP") is SemanticsKind.LEAST_MODEL
    assert SemanticsKind.parse("well_founded") is SemanticsKind.WELL_FOUNDED
    assert SemanticsFactory.create("fitting").kind is SemanticsKind.FITTING
    with pytest.raises(SemanticsError, match="stable"):
        SemanticsKind.parse("stable")


def test_tp_derives_heads_of_satisfied_rules():
    program, herbrand = load("module P defines p/0 { p :- q. }")
    ground = herbrand.ground(program.module("P"))
    q, p = bit(herbrand, "q"), bit(herbrand, "p")
    assert tp_apply(ground, q) == p
    assert tp_apply(ground, 0) == 0


def test_tp_of_facts_is_constant():
    program, herbrand = load("module F defines q/0 { q. }")
    ground = herbrand.ground(program.module("F"))
    assert tp_apply(ground, 0) == tp_apply(ground, herbrand.universe.full) == bit(herbrand, "q")


def test_tp_rejects_negation():
    program, herbrand = load("module P defines p/0 { p :- not q. }")
    with pytest.raises(NegationNotSupportedError, match="fitting"):
        tp_apply(herbrand.ground(program.module("P")), 0)


def test_least_model_of_paths(paths_program):
    herbrand = Herbrand(paths_program.modules)
    union = herbrand.ground(union_all(paths_program.modules))
    model = Model(SemanticsKind.LEAST_MODEL, tp_lfp(union), herbrand.universe)
    assert model.true == ["e(1,2)", "e(2,3)", "path(1,2)", "path(1,3)", "path(2,3)"]
    assert model.holds(Atom("path", (Constant("1"), Constant("3"))))
    assert model.undefined == []
    assert tp_apply(union, model.value) == model.value


def test_modular_and_monolithic_agree_on_paths(paths_program):
    herbrand = Herbrand(paths_program.modules)
    report = compare(list(paths_program.modules), herbrand)
    assert report.plan == ("edges", "paths")
    assert report.equal
    assert len(report.modular.true) == 5


def test_modular_evaluation_from_assumed_literals():
    program, herbrand = load("module P defines p/0 { p :- r. }", extra_predicates=[("r", 0)])
    start = start_element([Literal(Atom("r"))], herbrand.universe, "lfp")
    value = modular_eval(stratify(program.modules), herbrand, start)
    assert value == bit(herbrand, "p") | bit(herbrand, "r")
    assert value == monolithic_eval(program.modules, herbrand, start)


def test_start_must_avoid_defined_atoms():
    program, herbrand = load("module P defines p/0 { p :- r. }")
    with pytest.raises(StartElementError, match="p"):
        modular_eval(program.modules, herbrand, bit(herbrand, "p"))


def test_start_element_checks_polarity():
    program, herbrand = load("module P defines p/0 { p :- r. }")
    not_r = Literal(Atom("r"), False)
    with pytest.raises(StartElementError):
        start_element([not_r], herbrand.universe, SemanticsKind.LEAST_MODEL)
    with pytest.raises(StartElementError, match="不一致"):
        start_element([not_r, Literal(Atom("r"))], herbrand.universe, SemanticsKind.WELL_FOUNDED)
    assert start_element([not_r], herbrand.universe, "wf") == LiteralSet(0, bit(herbrand, "r"))


def test_fitting_leaves_self_loop_undefined():
    program, herbrand = load("module Q defines q/0 { q :- q. }")
    ground = herbrand.ground(program.module("Q"))
    assert fitting_apply(ground, LiteralSet()) == LiteralSet()
    assert fitting_lfp(ground) == LiteralSet()


def test_fitting_falsifies_atoms_without_rules():
    program, herbrand = load("module R defines r/0 { }")
    ground = herbrand.ground(program.module("R"))
    assert fitting_apply(ground, LiteralSet()) == LiteralSet(0, bit(herbrand, "r"))


def test_fitting_falsifies_blocked_rules():
    program, herbrand = load("module P defines p/0 { p :- not q. }")
    ground = herbrand.ground(program.module("P"))
    q, p = bit(herbrand, "q"), bit(herbrand, "p")
    assert fitting_apply(ground, LiteralSet(q, 0)) == LiteralSet(0, p)
    assert fitting_apply(ground, LiteralSet(0, q)) == LiteralSet(p, 0)


def test_fitting_and_wf_on_stratified_negation():
    program, herbrand = load("module M defines p/0, q/0 { q. p :- not q. }")
    ground = herbrand.ground(program.module("M"))
    expected = LiteralSet(bit(herbrand, "q"), bit(herbrand, "p"))
    assert fitting_lfp(ground) == expected
    assert wf(ground) == expected


def test_unfounded_sets_of_worked_program(worked_program):
    herbrand = Herbrand(worked_program.modules)
    p, q = bit(herbrand, "p"), bit(herbrand, "q")
    ground_p = herbrand.ground(worked_program.module("P"))
    union = herbrand.ground(union_all(worked_program.modules))
    assert greatest_unfounded(ground_p, LiteralSet()) == 0
    assert greatest_unfounded(ground_p, LiteralSet(0, q)) == p
    assert greatest_unfounded(union, LiteralSet()) == p | q
    assert wp_apply(ground_p, LiteralSet()) == LiteralSet()
    assert wp_apply(union, LiteralSet()) == LiteralSet(0, p | q)


def test_well_founded_model_is_modular(worked_program):
    herbrand = Herbrand(worked_program.modules)
    p, q = bit(herbrand, "p"), bit(herbrand, "q")
    ground_p = herbrand.ground(worked_program.module("P"))
    ground_q = herbrand.ground(worked_program.module("Q"))
    assert wf(ground_p) == LiteralSet()
    assert wf(ground_q) == LiteralSet(0, q)
    assert wf(ground_p, wf(ground_q)) == LiteralSet(0, p | q)
    report = compare(list(worked_program.modules), herbrand, kind="wf")
    assert report.plan == ("Q", "P")
    assert report.equal
    assert report.modular.false == ["p", "q"]


def test_fitting_is_below_well_founded(worked_program):
    herbrand = Herbrand(worked_program.modules)
    union = herbrand.ground(union_all(worked_program.modules))
    fitting, founded = fitting_lfp(union), wf(union)
    assert fitting == LiteralSet()
    assert fitting.issubset(founded)
    assert fitting != founded


def test_start_may_not_mention_defined_atoms(worked_program):
    herbrand = Herbrand(worked_program.modules)
    ground_p = herbrand.ground(worked_program.module("P"))
    with pytest.raises(StartElementError):
        wf(ground_p, LiteralSet(0, bit(herbrand, "p")))


def test_evaluate_accepts_kind_names(worked_program):
    herbrand = Herbrand(worked_program.modules)
    union = herbrand.ground(union_all(worked_program.modules))
    assert evaluate(union, kind="wf") == wf(union)


@pytest.mark.parametrize("kind", ["fitting", "wf"])
def test_three_valued_operators_are_monotone(worked_program, kind):
    herbrand = Herbrand(worked_program.modules)
    union = herbrand.ground(union_all(worked_program.modules))
    checked, witness = SemanticsFactory.create(kind).monotonicity_witness(union)
    assert checked == 25
    assert witness is None


def test_tp_monotone_on_sampled_pairs(paths_program):
    herbrand = Herbrand(paths_program.modules)
    union = herbrand.ground(union_all(paths_program.modules))
    checked, witness = SemanticsFactory.create("lfp").monotonicity_witness(union, limit=50)
    assert checked == 50
    assert witness is None


def test_worked_example_report():
    report = reproduce_worked_example()
    assert report.ok, report.checks
    assert report.values["WF(P∪Q)"] == "{¬p, ¬q}"
    p, q = worked_modules()
    assert (p.name, q.name) == ("P", "Q")
