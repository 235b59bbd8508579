#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from src.algebra.function_lab import ExampleReport
from src.lattice.orders import LiteralSet
from src.logic.grounding import Herbrand
from src.logic.modules import precedes, union_modules
from src.logic.syntax import Atom, Literal, Module, Predicate, Rule
from src.semantics.evaluation import wf
from src.semantics.operators import wp_apply
from src.semantics.residual import check_w_inequalities, residualize


def worked_modules():
    """P = {p :- p. p :- q.} defines p/0，Q = {q :- q.} defines q/0"""
    p, q = Atom("p"), Atom("q")
    module_p = Module("P", (Rule(p, (Literal(p),)), Rule(p, (Literal(q),))), frozenset({Predicate("p", 0)}))
    module_q = Module("Q", (Rule(q, (Literal(q),)),), frozenset({Predicate("q", 0)}))
    return module_p, module_q


def reproduce_worked_example():
    """良基语义下模块化求值与 m_WF 残余的完整算例"""
    module_p, module_q = worked_modules()
    union = union_modules(module_p, module_q)
    herbrand = Herbrand([module_p, module_q])
    universe = herbrand.universe
    order = universe.partial_interpretations
    p, q = (1 << universe.index(Atom(n)) for n in ("p", "q"))
    empty = LiteralSet()
    neither = LiteralSet(0, p | q)
    gp, gq, gu = herbrand.ground(module_p), herbrand.ground(module_q), herbrand.ground(union)

    wf_q = wf(gq)
    residual = residualize(wf_q, "wf", universe, universe.predicate_mask(module_q.defines), name="m_WF(WF(Q))")
    with_residual = wf(herbrand.ground(union_modules(module_p, residual)))
    values = {
        "W_P(∅)": wp_apply(gp, empty),
        "W_Q(∅)": wp_apply(gq, empty),
        "W_{P∪Q}(∅)": wp_apply(gu, empty),
        "WF(P∪Q)": wf(gu),
        "WF(P, WF(Q))": wf(gp, wf_q),
        "WF(P ∪ m_WF(WF(Q)))": with_residual,
    }
    report = ExampleReport("well-founded")
    report.checks["P >> Q"] = precedes(module_p, module_q)
    report.checks["W_P(∅) = ∅"] = values["W_P(∅)"] == empty
    report.checks["W_Q(∅) = {¬q}"] = values["W_Q(∅)"] == LiteralSet(0, q)
    report.checks["W_{P∪Q}(∅) = {¬p, ¬q}"] = values["W_{P∪Q}(∅)"] == neither
    report.checks["WF(P∪Q) = {¬p, ¬q}"] = values["WF(P∪Q)"] == neither
    report.checks["WF(P, WF(Q)) = {¬p, ¬q}"] = values["WF(P, WF(Q))"] == neither
    report.checks["m_WF(WF(Q)) = {q :- q.}"] = residual.rules == (Rule(Atom("q"), (Literal(Atom("q")),)),)
    report.checks["WF(P ∪ m_WF(WF(Q))) = {¬p, ¬q}"] = with_residual == neither
    inequalities = check_w_inequalities(module_p, module_q, herbrand)
    report.checks["W⁺_{P∪Q}(∅) ≤ W⁺_P(W⁺_Q(∅))"] = inequalities.upper_holds
    report.checks["W⁺_P(∅) ⊔ W⁺_Q(∅) < W⁺_{P∪Q}(∅)"] = inequalities.lower_strict
    report.checks["W⁺_Q(W⁺_P(∅)) = W⁺_P(∅) ⊔ W⁺_Q(∅)"] = inequalities.commutes
    report.values.update({key: order.label(value) for key, value in values.items()})
    report.values["m_WF(WF(Q))"] = " ".join(str(rule) for rule in residual.rules)
    return report
