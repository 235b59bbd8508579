#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import logging
from dataclasses import dataclass, field
from typing import Sequence, Tuple

from src.algebra.operators import JoinUndefinedError, star
from src.lattice.orders import LiteralSet
from src.logic.grounding import AtomUniverse, GroundRuleSet, Herbrand
from src.logic.modules import stratify, union_all
from src.logic.syntax import Literal, Module
from src.semantics.operators import (EvaluationInconsistencyError, SemanticsFactory, SemanticsKind,
                                     StartElementError)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Model:
    """某种语义下的求值结果，可读出真/假/未定义三部分"""
    kind: SemanticsKind
    value: object
    universe: AtomUniverse = field(compare=False, repr=False)

    def _parts(self):
        return SemanticsFactory.create(self.kind).read_model(self.universe, self.value)

    @property
    def true(self):
        return self.universe.render(self._parts()[0])

    @property
    def false(self):
        return self.universe.render(self._parts()[1])

    @property
    def undefined(self):
        return self.universe.render(self._parts()[2])

    def holds(self, atom):
        return bool(self._parts()[0] >> self.universe.index(atom) & 1)

    def literals(self):
        return SemanticsFactory.create(self.kind).order(self.universe).label(self.value)


def evaluate(program: GroundRuleSet, start=None, kind=SemanticsKind.LEAST_MODEL, check_start=True):
    """从起点出发计算 f_P 的闭包 f_P*(start)

    Args:
        program: 基例化后的模块
        start: 起点元素，默认取最小元
        kind: 语义
        check_start: 是否检查起点只涉及 def(P) 之外的谓词

    Returns:
        f_P⁺ 在起点之上的最小不动点

    Raises:
        StartElementError: 起点违反前置条件
        EvaluationInconsistencyError: 迭代中出现不一致
    """
    semantics = SemanticsFactory.create(kind)
    if start is None:
        start = semantics.bottom(program.universe)
    if check_start:
        semantics.check_start(program, start)
    f = semantics.operator(program)
    try:
        return star(f, start)
    except JoinUndefinedError as e:
        raise EvaluationInconsistencyError(f"模块 {program.name} 的求值与起点不一致: {e}") from e


def tp_lfp(program: GroundRuleSet, start=0):
    return evaluate(program, start, SemanticsKind.LEAST_MODEL)


def fitting_lfp(program: GroundRuleSet, start=None):
    return evaluate(program, start, SemanticsKind.FITTING)


def wf(program: GroundRuleSet, start=None):
    """良基部分模型 WF(P, J)"""
    return evaluate(program, start, SemanticsKind.WELL_FOUNDED)


def start_element(literals: Sequence[Literal], universe: AtomUniverse, kind):
    """把起点文字转换为对应序中的元素"""
    kind = SemanticsFactory.create(kind).kind
    pos = neg = 0
    for literal in literals:
        if not literal.atom.is_ground:
            raise StartElementError(f"起点文字必须是基文字: {literal}")
        bit = 1 << universe.index(literal.atom)
        if literal.positive:
            pos |= bit
        else:
            neg |= bit
    if kind is SemanticsKind.LEAST_MODEL:
        if neg:
            raise StartElementError(f"最小模型语义的起点只能包含正文字: {', '.join(universe.render(neg))}")
        return pos
    if pos & neg:
        raise StartElementError(f"起点不一致: {', '.join(universe.render(pos & neg))}")
    return LiteralSet(pos, neg)


def _check_plan_start(modules, herbrand, start, kind):
    union = herbrand.ground(union_all(modules, name="plan"))
    SemanticsFactory.create(kind).check_start(union, start)


def modular_eval(plan: Sequence[Module], herbrand: Herbrand, start=None, kind=SemanticsKind.LEAST_MODEL):
    """按计划逐模块求值：lfp(f_P, lfp(f_Q, X))

    plan 来自 stratify，最先出现的模块最先求值。
    """
    semantics = SemanticsFactory.create(kind)
    state = semantics.bottom(herbrand.universe) if start is None else start
    _check_plan_start(plan, herbrand, state, semantics.kind)
    for module in plan:
        state = evaluate(herbrand.ground(module), state, semantics.kind)
        logger.debug("模块 %s 求值完成", module.name)
    return state


def monolithic_eval(modules: Sequence[Module], herbrand: Herbrand, start=None, kind=SemanticsKind.LEAST_MODEL):
    """对所有模块之并整体求值"""
    return evaluate(herbrand.ground(union_all(modules, name="union")), start, kind)


@dataclass(frozen=True)
class ComparisonReport:
    kind: SemanticsKind
    plan: Tuple[str, ...]
    modular: Model
    monolithic: Model

    @property
    def equal(self):
        return self.modular == self.monolithic


def compare(modules: Sequence[Module], herbrand: Herbrand, start=None, kind=SemanticsKind.LEAST_MODEL):
    """模块化求值与整体求值对比"""
    kind = SemanticsFactory.create(kind).kind
    plan = stratify(modules)
    modular = modular_eval(plan, herbrand, start, kind)
    monolithic = monolithic_eval(modules, herbrand, start, kind)
    report = ComparisonReport(kind, tuple(m.name for m in plan),
                              Model(kind, modular, herbrand.universe), Model(kind, monolithic, herbrand.universe))
    if not report.equal:
        logger.error("模块化与整体求值结果不同: %s / %s", report.modular.literals(), report.monolithic.literals())
    return report
