#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""残余程序与部分求值

把 (部分) 模型还原为一个模块，使其语义恰好是该模型：
最小模型得到事实模块 QX，Fitting 得到 m_F，良基语义得到 m_WF。
"""

import logging
from dataclasses import dataclass
from typing import Optional

from src.algebra.operators import JoinUndefinedError, PreconditionError, compose, inflate, plus
from src.lattice.orders import LiteralSet
from src.logic.grounding import AtomUniverse, Herbrand
from src.logic.modules import precedes, union_modules
from src.logic.syntax import Literal, Module, Rule
from src.semantics.evaluation import Model, evaluate
from src.semantics.operators import (EvaluationInconsistencyError, SemanticsFactory, SemanticsKind,
                                     greatest_unfounded)

logger = logging.getLogger(__name__)


def residualize(model, kind, universe: AtomUniverse, slice_mask: Optional[int] = None, name="residual"):
    """把模型还原为残余模块

    Args:
        model: 最小模型（原子掩码）或一致的部分解释
        kind: 语义，决定残余的形式
        universe: 模型所在的原子全集
        slice_mask: 只还原这部分原子（应对谓词封闭），默认整个全集
        name: 残余模块名

    Returns:
        Module，defines 为 slice 中原子的谓词
    """
    kind = SemanticsFactory.create(kind).kind
    atoms = universe.full if slice_mask is None else slice_mask
    if isinstance(model, LiteralSet):
        if not model.is_consistent:
            clash = universe.render(model.pos & model.neg)
            raise EvaluationInconsistencyError(f"无法还原不一致的解释: {', '.join(clash)}")
        true, false = model.pos, model.neg
    else:
        if kind is not SemanticsKind.LEAST_MODEL:
            raise EvaluationInconsistencyError(f"{kind.value} 的残余需要部分解释")
        true, false = model, universe.full & ~model
    undefined = universe.full & ~(true | false)

    rules = []
    for atom in universe.atoms_of(atoms):
        bit = 1 << universe.index(atom)
        if true & bit:
            rules.append(Rule(atom))
        elif kind is SemanticsKind.FITTING and undefined & bit:
            rules.append(Rule(atom, (Literal(atom),)))
        elif kind is SemanticsKind.WELL_FOUNDED and false & bit:
            rules.append(Rule(atom, (Literal(atom),)))
        elif kind is SemanticsKind.WELL_FOUNDED and undefined & bit:
            rules.append(Rule(atom, (Literal(atom, False),)))
    defines = frozenset(atom.signature for atom in universe.atoms_of(atoms))
    return Module(name, tuple(rules), defines)


def residual_module(q: Module, herbrand: Herbrand, start=None, kind=SemanticsKind.LEAST_MODEL):
    """计算 Q 从 X 出发的模型并还原为 QX

    还原范围是 def(Q) 以及起点所涉谓词的全部原子，因此 QX 同时编码了 X。

    Returns:
        (Q 的模型, QX)
    """
    semantics = SemanticsFactory.create(kind)
    universe = herbrand.universe
    if start is None:
        start = semantics.bottom(universe)
    value = evaluate(herbrand.ground(q), start, semantics.kind)
    start_predicates = {atom.signature for atom in universe.atoms_of(semantics.mentioned(start))}
    slice_mask = universe.predicate_mask(q.defines | start_predicates)
    return value, residualize(value, semantics.kind, universe, slice_mask, name=f"{q.name}X")


@dataclass(frozen=True)
class PartialEvalReport:
    kind: SemanticsKind
    union_model: Model
    q_model: Model
    residual: Module
    from_start: Model
    from_bottom: Model
    residual_precedes: bool

    @property
    def equal(self):
        return self.union_model == self.from_start == self.from_bottom


def partial_eval_check(p: Module, q: Module, herbrand: Herbrand, start=None, kind=SemanticsKind.LEAST_MODEL):
    """部分求值检查：f_{P∪Q}*(X) = f_{P∪QX}*(X) = f_{P∪QX}*(⊥)

    QX 还原 def(Q) 的原子以及起点所涉谓词的原子，因此 P∪QX 自足；
    在 P∪QX 上从 X 出发时不再检查起点条件（X 已编码进 QX）。
    """
    semantics = SemanticsFactory.create(kind)
    kind = semantics.kind
    if not precedes(p, q):
        raise PreconditionError(f"{p.name} >> {q.name} 不成立，不能对 {q.name} 做部分求值")
    universe = herbrand.universe
    if start is None:
        start = semantics.bottom(universe)

    union = herbrand.ground(union_modules(p, q))
    union_value = evaluate(union, start, kind)
    q_value, residual = residual_module(q, herbrand, start, kind)

    with_residual = herbrand.ground(union_modules(p, residual))
    from_start = evaluate(with_residual, start, kind, check_start=False)
    from_bottom = evaluate(with_residual, None, kind)
    report = PartialEvalReport(
        kind=kind,
        union_model=Model(kind, union_value, universe),
        q_model=Model(kind, q_value, universe),
        residual=residual,
        from_start=Model(kind, from_start, universe),
        from_bottom=Model(kind, from_bottom, universe),
        residual_precedes=precedes(p, residual),
    )
    if not report.equal:
        logger.error("部分求值结果不同: %s / %s / %s", report.union_model.literals(),
                     report.from_start.literals(), report.from_bottom.literals())
    return report


@dataclass(frozen=True)
class WInequalityReport:
    union: LiteralSet
    sequential: LiteralSet
    summed: LiteralSet
    reversed: LiteralSet
    label: str

    @property
    def upper_holds(self):
        """W⁺_{P∪Q}(I) ≤ W⁺_P(W⁺_Q(I))"""
        return self.union.issubset(self.sequential)

    @property
    def lower_holds(self):
        """W⁺_P(I) ⊔ W⁺_Q(I) ≤ W⁺_{P∪Q}(I)"""
        return self.summed.issubset(self.union)

    @property
    def lower_strict(self):
        return self.lower_holds and self.summed != self.union

    @property
    def commutes(self):
        """W⁺_Q(W⁺_P(I)) = W⁺_P(I) ⊔ W⁺_Q(I)"""
        return self.reversed == self.summed

    @property
    def ok(self):
        return self.upper_holds and self.lower_holds and self.commutes


def check_w_inequalities(p: Module, q: Module, herbrand: Herbrand, partial: Optional[LiteralSet] = None):
    """在给定 I 处检查 W⁺ 的三条关系（要求 P >> Q）"""
    if not precedes(p, q):
        raise PreconditionError(f"{p.name} >> {q.name} 不成立")
    semantics = SemanticsFactory.create(SemanticsKind.WELL_FOUNDED)
    if partial is None:
        partial = LiteralSet()
    w_p = inflate(semantics.operator(herbrand.ground(p)))
    w_q = inflate(semantics.operator(herbrand.ground(q)))
    w_union = inflate(semantics.operator(herbrand.ground(union_modules(p, q))))
    try:
        report = WInequalityReport(
            union=w_union(partial),
            sequential=compose(w_p, w_q)(partial),
            summed=plus(w_p, w_q)(partial),
            reversed=compose(w_q, w_p)(partial),
            label=herbrand.universe.partial_interpretations.label(partial),
        )
    except JoinUndefinedError as e:
        raise EvaluationInconsistencyError(f"W⁺ 在 {partial} 处不一致: {e}") from e
    return report


@dataclass(frozen=True)
class UnfoundedExtensionReport:
    before: int
    after: int

    @property
    def lost(self):
        """属于 U_P(I) 却不属于 U_P(I ∪ J) 的原子"""
        return self.before & ~self.after

    @property
    def holds(self):
        return not self.lost


def check_unfounded_extension(program, partial: LiteralSet, extension: LiteralSet):
    """U_P(I ∪ J) ⊇ U_P(I)，其中 J 不涉及 def(P) 的原子"""
    if extension.mentioned & program.defines_mask:
        raise PreconditionError("J 涉及了 def(P) 的原子", extension)
    combined = partial.union(extension)
    if not combined.is_consistent:
        raise PreconditionError("I ∪ J 不一致", combined)
    report = UnfoundedExtensionReport(greatest_unfounded(program, partial), greatest_unfounded(program, combined))
    if not report.holds:
        logger.error("U_P 扩张性质不成立，丢失原子: %s", program.universe.render(report.lost))
    return report
