#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import itertools
import logging
import random
from abc import ABC, abstractmethod
from enum import Enum

from src.algebra.operators import EndoFunction
from src.lattice.orders import LiteralSet
from src.logic.grounding import GroundRuleSet
from src.utils.errors import ClosureLabError

logger = logging.getLogger(__name__)


class SemanticsError(ClosureLabError):
    pass


class NegationNotSupportedError(SemanticsError):
    pass


class StartElementError(SemanticsError):
    pass


class EvaluationInconsistencyError(SemanticsError):
    pass


class SemanticsKind(Enum):
    LEAST_MODEL = "lfp"
    FITTING = "fitting"
    WELL_FOUNDED = "wf"

    @classmethod
    def parse(cls, text):
        aliases = {"least_model": cls.LEAST_MODEL, "well_founded": cls.WELL_FOUNDED}
        text = str(text).strip().lower()
        if text in aliases:
            return aliases[text]
        try:
            return cls(text)
        except ValueError:
            raise SemanticsError(f"未知的语义: {text}（可选 lfp、fitting、wf）")


def tp_apply(program: GroundRuleSet, interpretation):
    """T_P(I)：正文字全部属于 I 的规则的头部"""
    if not program.is_definite:
        raise NegationNotSupportedError(f"模块 {program.name} 含有负文字，最小模型语义不支持否定，请使用 fitting 或 wf")
    derived = 0
    for rule in program.rules:
        if rule.pos_mask & ~interpretation == 0:
            derived |= 1 << rule.head
    return derived


def tp3(program: GroundRuleSet, partial: LiteralSet):
    """三值 T_P：正体文字属于 I.pos 且负体文字属于 I.neg"""
    derived = 0
    for rule in program.rules:
        if rule.pos_mask & ~partial.pos == 0 and rule.neg_mask & ~partial.neg == 0:
            derived |= 1 << rule.head
    return derived


def _blocked(rule, partial: LiteralSet):
    return bool(rule.pos_mask & partial.neg or rule.neg_mask & partial.pos)


def _assert_consistent(program, result: LiteralSet, operator):
    if not result.is_consistent:
        clash = program.universe.render(result.pos & result.neg)
        raise EvaluationInconsistencyError(f"{operator} 在模块 {program.name} 上产生了不一致的结果: {', '.join(clash)}")
    return result


def _atoms(mask):
    i = 0
    while mask >> i:
        if mask >> i & 1:
            yield i
        i += 1


def _falsified(program: GroundRuleSet, partial: LiteralSet):
    falsified = 0
    for atom in _atoms(program.defines_mask):
        if all(_blocked(rule, partial) for rule in program.rules_by_head.get(atom, ())):
            falsified |= 1 << atom
    return falsified


def fitting_apply(program: GroundRuleSet, partial: LiteralSet):
    """Φ_P(I)

    负部分：def(P) 中每条规则都有假体文字的原子；没有规则的原子空真地为假。
    """
    return _assert_consistent(program, LiteralSet(tp3(program, partial), _falsified(program, partial)), "Φ")


def greatest_unfounded(program: GroundRuleSet, partial: LiteralSet):
    """U_P(I)：最大的 P,I-无根集

    从 def(P) 的全部原子出发向下收缩，用计数器记录每条未被 I 阻断的规则
    还剩多少个正体原子留在 U 中；计数归零即说明该规则成立，头部移出 U。
    """
    unfounded = program.defines_mask
    pending = {}
    queue = []
    for number, rule in enumerate(program.rules):
        if _blocked(rule, partial):
            continue
        count = bin(rule.pos_mask & unfounded).count("1")
        pending[number] = count
        if count == 0:
            queue.append(rule.head)
    while queue:
        atom = queue.pop()
        if not unfounded >> atom & 1:
            continue
        unfounded &= ~(1 << atom)
        for number in program.positive_occurrences.get(atom, ()):
            if number not in pending:
                continue
            pending[number] -= 1
            if pending[number] == 0:
                queue.append(program.rules[number].head)
    return unfounded


def wp_apply(program: GroundRuleSet, partial: LiteralSet, check=True):
    """W_P(I) = T_P(I) ∪ ¬U_P(I)

    check 为假时返回未经一致性检查的原始对（用于单调性抽样）。
    """
    result = LiteralSet(tp3(program, partial), greatest_unfounded(program, partial))
    if check:
        _assert_consistent(program, result, "W")
    return result


class SemanticOperatorBase(ABC):
    """语义算子基类：一步算子、所在的序、起点约束与模型读取"""

    kind: SemanticsKind

    @abstractmethod
    def apply(self, program: GroundRuleSet, element):
        """一步算子 f_P"""
        pass

    @abstractmethod
    def order(self, universe):
        pass

    @abstractmethod
    def mentioned(self, element):
        """起点元素涉及的原子掩码"""
        pass

    @abstractmethod
    def read_model(self, universe, element):
        """返回 (真, 假, 未定义) 三个原子掩码"""
        pass

    @abstractmethod
    def _pairs(self, size, limit, rng):
        pass

    def raw(self, program, element):
        return self.apply(program, element)

    def bottom(self, universe):
        return self.order(universe).bottom

    def operator(self, program: GroundRuleSet):
        """把一步算子包装为 program.universe 上的 EndoFunction"""
        order = self.order(program.universe)
        return EndoFunction(order, lambda x: self.apply(program, x), name=f"{self.symbol}_{program.name}")

    def check_start(self, program: GroundRuleSet, element):
        """起点只能涉及 def(P) 之外的谓词"""
        order = self.order(program.universe)
        if not order.contains(element):
            raise StartElementError(f"起点 {element!r} 不是 {order.name} 的元素")
        clash = self.mentioned(element) & program.defines_mask
        if clash:
            raise StartElementError(
                f"起点涉及模块 {program.name} 定义的原子: {', '.join(program.universe.render(clash))}")
        return element

    def monotonicity_witness(self, program: GroundRuleSet, limit=500, rng=None):
        """在至多 limit 个有序对 I ≤ J 上检查单调性

        对数不超过 limit 时穷举，否则按 rng 抽样。

        Returns:
            (检查的对数, 反例 (I, J) 或 None)
        """
        rng = rng or random.Random(0)
        checked = 0
        for low, high in self._pairs(program.universe.size, limit, rng):
            checked += 1
            if not self._raw_leq(self.raw(program, low), self.raw(program, high)):
                return checked, (low, high)
        return checked, None

    @staticmethod
    def _raw_leq(a, b):
        if isinstance(a, LiteralSet):
            return a.issubset(b)
        return a & ~b == 0


class LeastModelSemantics(SemanticOperatorBase):
    kind = SemanticsKind.LEAST_MODEL
    symbol = "T"

    def apply(self, program, element):
        return tp_apply(program, element)

    def order(self, universe):
        return universe.interpretations

    def mentioned(self, element):
        return element

    def read_model(self, universe, element):
        return element, universe.full & ~element, 0

    def _pairs(self, size, limit, rng):
        # 每个原子三种情形：都不含、仅 J 含、都含
        if 3 ** size <= limit:
            for choice in itertools.product((0, 1, 2), repeat=size):
                low = sum(1 << i for i, c in enumerate(choice) if c == 2)
                high = sum(1 << i for i, c in enumerate(choice) if c >= 1)
                yield low, high
            return
        for _ in range(limit):
            high = rng.getrandbits(size)
            yield high & rng.getrandbits(size), high


class _ThreeValued(SemanticOperatorBase):
    def order(self, universe):
        return universe.partial_interpretations

    def mentioned(self, element):
        return element.mentioned

    def read_model(self, universe, element):
        return element.pos, element.neg, universe.full & ~element.mentioned

    def _pairs(self, size, limit, rng):
        # 每个原子 (I, J) 五种情形：(u,u) (u,t) (u,f) (t,t) (f,f)
        steps = ((0, 0), (0, 1), (0, 2), (1, 1), (2, 2))
        if 5 ** size <= limit:
            for choice in itertools.product(steps, repeat=size):
                yield _literal_set(c[0] for c in choice), _literal_set(c[1] for c in choice)
            return
        for _ in range(limit):
            choice = [rng.choice(steps) for _ in range(size)]
            yield _literal_set(c[0] for c in choice), _literal_set(c[1] for c in choice)


def _literal_set(signs):
    pos = neg = 0
    for i, sign in enumerate(signs):
        if sign == 1:
            pos |= 1 << i
        elif sign == 2:
            neg |= 1 << i
    return LiteralSet(pos, neg)


class FittingSemantics(_ThreeValued):
    kind = SemanticsKind.FITTING
    symbol = "Φ"

    def apply(self, program, element):
        return fitting_apply(program, element)


class WellFoundedSemantics(_ThreeValued):
    kind = SemanticsKind.WELL_FOUNDED
    symbol = "W"

    def apply(self, program, element):
        return wp_apply(program, element)

    def raw(self, program, element):
        # 任意 I 上可能不一致，抽样时只逐分量比较
        return wp_apply(program, element, check=False)


class SemanticsFactory:
    """语义工厂，按 SemanticsKind 创建语义算子实例"""

    _registry = {
        SemanticsKind.LEAST_MODEL: LeastModelSemantics,
        SemanticsKind.FITTING: FittingSemantics,
        SemanticsKind.WELL_FOUNDED: WellFoundedSemantics,
    }

    @staticmethod
    def create(kind):
        """创建语义算子

        Args:
            kind: SemanticsKind 或其名称（lfp / fitting / wf）

        Returns:
            SemanticOperatorBase 实例
        """
        if not isinstance(kind, SemanticsKind):
            kind = SemanticsKind.parse(kind)
        return SemanticsFactory._registry[kind]()
