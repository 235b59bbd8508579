#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Optional, Sequence, Tuple, Union

from src.lattice.orders import FiniteOrder, InconsistentUnionError, NotALatticeError
from src.utils.errors import ClosureLabError

logger = logging.getLogger(__name__)

TABULATION_LIMIT = 1 << 16


class AlgebraError(ClosureLabError):
    pass


class DomainMismatchError(AlgebraError):
    pass


class JoinUndefinedError(AlgebraError):
    pass


class IterationBoundError(AlgebraError):
    pass


class PreconditionError(AlgebraError):
    """前置条件不成立，witness 为违反条件的元素"""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class EndoFunction:
    """有限偏序上的全函数

    两种表示：表（下标 -> 下标，用于实验室）或回调（用于语义算子）。
    """

    def __init__(self, domain: FiniteOrder, mapping: Union[Callable, Sequence[int]], name="f"):
        """初始化自映射

        Args:
            domain: 定义域兼值域
            mapping: 可调用对象，或长度等于载体大小的取值表
            name: 显示名
        """
        self.domain = domain
        self.name = name
        if callable(mapping):
            self._fn = mapping
            self._table = None
        else:
            if not domain.indexed:
                raise DomainMismatchError(f"{domain.name} 的元素不是下标，{name} 不能用取值表表示")
            table = tuple(int(v) for v in mapping)
            if len(table) != domain.size:
                raise DomainMismatchError(f"{name} 的取值表长度 {len(table)} 与载体大小 {domain.size} 不符")
            for x, y in enumerate(table):
                if not domain.contains(y):
                    raise DomainMismatchError(f"{name}({domain.label(x)}) = {y} 不属于 {domain.name}")
            self._fn = None
            self._table = table

    def __call__(self, x):
        if self._table is not None:
            return self._table[self.domain.check(x)]
        return self.domain.check(self._fn(x))

    @property
    def is_tabulated(self):
        return self._table is not None

    @property
    def table(self) -> Tuple:
        if self._table is None:
            if not self.domain.indexed:
                raise DomainMismatchError(f"{self.domain.name} 上的函数不能制表")
            self._table = tuple(self._fn(x) for x in self.domain.elements())
        return self._table

    def same_as(self, other: "EndoFunction"):
        _require_same_domain(self, other)
        return all(self(x) == other(x) for x in self.domain.elements())

    def describe(self):
        return ", ".join(f"{self.domain.label(x)}↦{self.domain.label(self(x))}" for x in self.domain.elements())

    def __repr__(self):
        return f"<EndoFunction {self.name} on {self.domain.name}>"

    @classmethod
    def identity(cls, domain, name="id"):
        if domain.indexed and domain.size <= TABULATION_LIMIT:
            return cls(domain, list(domain.elements()), name=name)
        return cls(domain, lambda x: x, name=name)

    @classmethod
    def constant(cls, domain, value, name=None):
        domain.check(value)
        name = name or f"const {domain.label(value)}"
        if domain.indexed and domain.size <= TABULATION_LIMIT:
            return cls(domain, [value] * domain.size, name=name)
        return cls(domain, lambda x: value, name=name)


def _require_same_domain(f, g):
    if f.domain is not g.domain:
        raise DomainMismatchError(f"{f.name} 与 {g.name} 的定义域不同: {f.domain.name} / {g.domain.name}")


def _join(order, x, y):
    try:
        return order.join(x, y)
    except (InconsistentUnionError, NotALatticeError) as e:
        raise JoinUndefinedError(str(e)) from e


def _meet(order, x, y):
    try:
        return order.meet(x, y)
    except NotALatticeError as e:
        raise JoinUndefinedError(str(e)) from e


def _combine(f, g, op, name):
    _require_same_domain(f, g)
    order = f.domain
    if f.is_tabulated and g.is_tabulated:
        return EndoFunction(order, [op(order, f(x), g(x)) for x in order.elements()], name=name)
    return EndoFunction(order, lambda x: op(order, f(x), g(x)), name=name)


def plus(f: EndoFunction, g: EndoFunction):
    """逐点并 (f+g)(X) = f(X) ⊔ g(X)"""
    return _combine(f, g, _join, f"({f.name}+{g.name})")


def dual_plus(f: EndoFunction, g: EndoFunction):
    """逐点交，加法的对偶"""
    return _combine(f, g, _meet, f"({f.name}⊓{g.name})")


def compose(f: EndoFunction, g: EndoFunction):
    """x ↦ f(g(x))"""
    _require_same_domain(f, g)
    name = f"({f.name}∘{g.name})"
    if f.is_tabulated and g.is_tabulated:
        return EndoFunction(f.domain, [f(g(x)) for x in f.domain.elements()], name=name)
    return EndoFunction(f.domain, lambda x: f(g(x)), name=name)


def inflate(f: EndoFunction):
    """f⁺(X) = f(X) ⊔ X，大于 f 的最小递增函数"""
    order = f.domain
    name = f"{f.name}⁺"
    if f.is_tabulated:
        return EndoFunction(order, [_join(order, f(x), x) for x in order.elements()], name=name)
    return EndoFunction(order, lambda x: _join(order, f(x), x), name=name)


def star(f: EndoFunction, x, bound=None, check_monotone=False):
    """f*(x)：从 x 出发迭代 y ↦ y ⊔ f(y) 直到稳定

    Args:
        f: 单调函数
        x: 起点
        bound: 迭代次数上限，默认取载体高度加二
        check_monotone: 是否先穷举检查单调性

    Returns:
        f⁺ 在 x 之上的最小不动点

    Raises:
        IterationBoundError: 超过迭代上限（输入非单调或不一致）
    """
    order = f.domain
    if check_monotone:
        witness = monotonicity_witness(f)
        if witness is not None:
            raise PreconditionError(f"{f.name} 不单调: {order.label(witness[0])} ≤ {order.label(witness[1])}", witness)
    limit = bound if bound is not None else order.iteration_bound
    y = order.check(x)
    for _ in range(limit):
        following = _join(order, y, f(y))
        if following == y:
            return y
        y = following
    raise IterationBoundError(f"{f.name}* 在 {limit} 步内未稳定（起点 {order.label(x)}）")


def closure(f: EndoFunction, name=None):
    """把 f* 作为函数返回；载体可枚举时直接制表"""
    order = f.domain
    name = name or f"{f.name}*"
    if f.is_tabulated:
        return EndoFunction(order, [star(f, x) for x in order.elements()], name=name)
    return EndoFunction(order, lambda x: star(f, x), name=name)


def lfp_from(f: EndoFunction, x, bound=None):
    """f 在 x 之上的最小不动点，要求 x ≤ f(x)"""
    order = f.domain
    fx = f(x)
    if not order.leq(x, fx):
        raise PreconditionError(f"lfp 前置条件不成立: {order.label(x)} ≰ {f.name}({order.label(x)}) = {order.label(fx)}", x)
    return star(f, x, bound=bound)


def down_closure(f: EndoFunction, x, bound=None):
    """f•(x)：从 x 出发迭代 y ↦ y ⊓ f(y) 直到稳定"""
    order = f.domain
    limit = bound if bound is not None else order.iteration_bound
    y = order.check(x)
    for _ in range(limit):
        fy = f(y)
        if not order.leq(fy, y):
            raise PreconditionError(
                f"{f.name} 在 {order.label(y)} 处不递减: {f.name}({order.label(y)}) = {order.label(fy)}", y)
        following = _meet(order, y, fy)
        if following == y:
            return y
        y = following
    raise IterationBoundError(f"{f.name}• 在 {limit} 步内未稳定（起点 {order.label(x)}）")


def down_closure_function(f: EndoFunction, name=None):
    order = f.domain
    return EndoFunction(order, [down_closure(f, x) for x in order.elements()], name=name or f"{f.name}•")


@dataclass(frozen=True)
class FunctionProperties:
    monotone: bool
    increasing: bool
    decreasing: bool
    continuous: bool

    def to_dict(self):
        return {"monotone": self.monotone, "increasing": self.increasing,
                "decreasing": self.decreasing, "continuous": self.continuous}


def monotonicity_witness(f: EndoFunction):
    """返回第一对 x ≤ y 但 f(x) ≰ f(y) 的元素，单调时返回 None"""
    order = f.domain
    elements = list(order.elements())
    values = [f(x) for x in elements]
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            if i != j and order.leq(x, y) and not order.leq(values[i], values[j]):
                return (x, y)
    return None


def classify(f: EndoFunction):
    """穷举判定单调、递增、递减；有限载体上连续等同单调"""
    order = f.domain
    monotone = monotonicity_witness(f) is None
    increasing = all(order.leq(x, f(x)) for x in order.elements())
    decreasing = all(order.leq(f(x), x) for x in order.elements())
    return FunctionProperties(monotone, increasing, decreasing, monotone)


def is_monotone(f: EndoFunction):
    return monotonicity_witness(f) is None


def is_increasing(f: EndoFunction):
    return all(f.domain.leq(x, f(x)) for x in f.domain.elements())


def pointwise_leq(f: EndoFunction, g: EndoFunction):
    """f ≤ g 时返回 None，否则返回第一个反例元素"""
    _require_same_domain(f, g)
    order = f.domain
    for x in order.elements():
        if not order.leq(f(x), g(x)):
            return x
    return None


@dataclass(frozen=True)
class FixedpointSets:
    pre: FrozenSet
    post: FrozenSet
    fpt: FrozenSet


def fixedpoint_sets(f: EndoFunction):
    """前不动点 f(x) ≤ x、后不动点 x ≤ f(x) 与不动点"""
    order = f.domain
    pre, post = set(), set()
    for x in order.elements():
        fx = f(x)
        if order.leq(fx, x):
            pre.add(x)
        if order.leq(x, fx):
            post.add(x)
    return FixedpointSets(frozenset(pre), frozenset(post), frozenset(pre & post))


@dataclass(frozen=True)
class PartVerdict:
    part: int
    hypothesis: bool
    conclusion: bool
    hypothesis_witness: Optional[object] = None
    conclusion_witness: Optional[object] = None

    @property
    def violated(self):
        return self.hypothesis and not self.conclusion


@dataclass(frozen=True)
class LemmaVerdict:
    f_name: str
    g_name: str
    parts: Tuple[PartVerdict, ...]

    def part(self, number):
        return self.parts[number - 1]

    @property
    def violations(self):
        return [p.part for p in self.parts if p.violated]


def _first_failure(order, predicate):
    for x in order.elements():
        if not predicate(x):
            return x
    return None


def _require_monotone_increasing(*functions):
    for f in functions:
        props = classify(f)
        if not (props.monotone and props.increasing):
            raise PreconditionError(f"{f.name} 必须单调且递增: {props.to_dict()}")


def check_lemma(f: EndoFunction, g: EndoFunction):
    """在整个载体上逐点判定引理四个部分的假设与结论

    Args:
        f: 单调递增函数
        g: 单调递增函数（与 f 同定义域）

    Returns:
        LemmaVerdict
    """
    _require_same_domain(f, g)
    _require_monotone_increasing(f, g)
    order = f.domain
    leq = order.leq
    f_star, g_star = closure(f), closure(g)
    sum_star = closure(plus(f, g))
    fg_star = closure(compose(f, g))
    gf_star = closure(compose(g, f))
    split = compose(f_star, g_star)

    part1 = _first_failure(order, lambda x: sum_star(x) == fg_star(x) == gf_star(x))
    joint = _first_failure(order, lambda x: sum_star(x) == fg_star(x) == split(x))
    g_continuous = classify(g).continuous

    hyp2 = _first_failure(order, lambda x: leq(g(f_star(x)), f_star(g(x))))
    hyp3 = _first_failure(order, lambda x: leq(g(f(x)), f(g(x))))
    hyp4 = _first_failure(order, lambda x: leq(g_star(f(x)), f(g_star(x))))

    parts = (
        PartVerdict(1, True, part1 is None, None, part1),
        PartVerdict(2, hyp2 is None, joint is None, hyp2, joint),
        PartVerdict(3, g_continuous and hyp3 is None, joint is None, hyp3, joint),
        PartVerdict(4, g_continuous and hyp4 is None, joint is None, hyp4, joint),
    )
    return LemmaVerdict(f.name, g.name, parts)


@dataclass(frozen=True)
class SandwichVerdict:
    parts: Tuple[PartVerdict, ...]
    sets: Dict[str, FixedpointSets] = field(default_factory=dict)

    def part(self, number):
        return self.parts[number - 1]

    @property
    def violations(self):
        return [p.part for p in self.parts if p.violated]

    @property
    def part6_strict(self):
        """FPT(f1)=FPT(f2) 但 g 有额外不动点"""
        return self.part(6).hypothesis and self.sets["g"].fpt > self.sets["f1"].fpt


def _witness(a, b):
    diff = sorted(a ^ b, key=repr)
    return diff[0] if diff else None


def check_sandwich(f1: EndoFunction, g: EndoFunction, f2: EndoFunction):
    """夹逼引理六个部分；不要求单调性

    Raises:
        PreconditionError: 逐点 f1 ≤ g ≤ f2 不成立
    """
    _require_same_domain(f1, g)
    _require_same_domain(g, f2)
    order = g.domain
    low = pointwise_leq(f1, g)
    high = pointwise_leq(g, f2)
    if low is not None or high is not None:
        x = low if low is not None else high
        raise PreconditionError(f"夹逼条件在 {order.label(x)} 处不成立", x)

    s1, sg, s2 = fixedpoint_sets(f1), fixedpoint_sets(g), fixedpoint_sets(f2)
    same_pre = s1.pre == s2.pre
    same_post = s1.post == s2.post
    same_fpt = s1.fpt == s2.fpt
    pre_ok = sg.pre == s1.pre == s2.pre
    post_ok = sg.post == s1.post == s2.post
    fpt_ok = sg.fpt == s1.fpt == s2.fpt
    fpt_witness = _witness(sg.fpt, s1.fpt) if not fpt_ok else None

    parts = (
        PartVerdict(1, same_pre, pre_ok, _witness(s1.pre, s2.pre), _witness(sg.pre, s1.pre) if not pre_ok else None),
        PartVerdict(2, same_post, post_ok, _witness(s1.post, s2.post), _witness(sg.post, s1.post) if not post_ok else None),
        PartVerdict(3, same_pre and same_fpt, fpt_ok, None, fpt_witness),
        PartVerdict(4, same_post and same_fpt, fpt_ok, None, fpt_witness),
        PartVerdict(5, same_pre and same_post, fpt_ok, None, fpt_witness),
        PartVerdict(6, same_fpt, same_fpt and sg.fpt >= s1.fpt, _witness(s1.fpt, s2.fpt),
                    _witness(s1.fpt - sg.fpt, frozenset())),
    )
    return SandwichVerdict(parts, {"f1": s1, "g": sg, "f2": s2})


@dataclass(frozen=True)
class CommonFixedpointReport:
    holds: bool
    common: FrozenSet
    compose_fg: FrozenSet
    compose_gf: FrozenSet
    plus: FrozenSet
    witness: Optional[object] = None


def common_fixedpoints_check(f: EndoFunction, g: EndoFunction):
    """递增函数的公共不动点恰为 f∘g、g∘f、f+g 的不动点"""
    _require_same_domain(f, g)
    for h in (f, g):
        if not is_increasing(h):
            raise PreconditionError(f"{h.name} 不是递增函数")
    common = fixedpoint_sets(f).fpt & fixedpoint_sets(g).fpt
    fg = fixedpoint_sets(compose(f, g)).fpt
    gf = fixedpoint_sets(compose(g, f)).fpt
    sum_fpt = fixedpoint_sets(plus(f, g)).fpt
    witness = None
    for other in (fg, gf, sum_fpt):
        if other != common:
            witness = _witness(other, common)
            break
    return CommonFixedpointReport(witness is None and common == fg == gf == sum_fpt, common, fg, gf, sum_fpt, witness)


def check_closure_laws(f: EndoFunction):
    """单调函数的闭包恒等式，返回 {定律: 反例元素或 None}

    f ≤ f⁺ ≤ f*，f* = f∘f*（f 递增时），f* = f* + f* = f*∘f*，
    f* = (f*)*，f 的不动点都是 f⁺ 的不动点。
    """
    order = f.domain
    f_plus = inflate(f)
    f_star = closure(f)
    star_star = closure(f_star)
    increasing = is_increasing(f)
    laws = {
        "f≤f⁺": pointwise_leq(f, f_plus),
        "f⁺≤f*": pointwise_leq(f_plus, f_star),
        "f*=f*+f*": _first_failure(order, lambda x: _join(order, f_star(x), f_star(x)) == f_star(x)),
        "f*=f*∘f*": _first_failure(order, lambda x: f_star(f_star(x)) == f_star(x)),
        "f*=(f*)*": _first_failure(order, lambda x: star_star(x) == f_star(x)),
        "FPT(f)⊆FPT(f⁺)": _first_failure(order, lambda x: f(x) != x or f_plus(x) == x),
    }
    if increasing:
        laws["f*=f∘f*"] = _first_failure(order, lambda x: f(f_star(x)) == f_star(x))
    return laws


def check_star_monotonicity(f: EndoFunction, g: EndoFunction):
    """f ≤ g（均单调）时 f* ≤ g*；前提不成立返回 None，否则返回反例或 False"""
    if pointwise_leq(f, g) is not None:
        return None
    witness = pointwise_leq(closure(f), closure(g))
    return witness if witness is not None else False


def check_dual_composition(f: EndoFunction, g: EndoFunction):
    """单调递减 f、g 且 f•∘g ≤ g∘f• 时，(f∘g)• = (g∘f)• = f•∘g•

    Returns:
        (假设是否成立, 结论反例元素或 None)
    """
    _require_same_domain(f, g)
    order = f.domain
    if not all(classify(h).monotone and classify(h).decreasing for h in (f, g)):
        return False, None
    f_down = down_closure_function(f)
    g_down = down_closure_function(g)
    hypothesis = pointwise_leq(compose(f_down, g), compose(g, f_down)) is None
    fg_down = down_closure_function(compose(f, g))
    gf_down = down_closure_function(compose(g, f))
    witness = _first_failure(order, lambda x: fg_down(x) == gf_down(x) == f_down(g_down(x)))
    return hypothesis, witness


@dataclass(frozen=True)
class PropositionVerdict:
    hypotheses: Dict[str, bool]
    conclusion: bool
    witness: Optional[object] = None

    @property
    def violated(self):
        return all(self.hypotheses.values()) and not self.conclusion


def check_proposition(f_p: EndoFunction, f_q: EndoFunction, f_union: Optional[EndoFunction] = None):
    """模块分解命题（f_union 为 None 时按推论处理）

    假设 1：f_P、f_Q 单调；
    假设 2：f_P⁺ + f_Q⁺ ≤ f_{P∪Q}⁺ ≤ f_P⁺ ∘ f_Q⁺；
    假设 3：f_Q 连续且 f_Q⁺∘f_P⁺ ≤ f_P⁺∘f_Q⁺ 或 f_Q*∘f_P⁺ ≤ f_P⁺∘f_Q*，
            或者 f_Q⁺∘f_P* ≤ f_P*∘f_Q⁺。
    结论：f_{P∪Q}* = f_P* ∘ f_Q*（推论中为 (f_P⁺ + f_Q⁺)* = (f_P⁺∘f_Q⁺)* = f_P*∘f_Q*）。
    """
    _require_same_domain(f_p, f_q)
    order = f_p.domain
    p_plus, q_plus = inflate(f_p), inflate(f_q)
    p_star, q_star = closure(f_p), closure(f_q)
    props_q = classify(f_q)
    hypotheses = {"monotone": classify(f_p).monotone and props_q.monotone}
    if f_union is not None:
        _require_same_domain(f_p, f_union)
        u_plus = inflate(f_union)
        hypotheses["sandwich"] = (pointwise_leq(plus(p_plus, q_plus), u_plus) is None
                                  and pointwise_leq(u_plus, compose(p_plus, q_plus)) is None)
    commute = pointwise_leq(compose(q_plus, p_plus), compose(p_plus, q_plus)) is None
    commute_star = pointwise_leq(compose(q_star, p_plus), compose(p_plus, q_star)) is None
    commute_closure = pointwise_leq(compose(q_plus, p_star), compose(p_star, q_plus)) is None
    hypotheses["commutation"] = (props_q.continuous and (commute or commute_star)) or commute_closure

    split = compose(p_star, q_star)
    if f_union is not None:
        union_star = closure(f_union)
        witness = _first_failure(order, lambda x: union_star(x) == split(x))
    else:
        sum_star = closure(plus(p_plus, q_plus))
        comp_star = closure(compose(p_plus, q_plus))
        witness = _first_failure(order, lambda x: sum_star(x) == comp_star(x) == split(x))
    return PropositionVerdict(hypotheses, witness is None, witness)
