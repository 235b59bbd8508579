#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import pandas as pd

from src.algebra.operators import (
    EndoFunction, check_closure_laws, check_dual_composition, check_lemma, check_sandwich,
    classify, closure, compose, down_closure, dual_plus, fixedpoint_sets, inflate, is_monotone, plus,
    pointwise_leq,
)
from src.lattice.orders import make_builtin, make_powerset_lattice
from src.utils.errors import ClosureLabError

logger = logging.getLogger(__name__)


class BudgetExceededError(ClosureLabError):
    pass


def _require_budget(order, budget, what):
    if order.size > budget:
        raise BudgetExceededError(f"{order.name} 有 {order.size} 个元素，超过{what}预算 {budget}")


def enumerate_all_functions(order, budget=3):
    """按字典序枚举所有 |L|^|L| 个自映射"""
    _require_budget(order, budget, "全函数枚举")
    for index, table in enumerate(itertools.product(range(order.size), repeat=order.size)):
        yield EndoFunction(order, table, name=f"h{index}")


def enumerate_monotone(order, increasing=False, budget=6):
    """回溯枚举单调（可选递增）函数

    按线性扩张依次确定取值，候选值须不低于所有已确定下方元素的像；
    下标序即线性扩张时输出按取值表字典序排列。
    """
    _require_budget(order, budget, "单调函数枚举")
    n = order.size
    sequence = order.linear_extension()
    below = {x: order.below(x) for x in range(n)}
    table = [None] * n
    counter = itertools.count()
    prefix = "m" if not increasing else "u"

    def backtrack(position):
        if position == n:
            yield EndoFunction(order, list(table), name=f"{prefix}{next(counter)}")
            return
        x = sequence[position]
        for candidate in range(n):
            if increasing and not order.leq(x, candidate):
                continue
            if all(order.leq(table[y], candidate) for y in below[x]):
                table[x] = candidate
                yield from backtrack(position + 1)
        table[x] = None

    yield from backtrack(0)


def enumerate_monotone_increasing(lattice, budget=6):
    """枚举格上所有单调递增函数"""
    return enumerate_monotone(lattice, increasing=True, budget=budget)


@dataclass
class PartCounts:
    hypothesis_held: int = 0
    conclusion_held: int = 0
    both: int = 0
    neither: int = 0
    violations: int = 0

    def record(self, verdict):
        self.hypothesis_held += verdict.hypothesis
        self.conclusion_held += verdict.conclusion
        self.both += verdict.hypothesis and verdict.conclusion
        self.neither += not verdict.hypothesis and not verdict.conclusion
        self.violations += verdict.violated

    def add(self, other):
        for name in ("hypothesis_held", "conclusion_held", "both", "neither", "violations"):
            setattr(self, name, getattr(self, name) + getattr(other, name))


@dataclass(frozen=True)
class GalleryEntry:
    functions: Dict[str, List[str]]
    witness: Optional[str]

    def to_dict(self):
        return {"functions": self.functions, "witness": self.witness}


@dataclass
class CensusReport:
    """一次穷举普查的汇总"""
    kind: str
    lattice: str
    functions: int = 0
    instances: int = 0
    parts: Dict[int, PartCounts] = field(default_factory=dict)
    gallery: Dict[str, List[GalleryEntry]] = field(default_factory=dict)
    extra: Dict[str, int] = field(default_factory=dict)
    gallery_cap: int = 10

    @property
    def theorem_violations(self):
        return sum(c.violations for c in self.parts.values())

    @property
    def ok(self):
        return self.theorem_violations == 0

    def exhibit(self, key, entry):
        bucket = self.gallery.setdefault(key, [])
        if len(bucket) < self.gallery_cap:
            bucket.append(entry)

    def merge(self, other):
        self.instances += other.instances
        for part, counts in other.parts.items():
            self.parts.setdefault(part, PartCounts()).add(counts)
        for key, entries in other.gallery.items():
            for entry in entries:
                self.exhibit(key, entry)
        for key, value in other.extra.items():
            self.extra[key] = self.extra.get(key, 0) + value
        return self

    def to_frame(self):
        rows = []
        for part in sorted(self.parts):
            c = self.parts[part]
            rows.append({"part": part, "hypothesis": c.hypothesis_held, "conclusion": c.conclusion_held,
                         "both": c.both, "neither": c.neither, "violations": c.violations})
        return pd.DataFrame(rows, columns=["part", "hypothesis", "conclusion", "both", "neither", "violations"])

    def to_dict(self):
        return {
            "kind": self.kind,
            "lattice": self.lattice,
            "functions": self.functions,
            "instances": self.instances,
            "parts": {str(p): vars(c).copy() for p, c in sorted(self.parts.items())},
            "extra": dict(sorted(self.extra.items())),
            "gallery": {k: [e.to_dict() for e in v] for k, v in sorted(self.gallery.items())},
            "theorem_violations": self.theorem_violations,
            "ok": self.ok,
        }


def _labels(f):
    return [f.domain.label(v) for v in f.table]


def _lemma_partition(lattice_name, functions, start, stop, cap):
    report = CensusReport("lemma", lattice_name, gallery_cap=cap)
    n = len(functions)
    for index in range(start, stop):
        f, g = functions[index // n], functions[index % n]
        verdict = check_lemma(f, g)
        report.instances += 1
        for part in verdict.parts:
            report.parts.setdefault(part.part, PartCounts()).record(part)
            if part.violated:
                report.exhibit(f"violation{part.part}", GalleryEntry(
                    {"f": _labels(f), "g": _labels(g)}, _label_or_none(f.domain, part.conclusion_witness)))
            elif not part.hypothesis and not part.conclusion:
                report.exhibit(f"part{part.part}", GalleryEntry(
                    {"f": _labels(f), "g": _labels(g)}, _label_or_none(f.domain, part.conclusion_witness)))
    return report


def _label_or_none(order, x):
    return None if x is None else order.label(x)


def _split(total, workers):
    workers = max(1, min(workers, total or 1))
    step = -(-total // workers) if total else 0
    return [(i, min(i + step, total)) for i in range(0, total, step)] if total else []


def run_lemma_census(lattice, budget=6, gallery_cap=10, workers=1):
    """对所有单调递增函数有序对检查引理四个部分

    Args:
        lattice: 有限格
        budget: 枚举预算（元素个数上限）
        gallery_cap: 每个部分展示的反例上限
        workers: 分区并行数

    Returns:
        CensusReport
    """
    functions = list(enumerate_monotone_increasing(lattice, budget=budget))
    total = len(functions) ** 2
    partitions = _split(total, workers)
    logger.info("引理普查 %s: %d 个函数，%d 对，%d 个分区", lattice.name, len(functions), total, len(partitions))
    report = CensusReport("lemma", lattice.name, functions=len(functions), gallery_cap=gallery_cap)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = pool.map(lambda span: _lemma_partition(lattice.name, functions, span[0], span[1], gallery_cap),
                           partitions)
        for partial in results:
            report.merge(partial)
    if report.theorem_violations:
        logger.error("引理普查 %s 出现 %d 处定理违例", lattice.name, report.theorem_violations)
    return report


def iter_sandwich_triples(functions):
    """按 (f1, g, f2) 字典序给出逐点 f1 ≤ g ≤ f2 的三元组"""
    n = len(functions)
    below = [[pointwise_leq(functions[i], functions[j]) is None for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if not below[i][j]:
                continue
            for k in range(n):
                if below[j][k]:
                    yield functions[i], functions[j], functions[k]


def run_sandwich_census(poset, mode="all", all_budget=3, monotone_budget=4, gallery_cap=10):
    """对所有逐点有序的三元组检查夹逼引理六个部分

    Args:
        poset: 有限偏序集
        mode: "all" 枚举全部函数，"monotone" 只枚举单调函数
    """
    if mode == "all":
        functions = list(enumerate_all_functions(poset, budget=all_budget))
    elif mode == "monotone":
        functions = list(enumerate_monotone(poset, budget=monotone_budget))
    else:
        raise ClosureLabError(f"未知的普查模式: {mode}")
    report = CensusReport("sandwich", f"{poset.name}/{mode}", functions=len(functions), gallery_cap=gallery_cap)
    report.extra["part6_strict"] = 0
    for f1, g, f2 in iter_sandwich_triples(functions):
        verdict = check_sandwich(f1, g, f2)
        report.instances += 1
        for part in verdict.parts:
            report.parts.setdefault(part.part, PartCounts()).record(part)
            if part.violated:
                report.exhibit(f"violation{part.part}", GalleryEntry(
                    {"f1": _labels(f1), "g": _labels(g), "f2": _labels(f2)},
                    _label_or_none(poset, part.conclusion_witness)))
            elif not part.hypothesis and not part.conclusion:
                report.exhibit(f"part{part.part}", GalleryEntry(
                    {"f1": _labels(f1), "g": _labels(g), "f2": _labels(f2)},
                    _label_or_none(poset, part.conclusion_witness)))
        if verdict.part6_strict:
            report.extra["part6_strict"] += 1
            extra = sorted(verdict.sets["g"].fpt - verdict.sets["f1"].fpt)
            report.exhibit("part6_strict", GalleryEntry(
                {"f1": _labels(f1), "g": _labels(g), "f2": _labels(f2)}, poset.label(extra[0])))
    logger.info("夹逼普查 %s: %d 个三元组", report.lattice, report.instances)
    return report


@dataclass
class ExampleReport:
    """复现具体例子的检查结果"""
    name: str
    checks: Dict[str, bool] = field(default_factory=dict)
    values: Dict[str, str] = field(default_factory=dict)

    @property
    def ok(self):
        return all(self.checks.values())

    def to_dict(self):
        return {"name": self.name, "checks": dict(self.checks), "values": dict(self.values), "ok": self.ok}


def duality_functions():
    """{a,b,c} 幂集格上的 f、g：仅在全集处取 {a,b} / {b,c}，其余为空集"""
    lattice = make_powerset_lattice(["a", "b", "c"])
    top = lattice.top
    f_top, g_top = lattice.mask_of("ab"), lattice.mask_of("bc")
    f = EndoFunction(lattice, [f_top if x == top else 0 for x in lattice.elements()], name="f")
    g = EndoFunction(lattice, [g_top if x == top else 0 for x in lattice.elements()], name="g")
    return lattice, f, g


def reproduce_duality_counterexample():
    """向下闭包不满足 (f+g)• = f•∘g• 的反例"""
    lattice, f, g = duality_functions()
    top = lattice.top
    report = ExampleReport("duality")
    props_f, props_g = classify(f), classify(g)
    f_down = EndoFunction(lattice, [down_closure(f, x) for x in lattice.elements()], name="f•")
    sum_down_top = down_closure(plus(f, g), top)
    split_top = down_closure(f, down_closure(g, top))
    report.checks["f 单调递减"] = props_f.monotone and props_f.decreasing
    report.checks["g 单调递减"] = props_g.monotone and props_g.decreasing
    report.checks["f•∘g ≤ g∘f•"] = pointwise_leq(compose(f_down, g), compose(g, f_down)) is None
    report.checks["(f+g)(⊤) = ⊤"] = plus(f, g)(top) == top
    report.checks["(f+g)•(⊤) = ⊤"] = sum_down_top == top
    report.checks["f•(g•(⊤)) = ∅"] = split_top == lattice.bottom
    hypothesis, witness = check_dual_composition(f, g)
    report.checks["(f∘g)• = (g∘f)• = f•∘g•"] = hypothesis and witness is None
    report.values["g(⊤)"] = lattice.label(g(top))
    report.values["(f⊓g)(⊤)"] = lattice.label(dual_plus(f, g)(top))
    report.values["(f+g)•(⊤)"] = lattice.label(sum_down_top)
    report.values["f•∘g•(⊤)"] = lattice.label(split_top)
    return report


def appendix_functions():
    """三元链 1<2<3 上的 f1、g=恒等、f2"""
    chain = make_builtin("appendix_chain")
    one, two, three = chain.index("1"), chain.index("2"), chain.index("3")
    f1 = EndoFunction(chain, [one, one, three], name="f1")
    f2 = EndoFunction(chain, [one, three, three], name="f2")
    g = EndoFunction.identity(chain, name="g")
    return chain, f1, g, f2


def reproduce_appendix_example():
    """夹在不动点相同的两个函数之间，却多出不动点 2"""
    chain, f1, g, f2 = appendix_functions()
    report = ExampleReport("appendix")
    verdict = check_sandwich(f1, g, f2)
    s1, sg, s2 = verdict.sets["f1"], verdict.sets["g"], verdict.sets["f2"]
    expected = frozenset({chain.index("1"), chain.index("3")})
    report.checks["f1、g、f2 单调"] = all(is_monotone(h) for h in (f1, g, f2))
    report.checks["f1 ≤ g ≤ f2"] = pointwise_leq(f1, g) is None and pointwise_leq(g, f2) is None
    report.checks["FPT(f1) = FPT(f2) = {1,3}"] = s1.fpt == s2.fpt == expected
    report.checks["FPT(g) = {1,2,3}"] = sg.fpt == frozenset(chain.elements())
    report.checks["第 6 部分严格包含"] = verdict.part6_strict
    report.checks["第 1–5 部分假设均不成立"] = not any(verdict.part(i).hypothesis for i in range(1, 6))
    report.checks["无定理违例"] = not verdict.violations
    for name, sets in verdict.sets.items():
        report.values[f"PRE({name})"] = chain.format_set(sets.pre)
        report.values[f"POST({name})"] = chain.format_set(sets.post)
        report.values[f"FPT({name})"] = chain.format_set(sets.fpt)
    return report


@dataclass
class ClosureIdentityReport:
    lattice: str
    functions: int = 0
    pairs: int = 0
    violations: Dict[str, int] = field(default_factory=dict)
    witnesses: Dict[str, str] = field(default_factory=dict)

    @property
    def ok(self):
        return not any(self.violations.values())

    def to_dict(self):
        return {"lattice": self.lattice, "functions": self.functions, "pairs": self.pairs,
                "violations": dict(sorted(self.violations.items())),
                "witnesses": dict(sorted(self.witnesses.items())), "ok": self.ok}


def check_closure_identities(lattice, budget=6):
    """在格的全部单调函数上穷举闭包恒等式与 * 关于函数参数的单调性"""
    functions = list(enumerate_monotone(lattice, budget=budget))
    report = ClosureIdentityReport(lattice.name, functions=len(functions))
    for f in functions:
        for law, witness in check_closure_laws(f).items():
            report.violations.setdefault(law, 0)
            if witness is not None:
                report.violations[law] += 1
                report.witnesses.setdefault(law, f"{f.describe()} @ {lattice.label(witness)}")
    closures = [closure(f).table for f in functions]
    key = "f≤g ⇒ f*≤g*"
    report.violations[key] = 0
    for i, f in enumerate(functions):
        for j, g in enumerate(functions):
            if pointwise_leq(f, g) is not None:
                continue
            report.pairs += 1
            bad = [x for x in lattice.elements() if not lattice.leq(closures[i][x], closures[j][x])]
            if bad:
                report.violations[key] += 1
                report.witnesses.setdefault(key, f"{f.name} ≤ {g.name} @ {lattice.label(bad[0])}")
    # 补充：f⁺ 保持单调性
    inflate_key = "f 单调 ⇒ f⁺ 单调"
    report.violations[inflate_key] = sum(not is_monotone(inflate(f)) for f in functions)
    return report


def fixedpoint_table(f):
    """PRE/POST/FPT 的可读形式"""
    sets = fixedpoint_sets(f)
    order = f.domain
    return {"PRE": order.format_set(sets.pre), "POST": order.format_set(sets.post), "FPT": order.format_set(sets.fpt)}
