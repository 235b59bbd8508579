#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""随机分层双模块程序语料及其性质检查

每个语料项是一对模块 P、Q（P >> Q）以及外部谓词上的起点文字。
生成完全由种子决定，同一种子总是得到同一批程序。
"""

import itertools
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import pandas as pd

from src.lattice.orders import LiteralSet
from src.logic.grounding import Herbrand
from src.logic.modules import precedes, union_modules, wrap_goal
from src.logic.syntax import Atom, Constant, Literal, Module, Predicate, Rule, Variable, positive_part
from src.semantics.evaluation import Model, compare, evaluate, start_element
from src.semantics.operators import SemanticsFactory, SemanticsKind
from src.semantics.residual import check_unfounded_extension, partial_eval_check

logger = logging.getLogger(__name__)

CONSTANTS = ("a", "b", "c", "d")
VARIABLES = ("X", "Y", "Z")
KINDS = (SemanticsKind.LEAST_MODEL, SemanticsKind.FITTING, SemanticsKind.WELL_FOUNDED)


@dataclass(frozen=True)
class CorpusProgram:
    index: int
    upper: Module
    lower: Module
    external: Tuple[Predicate, ...]
    start: Tuple[Literal, ...]
    constants: Tuple[Constant, ...]

    @property
    def modules(self):
        return [self.upper, self.lower]

    def definite(self):
        """最小模型检查用的确定版本：去掉负文字，起点只保留正文字"""
        return (positive_part(self.upper), positive_part(self.lower),
                tuple(l for l in self.start if l.positive))

    def to_text(self):
        return "\n".join(m.to_text() for m in (self.lower, self.upper))


def _random_atom(rng, predicate, terms):
    return Atom(predicate.name, tuple(rng.choice(terms) for _ in range(predicate.arity)))


def _random_rule(rng, head_predicate, body_predicates, constants):
    """先生成正文字，头部与负文字只使用正文字中已绑定的变量"""
    pool = [Variable(v) for v in VARIABLES] + [Constant(c) for c in constants]
    positives = [Literal(_random_atom(rng, rng.choice(body_predicates), pool))
                 for _ in range(rng.randint(0, 2))]
    bound = list(dict.fromkeys(v for l in positives for v in l.atom.variables))
    safe_terms = bound + [Constant(c) for c in constants]
    negatives = [Literal(_random_atom(rng, rng.choice(body_predicates), safe_terms), False)
                 for _ in range(rng.choice((0, 0, 1)))]
    head = _random_atom(rng, head_predicate, safe_terms)
    return Rule(head, tuple(positives + negatives))


def generate_program(rng, index=0, max_predicates=6, max_rules=12, max_constants=4):
    """生成一个满足 P >> Q 的随机双模块程序"""
    constants = CONSTANTS[:rng.randint(1, min(max_constants, len(CONSTANTS)))]
    total = rng.randint(3, max(3, max_predicates))
    arities = [rng.choice((0, 1, 1, 2)) for _ in range(total)]
    n_external = rng.randint(1, total - 2)
    n_lower = rng.randint(1, total - n_external - 1)
    external = tuple(Predicate(f"e{i}", arities[i]) for i in range(n_external))
    lower_preds = [Predicate(f"q{i}", arities[n_external + i]) for i in range(n_lower)]
    upper_preds = [Predicate(f"p{i}", a) for i, a in enumerate(arities[n_external + n_lower:])]

    n_rules = rng.randint(2, max(2, max_rules))
    lower_rules, upper_rules = [], []
    for i in range(n_rules):
        to_lower = i == 0 or (i != 1 and rng.random() < 0.5)
        if to_lower:
            lower_rules.append(_random_rule(rng, rng.choice(lower_preds), list(external) + lower_preds, constants))
        else:
            upper_rules.append(_random_rule(rng, rng.choice(upper_preds),
                                            list(external) + lower_preds + upper_preds, constants))

    lower = Module(f"q{index}", tuple(lower_rules), frozenset(lower_preds))
    upper = Module(f"p{index}", tuple(upper_rules), frozenset(upper_preds))

    start = []
    for predicate in external:
        for args in itertools.product(constants, repeat=predicate.arity):
            choice = rng.random()
            atom = Atom(predicate.name, tuple(Constant(c) for c in args))
            if choice < 0.3:
                start.append(Literal(atom))
            elif choice < 0.5:
                start.append(Literal(atom, False))
    return CorpusProgram(index, upper, lower, external, tuple(start), tuple(Constant(c) for c in constants))


def generate_corpus(count=200, seed=0, **limits):
    rng = random.Random(seed)
    return [generate_program(rng, index=i, **limits) for i in range(count)]


def _herbrand(modules, program: CorpusProgram, max_atoms=4096, max_rules=20000):
    # 起点文字中的常量未必出现在规则里
    return Herbrand(modules, extra_constants=program.constants, extra_predicates=program.external,
                    max_atoms=max_atoms, max_rules=max_rules)


def check_equivalences(program: CorpusProgram):
    """模块化 = 整体求值，以及部分求值的三个值相同，三种语义各一次"""
    results = {}
    upper, lower, positive_start = program.definite()
    cases = {
        SemanticsKind.LEAST_MODEL: ([upper, lower], positive_start),
        SemanticsKind.FITTING: (program.modules, program.start),
        SemanticsKind.WELL_FOUNDED: (program.modules, program.start),
    }
    for kind, (modules, literals) in cases.items():
        herbrand = _herbrand(modules, program)
        start = start_element(literals, herbrand.universe, kind)
        results[f"modular/{kind.value}"] = compare(modules, herbrand, start, kind).equal
        results[f"partial_eval/{kind.value}"] = partial_eval_check(modules[0], modules[1], herbrand, start,
                                                                   kind).equal
    return results


def check_monotonicity(program: CorpusProgram, pairs=500, seed=0):
    results = {}
    upper, lower, _ = program.definite()
    for kind in KINDS:
        modules = [upper, lower] if kind is SemanticsKind.LEAST_MODEL else program.modules
        herbrand = _herbrand(modules, program)
        ground = herbrand.ground(union_modules(*modules))
        semantics = SemanticsFactory.create(kind)
        _, witness = semantics.monotonicity_witness(ground, pairs, random.Random(seed + program.index))
        results[f"monotone/{kind.value}"] = witness is None
    return results


def check_fitting_below_wf(program: CorpusProgram):
    herbrand = _herbrand(program.modules, program)
    union = herbrand.ground(union_modules(*program.modules))
    fitting = evaluate(union, None, SemanticsKind.FITTING)
    well_founded = evaluate(union, None, SemanticsKind.WELL_FOUNDED)
    return {"fitting⊑wf": fitting.issubset(well_founded)}


def check_unfounded(program: CorpusProgram, samples=5, seed=0):
    """U_P(I ∪ J) ⊇ U_P(I)，J 只涉及 def(P) 之外的原子"""
    herbrand = _herbrand(program.modules, program)
    ground = herbrand.ground(union_modules(*program.modules))
    rng = random.Random(seed + program.index)
    full = herbrand.universe.full
    holds = True
    for _ in range(samples):
        partial_pos = rng.randint(0, full)
        partial_neg = rng.randint(0, full) & ~partial_pos
        free = full & ~ground.defines_mask & ~(partial_pos | partial_neg)
        ext_pos = rng.randint(0, full) & free
        ext_neg = rng.randint(0, full) & free & ~ext_pos
        report = check_unfounded_extension(ground, LiteralSet(partial_pos, partial_neg), LiteralSet(ext_pos, ext_neg))
        holds = holds and report.holds
    return {"unfounded_extension": holds}


def random_goal(rng, program: CorpusProgram, definite):
    """一到两个文字的查询目标，正文字在前以保证安全"""
    predicates = sorted(program.upper.defines | program.lower.defines)
    terms = [Variable(v) for v in VARIABLES[:2]] + [program.constants[0]]
    positive = Literal(_random_atom(rng, rng.choice(predicates), terms))
    goal = [positive]
    if not definite and rng.random() < 0.5:
        bound = list(positive.atom.variables) + [t for t in terms if isinstance(t, Constant)]
        if bound:
            goal.append(Literal(_random_atom(rng, rng.choice(predicates), bound), False))
    return goal


def check_goal_wrapper(program: CorpusProgram, seed=0):
    """θ 使目标在模型中为真，当且仅当 answer(x̃)θ 在包装后并集的模型中为真"""
    rng = random.Random(seed + program.index)
    results = {}
    upper, lower, _ = program.definite()
    for kind, modules in ((SemanticsKind.LEAST_MODEL, [upper, lower]),
                          (SemanticsKind.WELL_FOUNDED, program.modules)):
        goal = random_goal(rng, program, kind is SemanticsKind.LEAST_MODEL)
        wrapper = wrap_goal(goal, modules)
        herbrand = _herbrand(modules + [wrapper], program)
        universe = herbrand.universe
        base = Model(kind, evaluate(herbrand.ground(union_modules(*modules)), None, kind), universe)
        wrapped = Model(kind, evaluate(herbrand.ground(union_modules(union_modules(*modules), wrapper)),
                                       None, kind), universe)
        true, false = set(base.true), set(base.false)
        answer = wrapper.rules[0].head
        variables = answer.variables
        agree = True
        for values in itertools.product(herbrand.constants, repeat=len(variables)):
            binding = dict(zip(variables, values))
            satisfied = all((str(l.atom.substitute(binding)) in true) if l.positive
                            else (str(l.atom.substitute(binding)) in false) for l in goal)
            agree = agree and satisfied == wrapped.holds(answer.substitute(binding))
        results[f"goal/{kind.value}"] = agree
    return results


@dataclass
class CorpusReport:
    count: int
    seed: int
    rows: List[Dict[str, bool]] = field(default_factory=list)
    failures: List[Tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def to_frame(self):
        """每项性质的通过/失败计数"""
        frame = pd.DataFrame(self.rows)
        if frame.empty:
            return pd.DataFrame(columns=["check", "passed", "failed"])
        checks = frame.drop(columns=["program"])
        summary = pd.DataFrame({
            "check": checks.columns,
            "passed": [int(checks[c].eq(True).sum()) for c in checks.columns],
            "failed": [int(checks[c].eq(False).sum()) for c in checks.columns],
        })
        return summary.reset_index(drop=True)

    def to_dict(self):
        return {
            "count": self.count,
            "seed": self.seed,
            "summary": self.to_frame().to_dict(orient="records"),
            "failures": [{"program": i, "check": c} for i, c in self.failures],
            "ok": self.ok,
        }


def _check_program(program, pairs, goal, seed):
    row = {"program": program.index}
    row.update(check_equivalences(program))
    row.update(check_monotonicity(program, pairs, seed))
    row.update(check_fitting_below_wf(program))
    row.update(check_unfounded(program, seed=seed))
    if goal:
        row.update(check_goal_wrapper(program, seed))
    return row


def run_corpus(count=200, seed=0, pairs=500, goal_programs=20, workers=1, **limits):
    """生成语料并逐项检查全部性质

    Args:
        count: 程序个数
        seed: 随机种子
        pairs: 每个算子单调性检查的有序对上限
        goal_programs: 做查询包装检查的程序个数（取前若干个）
        workers: 并行数

    Returns:
        CorpusReport
    """
    programs = generate_corpus(count, seed, **limits)
    for program in programs:
        if not precedes(program.upper, program.lower):
            raise AssertionError(f"语料生成错误: {program.upper.name} >> {program.lower.name} 不成立")
    logger.info("语料检查: %d 个程序，种子 %d", count, seed)
    report = CorpusReport(count, seed)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        rows = pool.map(lambda p: _check_program(p, pairs, p.index < goal_programs, seed), programs)
        for row in rows:
            report.rows.append(row)
            for check, passed in row.items():
                if check != "program" and not passed:
                    report.failures.append((row["program"], check))
    for index, check in report.failures:
        logger.error("语料程序 %d 未通过 %s", index, check)
    return report
