#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import heapq
import logging
from typing import Iterable, List, Sequence

from src.logic.syntax import Atom, Literal, LogicError, Module, Predicate, Rule

logger = logging.getLogger(__name__)


class CyclicDependencyError(LogicError):
    def __init__(self, names):
        super().__init__(f"模块之间存在循环依赖，无法模块化求值: {', '.join(names)}")
        self.names = list(names)


class OverlappingDefinesError(LogicError):
    pass


class SymbolClashError(LogicError):
    pass


def precedes(p: Module, q: Module):
    """P >> Q：Q 的规则体中不出现 def(P) 的谓词"""
    return not (q.body_predicates & p.defines)


def union_modules(p: Module, q: Module, name=None):
    """规则并与 defines 并；defines 重叠时置 overlap 标志并记录警告"""
    shared = p.defines & q.defines
    overlap = p.overlap or q.overlap
    if shared and p != q:
        overlap = True
        logger.warning("模块 %s 与 %s 的 defines 重叠: %s", p.name, q.name,
                       ", ".join(str(x) for x in sorted(shared)))
    if name is None:
        name = p.name if p.name == q.name else f"{p.name}+{q.name}"
    return Module(name, p.rules + q.rules, p.defines | q.defines, overlap=overlap)


def union_all(modules: Iterable[Module], name=None):
    modules = list(modules)
    if not modules:
        return Module(name or "empty")
    result = modules[0]
    for module in modules[1:]:
        result = union_modules(result, module)
    return result.renamed(name) if name else result


def dependencies(modules: Sequence[Module]):
    """{模块名: 它所调用的其它模块名集合}"""
    graph = {}
    for p in modules:
        graph[p.name] = {q.name for q in modules if q.name != p.name and not precedes(q, p)}
    return graph


def stratify(modules: Sequence[Module]) -> List[Module]:
    """给出模块化求值顺序：被依赖者在前，同层按模块名排序

    Raises:
        OverlappingDefinesError: 两个模块定义了同一谓词
        CyclicDependencyError: 模块之间循环调用
    """
    by_name = {}
    for module in modules:
        if module.name in by_name:
            raise LogicError(f"模块名重复: {module.name}")
        by_name[module.name] = module
    names = sorted(by_name)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            shared = by_name[a].defines & by_name[b].defines
            if shared:
                raise OverlappingDefinesError(
                    f"模块 {a} 与 {b} 都定义了 {', '.join(str(x) for x in sorted(shared))}，只能整体求值")

    graph = dependencies(list(by_name.values()))
    waiting = {name: set(deps) for name, deps in graph.items()}
    ready = [name for name, deps in waiting.items() if not deps]
    heapq.heapify(ready)
    plan = []
    while ready:
        name = heapq.heappop(ready)
        plan.append(by_name[name])
        for other, deps in waiting.items():
            if name in deps:
                deps.discard(name)
                if not deps:
                    heapq.heappush(ready, other)
    if len(plan) != len(by_name):
        remaining = sorted(set(by_name) - {m.name for m in plan})
        raise CyclicDependencyError(remaining)
    logger.debug("模块求值顺序: %s", " -> ".join(m.name for m in plan))
    return plan


def wrap_goal(goal: Sequence[Literal], modules: Iterable[Module] = (), answer="answer"):
    """把查询目标包装为模块 {answer(x̃) :- Goal}，x̃ 按变量首次出现排序"""
    goal = tuple(goal)
    for module in modules:
        clash = [p for p in module.predicates if p.name == answer]
        if clash:
            raise SymbolClashError(f"谓词 {answer} 已在模块 {module.name} 中出现，请换一个答案谓词名")
    variables = tuple(dict.fromkeys(v for literal in goal for v in literal.atom.variables))
    rule = Rule(Atom(answer, variables), goal).check_safety()
    return Module("goal", (rule,), frozenset({Predicate(answer, len(variables))}))
