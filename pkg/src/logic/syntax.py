#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from dataclasses import dataclass, field, replace
from typing import FrozenSet, NamedTuple, Tuple, Union

from src.utils.errors import ClosureLabError


class LogicError(ClosureLabError):
    pass


class UnsafeRuleError(LogicError):
    def __init__(self, rule, variable):
        super().__init__(f"规则不安全: 变量 {variable} 未出现在 {rule} 的正文字中")
        self.rule = rule
        self.variable = variable


class ModuleDefinitionError(LogicError):
    pass


@dataclass(frozen=True, order=True)
class Variable:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, order=True)
class Constant:
    value: str

    def __str__(self):
        return self.value


Term = Union[Variable, Constant]


class Predicate(NamedTuple):
    """谓词符号及元数"""
    name: str
    arity: int

    def __str__(self):
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True, order=True)
class Atom:
    predicate: str
    args: Tuple[Term, ...] = ()

    @property
    def arity(self):
        return len(self.args)

    @property
    def signature(self):
        return Predicate(self.predicate, self.arity)

    @property
    def variables(self):
        return tuple(dict.fromkeys(a for a in self.args if isinstance(a, Variable)))

    @property
    def is_ground(self):
        return not self.variables

    def substitute(self, binding):
        return Atom(self.predicate, tuple(binding.get(a, a) if isinstance(a, Variable) else a for a in self.args))

    def __str__(self):
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True, order=True)
class Literal:
    atom: Atom
    positive: bool = True

    def negate(self):
        return Literal(self.atom, not self.positive)

    def __str__(self):
        return str(self.atom) if self.positive else f"not {self.atom}"


@dataclass(frozen=True, order=True)
class Rule:
    head: Atom
    body: Tuple[Literal, ...] = ()

    @property
    def variables(self):
        seen = dict.fromkeys(self.head.variables)
        for literal in self.body:
            seen.update(dict.fromkeys(literal.atom.variables))
        return tuple(seen)

    @property
    def is_definite(self):
        return all(literal.positive for literal in self.body)

    def check_safety(self):
        """头部与负文字中的变量都必须出现在某个正文字里"""
        bound = set()
        for literal in self.body:
            if literal.positive:
                bound.update(literal.atom.variables)
        for atom in [self.head] + [l.atom for l in self.body if not l.positive]:
            for variable in atom.variables:
                if variable not in bound:
                    raise UnsafeRuleError(self, variable)
        return self

    def __str__(self):
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(str(l) for l in self.body)}."


@dataclass(frozen=True)
class Module:
    """模块 ⟨R, S⟩：规则集合与其定义的谓词集合 def(P)

    defines 是谓词符号集合，因此原子层面的 S 对谓词封闭。
    """
    name: str
    rules: Tuple[Rule, ...] = ()
    defines: FrozenSet[Predicate] = frozenset()
    overlap: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(dict.fromkeys(self.rules)))
        object.__setattr__(self, "defines", frozenset(Predicate(*p) for p in self.defines))
        for rule in self.rules:
            if rule.head.signature not in self.defines:
                raise ModuleDefinitionError(
                    f"模块 {self.name} 的规则 {rule} 的头部谓词 {rule.head.signature} 不在 defines 中")

    @property
    def body_predicates(self):
        return frozenset(l.atom.signature for r in self.rules for l in r.body)

    @property
    def predicates(self):
        return self.defines | self.body_predicates

    @property
    def constants(self):
        found = set()
        for rule in self.rules:
            for atom in [rule.head] + [l.atom for l in rule.body]:
                found.update(a for a in atom.args if isinstance(a, Constant))
        return found

    @property
    def is_definite(self):
        return all(rule.is_definite for rule in self.rules)

    def renamed(self, name):
        return replace(self, name=name)

    def to_text(self):
        defines = ", ".join(str(p) for p in sorted(self.defines))
        lines = [f"module {self.name} defines {defines} {{"]
        lines.extend(f"  {rule}" for rule in self.rules)
        lines.append("}")
        return "\n".join(lines)

    def __str__(self):
        return self.to_text()


def positive_part(module: Module):
    """删去所有负文字得到的确定程序；安全性保持不变"""
    rules = tuple(Rule(r.head, tuple(l for l in r.body if l.positive)) for r in module.rules)
    return Module(module.name, rules, module.defines)
