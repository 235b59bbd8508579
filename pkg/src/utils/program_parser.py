#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import logging
from dataclasses import dataclass, field
from typing import Dict, Tuple

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from src.logic.syntax import Atom, Constant, Literal, LogicError, Module, Predicate, Rule, Variable
from src.utils.errors import ClosureLabError

logger = logging.getLogger(__name__)

PROGRAM_GRAMMAR = r"""
    program: module*
    goal: [literal ("," literal)*] "."?

    module: "module" (NAME | VARIABLE) "defines" [signature ("," signature)*] "{" rule* "}"
    signature: NAME "/" INT

    rule: atom "."                       -> fact
        | atom ":-" literal ("," literal)* "."

    literal: atom                        -> positive
           | "not" atom                  -> negative

    atom: NAME ["(" term ("," term)* ")"]

    term: NAME                           -> constant
        | VARIABLE                       -> variable

    NAME: /[a-z0-9][A-Za-z0-9_]*/
    VARIABLE: /[A-Z_][A-Za-z0-9_]*/
    INT: /[0-9]+/
    COMMENT: /%[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""


class ProgramSyntaxError(ClosureLabError):
    """程序文本语法错误，带行列号"""

    def __init__(self, message, line=None, column=None):
        location = f"第 {line} 行第 {column} 列: " if line is not None and line > 0 else ""
        super().__init__(f"{location}{message}")
        self.line = line
        self.column = column


class ProgramSemanticError(ClosureLabError):
    pass


@dataclass(frozen=True)
class SourceProgram:
    """按出现顺序排列的模块声明，locations 记录每个模块的 (行, 列)"""
    modules: Tuple[Module, ...]
    locations: Dict[str, Tuple[int, int]] = field(default_factory=dict, compare=False, hash=False)

    def module(self, name):
        for module in self.modules:
            if module.name == name:
                return module
        raise ProgramSemanticError(f"程序中没有名为 {name} 的模块")

    @property
    def names(self):
        return [m.name for m in self.modules]

    def to_text(self):
        return "\n\n".join(m.to_text() for m in self.modules) + "\n"


class _ToSyntax(Transformer):
    def constant(self, children):
        return Constant(str(children[0]))

    def variable(self, children):
        return Variable(str(children[0]))

    def atom(self, children):
        name, *args = children
        return Atom(str(name), tuple(a for a in args if a is not None))

    def positive(self, children):
        return Literal(children[0])

    def negative(self, children):
        return Literal(children[0], False)

    def fact(self, children):
        return Rule(children[0])

    def rule(self, children):
        head, *body = children
        return Rule(head, tuple(body))

    def signature(self, children):
        return Predicate(str(children[0]), int(children[1]))

    @v_args(meta=True)
    def module(self, meta, children):
        name, *rest = children
        defines = [c for c in rest if isinstance(c, Predicate)]
        rules = [c for c in rest if isinstance(c, Rule)]
        return str(name), defines, rules, (meta.line, meta.column)

    def program(self, children):
        return children

    def goal(self, children):
        return tuple(c for c in children if c is not None)


_parser = Lark(PROGRAM_GRAMMAR, parser="lalr", start=["program", "goal"], propagate_positions=True)


def _parse(text, start):
    try:
        tree = _parser.parse(text, start=start)
    except UnexpectedInput as e:
        line, column = getattr(e, "line", None), getattr(e, "column", None)
        raise ProgramSyntaxError(f"无法解析: {str(e).splitlines()[0]}", line, column) from e
    try:
        return _ToSyntax().transform(tree)
    except VisitError as e:
        raise ProgramSemanticError(str(e.orig_exc)) from e.orig_exc


def _check_arities(modules):
    seen = {}
    for module in modules:
        used = [(p, f"{module.name} 的 defines") for p in sorted(module.defines)]
        for rule in module.rules:
            used += [(atom.signature, str(rule)) for atom in [rule.head] + [l.atom for l in rule.body]]
        for signature, where in used:
            arity = seen.setdefault(signature.name, (signature.arity, where))
            if arity[0] != signature.arity:
                raise ProgramSemanticError(
                    f"谓词 {signature.name} 的元数不一致: {arity[0]}（{arity[1]}）与 {signature.arity}（{where}）")


def parse_program(text):
    """解析模块化程序文本

    Args:
        text: 程序文本

    Returns:
        SourceProgram

    Raises:
        ProgramSyntaxError: 语法错误（带行列号）
        ProgramSemanticError: 元数不一致、头部谓词不在 defines 中或模块名重复
    """
    modules, locations = [], {}
    for name, defines, rules, location in _parse(text, "program"):
        if name in locations:
            raise ProgramSemanticError(f"模块名重复: {name}（第 {location[0]} 行）")
        try:
            module = Module(name, tuple(rules), frozenset(defines))
        except LogicError as e:
            raise ProgramSemanticError(f"第 {location[0]} 行: {e}") from e
        modules.append(module)
        locations[name] = location
    _check_arities(modules)
    logger.debug("解析得到 %d 个模块: %s", len(modules), ", ".join(locations))
    return SourceProgram(tuple(modules), locations)


def parse_goal(text):
    """解析查询目标或起点文字，例如 "path(1,Y), not blocked(Y)" """
    return _parse(text, "goal")
