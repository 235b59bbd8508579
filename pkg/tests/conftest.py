#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import pytest

from src.logic.grounding import Herbrand
from src.logic.syntax import Atom, Constant
from src.utils.program_parser import parse_program

PATHS_SOURCE = """
% 边与路径
module edges defines e/2 {
  e(1,2).
  e(2,3).
}

module paths defines path/2 {
  path(X,Y) :- e(X,Y).
  path(X,Y) :- e(X,Z), path(Z,Y).
}
"""

WORKED_SOURCE = """
module P defines p/0 {
  p :- p.
  p :- q.
}

module Q defines q/0 {
  q :- q.
}
"""


@pytest.fixture
def paths_program():
    return parse_program(PATHS_SOURCE)


@pytest.fixture
def worked_program():
    return parse_program(WORKED_SOURCE)


def load(text, extra_constants=(), extra_predicates=()):
    """解析程序并在共享全域上准备基例化"""
    program = parse_program(text)
    herbrand = Herbrand(program.modules, extra_constants=extra_constants, extra_predicates=extra_predicates)
    return program, herbrand


def bit(herbrand, text):
    """命题原子或形如 e(1,2) 的基原子的位"""
    name, _, rest = text.partition("(")
    args = tuple(Constant(a) for a in rest.rstrip(")").split(",")) if rest else ()
    return 1 << herbrand.universe.index(Atom(name, args))
