#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from src.algebra.function_lab import CensusReport, ClosureIdentityReport, ExampleReport
from src.logic.syntax import Module
from src.semantics.evaluation import Model
from src.semantics.operators import SemanticsKind
from src.semantics.residual import PartialEvalReport


@dataclass
class ModelReport:
    model: Model
    mode: str
    plan: Tuple[str, ...] = ()
    ok: bool = True


@dataclass
class CompareReport:
    modular: Model
    monolithic: Model
    plan: Tuple[str, ...]

    @property
    def equal(self):
        return self.modular == self.monolithic

    @property
    def ok(self):
        return self.equal


@dataclass
class ResidualReport:
    kind: SemanticsKind
    source: str
    residual: Module
    check: Optional[PartialEvalReport] = None

    @property
    def ok(self):
        return self.check is None or self.check.equal


@dataclass
class QueryReport:
    """查询结果：answers 为真替换，undefined 为三值语义下未定义的替换"""
    kind: SemanticsKind
    goal: str
    variables: Tuple[str, ...]
    answers: List[Tuple[str, ...]] = field(default_factory=list)
    undefined: List[Tuple[str, ...]] = field(default_factory=list)
    ok: bool = True


@dataclass
class LabReport:
    censuses: List[CensusReport] = field(default_factory=list)
    identities: List[ClosureIdentityReport] = field(default_factory=list)
    examples: List[ExampleReport] = field(default_factory=list)

    @property
    def ok(self):
        return (all(c.ok for c in self.censuses) and all(i.ok for i in self.identities)
                and all(e.ok for e in self.examples))
