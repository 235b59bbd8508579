#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Sequence, Tuple

from src.lattice.orders import LiteralPoset, PowersetLattice
from src.logic.syntax import Atom, Constant, LogicError, Module, Predicate

logger = logging.getLogger(__name__)


class UniverseTooLargeError(LogicError):
    pass


class AtomUniverse:
    """物化的有限原子全集：原子 <-> 位下标"""

    def __init__(self, atoms: Iterable[Atom]):
        self.atoms = tuple(sorted(set(atoms), key=lambda a: (a.predicate, a.arity, str(a))))
        self._index = {atom: i for i, atom in enumerate(self.atoms)}
        self.full = (1 << len(self.atoms)) - 1
        self._predicate_masks = {}
        for i, atom in enumerate(self.atoms):
            key = atom.signature
            self._predicate_masks[key] = self._predicate_masks.get(key, 0) | 1 << i

    @property
    def size(self):
        return len(self.atoms)

    def __contains__(self, atom):
        return atom in self._index

    def index(self, atom):
        try:
            return self._index[atom]
        except KeyError:
            raise LogicError(f"原子 {atom} 不在全集中")

    def mask_of(self, atoms: Iterable[Atom]):
        mask = 0
        for atom in atoms:
            mask |= 1 << self.index(atom)
        return mask

    def atoms_of(self, mask):
        return [atom for i, atom in enumerate(self.atoms) if mask >> i & 1]

    def predicate_mask(self, predicates: Iterable[Predicate]):
        mask = 0
        for predicate in predicates:
            mask |= self._predicate_masks.get(Predicate(*predicate), 0)
        return mask

    @property
    def predicates(self):
        return frozenset(self._predicate_masks)

    def render(self, mask):
        """按字典序给出原子字符串"""
        return sorted(str(atom) for atom in self.atoms_of(mask))

    @property
    def labels(self):
        return [str(atom) for atom in self.atoms]

    @cached_property
    def interpretations(self):
        """解释（原子集合）在包含序下的幂集格"""
        return PowersetLattice(self.labels, name="interpretations", max_labels=None)

    @cached_property
    def partial_interpretations(self):
        """一致文字集合在定义性序下的 CPO"""
        return LiteralPoset(self.labels, name="partial interpretations")


@dataclass(frozen=True)
class GroundRule:
    head: int
    pos: Tuple[int, ...]
    neg: Tuple[int, ...]
    pos_mask: int
    neg_mask: int

    @property
    def is_definite(self):
        return not self.neg


class GroundRuleSet:
    """模块的全部基例化规则 gd(P)，以及它所依据的原子全集"""

    def __init__(self, module: Module, rules: Sequence[GroundRule], universe: AtomUniverse):
        self.module = module
        self.name = module.name
        self.rules = tuple(rules)
        self.universe = universe
        self.defines = module.defines
        self.defines_mask = universe.predicate_mask(module.defines)
        self.is_definite = all(rule.is_definite for rule in self.rules)
        by_head = {}
        for rule in self.rules:
            by_head.setdefault(rule.head, []).append(rule)
        self.rules_by_head = {head: tuple(rules) for head, rules in by_head.items()}
        occurrences = {}
        for number, rule in enumerate(self.rules):
            for atom in set(rule.pos):
                occurrences.setdefault(atom, []).append(number)
        self.positive_occurrences = {atom: tuple(numbers) for atom, numbers in occurrences.items()}

    def __len__(self):
        return len(self.rules)

    def __repr__(self):
        return f"<GroundRuleSet {self.name}: {len(self.rules)} rules over {self.universe.size} atoms>"


class Herbrand:
    """一次运行共享的 Herbrand 全域与原子全集，按模块缓存基例化结果"""

    def __init__(self, modules: Iterable[Module], extra_constants=(), extra_predicates=(),
                 max_atoms=4096, max_rules=20000):
        """初始化

        Args:
            modules: 参与本次运行的所有模块
            extra_constants: 额外常量（例如来自起点文字）
            extra_predicates: 额外谓词（例如起点文字中的外部谓词）
            max_atoms: 原子全集大小上限
            max_rules: 单个模块基例化规则数上限
        """
        modules = list(modules)
        constants = set(Constant(c) if isinstance(c, str) else c for c in extra_constants)
        predicates = set(Predicate(*p) for p in extra_predicates)
        for module in modules:
            constants |= module.constants
            predicates |= module.predicates
        self.constants = tuple(sorted(constants))
        self.predicates = frozenset(predicates)
        self.max_rules = max_rules
        total = sum(len(self.constants) ** p.arity for p in predicates)
        if total > max_atoms:
            raise UniverseTooLargeError(f"原子全集大小 {total} 超过上限 {max_atoms}")
        atoms = []
        for predicate in sorted(predicates):
            for args in itertools.product(self.constants, repeat=predicate.arity):
                atoms.append(Atom(predicate.name, args))
        self.universe = AtomUniverse(atoms)
        self._cache: Dict[Module, GroundRuleSet] = {}
        logger.debug("Herbrand 全域: %d 个常量，%d 个原子", len(self.constants), self.universe.size)

    def ground(self, module: Module):
        """基例化一个模块（谓词必须已在全集中）"""
        if module in self._cache:
            return self._cache[module]
        missing = module.predicates - self.predicates
        if missing:
            raise LogicError(f"模块 {module.name} 使用了全集之外的谓词: {sorted(str(p) for p in missing)}")
        rules, seen = [], set()
        for rule in module.rules:
            rule.check_safety()
            variables = rule.variables
            if variables and not self.constants:
                raise LogicError(f"Herbrand 全域为空，无法基例化 {rule}")
            for values in itertools.product(self.constants, repeat=len(variables)):
                binding = dict(zip(variables, values))
                head = self.universe.index(rule.head.substitute(binding))
                pos = tuple(self.universe.index(l.atom.substitute(binding)) for l in rule.body if l.positive)
                neg = tuple(self.universe.index(l.atom.substitute(binding)) for l in rule.body if not l.positive)
                key = (head, tuple(sorted(set(pos))), tuple(sorted(set(neg))))
                if key in seen:
                    continue
                seen.add(key)
                rules.append(GroundRule(head, key[1], key[2], _mask(pos), _mask(neg)))
                if len(rules) > self.max_rules:
                    raise UniverseTooLargeError(f"模块 {module.name} 的基例化规则超过上限 {self.max_rules}")
        result = GroundRuleSet(module, rules, self.universe)
        self._cache[module] = result
        logger.debug("基例化 %s: %d 条规则", module.name, len(rules))
        return result


def _mask(indices):
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def ground(modules: Sequence[Module], extra_constants=(), max_atoms=4096, max_rules=20000):
    """在共享全域上基例化每个模块

    Returns:
        {模块名: GroundRuleSet}
    """
    herbrand = Herbrand(modules, extra_constants, max_atoms=max_atoms, max_rules=max_rules)
    return {module.name: herbrand.ground(module) for module in modules}
