#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import itertools
import logging
import re
from abc import ABC, abstractmethod
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from src.utils.errors import ClosureLabError

logger = logging.getLogger(__name__)


class LatticeError(ClosureLabError):
    pass


class UnknownElementError(LatticeError):
    pass


class InconsistentUnionError(LatticeError):
    pass


class SizeBoundError(LatticeError):
    pass


class NotALatticeError(LatticeError):
    pass


class PartialOrderError(LatticeError):
    pass


class FiniteOrder(ABC):
    """有限偏序的公共接口

    元素用规范索引（整数）或 LiteralSet 表示，元素相等即按位相等。
    所有实例构造后不可变。
    """

    name = "order"
    has_joins = False
    indexed = True

    @property
    @abstractmethod
    def size(self):
        """载体大小"""

    @property
    @abstractmethod
    def height(self):
        """最长严格链的长度（边数）"""

    @abstractmethod
    def contains(self, x):
        pass

    @abstractmethod
    def _leq(self, x, y):
        pass

    @abstractmethod
    def elements(self) -> Iterator:
        pass

    def label(self, x):
        return str(x)

    def check(self, x):
        if not self.contains(x):
            raise UnknownElementError(f"元素 {x!r} 不属于 {self.name}")
        return x

    def leq(self, x, y):
        return self._leq(self.check(x), self.check(y))

    def join(self, x, y):
        raise NotALatticeError(f"{self.name} 不提供并运算")

    def meet(self, x, y):
        raise NotALatticeError(f"{self.name} 不提供交运算")

    @property
    def iteration_bound(self):
        # 严格上升链至多 height+1 个元素
        return self.height + 2

    def format_set(self, elements: Iterable):
        return "{" + ", ".join(self.label(x) for x in sorted(elements, key=self._sort_key)) + "}"

    def _sort_key(self, x):
        return x

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} size={self.size}>"


class FinitePoset(FiniteOrder):
    """带显式序关系表的有限偏序集

    leq 是只读的 n×n 布尔矩阵，leq[i, j] 为真当且仅当 i <= j。
    """

    def __init__(self, labels: Sequence[str], leq_matrix, name="poset"):
        """初始化偏序集

        Args:
            labels: 元素显示名，下标即元素索引
            leq_matrix: n×n 布尔矩阵
            name: 标识名

        Raises:
            PartialOrderError: 关系不满足偏序公理
        """
        matrix = np.array(leq_matrix, dtype=bool)
        n = len(labels)
        if matrix.shape != (n, n):
            raise PartialOrderError(f"序关系表形状 {matrix.shape} 与元素个数 {n} 不符")
        matrix.flags.writeable = False
        self.name = name
        self.labels = tuple(str(label) for label in labels)
        self.matrix = matrix
        self._verify_partial_order()
        self._below = tuple(tuple(j for j in range(n) if j != i and matrix[j, i]) for i in range(n))
        self._height = self._compute_height()

    def _verify_partial_order(self):
        m = self.matrix
        n = len(self.labels)
        if not m.diagonal().all():
            bad = int(np.flatnonzero(~m.diagonal())[0])
            raise PartialOrderError(f"{self.name}: 关系不自反，元素 {self.labels[bad]}")
        both = m & m.T
        both[np.diag_indices(n)] = False
        if both.any():
            i, j = (int(v) for v in np.argwhere(both)[0])
            raise PartialOrderError(f"{self.name}: 关系不反对称，{self.labels[i]} 与 {self.labels[j]}")
        # 传递闭包检查：m∘m 不能超出 m
        composed = (m.astype(np.int64) @ m.astype(np.int64)) > 0
        if (composed & ~m).any():
            i, j = (int(v) for v in np.argwhere(composed & ~m)[0])
            raise PartialOrderError(f"{self.name}: 关系不传递，{self.labels[i]} 与 {self.labels[j]}")

    def _compute_height(self):
        n = len(self.labels)
        depth = [0] * n
        for x in self.linear_extension():
            depth[x] = max((depth[y] + 1 for y in self._below[x]), default=0)
        return max(depth, default=0)

    @property
    def size(self):
        return len(self.labels)

    @property
    def height(self):
        return self._height

    def contains(self, x):
        return isinstance(x, (int, np.integer)) and not isinstance(x, bool) and 0 <= x < self.size

    def _leq(self, x, y):
        return bool(self.matrix[x, y])

    def elements(self):
        return iter(range(self.size))

    def label(self, x):
        return self.labels[x]

    def index(self, label):
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise UnknownElementError(f"{self.name} 中没有元素 {label}")

    def below(self, x):
        """严格小于 x 的元素"""
        return self._below[self.check(x)]

    def linear_extension(self):
        """与序相容的元素排列；下标序本身相容时直接返回下标序"""
        n = self.size
        if not np.tril(self.matrix, -1).any():
            return list(range(n))
        order, placed = [], set()
        while len(order) < n:
            for x in range(n):
                if x not in placed and all(y in placed for y in self._below[x]):
                    order.append(x)
                    placed.add(x)
                    break
        return order

    def join(self, x, y):
        self.check(x)
        self.check(y)
        upper = [k for k in range(self.size) if self.matrix[x, k] and self.matrix[y, k]]
        for k in upper:
            if all(self.matrix[k, u] for u in upper):
                return k
        raise NotALatticeError(f"{self.name}: {self.label(x)} 与 {self.label(y)} 没有最小上界")

    def meet(self, x, y):
        self.check(x)
        self.check(y)
        lower = [k for k in range(self.size) if self.matrix[k, x] and self.matrix[k, y]]
        for k in lower:
            if all(self.matrix[u, k] for u in lower):
                return k
        raise NotALatticeError(f"{self.name}: {self.label(x)} 与 {self.label(y)} 没有最大下界")


class FiniteLattice(FinitePoset):
    """有限格：在偏序集之上预先计算并、交表"""

    has_joins = True

    def __init__(self, labels, leq_matrix, name="lattice"):
        super().__init__(labels, leq_matrix, name=name)
        self.join_table = self._bound_table(self.matrix)
        self.meet_table = self._bound_table(self.matrix.T)
        self.bottom = self._extreme(self.matrix)
        self.top = self._extreme(self.matrix.T)

    def _bound_table(self, up):
        # 最小上界的上集恰为两个上集之交
        n = self.size
        ids = {tuple(up[i, :]): i for i in range(n)}
        table = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                key = tuple(up[i, :] & up[j, :])
                if key not in ids:
                    raise NotALatticeError(f"{self.name}: {self.labels[i]} 与 {self.labels[j]} 没有最小上界或最大下界")
                table[i, j] = ids[key]
        table.flags.writeable = False
        return table

    def _extreme(self, up):
        hits = np.flatnonzero(up.all(axis=1))
        if len(hits) != 1:
            raise NotALatticeError(f"{self.name}: 缺少唯一的最小/最大元")
        return int(hits[0])

    def join(self, x, y):
        return int(self.join_table[self.check(x), self.check(y)])

    def meet(self, x, y):
        return int(self.meet_table[self.check(x), self.check(y)])


class PowersetLattice(FiniteOrder):
    """有限集合的幂集格，元素即位向量（整数掩码）

    序为包含，并为按位或，交为按位与。无需任何表。
    """

    has_joins = True

    def __init__(self, universe: Sequence[str], name=None, max_labels=20):
        universe = tuple(str(label) for label in universe)
        if len(set(universe)) != len(universe):
            raise LatticeError(f"幂集格的全集中有重复标签: {universe}")
        if max_labels is not None and len(universe) > max_labels:
            raise SizeBoundError(f"全集大小 {len(universe)} 超过上限 {max_labels}")
        self.universe = universe
        self.name = name or "powerset{" + ",".join(universe) + "}"
        self.bottom = 0
        self.top = (1 << len(universe)) - 1
        self._positions = {label: i for i, label in enumerate(universe)}

    @property
    def size(self):
        return 1 << len(self.universe)

    @property
    def height(self):
        return len(self.universe)

    def contains(self, x):
        return isinstance(x, (int, np.integer)) and not isinstance(x, bool) and 0 <= x <= self.top

    def _leq(self, x, y):
        return x & ~y == 0

    def join(self, x, y):
        return self.check(x) | self.check(y)

    def meet(self, x, y):
        return self.check(x) & self.check(y)

    def elements(self):
        return iter(range(self.size))

    def mask_of(self, labels: Iterable[str]):
        mask = 0
        for label in labels:
            if label not in self._positions:
                raise UnknownElementError(f"{label} 不在全集 {self.universe} 中")
            mask |= 1 << self._positions[label]
        return mask

    def labels_of(self, x):
        self.check(x)
        return [label for i, label in enumerate(self.universe) if x >> i & 1]

    def label(self, x):
        return "{" + ",".join(self.labels_of(x)) + "}"


class LiteralSet(NamedTuple):
    """带符号文字集合：pos 为正文字掩码，neg 为负文字掩码"""
    pos: int = 0
    neg: int = 0

    @property
    def is_consistent(self):
        return self.pos & self.neg == 0

    def union(self, other):
        return LiteralSet(self.pos | other.pos, self.neg | other.neg)

    def intersection(self, other):
        return LiteralSet(self.pos & other.pos, self.neg & other.neg)

    def issubset(self, other):
        return self.pos & ~other.pos == 0 and self.neg & ~other.neg == 0

    @property
    def mentioned(self):
        return self.pos | self.neg


class LiteralPoset(FiniteOrder):
    """一致带符号文字集合在定义性序下构成的 CPO

    并仅在结果一致时存在；最小元为空集。
    """

    has_joins = True
    indexed = False

    def __init__(self, atoms: Sequence[str], name=None):
        self.atoms = tuple(str(a) for a in atoms)
        self.name = name or "literals{" + ",".join(self.atoms) + "}"
        self.full = (1 << len(self.atoms)) - 1
        self.bottom = LiteralSet(0, 0)

    @property
    def size(self):
        return 3 ** len(self.atoms)

    @property
    def height(self):
        return len(self.atoms)

    def contains(self, x):
        return (isinstance(x, LiteralSet) and x.is_consistent
                and x.pos & ~self.full == 0 and x.neg & ~self.full == 0)

    def _leq(self, x, y):
        return x.issubset(y)

    def join(self, x, y):
        result = self.check(x).union(self.check(y))
        if not result.is_consistent:
            clash = [self.atoms[i] for i in range(len(self.atoms)) if (result.pos & result.neg) >> i & 1]
            raise InconsistentUnionError(f"并集不一致，同时包含 {clash[0]} 与 ¬{clash[0]}")
        return result

    def meet(self, x, y):
        return self.check(x).intersection(self.check(y))

    def elements(self):
        n = len(self.atoms)
        for signs in itertools.product((0, 1, 2), repeat=n):
            pos = sum(1 << i for i, s in enumerate(signs) if s == 1)
            neg = sum(1 << i for i, s in enumerate(signs) if s == 2)
            yield LiteralSet(pos, neg)

    def label(self, x):
        parts = []
        for i, atom in enumerate(self.atoms):
            if x.pos >> i & 1:
                parts.append(atom)
            if x.neg >> i & 1:
                parts.append("¬" + atom)
        return "{" + ", ".join(parts) + "}"

    def _sort_key(self, x):
        return (x.pos, x.neg)


def leq(order: FiniteOrder, x, y):
    return order.leq(x, y)


def join(order: FiniteOrder, x, y):
    return order.join(x, y)


def meet(order: FiniteOrder, x, y):
    return order.meet(x, y)


def make_powerset_lattice(universe: Iterable[str], max_labels=20):
    """构造幂集格

    Args:
        universe: 有限标签集合（保持给定顺序）
        max_labels: 位向量模式的标签数上限

    Returns:
        PowersetLattice
    """
    return PowersetLattice(list(universe), max_labels=max_labels)


def _chain(labels, name):
    n = len(labels)
    matrix = np.triu(np.ones((n, n), dtype=bool))
    return FiniteLattice(labels, matrix, name=name)


BUILTIN_KINDS = ("chain", "boolean", "appendix_chain")


def make_builtin(kind, n=None, max_size=64):
    """构造内置格

    Args:
        kind: chain、boolean 或 appendix_chain
        n: 链长或布尔格的生成元个数
        max_size: 元素个数上限

    Returns:
        FiniteLattice

    Raises:
        SizeBoundError: 超过元素个数上限
    """
    if kind == "appendix_chain":
        return _chain(["1", "2", "3"], "appendix_chain")
    if kind not in BUILTIN_KINDS:
        raise LatticeError(f"未知的内置格类型: {kind}")
    if n is None or n < 1:
        raise LatticeError(f"{kind} 需要正整数参数，得到 {n}")
    size = n if kind == "chain" else 2 ** n
    if size > max_size:
        raise SizeBoundError(f"{kind}({n}) 有 {size} 个元素，超过上限 {max_size}")
    if kind == "chain":
        return _chain([str(i) for i in range(n)], f"chain({n})")
    letters = [chr(ord("a") + i) for i in range(n)]
    labels = ["{" + ",".join(l for i, l in enumerate(letters) if m >> i & 1) + "}" for m in range(size)]
    matrix = np.array([[x & ~y == 0 for y in range(size)] for x in range(size)], dtype=bool)
    return FiniteLattice(labels, matrix, name=f"boolean({n})")


_BUILTIN_NAME = re.compile(r"^\s*(chain|boolean)\s*\(\s*(\d+)\s*\)\s*$")


def parse_lattice_name(text, max_size=64):
    """按名称构造内置格，例如 "chain(3)"、"boolean(2)"、"appendix_chain" """
    if text.strip() == "appendix_chain":
        return make_builtin("appendix_chain")
    match = _BUILTIN_NAME.match(text)
    if not match:
        raise LatticeError(f"无法识别的格名称: {text}")
    return make_builtin(match.group(1), int(match.group(2)), max_size=max_size)
