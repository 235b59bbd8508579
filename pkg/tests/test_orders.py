#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import pytest

from src.lattice.orders import (FiniteLattice, FinitePoset, InconsistentUnionError, LatticeError, LiteralPoset,
                                LiteralSet, NotALatticeError, PartialOrderError, SizeBoundError,
                                UnknownElementError, join, leq, make_builtin, make_powerset_lattice, meet,
                                parse_lattice_name)


def test_chain_joins_and_bounds():
    chain = make_builtin("chain", 3)
    assert chain.size == 3
    assert chain.height == 2
    assert chain.iteration_bound == 4
    assert chain.join(0, 2) == 2
    assert chain.meet(1, 2) == 1
    assert (chain.bottom, chain.top) == (0, 2)
    assert chain.labels == ("0", "1", "2")


def test_boolean_lattice_is_indexed_by_bitmask():
    lattice = make_builtin("boolean", 2)
    assert lattice.labels == ("{}", "{a}", "{b}", "{a,b}")
    assert lattice.join(1, 2) == 3
    assert lattice.meet(1, 2) == 0
    assert lattice.leq(1, 3)
    assert not lattice.leq(1, 2)


def test_appendix_chain_labels():
    chain = make_builtin("appendix_chain")
    assert [chain.label(x) for x in chain.elements()] == ["1", "2", "3"]
    assert chain.index("2") == 1


def test_relation_must_be_antisymmetric():
    with pytest.raises(PartialOrderError):
        FinitePoset(["a", "b"], [[1, 1], [1, 1]])


def test_antichain_has_no_join():
    poset = FinitePoset(["a", "b"], [[1, 0], [0, 1]])
    with pytest.raises(NotALatticeError):
        poset.join(0, 1)
    with pytest.raises(NotALatticeError):
        FiniteLattice(["a", "b"], [[1, 0], [0, 1]])


def test_powerset_masks_and_labels():
    lattice = make_powerset_lattice(["a", "b", "c"])
    assert lattice.size == 8
    mask = lattice.mask_of(["a", "c"])
    assert lattice.label(mask) == "{a,c}"
    assert lattice.labels_of(mask) == ["a", "c"]
    assert lattice.join(mask, lattice.mask_of(["b"])) == lattice.top
    with pytest.raises(UnknownElementError):
        lattice.mask_of(["d"])


def test_powerset_label_bound():
    with pytest.raises(SizeBoundError):
        make_powerset_lattice([f"x{i}" for i in range(21)])


def test_literal_poset_join_requires_consistency():
    order = LiteralPoset(["p", "q"])
    assert order.size == 9
    assert len(list(order.elements())) == 9
    assert order.join(LiteralSet(1, 0), LiteralSet(0, 2)) == LiteralSet(1, 2)
    with pytest.raises(InconsistentUnionError, match="p"):
        order.join(LiteralSet(1, 0), LiteralSet(0, 1))
    assert order.label(LiteralSet(0, 3)) == "{¬p, ¬q}"
    assert order.leq(order.bottom, LiteralSet(2, 1))


def test_literal_poset_rejects_inconsistent_elements():
    order = LiteralPoset(["p"])
    with pytest.raises(UnknownElementError):
        order.leq(LiteralSet(1, 1), LiteralSet(1, 1))


def test_builtin_size_bound():
    with pytest.raises(SizeBoundError):
        make_builtin("chain", 100, max_size=64)
    with pytest.raises(SizeBoundError):
        make_builtin("boolean", 7, max_size=64)


def test_parse_lattice_name():
    assert parse_lattice_name("chain(4)").size == 4
    assert parse_lattice_name(" boolean(2) ").size == 4
    assert parse_lattice_name("appendix_chain").name == "appendix_chain"
    with pytest.raises(LatticeError, match="foo"):
        parse_lattice_name("foo")


def test_module_level_order_helpers():
    lattice = make_powerset_lattice(["a", "b"])
    a, b = lattice.mask_of(["a"]), lattice.mask_of(["b"])
    assert leq(lattice, a, lattice.top)
    assert not leq(lattice, a, b)
    assert join(lattice, a, b) == lattice.top
    assert meet(lattice, a, b) == lattice.bottom
    with pytest.raises(UnknownElementError):
        leq(lattice, 9, a)
