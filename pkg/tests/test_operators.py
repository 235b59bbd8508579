#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import pytest

from src.algebra.function_lab import enumerate_monotone
from src.algebra.operators import (DomainMismatchError, EndoFunction, IterationBoundError, PreconditionError,
                                   check_closure_laws, check_dual_composition, check_lemma, check_proposition,
                                   check_sandwich, check_star_monotonicity, classify, closure,
                                   common_fixedpoints_check, compose, down_closure, fixedpoint_sets, inflate,
                                   is_increasing, is_monotone, lfp_from, plus, pointwise_leq, star)
from src.lattice.orders import make_builtin, make_powerset_lattice


@pytest.fixture
def chain4():
    return make_builtin("chain", 4)


@pytest.fixture
def diamond():
    return make_builtin("boolean", 2)


def successor(chain):
    return EndoFunction(chain, [min(x + 1, chain.size - 1) for x in chain.elements()], name="succ")


def test_table_length_must_match_carrier(chain4):
    with pytest.raises(DomainMismatchError):
        EndoFunction(chain4, [0, 1])


def test_table_values_must_belong_to_carrier(chain4):
    with pytest.raises(DomainMismatchError):
        EndoFunction(chain4, [0, 1, 2, 9])


def test_star_reaches_least_fixpoint_above_start(chain4):
    f = successor(chain4)
    assert star(f, 0) == 3
    assert closure(f).table == (3, 3, 3, 3)


def test_star_of_constant_function(chain4):
    f = EndoFunction.constant(chain4, 2)
    assert star(f, 0) == 2
    assert star(f, 3) == 3


def test_iteration_bound(chain4):
    with pytest.raises(IterationBoundError):
        star(successor(chain4), 0, bound=1)


def test_star_rejects_non_monotone_when_asked(chain4):
    f = EndoFunction(chain4, [1, 0, 3, 3], name="h")
    with pytest.raises(PreconditionError):
        star(f, 0, check_monotone=True)


def test_lfp_from_requires_post_fixpoint():
    chain = make_builtin("chain", 3)
    f = EndoFunction.constant(chain, 0, name="zero")
    assert lfp_from(EndoFunction.identity(chain), 1) == 1
    with pytest.raises(PreconditionError, match="lfp"):
        lfp_from(f, 2)


def test_inflate_of_bottom_constant_is_identity(chain4):
    f = EndoFunction.constant(chain4, 0)
    assert inflate(f).same_as(EndoFunction.identity(chain4))


def test_plus_and_compose(diamond):
    add_a = EndoFunction(diamond, [x | 1 for x in diamond.elements()], name="f")
    add_b = EndoFunction(diamond, [x | 2 for x in diamond.elements()], name="g")
    assert plus(add_a, add_b).table == (3, 3, 3, 3)
    assert compose(add_a, add_b).table == (3, 3, 3, 3)
    assert compose(add_a, EndoFunction.identity(diamond)).same_as(add_a)


def test_classify(chain4):
    props = classify(EndoFunction.identity(chain4))
    assert props.monotone and props.increasing and props.decreasing and props.continuous
    props = classify(EndoFunction(chain4, [1, 0, 3, 3]))
    assert not props.monotone
    assert not props.decreasing


def test_pointwise_leq_returns_first_witness(chain4):
    low = EndoFunction.constant(chain4, 0)
    assert pointwise_leq(low, successor(chain4)) is None
    assert pointwise_leq(successor(chain4), low) == 0


def test_fixedpoint_sets(chain4):
    sets = fixedpoint_sets(EndoFunction(chain4, [1, 1, 3, 3]))
    assert sets.fpt == {1, 3}
    assert sets.post == {0, 1, 2, 3}
    assert sets.pre == {1, 3}


def test_down_closure_on_powerset():
    lattice = make_powerset_lattice(["a", "b"])
    f = EndoFunction(lattice, [x & 1 for x in lattice.elements()], name="keep_a")
    assert down_closure(f, lattice.top) == 1


def test_down_closure_rejects_non_decreasing_step():
    lattice = make_powerset_lattice(["a", "b"])
    add_a = EndoFunction(lattice, [x | 1 for x in lattice.elements()], name="add_a")
    with pytest.raises(PreconditionError, match="不递减") as excinfo:
        down_closure(add_a, 2)
    assert excinfo.value.witness == 2
    assert down_closure(add_a, 3) == 3


def test_dual_composition_needs_decreasing_functions(diamond):
    add_a = EndoFunction(diamond, [x | 1 for x in diamond.elements()], name="add_a")
    assert check_dual_composition(add_a, EndoFunction.identity(diamond)) == (False, None)


def test_sequential_closure_below_closure_of_sum(diamond):
    functions = list(enumerate_monotone(diamond))
    for f in functions:
        for g in functions:
            both = plus(f, g)
            for x in diamond.elements():
                assert diamond.leq(star(f, star(g, x)), star(both, x)), (f.table, g.table, x)


def _add_a_and_b_if_a(diamond):
    f = EndoFunction(diamond, [1, 1, 3, 3], name="f")
    g = EndoFunction(diamond, [0, 3, 2, 3], name="g")
    return f, g


def test_lemma_hypothesis_two_can_fail_with_conclusion(diamond):
    f, g = _add_a_and_b_if_a(diamond)
    verdict = check_lemma(f, g)
    assert verdict.part(1).conclusion
    part2 = verdict.part(2)
    assert not part2.hypothesis
    assert not part2.conclusion
    assert part2.hypothesis_witness == 0
    assert verdict.violations == []


def test_lemma_with_commuting_functions(diamond):
    add_a = EndoFunction(diamond, [x | 1 for x in diamond.elements()], name="f")
    add_b = EndoFunction(diamond, [x | 2 for x in diamond.elements()], name="g")
    verdict = check_lemma(add_a, add_b)
    assert all(p.hypothesis and p.conclusion for p in verdict.parts)


def test_lemma_requires_monotone_increasing(chain4):
    with pytest.raises(PreconditionError):
        check_lemma(EndoFunction.constant(chain4, 0), EndoFunction.identity(chain4))


def test_sandwich_requires_pointwise_order():
    chain = make_builtin("chain", 3)
    with pytest.raises(PreconditionError):
        check_sandwich(EndoFunction.identity(chain), EndoFunction.constant(chain, 0), EndoFunction.constant(chain, 2))


def test_sandwich_with_equal_functions():
    chain = make_builtin("chain", 3)
    f = EndoFunction(chain, [1, 1, 2])
    verdict = check_sandwich(f, f, f)
    assert all(p.hypothesis and p.conclusion for p in verdict.parts)
    assert not verdict.part6_strict


def test_common_fixedpoints(diamond):
    f, g = _add_a_and_b_if_a(diamond)
    report = common_fixedpoints_check(f, g)
    assert report.holds
    assert report.common == {3}
    with pytest.raises(PreconditionError):
        common_fixedpoints_check(EndoFunction.constant(diamond, 0), f)


def test_closure_laws_on_monotone_function(chain4):
    laws = check_closure_laws(successor(chain4))
    assert "f*=f∘f*" in laws
    assert all(witness is None for witness in laws.values())


def test_star_monotonicity(chain4):
    low, high = EndoFunction.constant(chain4, 1), successor(chain4)
    assert check_star_monotonicity(low, high) is False
    assert check_star_monotonicity(high, low) is None


def test_proposition_on_commuting_functions(diamond):
    add_a = EndoFunction(diamond, [x | 1 for x in diamond.elements()], name="f")
    add_b = EndoFunction(diamond, [x | 2 for x in diamond.elements()], name="g")
    union = plus(add_a, add_b)
    verdict = check_proposition(add_a, add_b, union)
    assert all(verdict.hypotheses.values())
    assert verdict.conclusion
    assert not verdict.violated


def test_corollary_without_union(diamond):
    f, g = _add_a_and_b_if_a(diamond)
    verdict = check_proposition(f, g)
    assert "sandwich" not in verdict.hypotheses
    assert not verdict.violated


def test_single_property_helpers(chain4):
    assert is_monotone(successor(chain4))
    assert is_increasing(successor(chain4))
    assert not is_increasing(EndoFunction.constant(chain4, 0))
    assert not is_monotone(EndoFunction(chain4, [1, 0, 3, 3]))
