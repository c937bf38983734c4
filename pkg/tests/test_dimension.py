from __future__ import annotations

import pytest
from hypothesis import given, settings

from oracles import dimension_naive, linear_extensions_naive
from strategies import as_matrix, posets

from orderforge.dimension import (
    Realizer,
    complementary_order,
    crown,
    dimension,
    dimension_at_most,
    is_linear_extension,
    is_realizer,
    linear_extensions,
    minimum_realizer,
    two_dim_realizer,
)
from orderforge.errors import BoundExceeded, DomainMismatch, InvalidStructure
from orderforge.relcore import ClassSpec, FinitePoset, LinearOrder, enumerate_upto_iso


@settings(max_examples=60, deadline=None)
@given(posets(max_n=6))
def test_linear_extensions_match_brute_force(P):
    ours = linear_extensions(P)
    assert sorted(L.rank for L in ours) == sorted(linear_extensions_naive(as_matrix(P)))
    assert [L.sequence for L in ours] == sorted(L.sequence for L in ours)


@settings(max_examples=40, deadline=None)
@given(posets(max_n=5))
def test_dimension_matches_brute_force(P):
    assert dimension(P) == dimension_naive(as_matrix(P))


@settings(max_examples=60, deadline=None)
@given(posets(max_n=7))
def test_minimum_realizer_realizes(P):
    R = minimum_realizer(P)
    assert is_realizer(P, R.orders)
    assert all(is_linear_extension(P, L) for L in R.orders)


def test_crown_three_is_three_dimensional():
    C = crown(3)
    assert dimension(C) == 3
    assert two_dim_realizer(C) is None
    assert not dimension_at_most(C, 2)
    assert dimension_at_most(C, 3)


def test_crown_minus_a_point_is_two_dimensional():
    C = crown(3)
    for p in range(6):
        assert dimension(C.restrict([x for x in range(6) if x != p])) == 2


def test_crown_four():
    assert dimension(crown(4)) == 4
    with pytest.raises(ValueError):
        crown(2)


def test_small_posets_are_at_most_two_dimensional():
    for n in range(6):
        assert all(dimension_at_most(P, 2) for P in enumerate_upto_iso(ClassSpec.parse("all-posets"), n))


def test_dimension_of_degenerate_posets():
    assert dimension(FinitePoset.antichain(0)) == 0
    assert dimension(FinitePoset.chain(5)) == 1
    assert dimension(FinitePoset.antichain(4)) == 2


def test_antichain_realizer():
    L1, L2 = two_dim_realizer(FinitePoset.antichain(2))
    assert L1.sequence == (0, 1) and L2.sequence == (1, 0)


def test_complementary_order_is_forced():
    diamond = FinitePoset.from_relation(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    L2 = complementary_order(diamond, LinearOrder.from_sequence([0, 1, 2, 3]))
    assert L2.sequence == (0, 2, 1, 3)


def test_realizer_validation():
    P = FinitePoset.antichain(2)
    with pytest.raises(InvalidStructure):
        Realizer((LinearOrder.identity(2),), P)
    with pytest.raises(DomainMismatch):
        is_realizer(P, [LinearOrder.identity(3)])


def test_dimension_bound():
    with pytest.raises(BoundExceeded):
        dimension(FinitePoset.antichain(9))


def test_three_dimensional_six_point_posets_match_brute_force():
    tall = [P for P in enumerate_upto_iso(ClassSpec.parse("all-posets"), 6) if two_dim_realizer(P) is None]
    assert len(tall) == 3
    for P in tall:
        assert dimension(P) == dimension_naive(as_matrix(P)) == 3


def test_seven_point_dimension_counts():
    # 2045 posets, 1956 of dimension <= 2, none of dimension 4
    posets7 = enumerate_upto_iso(ClassSpec.parse("all-posets"), 7)
    dims = [dimension(P) for P in posets7]
    assert len(posets7) == 2045
    assert sum(d <= 2 for d in dims) == 1956
    assert max(dims) == 3
