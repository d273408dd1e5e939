from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, strategies as st

from latticestat.density import (
    AP,
    EMPTY,
    NATURALS,
    SQUARES,
    Cofinite,
    Complement,
    Finite,
    complement,
    count_upto,
    density_exact,
    empirical_density,
    finite_bound,
    intersect,
    is_finite,
    next_member,
    simplify,
    stat_converges_real,
    union,
)
from latticestat.syntax import parse_rf
from latticestat.verdict import Status

from conftest import index_sets

N = 150


def members(J, upto=N):
    return {n for n in range(1, upto + 1) if J.contains(n)}


@given(index_sets, index_sets)
def test_set_algebra_matches_membership(a, b):
    assert members(intersect(a, b)) == members(a) & members(b)
    assert members(union(a, b)) == members(a) | members(b)
    assert members(complement(a)) == set(range(1, N + 1)) - members(a)
    assert members(simplify(a)) == members(a)


@given(index_sets)
def test_count_upto_matches_enumeration(J):
    for n in (1, 7, 60, 149):
        assert count_upto(J, n) == len(members(J, n))


@given(index_sets)
def test_density_against_empirical_oracle(J):
    d = density_exact(J)
    if d.known:
        # every generated set is a finite modification of a periodic set
        # (or of the squares), so the empirical density converges at rate O(1/sqrt N)
        assert abs(empirical_density(J, 40_000) - d.value) < Fraction(1, 50)


@given(index_sets)
def test_finiteness_claims(J):
    fin = is_finite(J)
    if fin is True:
        b = finite_bound(J)
        if b is not None:
            assert all(not J.contains(n) for n in range(b + 1, b + 200))
    elif fin is False:
        assert next_member(J, 10_000) >= 10_000


def test_squares_density_exact():
    assert density_exact(SQUARES).value == 0
    assert density_exact(Complement(SQUARES)).value == 1


@pytest.mark.parametrize("N", [10**3, 10**4, 10**6])
def test_squares_empirical_density(N):
    assert empirical_density(SQUARES, N) == Fraction(isqrt(N), N)


@pytest.mark.parametrize("a, d", [(1, 2), (3, 7), (5, 10), (2, 1)])
def test_ap_density(a, d):
    assert density_exact(AP(a, d)).value == Fraction(1, d)
    for N in (997, 10**4):
        assert abs(empirical_density(AP(a, d), N) - Fraction(1, d)) <= Fraction(d, N)


def test_degenerate_sets():
    assert density_exact(Finite([1, 4, 9])).value == 0
    assert density_exact(Cofinite([2, 3])).value == 1
    assert intersect(SQUARES, Complement(SQUARES)) == EMPTY
    assert union(SQUARES, Complement(SQUARES)) == NATURALS
    assert intersect(AP(1, 2), AP(2, 2)) == EMPTY


def test_intersection_distributes_over_union():
    J = intersect(union(Complement(SQUARES), Finite([17])), Cofinite([17]))
    assert intersect(SQUARES, J) == EMPTY


def test_stat_convergence_of_reals():
    v = stat_converges_real(parse_rf("1/n"), 0, Fraction(1, 100))
    assert v.status is Status.PROVEN
    assert v.certificate.density == 0
