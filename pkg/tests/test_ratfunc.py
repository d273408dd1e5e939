from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from latticestat.ratfunc import (
    Infinite,
    Poly,
    RationalFunction,
    coeff_limit,
    decrease_onset,
    sign_onset,
    sign_onset_rf,
)
from latticestat.syntax import parse_rf

from conftest import rational_functions, rationals


def sgn(x):
    return (x > 0) - (x < 0)


@given(st.lists(rationals, min_size=1, max_size=6))
def test_sign_onset_is_tight(coeffs):
    p = Poly(coeffs)
    s, n0 = sign_onset(p)
    for n in range(n0, n0 + 200):
        assert sgn(p(n)) == s
    if n0 > 1:
        assert sgn(p(n0 - 1)) != s


@given(st.lists(rationals, min_size=1, max_size=6))
def test_positive_root_bound_dominates_roots(coeffs):
    p = Poly(coeffs)
    if p.degree < 1:
        return
    B = p.positive_root_bound()
    s = sgn(p.lead)
    for n in range(B, B + 100):
        assert sgn(p(n)) == s


@given(rational_functions(), rational_functions(), st.integers(1, 50))
def test_arithmetic_matches_pointwise(f, g, n):
    assert (f + g)(n) == f(n) + g(n)
    assert (f - g)(n) == f(n) - g(n)
    assert (f * g)(n) == f(n) * g(n)
    assert f.shift(3)(n) == f(n + 3)


@given(rational_functions(), st.integers(1, 30))
def test_integer_and_fraction_evaluation_agree(f, n):
    assert f(n) == f(Fraction(n))


@given(rational_functions())
def test_decrease_onset(f):
    n0 = decrease_onset(f)
    if n0 is None:
        s, m0 = sign_onset_rf(f - f.shift(1))
        assert s < 0
        assert all(f(n) < f(n + 1) for n in range(m0, m0 + 50))
    else:
        assert all(f(n) >= f(n + 1) for n in range(n0, n0 + 100))


@pytest.mark.parametrize(
    "text, limit",
    [("1/n", Fraction(0)), ("(n+1)/n", Fraction(1)), ("3/2", Fraction(3, 2)), ("(2*n^2+1)/(3*n^2)", Fraction(2, 3))],
)
def test_coeff_limit_finite(text, limit):
    assert coeff_limit(parse_rf(text)) == limit


def test_coeff_limit_infinite():
    assert coeff_limit(parse_rf("n^2/(n+1)")) == Infinite(1)
    assert coeff_limit(parse_rf("-n")) == Infinite(-1)


def test_lowest_terms_and_equality():
    # the common factor cancels, so the removable pole at n = 1 is gone
    assert parse_rf("(n^2-1)/(n-1)") == parse_rf("n+1")
    assert RationalFunction(Poly([0, 2]), Poly([0, 4])) == RationalFunction(Fraction(1, 2))
