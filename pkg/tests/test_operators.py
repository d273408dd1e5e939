from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from latticestat.lattice import DimensionError, LatticeVector, basis, finite, join, leq, meet, ones
from latticestat.operators import (
    BandPattern,
    Operator,
    apply,
    band_contains,
    band_projection,
    compose,
    identity,
    op_join,
    op_leq,
    op_meet,
    op_modulus,
    op_neg,
    op_pos,
    rk_reference,
)

from conftest import any_matrix, matrices, matrix_pair, positive_vectors


@given(matrix_pair())
def test_lattice_identities(pair):
    S, T = pair
    assert op_join(S, T) + op_meet(S, T) == S + T
    assert op_pos(S) - op_neg(S) == S
    assert op_pos(S) + op_neg(S) == op_modulus(S)
    assert op_meet(op_pos(S), op_neg(S)).is_zero()
    assert op_leq(op_meet(S, T), S) and op_leq(S, op_join(S, T))


@given(matrix_pair())
def test_riesz_kantorovich_oracle(pair):
    S, T = pair
    k = S.domain.dim
    for u in [basis(S.domain, i) for i in range(k)] + [ones(S.domain)]:
        assert apply(op_modulus(S), u) == rk_reference("modulus", S, None, u)
        assert apply(op_join(S, T), u) == rk_reference("join", S, T, u)
        assert apply(op_meet(S, T), u) == rk_reference("meet", S, T, u)


@given(st.integers(1, 3).flatmap(lambda k: st.tuples(matrices(2, k), matrices(2, k), positive_vectors(k))))
def test_rk_on_arbitrary_positive_vectors(triple):
    S, T, u = triple
    assert apply(op_join(S, T), u) == rk_reference("join", S, T, u)


@given(any_matrix())
def test_order_is_entrywise(S):
    assert op_leq(S, S)
    assert op_leq(-op_modulus(S), S) and op_leq(S, op_modulus(S))


@given(st.integers(1, 3).flatmap(lambda k: st.tuples(matrices(2, k), matrices(k, 3), positive_vectors(3))))
def test_composition_is_application(triple):
    S, T, u = triple
    assert apply(compose(S, T), u) == apply(S, apply(T, u))


def test_positive_operators_preserve_order():
    P = Operator.from_rows([[1, 2], [0, Fraction(1, 2)]])
    u = LatticeVector(finite(2), [1, 0])
    v = LatticeVector(finite(2), [2, 3])
    assert leq(u, v) and leq(apply(P, u), apply(P, v))
    assert join(u, v) == v and meet(u, v) == u


def test_band_projection_and_membership():
    P = band_projection(BandPattern.coords([0, 2]), 3)
    assert compose(P, P) == P
    assert P == Operator.from_rows([[1, 0, 0], [0, 0, 0], [0, 0, 1]])
    T = Operator.from_rows([[1, 0], [0, 0]])
    assert band_contains(BandPattern.entries([(0, 0)]), T)
    assert not band_contains(BandPattern.entries([(1, 1)]), T)
    with pytest.raises(DimensionError):
        band_contains(BandPattern.entries([(5, 5)]), T)


def test_shape_errors():
    with pytest.raises(DimensionError):
        identity(finite(2)) + identity(finite(3))
    with pytest.raises(DimensionError):
        compose(Operator.from_rows([[1, 2]]), Operator.from_rows([[1, 2]]))


def test_rk_reference_rejects_negative_vector():
    with pytest.raises(ValueError):
        rk_reference("modulus", identity(finite(2)), None, LatticeVector(finite(2), [-1, 0]))
