from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from latticestat.density import SQUARES, Finite
from latticestat.lattice import finite
from latticestat.operators import Operator, op_join, op_meet, op_modulus, op_pos
from latticestat.opseq import (
    Abs,
    AtNext,
    ComposeLeft,
    ComposeRight,
    Const,
    CoordFunctional,
    Join,
    Meet,
    NotAnalyzable,
    Piecewise,
    PosPart,
    Prefix,
    Scale,
    ScaledOp,
    Sum,
    analyze,
    evaluate,
    form_sequence,
    neg_part,
)
from latticestat.syntax import parse_rf

from conftest import index_sets, matrices, rationals

COEFFS = [parse_rf(t) for t in ("1/n", "n", "(n+1)/n^2", "1", "n^2/(n+3)", "-2/(n+1)", "(n-3)/(n+1)")]


def leaves(m, k):
    return st.one_of(
        matrices(m, k).map(Const),
        st.builds(ScaledOp, st.sampled_from(COEFFS), matrices(m, k)),
    )


def trees(m, k):
    return st.recursive(
        leaves(m, k),
        lambda inner: st.one_of(
            st.builds(Sum, inner, inner),
            st.builds(Join, inner, inner),
            st.builds(Meet, inner, inner),
            st.builds(Piecewise, index_sets, inner, inner),
            st.builds(Scale, rationals, inner),
            st.builds(Abs, inner),
            st.builds(PosPart, inner),
            st.builds(lambda T, a: Prefix((T,), a), matrices(m, k), inner),
        ),
        max_leaves=6,
    )


@given(st.tuples(st.integers(1, 2), st.integers(1, 2)).flatmap(lambda s: trees(*s)))
def test_normal_form_reproduces_values(seq):
    pieces = analyze(seq)
    for n in range(1, 40):
        hits = [p for p in pieces if p.cell.contains(n)]
        assert len(hits) == 1, "cells must partition the indices"
        p = hits[0]
        if n >= p.start:
            assert p.at(n, seq) == seq.at(n)


@given(st.tuples(st.integers(1, 2), st.integers(1, 2)).flatmap(lambda s: st.tuples(trees(*s), trees(*s))))
def test_lattice_nodes_evaluate_pointwise(pair):
    a, b = pair
    for n in (1, 2, 5, 9):
        assert Join(a, b).at(n) == op_join(a.at(n), b.at(n))
        assert Meet(a, b).at(n) == op_meet(a.at(n), b.at(n))
        assert Abs(a).at(n) == op_modulus(a.at(n))
        assert PosPart(a).at(n) == op_pos(a.at(n))
        assert neg_part(a).at(n) == op_pos(-a.at(n))


def test_composition_nodes():
    A = ScaledOp(parse_rf("1/n"), Operator.from_rows([[1, 2], [3, 4]]))
    T = Operator.from_rows([[1, 1]])
    P = Operator.from_rows([[2], [0]])
    assert ComposeLeft(T, A).at(2) == Operator.from_rows([[2, 3]])
    assert ComposeRight(A, P).at(2) == Operator.from_rows([[1], [3]])


def test_coordinate_functional():
    W = CoordFunctional(8)
    assert W.shape == (1, 8)
    assert W.at(3).entries[0] == tuple(Fraction(int(j == 2)) for j in range(8))
    assert W.at(9).is_zero()
    assert analyze(W)[0].start == 9


def test_prefix_and_atnext():
    tail = ScaledOp(parse_rf("1/n"), Operator.from_rows([[1]]))
    seq = Prefix((Operator.from_rows([[7]]),), tail)
    assert seq.at(1) == Operator.from_rows([[7]]) and seq.at(2) == tail.at(2)
    nxt = AtNext(SQUARES, tail)
    assert nxt.at(2) == tail.at(4) and nxt.at(4) == tail.at(4)
    with pytest.raises(NotAnalyzable):
        analyze(nxt)


def test_form_sequence_is_tidy():
    seq = Sum(ScaledOp(parse_rf("1/n"), Operator.from_rows([[1, 2]])), ScaledOp(parse_rf("1/n"), Operator.from_rows([[1, 0]])))
    tidy = form_sequence(analyze(seq)[0].form, seq)
    assert isinstance(tidy, ScaledOp)
    assert all(tidy.at(n) == seq.at(n) for n in range(1, 20))


def test_evaluate_rejects_zero_index():
    with pytest.raises(ValueError):
        evaluate(Const(Operator.from_rows([[1]])), 0)


def test_piecewise_finite_set():
    seq = Piecewise(Finite([2]), Const(Operator.from_rows([[5]])), Const(Operator.from_rows([[1]])))
    assert [seq.at(n).entries[0][0] for n in (1, 2, 3)] == [1, 5, 1]
