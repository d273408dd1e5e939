import pytest
from hypothesis import given

from latticestat.density import SQUARES, Complement
from latticestat.opseq import Piecewise, ScaledOp, ShapeError
from latticestat.operators import identity
from latticestat.lattice import finite
from latticestat.syntax import (
    Env,
    ParseError,
    ResolutionError,
    parse_index_set,
    parse_operator,
    parse_rf,
    parse_sequence,
)

from conftest import index_sets, rational_functions


def test_example_sequence_parses():
    seq = parse_sequence("piecewise(squares, scaled(n, id(2)), scaled(1/(n+1), id(2)))")
    assert seq == Piecewise(SQUARES, ScaledOp(parse_rf("n"), identity(finite(2))), ScaledOp(parse_rf("1/(n+1)"), identity(finite(2))))


@given(index_sets)
def test_index_set_round_trip(J):
    assert parse_index_set(str(J)) == J


@given(rational_functions())
def test_rf_round_trip(f):
    assert parse_rf(str(f)) == f


def test_sequence_round_trip():
    for text in [
        "sum(const([[1,2],[3,4]]), scaled(1/n^2, id(2)))",
        "join(abs(scaled(-1/n, id(1))), pos(const([[1/2]])))",
        "prefix([[[5]]], atnext(complement(squares), scaled(1/n, id(1))))",
        "composer(composel([[1,1]], scaled(1/n, id(2))), [[1],[2]])",
        "ratmat([[1/n, 0],[0, n/(n+1)]])",
        "neg(scale(3/2, coordfun(8)))",
    ]:
        seq = parse_sequence(text)
        assert parse_sequence(str(seq)) == seq


def test_names_resolve():
    env = Env(operators={"I": identity(finite(2))}, sets={"bad": Complement(SQUARES)})
    seq = parse_sequence("piecewise(bad, const(I), const(zero(2,2)))", env)
    assert seq.shape == (2, 2)


@pytest.mark.parametrize("text", ["scaled(n, [[1,2],[3]])", "sum(const(id(2))", "scaled(1/(n-1), id(1))", "piecewise(ap(1,0), const(id(1)), const(id(1)))"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_sequence(text)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        parse_sequence("sum(const(id(2)), ?)")
    assert "column" in str(info.value) and "^" in str(info.value)


def test_unknown_names():
    with pytest.raises(ResolutionError):
        parse_sequence("const(Q)")
    with pytest.raises(ResolutionError):
        parse_index_set("mystery")


def test_shape_mismatch():
    with pytest.raises(ShapeError):
        parse_sequence("sum(const(id(2)), const(id(3)))")


def test_zero_operator_shape():
    assert parse_operator("zero(1,4)").shape == (1, 4)
