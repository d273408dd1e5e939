from fractions import Fraction

import pytest

from latticestat.convergence import (
    PreconditionError,
    check_doc,
    check_dopc,
    check_o_convergence,
    check_soc,
    check_socp,
    check_stat_order_bounded,
    construct_witness,
    decompose_stat_bounded,
    recheck,
)
from latticestat.density import NATURALS, SQUARES, Complement, density_exact
from latticestat.lattice import LatticeVector, finite
from latticestat.operators import Operator, op_leq, op_modulus
from latticestat.opseq import ShapeError
from latticestat.syntax import parse_operator, parse_sequence
from latticestat.verdict import CheckConfig, Status

Z2 = parse_operator("zero(2,2)")
Z1 = parse_operator("zero(1,1)")


def seq(text):
    return parse_sequence(text)


def proven_and_sound(v):
    assert v.status is Status.PROVEN, v.narrative
    assert recheck(v).ok, recheck(v).reason


def refuted_and_sound(v):
    assert v.status is Status.REFUTED, v.narrative
    assert recheck(v).ok, recheck(v).reason


def test_zero_sequence_is_classical():
    for check in (check_o_convergence, check_doc, check_soc):
        v = check(seq("const(zero(2,2))"), Z2)
        proven_and_sound(v)
        assert v.certificate.J == NATURALS


def test_harmonic_is_order_convergent():
    proven_and_sound(check_o_convergence(seq("scaled(1/n, id(2))"), Z2))
    v = check_soc(seq("scaled(1/n, id(2))"), Z2)
    proven_and_sound(v)
    assert "classical order convergence" in v.narrative


def test_wrong_limit_is_refuted():
    v = check_soc(seq("sum(const(id(1)), scaled(1/n, id(1)))"), Z1)
    refuted_and_sound(v)
    assert v.certificate.variant == "DistinctLimitAlong"


def test_unbounded_on_positive_density_refutes_soc():
    v = check_soc(seq("piecewise(ap(1,2), scaled(n, id(1)), scaled(1/n, id(1)))"), Z1)
    refuted_and_sound(v)
    assert v.certificate.variant == "UnboundedAlong"
    assert density_exact(v.certificate.J).value == Fraction(1, 2)


def test_finite_junk_is_harmless_for_o():
    v = check_o_convergence(seq("piecewise(finite(3,7), const([[100]]), scaled(1/n, id(1)))"), Z1)
    proven_and_sound(v)


def test_doc_needs_decrease():
    proven_and_sound(check_doc(seq("sum(const([[2]]), scaled(1/n, id(1)))"), parse_operator("[[2]]")))
    inc = check_doc(seq("sum(const([[2]]), scaled(-1/n, id(1)))"), parse_operator("[[2]]"))
    assert inc.status is not Status.PROVEN


def test_doc_ignores_density_zero_bumps():
    s = seq("piecewise(squares, const([[9]]), scaled(1/n, id(1)))")
    v = check_doc(s, Z1)
    proven_and_sound(v)
    assert v.certificate.J == Complement(SQUARES)
    proven_and_sound(check_dopc(s, Z1))


def test_pointwise_records_sampling():
    v = check_socp(seq("scaled(1/n, [[1,-1]])"), parse_operator("zero(1,2)"))
    proven_and_sound(v)
    assert v.certificate.variant == "PointwiseFamily"
    assert len(v.certificate.vectors) == 3
    assert "sampled" in v.narrative


def test_custom_test_vectors():
    cfg = CheckConfig(test_vectors=(LatticeVector(finite(2), [1, 2]),))
    v = check_socp(seq("scaled(1/n, [[1,-1]])"), parse_operator("zero(1,2)"), cfg)
    assert len(v.certificate.vectors) == 1


def test_shape_mismatch_raises():
    with pytest.raises(ShapeError):
        check_soc(seq("scaled(1/n, id(2))"), Z1)


def test_undetermined_without_normal_form():
    v = check_soc(seq("atnext(squares, scaled(1/n, id(1)))"), Z1)
    assert v.status is Status.UNDETERMINED
    assert v.certificate is None
    assert not recheck(v).ok


@pytest.mark.parametrize("D", [4, 16])
def test_coordinate_functionals(D):
    W = seq(f"coordfun({D})")
    Z = parse_operator(f"zero(1,{D})")
    proven_and_sound(check_socp(W, Z))
    v = check_soc(W, Z)
    refuted_and_sound(v)
    assert v.certificate.lower_bound == -(-D // 2)


def test_stat_bounded_and_decomposition():
    s = seq("piecewise(squares, scaled(n^2, id(2)), sum(const([[1,0],[0,-1]]), scaled(1/n, id(2))))")
    v = check_stat_order_bounded(s)
    proven_and_sound(v)
    d = decompose_stat_bounded(s)
    for n in range(1, 200):
        assert d.T_seq.at(n) + d.U_seq.at(n) == s.at(n)
        assert op_leq(op_modulus(d.T_seq.at(n)), d.bound)
    assert density_exact(d.support).value == 0


def test_unbounded_sequence_is_not_stat_bounded():
    v = check_stat_order_bounded(seq("scaled(n, id(1))"))
    refuted_and_sound(v)


def test_decomposition_requires_boundedness():
    with pytest.raises(PreconditionError):
        decompose_stat_bounded(seq("scaled(n, id(1))"))


def test_witness_round_trip():
    s = seq("piecewise(squares, scaled(n, id(2)), scaled(1/n, id(2)))")
    w = construct_witness(s, Z2, "soc")
    assert w.verdict.status is Status.PROVEN
    assert density_exact(w.agreement).value == 1
    assert check_o_convergence(w.sequence, Z2).status is Status.PROVEN


def test_witness_requires_soc():
    with pytest.raises(PreconditionError):
        construct_witness(seq("scaled(n, id(1))"), Z1, "soc")


def test_doc_witness():
    s = seq("piecewise(squares, const([[-4]]), sum(const([[1]]), scaled(1/n, id(1))))")
    w = construct_witness(s, parse_operator("[[1]]"), "doc")
    P = w.sequence
    assert all(op_leq(P.at(n + 1), P.at(n)) for n in range(1, 100))
