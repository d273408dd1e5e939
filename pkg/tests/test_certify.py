from dataclasses import replace
from fractions import Fraction

from latticestat.convergence import check_o_convergence, check_soc, check_socp, recheck
from latticestat.density import NATURALS, SQUARES, AP
from latticestat.opseq import ScaledOp
from latticestat.syntax import parse_operator, parse_rf, parse_sequence
from latticestat.verdict import Status

EX = parse_sequence("piecewise(squares, scaled(n, id(2)), scaled(1/n, id(2)))")
Z2 = parse_operator("zero(2,2)")


def tampered(v, **changes):
    return replace(v, certificate=replace(v.certificate, **changes))


def test_genuine_certificates_accepted():
    assert recheck(check_soc(EX, Z2)).ok
    assert recheck(check_o_convergence(EX, Z2)).ok


def test_soc_with_wrong_witness_set_rejected():
    v = check_soc(EX, Z2)
    assert not recheck(tampered(v, J=NATURALS)).ok
    assert not recheck(tampered(v, J=AP(1, 2))).ok


def test_soc_with_too_small_dominator_rejected():
    v = check_soc(EX, Z2)
    small = ScaledOp(parse_rf("1/(2*n)"), parse_operator("id(2)"))
    assert not recheck(tampered(v, dominator=small)).ok


def test_soc_with_non_decreasing_dominator_rejected():
    v = check_soc(EX, Z2)
    assert not recheck(tampered(v, dominator=ScaledOp(parse_rf("1"), parse_operator("id(2)")))).ok


def test_o_certificate_needs_all_indices():
    v = check_soc(EX, Z2)
    assert not recheck(replace(v, notion="o")).ok


def test_unbounded_along_wrong_set_rejected():
    v = check_o_convergence(EX, Z2)
    assert not recheck(tampered(v, J=AP(1, 2))).ok
    assert not recheck(tampered(v, growth=parse_rf("n^2"))).ok


def test_status_flip_rejected():
    v = check_soc(EX, Z2)
    assert not recheck(replace(v, status=Status.REFUTED)).ok


def test_mass_bound_tampering_rejected():
    W = parse_sequence("coordfun(16)")
    v = check_soc(W, parse_operator("zero(1,16)"))
    assert recheck(v).ok
    assert not recheck(tampered(v, lower_bound=9)).ok
    assert not recheck(tampered(v, M=SQUARES)).ok


def test_pointwise_family_rechecks_members():
    v = check_socp(EX, Z2)
    assert recheck(v).ok
    subs = list(v.certificate.verdicts)
    subs[0] = tampered(subs[0], J=NATURALS)
    assert not recheck(tampered(v, verdicts=tuple(subs))).ok
