"""Independent re-verification of Proven and Refuted verdicts.

The re-verifier does not call any checker.  It evaluates sequences exactly,
compares with ``op_leq``, asks ``density_exact`` about witness sets, and
decides the infinite tail by eventual signs of rational functions taken from
the normal form.  It trusts ``analyze``'s claim that its cells partition the
positive integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from ..density import EMPTY, NATURALS, count_upto, density_exact, finite_bound, intersect, is_finite
from ..operators import Operator, column, compose, op_leq, op_modulus
from ..opseq import (
    Abs,
    ComposeRight,
    Const,
    CoordFunctional,
    NotAnalyzable,
    OperatorSequence,
    Scale,
    Sum,
    analyze,
    minus,
)
from ..lattice import LatticeVector
from ..ratfunc import Infinite, coeff_limit, decrease_onset, sign_onset_rf
from ..verdict import (
    AgreementWitness,
    DecreasingWitness,
    DistinctLimitAlong,
    DominatedOnDensityOne,
    ExceptionalSetDensity,
    MassLowerBound,
    OrderBoundOnDensityOne,
    PointwiseFamily,
    Status,
    UnboundedAlong,
    Verdict,
)

RECHECK_CAP = 200_000
POINTWISE_HORIZON = 100


class CertificateError(AssertionError):
    pass


@dataclass(frozen=True)
class Recheck:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def _need(cond: bool, msg: str):
    if not cond:
        raise CertificateError(msg)


def _upto(n: int) -> int:
    _need(n <= RECHECK_CAP, f"exact range {n} beyond the re-check cap")
    return n


def _nonneg_tail(seq: OperatorSequence, J) -> int:
    """Onset after which every entry of seq is >= 0 on J (via the normal form)."""
    try:
        pieces = analyze(seq)
    except NotAnalyzable as exc:
        raise CertificateError(str(exc)) from exc
    K = 1
    for p in pieces:
        if intersect(p.cell, J) == EMPTY:
            continue
        if is_finite(p.cell) is True:
            b = finite_bound(p.cell)
            _need(b is not None, f"finite cell {p.cell} without a bound")
            K = max(K, b + 1)
            continue
        K = max(K, p.start)
        for r in p.form:
            for f in r:
                s, n0 = sign_onset_rf(f)
                _need(s >= 0, f"entry {f} is eventually negative on {p.cell}")
                K = max(K, n0)
    return K


def _decreasing_to_zero(dom: OperatorSequence, H: int):
    try:
        pieces = analyze(dom)
    except NotAnalyzable as exc:
        raise CertificateError(f"dominator has no normal form: {exc}") from exc
    _need(len(pieces) == 1 and pieces[0].cell == NATURALS, "dominator must be a single closed form")
    p = pieces[0]
    K = p.start
    for r in p.form:
        for f in r:
            _need(coeff_limit(f) == 0, f"dominator entry {f} does not tend to zero")
            n0 = decrease_onset(f)
            _need(n0 is not None, f"dominator entry {f} is not eventually decreasing")
            K = max(K, n0)
    prev = dom.at(1)
    _need(op_leq(0 * prev, prev), "dominator is not positive")
    for n in range(2, _upto(max(K, H)) + 2):
        cur = dom.at(n)
        _need(op_leq(cur, prev), f"dominator increases at n={n}")
        prev = cur
    _need(op_leq(0 * prev, prev), "dominator is not positive")


def _dominated(v: Verdict, c: DominatedOnDensityOne, H: int):
    seq, R = v.sequence, v.target
    _need(c.limit == R, "certificate limit differs from the target")
    _need(density_exact(c.J).is_one(), f"density of {c.J} is not exactly 1")
    if v.notion == "o":
        _need(c.J == NATURALS, "order convergence needs domination at every index")
    _decreasing_to_zero(c.dominator, H)
    gap = Sum(c.dominator, Scale(Fraction(-1), Abs(minus(seq, R))))
    K = _nonneg_tail(gap, c.J)
    for n in range(1, _upto(max(K, H)) + 1):
        if c.J.contains(n):
            _need(op_leq(op_modulus(seq.at(n) - R), c.dominator.at(n)), f"domination fails at n={n}")


def _decreasing(v: Verdict, c: DecreasingWitness, H: int):
    seq, S = v.sequence, v.target
    _need(c.infimum == S, "certificate infimum differs from the target")
    _need(density_exact(c.J).is_one(), f"density of {c.J} is not exactly 1")
    try:
        pieces = analyze(seq)
    except NotAnalyzable as exc:
        raise CertificateError(str(exc)) from exc
    live = [p for p in pieces if intersect(p.cell, c.J) != EMPTY]
    K = 1
    tails = []
    for p in live:
        if is_finite(p.cell) is True:
            b = finite_bound(p.cell)
            _need(b is not None, f"finite cell {p.cell} without a bound")
            K = max(K, b + 1)
            continue
        lim = tuple(tuple(coeff_limit(f) for f in r) for r in p.form)
        _need(lim == S.entries, f"cell {p.cell} meets J with limit {lim}")
        tails.append(p)
        K = max(K, p.start)
    for a in tails:
        for b in tails:
            for r, s in zip(a.form, b.form):
                for f, g in zip(r, s):
                    sg, n0 = sign_onset_rf(f - g.shift(1))
                    _need(sg >= 0, f"forms on {a.cell} and {b.cell} do not chain downward")
                    K = max(K, n0)
    top = _upto(max(K, H))
    prev = None
    n = 1
    while True:
        if c.J.contains(n):
            cur = seq.at(n)
            if prev is not None:
                _need(op_leq(cur, prev), f"not decreasing along J at n={n}")
            prev = cur
            if n > top:
                break
        n += 1
        _need(n <= top + RECHECK_CAP, "J has no element past the checked range")


def _piece_along(v: Verdict, J):
    try:
        pieces = analyze(v.sequence)
    except NotAnalyzable as exc:
        raise CertificateError(str(exc)) from exc
    match = [p for p in pieces if p.cell == J]
    _need(bool(match), f"no cell of the normal form equals {J}")
    return match[0]


def _positive_density_if_statistical(v: Verdict, J):
    if v.notion == "o":
        _need(is_finite(J) is False, f"{J} not shown infinite")
    else:
        d = density_exact(J)
        _need(d.known and d.value > 0, f"{J} not shown to have positive density")


def _unbounded(v: Verdict, c: UnboundedAlong, H: int):
    _positive_density_if_statistical(v, c.J)
    p = _piece_along(v, c.J)
    i, j = c.entry
    _need(p.form[i][j] == c.growth, "growth does not match the normal form")
    _need(isinstance(coeff_limit(c.growth), Infinite), f"{c.growth} is bounded")
    for n in range(p.start, H + 1):
        if c.J.contains(n):
            _need(v.sequence.at(n)[i, j] == c.growth(n), f"entry differs from {c.growth} at n={n}")


def _distinct(v: Verdict, c: DistinctLimitAlong, H: int):
    _positive_density_if_statistical(v, c.J)
    p = _piece_along(v, c.J)
    lim = tuple(tuple(coeff_limit(f) for f in r) for r in p.form)
    _need(lim == c.limit.entries, "limit does not match the normal form")
    _need(c.limit != v.target, "claimed limit equals the target")
    for n in range(p.start, min(H, p.start + 50) + 1):
        if c.J.contains(n):
            _need(v.sequence.at(n) == p.at(n, v.sequence), f"normal form disagrees at n={n}")


def _mass(v: Verdict, c: MassLowerBound, H: int):
    seq = v.sequence
    _need(isinstance(seq, CoordFunctional), "mass bound applies to coordinate functionals")
    _need(seq.truncation == c.truncation, "truncation mismatch")
    _need(density_exact(c.M).is_one(), f"density of {c.M} is not exactly 1")
    _need(c.lower_bound == ceil(c.truncation / 2), "lower bound is not ceil(D/2)")
    _need(count_upto(c.M, c.truncation) == c.count >= c.lower_bound, "count below the lower bound")
    mass = Fraction(0)
    for j in range(1, c.truncation + 1):
        if c.M.contains(j):
            row = seq.at(j).entries[0]
            _need(row[j - 1] == c.mass, f"coordinate {j} carries mass {row[j - 1]}")
            mass += row[j - 1]
    _need(mass >= c.lower_bound, "total mass below the lower bound")


def _order_bound(v: Verdict, c: OrderBoundOnDensityOne, H: int):
    seq = v.sequence
    _need(density_exact(c.J).is_one(), f"density of {c.J} is not exactly 1")
    gap = Sum(Const(c.bound), Scale(Fraction(-1), Abs(seq)))
    K = _nonneg_tail(gap, c.J)
    for n in range(1, _upto(max(K, H)) + 1):
        if c.J.contains(n):
            _need(op_leq(op_modulus(seq.at(n)), c.bound), f"bound fails at n={n}")


def _pointwise(v: Verdict, c: PointwiseFamily, H: int):
    seq, R = v.sequence, v.target
    _need(len(c.vectors) == len(c.verdicts) and c.vectors, "empty or ragged family")
    statuses = []
    for u, sub in zip(c.vectors, c.verdicts):
        _need(u.is_positive(), f"test vector {u} is not positive")
        col = column(LatticeVector(seq.domain, u.coords))
        _need(sub.sequence == ComposeRight(seq, col), "sub-verdict is about another sequence")
        _need(sub.target == compose(R, col), "sub-verdict has another target")
        statuses.append(sub.status)
        if sub.status is not Status.UNDETERMINED:
            # exact ranges always reach the symbolic onset; past it H is a sanity sample
            _check(sub, min(H, POINTWISE_HORIZON))
    if v.status is Status.PROVEN:
        _need(all(s is Status.PROVEN for s in statuses), "a test vector is not proven")
    else:
        _need(Status.REFUTED in statuses, "no test vector is refuted")


def _exceptional(v: Verdict, c: ExceptionalSetDensity, H: int):
    d = density_exact(c.exceptional)
    _need(d.known and d.value == c.density, "exceptional density does not match")
    _need((c.density == 0) == (v.status is Status.PROVEN), "status inconsistent with the density")
    for n in range(1, H + 1):
        r = v.sequence(n) if v.sequence is not None else None
        if r is not None:
            bad = abs(r - v.target) >= v.tolerance
            _need(bad == c.exceptional.contains(n), f"exceptional set wrong at n={n}")


def _agreement(v: Verdict, c: AgreementWitness, H: int):
    _need(density_exact(c.agreement).is_one(), "agreement set not of density 1")
    for n in range(1, H + 1):
        if c.agreement.contains(n):
            _need(c.T_seq.at(n) == v.sequence.at(n), f"disagreement at n={n}")


_PROVEN = {
    DominatedOnDensityOne: _dominated,
    DecreasingWitness: _decreasing,
    OrderBoundOnDensityOne: _order_bound,
    AgreementWitness: _agreement,
}
_REFUTED = {
    UnboundedAlong: _unbounded,
    DistinctLimitAlong: _distinct,
    MassLowerBound: _mass,
}
_EITHER = {PointwiseFamily: _pointwise, ExceptionalSetDensity: _exceptional}


def _check(v: Verdict, H: int):
    c = v.certificate
    _need(c is not None, "no certificate")
    kind = type(c)
    if v.status is Status.PROVEN and kind in _PROVEN:
        _PROVEN[kind](v, c, H)
    elif v.status is Status.REFUTED and kind in _REFUTED:
        _REFUTED[kind](v, c, H)
    elif kind in _EITHER:
        _EITHER[kind](v, c, H)
    else:
        raise CertificateError(f"{c.variant} cannot back a {v.status.value} verdict")


def recheck(v: Verdict, horizon: int = 500) -> Recheck:
    """Re-verify a Proven or Refuted verdict from its certificate alone."""
    if v.status is Status.UNDETERMINED:
        return Recheck(False, "Undetermined verdicts carry no certificate")
    try:
        _check(v, horizon)
    except CertificateError as exc:
        return Recheck(False, str(exc))
    return Recheck(True)
