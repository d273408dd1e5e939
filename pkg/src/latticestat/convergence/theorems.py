"""Randomized verification of the convergence theorems.

Each theorem has a generator of instances satisfying its hypotheses by
construction.  A trial checks the hypotheses with the checkers (a trial whose
hypotheses are not proven counts as vacuous), then asserts the conclusion at
the checkable level.  Every Proven or Refuted verdict produced on the way is
handed to the independent re-verifier.

Positive sigma-order continuous operators are instantiated as positive
matrices, which are automatically sigma-order continuous in finite dimensions.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ..density import AP, NATURALS, SQUARES, Finite, IndexSet, density_exact
from ..lattice import finite
from ..operators import (
    BandPattern,
    Operator,
    band_contains,
    band_projection,
    compose,
    op_join,
    op_leq,
    op_meet,
    op_modulus,
    op_neg,
    op_pos,
)
from ..opseq import (
    Abs,
    AtNext,
    ComposeLeft,
    ComposeRight,
    Const,
    Join,
    Meet,
    OperatorSequence,
    Piecewise,
    PosPart,
    Prefix,
    Scale,
    ScaledOp,
    Sum,
    neg_part,
)
from ..ratfunc import RationalFunction
from ..syntax import parse_rf
from ..verdict import CheckConfig, Status, Verdict
from .certify import recheck
from .checkers import (
    PreconditionError,
    check_doc,
    check_dopc,
    check_o_convergence,
    check_soc,
    check_socp,
    check_stat_order_bounded,
    construct_witness,
    decompose_stat_bounded,
)

THEOREMS: dict[str, str] = {
    "implication": "S_n doc S implies S_n dopc S",
    "operator-uniqueness": "doc (and dopc) limits are unique",
    "decomposition-monotone": "S_n doc S iff S_n agrees almost always with some P_n decreasing to S",
    "additivity": "doc and dopc are additive and positively homogeneous",
    "lattice-operations": "S_n v P_n doc S v P, S_n ^ P_n doc S ^ P, S_n+ doc S+",
    "squeeze": "S_n <= P_n <= Q_n, P decreasing, S_n and Q_n dopc T imply P_n dopc T",
    "composition": "T positive: T o S_n doc (dopc) T o S",
    "right-composition": "P positive: S_n o P doc S o P",
    "wedge-zero": "S_n doc 0 and T positive imply S_n ^ T doc 0",
    "implication-soc": "soc implies socp",
    "linearity-soc": "a R_n + b T_n soc a R + b T",
    "lattice-soc": "|R_n| soc |R|, R_n v T_n soc R v T, R_n ^ T_n soc R ^ T",
    "positive-negative-parts": "R_n+ soc R+ and R_n- soc R-",
    "monotonicity-soc": "increasing and soc implies order convergence",
    "soc-uniqueness": "soc limits are unique",
    "characterization": "soc iff agreement on a density-one set with an order convergent sequence",
    "soc-squeeze": "R_n <= U_n <= T_n with R_n, T_n soc R implies U_n soc R",
    "disjointness": "R_n disjoint from U for all n and R_n soc R imply R disjoint from U",
    "band-closed": "a soc limit of a sequence in a band lies in the band",
    "order-continuous": "a soc limit of order continuous operators is order continuous",
    "composition-soc": "T positive: T o R_n soc T o R",
    "band-projection": "P band projection: P o R_n soc P o R",
    "st-conv-implies-st-ob": "soc implies statistically order bounded",
    "decomposition-bounded": "statistically order bounded R_n = T_n + U_n, T bounded, U zero off a density-zero set",
}

# positive, decreasing from n = 1, tending to zero
_NULL = ["1/n", "1/(n+1)", "1/(n+2)", "1/n^2", "2/(n+3)", "(n+1)/n^2", "1/(n^2+1)", "3/(2*n+1)"]
_NULL_RF = [parse_rf(t) for t in _NULL]
_GROW_RF = [parse_rf(t) for t in ("n", "n^2/(n+1)", "2*n+1")]


class TrialFailure(AssertionError):
    pass


@dataclass
class Gen:
    """Random instance builder; ``size`` 1 gives 1x1 matrices and no junk."""

    rng: random.Random
    size: int = 3
    mask: frozenset | None = None  # entries forced to zero

    def rat(self, lo=-5, hi=5) -> Fraction:
        q = self.rng.choice((1, 1, 2, 3))
        return Fraction(self.rng.randint(lo * q, hi * q), q)

    def shape(self) -> tuple[int, int]:
        return self.rng.randint(1, self.size), self.rng.randint(1, self.size)

    def matrix(self, m, k, positive=False) -> Operator:
        rows = []
        for i in range(m):
            row = []
            for j in range(k):
                if self.mask and (i, j) in self.mask:
                    row.append(Fraction(0))
                else:
                    row.append(self.rat(0 if positive else -5, 5))
            rows.append(row)
        return Operator.from_rows(rows, finite(k), finite(m))

    def nonzero_matrix(self, m, k, positive=False) -> Operator:
        for _ in range(50):
            A = self.matrix(m, k, positive)
            if not A.is_zero():
                return A
        return A

    def null(self) -> RationalFunction:
        return self.rng.choice(_NULL_RF)

    def bad_set(self) -> IndexSet:
        if self.rng.random() < 0.5:
            return SQUARES
        return Finite(self.rng.sample(range(1, 30), self.rng.randint(1, 3)))

    def junk(self, m, k) -> OperatorSequence:
        if self.rng.random() < 0.5:
            return Const(self.matrix(m, k))
        return ScaledOp(self.rng.choice(_GROW_RF), self.matrix(m, k))

    def wrap(self, core: OperatorSequence) -> OperatorSequence:
        """Replace the core on one or two density-zero sets."""
        if self.size == 1:
            return core
        m, k = core.shape
        out = core
        for _ in range(self.rng.choice((0, 1, 1, 2))):
            out = Piecewise(self.bad_set(), self.junk(m, k), out)
        return out

    def soc_core(self, m, k, R=None) -> tuple[OperatorSequence, Operator]:
        R = self.matrix(m, k) if R is None else R
        core: OperatorSequence = Sum(Const(R), ScaledOp(self.null(), self.matrix(m, k)))
        if self.rng.random() < 0.3:
            core = Sum(core, ScaledOp(self.null(), self.matrix(m, k)))
        return core, R

    def soc(self, m=None, k=None) -> tuple[OperatorSequence, Operator]:
        if m is None:
            m, k = self.shape()
        core, R = self.soc_core(m, k)
        return self.wrap(core), R

    def doc_core(self, m, k, S=None) -> tuple[OperatorSequence, Operator]:
        S = self.matrix(m, k) if S is None else S
        core: OperatorSequence = Sum(Const(S), ScaledOp(self.null(), self.matrix(m, k, positive=True)))
        if self.rng.random() < 0.3:
            core = Sum(core, ScaledOp(self.null(), self.matrix(m, k, positive=True)))
        return core, S

    def doc(self, m=None, k=None, S=None) -> tuple[OperatorSequence, Operator]:
        if m is None:
            m, k = self.shape()
        core, S = self.doc_core(m, k, S)
        return self.wrap(core), S


@dataclass
class Ctx:
    cfg: CheckConfig
    recheck_horizon: int = 40
    checked: int = 0
    instance: dict = field(default_factory=dict)

    def run(self, fn: Callable[..., Verdict], *args) -> Verdict:
        v = fn(*args, self.cfg)
        if v.status is not Status.UNDETERMINED:
            r = recheck(v, self.recheck_horizon)
            self.checked += 1
            if not r.ok:
                raise TrialFailure(f"re-verifier rejected a {v.notion} certificate: {r.reason}")
        return v

    def note(self, **kw):
        self.instance.update({k: str(v) for k, v in kw.items()})


VACUOUS = "vacuous"
PASS = "pass"


def _require(cond: bool, msg: str):
    if not cond:
        raise TrialFailure(msg)


def _zero(m, k) -> Operator:
    return Operator.from_rows([[0] * k for _ in range(m)], finite(k), finite(m))


def _check_upto(N: int, pred: Callable[[int], bool], msg: str):
    for n in range(1, N + 1):
        if not pred(n):
            raise TrialFailure(f"{msg} at n={n}")


# ------------------------------------------------------------------ section 2


def t_implication(g: Gen, c: Ctx):
    seq, S = g.doc()
    c.note(seq=seq, S=S)
    if not c.run(check_doc, seq, S).proven:
        return VACUOUS
    _require(c.run(check_dopc, seq, S).proven, "dopc not proven")
    return PASS


def t_operator_uniqueness(g: Gen, c: Ctx):
    seq, S = g.doc()
    m, k = seq.shape
    P = S + g.nonzero_matrix(m, k)
    c.note(seq=seq, S=S, P=P)
    if not c.run(check_doc, seq, S).proven:
        return VACUOUS
    for fn in (check_doc, check_dopc):
        _require(not c.run(fn, seq, P).proven, f"{fn.__name__} proves two distinct limits")
    _require(c.run(check_dopc, seq, S).proven, "dopc limit missing")
    return PASS


def t_decomposition_monotone(g: Gen, c: Ctx):
    m, k = g.shape()
    core, S = g.doc_core(m, k)
    seq = g.wrap(core)
    c.note(seq=seq, S=S)
    if not c.run(check_doc, seq, S).proven:
        return VACUOUS
    w = construct_witness(seq, S, "doc", c.cfg)
    _require(density_exact(w.agreement).is_one(), "agreement set not of density one")
    if isinstance(w.sequence, AtNext):
        # decreasing checked exactly inside construct_witness; it agrees with seq on J
        pass
    else:
        v = c.run(check_doc, w.sequence, S)
        _require(v.proven and v.certificate.J == NATURALS, "witness not decreasing on every index")
    # converse: a decreasing core altered on a density-zero set
    if not c.run(check_doc, core, S).certificate.J == NATURALS:
        return VACUOUS
    _require(c.run(check_doc, Piecewise(g.bad_set(), g.junk(m, k), core), S).proven, "converse fails")
    return PASS


def _two_doc(g: Gen):
    m, k = g.shape()
    a, S = g.doc(m, k)
    b, P = g.doc(m, k)
    return a, S, b, P


def t_additivity(g: Gen, c: Ctx):
    a, S, b, P = _two_doc(g)
    alpha = abs(g.rat())
    c.note(a=a, S=S, b=b, P=P, alpha=alpha)
    if not (c.run(check_doc, a, S).proven and c.run(check_doc, b, P).proven):
        return VACUOUS
    _require(c.run(check_doc, Sum(a, b), S + P).proven, "sum not doc")
    _require(c.run(check_doc, Scale(alpha, a), S * alpha).proven, "scaling not doc")
    _require(c.run(check_dopc, Sum(a, b), S + P).proven, "sum not dopc")
    return PASS


def t_lattice_operations(g: Gen, c: Ctx):
    a, S, b, P = _two_doc(g)
    c.note(a=a, S=S, b=b, P=P)
    if not (c.run(check_doc, a, S).proven and c.run(check_doc, b, P).proven):
        return VACUOUS
    _require(c.run(check_doc, Join(a, b), op_join(S, P)).proven, "join not doc")
    _require(c.run(check_doc, Meet(a, b), op_meet(S, P)).proven, "meet not doc")
    _require(c.run(check_doc, PosPart(a), op_pos(S)).proven, "positive part not doc")
    return PASS


def t_squeeze(g: Gen, c: Ctx):
    m, k = g.shape()
    P, T = g.doc_core(m, k)
    X = g.matrix(m, k, positive=True)
    Y = g.matrix(m, k, positive=True)
    S_seq = Piecewise(g.bad_set(), Sum(P, Const(-X)), Const(T))
    Q_seq = Piecewise(g.bad_set(), Sum(P, Const(Y)), Sum(P, ScaledOp(g.null(), g.matrix(m, k, positive=True))))
    c.note(S=S_seq, P=P, Q=Q_seq, T=T)
    _check_upto(30, lambda n: op_leq(S_seq.at(n), P.at(n)) and op_leq(P.at(n), Q_seq.at(n)), "order fails")
    dec = c.run(check_doc, P, T)
    if not (dec.proven and dec.certificate.J == NATURALS):
        return VACUOUS
    if not (c.run(check_dopc, S_seq, T).proven and c.run(check_dopc, Q_seq, T).proven):
        return VACUOUS
    _require(c.run(check_dopc, P, T).proven, "squeezed sequence not dopc")
    return PASS


def t_composition(g: Gen, c: Ctx):
    seq, S = g.doc()
    m, _ = seq.shape
    T = g.matrix(g.rng.randint(1, g.size), m, positive=True)
    c.note(seq=seq, S=S, T=T)
    if not c.run(check_doc, seq, S).proven:
        return VACUOUS
    _require(c.run(check_doc, ComposeLeft(T, seq), compose(T, S)).proven, "T o S_n not doc")
    _require(c.run(check_dopc, ComposeLeft(T, seq), compose(T, S)).proven, "T o S_n not dopc")
    return PASS


def t_right_composition(g: Gen, c: Ctx):
    seq, S = g.doc()
    _, k = seq.shape
    P = g.matrix(k, g.rng.randint(1, g.size), positive=True)
    c.note(seq=seq, S=S, P=P)
    if not c.run(check_doc, seq, S).proven:
        return VACUOUS
    _require(c.run(check_doc, ComposeRight(seq, P), compose(S, P)).proven, "S_n o P not doc")
    return PASS


def t_wedge_zero(g: Gen, c: Ctx):
    m, k = g.shape()
    seq, S = g.doc(m, k, S=_zero(m, k))
    T = g.matrix(m, k, positive=True)
    c.note(seq=seq, T=T)
    if not c.run(check_doc, seq, S).proven:
        return VACUOUS
    _require(c.run(check_doc, Meet(seq, Const(T)), S).proven, "S_n ^ T not doc to zero")
    return PASS


# ------------------------------------------------------------------ section 3


def t_implication_soc(g: Gen, c: Ctx):
    seq, R = g.soc()
    c.note(seq=seq, R=R)
    if not c.run(check_soc, seq, R).proven:
        return VACUOUS
    _require(c.run(check_socp, seq, R).proven, "socp not proven")
    return PASS


def _two_soc(g: Gen):
    m, k = g.shape()
    a, R = g.soc(m, k)
    b, T = g.soc(m, k)
    return a, R, b, T


def t_linearity_soc(g: Gen, c: Ctx):
    a, R, b, T = _two_soc(g)
    alpha, beta = g.rat(), g.rat()
    c.note(a=a, R=R, b=b, T=T, alpha=alpha, beta=beta)
    if not (c.run(check_soc, a, R).proven and c.run(check_soc, b, T).proven):
        return VACUOUS
    lin = Sum(Scale(alpha, a), Scale(beta, b))
    _require(c.run(check_soc, lin, R * alpha + T * beta).proven, "linear combination not soc")
    return PASS


def t_lattice_soc(g: Gen, c: Ctx):
    a, R, b, T = _two_soc(g)
    c.note(a=a, R=R, b=b, T=T)
    if not (c.run(check_soc, a, R).proven and c.run(check_soc, b, T).proven):
        return VACUOUS
    _require(c.run(check_soc, Abs(a), op_modulus(R)).proven, "|R_n| not soc")
    _require(c.run(check_soc, Join(a, b), op_join(R, T)).proven, "join not soc")
    _require(c.run(check_soc, Meet(a, b), op_meet(R, T)).proven, "meet not soc")
    return PASS


def t_positive_negative_parts(g: Gen, c: Ctx):
    seq, R = g.soc()
    c.note(seq=seq, R=R)
    if not c.run(check_soc, seq, R).proven:
        return VACUOUS
    _require(c.run(check_soc, PosPart(seq), op_pos(R)).proven, "positive part not soc")
    _require(c.run(check_soc, neg_part(seq), op_neg(R)).proven, "negative part not soc")
    return PASS


def t_monotonicity_soc(g: Gen, c: Ctx):
    m, k = g.shape()
    R = g.matrix(m, k)
    f = g.null()
    A = g.matrix(m, k, positive=True)
    seq: OperatorSequence = Sum(Const(R), ScaledOp(-f, A))
    if g.size > 1 and g.rng.random() < 0.5:
        first = R - A * f(1) - g.matrix(m, k, positive=True)
        seq = Prefix((first,), seq)
    c.note(seq=seq, R=R)
    inc = c.run(check_doc, Scale(-1, seq), -R)
    if not (inc.proven and inc.certificate.J == NATURALS):
        return VACUOUS
    if not c.run(check_soc, seq, R).proven:
        return VACUOUS
    _require(c.run(check_o_convergence, seq, R).proven, "increasing soc sequence not order convergent")
    return PASS


def t_soc_uniqueness(g: Gen, c: Ctx):
    seq, R = g.soc()
    R2 = R + g.nonzero_matrix(*seq.shape)
    c.note(seq=seq, R=R, R2=R2)
    if not c.run(check_soc, seq, R).proven:
        return VACUOUS
    _require(not c.run(check_soc, seq, R2).proven, "two distinct soc limits proven")
    return PASS


def t_characterization(g: Gen, c: Ctx):
    seq, R = g.soc()
    c.note(seq=seq, R=R)
    if not c.run(check_soc, seq, R).proven:
        return VACUOUS
    w = construct_witness(seq, R, "soc", c.cfg)
    _require(w.verdict.proven and not w.verdict.refuted, "witness not order convergent")
    if recheck(w.verdict, c.recheck_horizon).ok is False:
        raise TrialFailure("witness certificate rejected")
    _require(density_exact(w.agreement).is_one(), "agreement set not of density one")
    # converse
    m, k = seq.shape
    core, R2 = g.soc_core(m, k)
    if not c.run(check_o_convergence, core, R2).proven:
        return VACUOUS
    _require(c.run(check_soc, Piecewise(g.bad_set(), g.junk(m, k), core), R2).proven, "converse fails")
    return PASS


def t_soc_squeeze(g: Gen, c: Ctx):
    m, k = g.shape()
    U, L = g.soc(m, k)
    low = Piecewise(g.bad_set(), Const(-g.matrix(m, k, positive=True)), ScaledOp(-g.null(), g.matrix(m, k, positive=True)))
    high = Piecewise(g.bad_set(), Const(g.matrix(m, k, positive=True)), ScaledOp(g.null(), g.matrix(m, k, positive=True)))
    Rn, Tn = Sum(U, low), Sum(U, high)
    c.note(R=Rn, U=U, T=Tn, L=L)
    _check_upto(30, lambda n: op_leq(Rn.at(n), U.at(n)) and op_leq(U.at(n), Tn.at(n)), "order fails")
    if not (c.run(check_soc, Rn, L).proven and c.run(check_soc, Tn, L).proven):
        return VACUOUS
    _require(c.run(check_soc, U, L).proven, "squeezed sequence not soc")
    return PASS


def _masked(g: Gen) -> tuple[int, int, set, set]:
    m, k = g.shape()
    cells = [(i, j) for i in range(m) for j in range(k)]
    if len(cells) == 1:
        return m, k, set(cells), set()
    inside = set(g.rng.sample(cells, g.rng.randint(1, len(cells) - 1)))
    return m, k, inside, set(cells) - inside


def t_disjointness(g: Gen, c: Ctx):
    m, k, support, rest = _masked(g)
    g.mask = frozenset(rest)
    seq, R = g.soc(m, k)
    g.mask = frozenset(support)
    U = g.matrix(m, k)
    g.mask = None
    c.note(seq=seq, R=R, U=U)
    _check_upto(50, lambda n: op_meet(op_modulus(seq.at(n)), op_modulus(U)).is_zero(), "R_n not disjoint from U")
    if not c.run(check_soc, seq, R).proven:
        return VACUOUS
    _require(op_meet(op_modulus(R), op_modulus(U)).is_zero(), "limit not disjoint from U")
    return PASS


def t_band_closed(g: Gen, c: Ctx):
    m, k, support, rest = _masked(g)
    g.mask = frozenset(rest)
    seq, R = g.soc(m, k)
    g.mask = None
    band = BandPattern.entries(support)
    c.note(seq=seq, R=R, band=sorted(support))
    _check_upto(50, lambda n: band_contains(band, seq.at(n)), "R_n leaves the band")
    if not c.run(check_soc, seq, R).proven:
        return VACUOUS
    _require(band_contains(band, R), "limit outside the band")
    return PASS


def t_order_continuous(g: Gen, c: Ctx):
    # every matrix is order continuous; the band of order continuous operators is everything
    seq, R = g.soc()
    band = BandPattern.full(seq.shape)
    c.note(seq=seq, R=R)
    if not c.run(check_soc, seq, R).proven:
        return VACUOUS
    _require(band_contains(band, R), "limit outside the order continuous band")
    return PASS


def t_composition_soc(g: Gen, c: Ctx):
    seq, R = g.soc()
    T = g.matrix(g.rng.randint(1, g.size), seq.shape[0], positive=True)
    c.note(seq=seq, R=R, T=T)
    if not c.run(check_soc, seq, R).proven:
        return VACUOUS
    _require(c.run(check_soc, ComposeLeft(T, seq), compose(T, R)).proven, "T o R_n not soc")
    return PASS


def t_band_projection(g: Gen, c: Ctx):
    seq, R = g.soc()
    m = seq.shape[0]
    coords = [i for i in range(m) if g.rng.random() < 0.5]
    P = band_projection(BandPattern.coords(coords), m)
    c.note(seq=seq, R=R, coords=coords)
    if not c.run(check_soc, seq, R).proven:
        return VACUOUS
    _require(c.run(check_soc, ComposeLeft(P, seq), compose(P, R)).proven, "P o R_n not soc")
    return PASS


def t_st_conv_implies_st_ob(g: Gen, c: Ctx):
    seq, R = g.soc()
    c.note(seq=seq, R=R)
    if not c.run(check_soc, seq, R).proven:
        return VACUOUS
    _require(c.run(check_stat_order_bounded, seq).proven, "not statistically order bounded")
    return PASS


def t_decomposition_bounded(g: Gen, c: Ctx):
    m, k = g.shape()
    core, _ = g.soc_core(m, k)
    if g.size > 1 and g.rng.random() < 0.5:
        # bounded but not convergent: two limits on the evens and odds
        core = Piecewise(AP(2, 2), Const(g.matrix(m, k)), core)
    seq = g.wrap(core)
    if g.size > 1:
        seq = Piecewise(g.bad_set(), ScaledOp(g.rng.choice(_GROW_RF), g.nonzero_matrix(m, k)), seq)
    c.note(seq=seq)
    if not c.run(check_stat_order_bounded, seq).proven:
        return VACUOUS
    try:
        d = decompose_stat_bounded(seq, c.cfg)
    except (AssertionError, PreconditionError) as exc:
        raise TrialFailure(f"decomposition failed: {exc}") from exc
    N = min(200, c.cfg.horizon)
    _check_upto(N, lambda n: d.T_seq.at(n) + d.U_seq.at(n) == seq.at(n), "T + U differs from R")
    _check_upto(N, lambda n: op_leq(op_modulus(d.T_seq.at(n)), d.bound), "T exceeds the bound")
    _require(density_exact(d.support).is_zero(), "residual support not of density zero")
    return PASS


_TRIALS: dict[str, Callable[[Gen, Ctx], str]] = {
    "implication": t_implication,
    "operator-uniqueness": t_operator_uniqueness,
    "decomposition-monotone": t_decomposition_monotone,
    "additivity": t_additivity,
    "lattice-operations": t_lattice_operations,
    "squeeze": t_squeeze,
    "composition": t_composition,
    "right-composition": t_right_composition,
    "wedge-zero": t_wedge_zero,
    "implication-soc": t_implication_soc,
    "linearity-soc": t_linearity_soc,
    "lattice-soc": t_lattice_soc,
    "positive-negative-parts": t_positive_negative_parts,
    "monotonicity-soc": t_monotonicity_soc,
    "soc-uniqueness": t_soc_uniqueness,
    "characterization": t_characterization,
    "soc-squeeze": t_soc_squeeze,
    "disjointness": t_disjointness,
    "band-closed": t_band_closed,
    "order-continuous": t_order_continuous,
    "composition-soc": t_composition_soc,
    "band-projection": t_band_projection,
    "st-conv-implies-st-ob": t_st_conv_implies_st_ob,
    "decomposition-bounded": t_decomposition_bounded,
}
assert set(_TRIALS) == set(THEOREMS)


@dataclass
class TheoremReport:
    theorem: str
    trials: int
    passed: int = 0
    failed: int = 0
    vacuous: int = 0
    certificates_checked: int = 0
    counterexample: dict | None = None
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "statement": THEOREMS[self.theorem],
            "trials": self.trials,
            "passed": self.passed,
            "failed": self.failed,
            "vacuous": self.vacuous,
            "certificates_checked": self.certificates_checked,
            "counterexample": self.counterexample,
        }

    def __str__(self):
        line = f"{self.theorem}: {self.passed} passed, {self.failed} failed, {self.vacuous} vacuous of {self.trials}"
        if self.counterexample:
            line += f"\n  counterexample: {self.counterexample}"
        return line


def _one(theorem: str, seed, trial: int, size: int, cfg: CheckConfig, horizon: int):
    rng = random.Random(f"{theorem}:{seed}:{trial}")
    g = Gen(rng, size)
    c = Ctx(cfg, horizon)
    try:
        outcome = _TRIALS[theorem](g, c)
    except TrialFailure as exc:
        return "fail", c, str(exc)
    return outcome, c, ""


def verify_theorem(
    theorem: str, trials: int = 200, cfg: CheckConfig | None = None, recheck_horizon: int = 40
) -> TheoremReport:
    """Run randomized trials of one theorem; see ``THEOREMS`` for the ids."""
    if theorem not in _TRIALS:
        raise KeyError(f"unknown theorem {theorem!r}; known: {', '.join(THEOREMS)}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    cfg = cfg or CheckConfig(horizon=100)
    seed = 0 if cfg.seed is None else cfg.seed
    rep = TheoremReport(theorem, trials)
    t0 = time.perf_counter()
    for t in range(trials):
        outcome, c, why = _one(theorem, seed, t, 3, cfg, recheck_horizon)
        rep.certificates_checked += c.checked
        if outcome == PASS:
            rep.passed += 1
        elif outcome == VACUOUS:
            rep.vacuous += 1
        else:
            rep.failed += 1
            if rep.counterexample is None:
                rep.counterexample = _minimize(theorem, seed, t, cfg, recheck_horizon, c, why)
    rep.seconds = time.perf_counter() - t0
    return rep


def _minimize(theorem, seed, trial, cfg, horizon, c, why) -> dict:
    """Smallest generator size that still fails with the same random stream."""
    best = {"trial": trial, "size": 3, "reason": why, "instance": c.instance}
    for size in (1, 2):
        outcome, c2, why2 = _one(theorem, seed, trial, size, cfg, horizon)
        if outcome == "fail":
            return {"trial": trial, "size": size, "reason": why2, "instance": c2.instance}
    return best
