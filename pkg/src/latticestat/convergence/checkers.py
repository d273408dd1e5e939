"""Certificate-producing checkers for order and statistical order convergence.

Every checker works on the piecewise rational normal form of the tree
(``opseq.analyze``).  Density-one witness sets are always built from the cells
of that form: the checkers never look for J empirically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Iterator

from ..density import (
    EMPTY,
    NATURALS,
    Cofinite,
    IndexSet,
    Intersection,
    Predicate,
    complement,
    count_upto,
    density_exact,
    finite_bound,
    intersect,
    is_finite,
    next_member,
    simplify,
    union_all,
)
from ..lattice import LatticeVector, basis, ones
from ..operators import Operator, column, compose, op_join, op_leq, op_modulus
from ..opseq import (
    Abs,
    AtNext,
    ComposeRight,
    Const,
    CoordFunctional,
    NotAnalyzable,
    OperatorSequence,
    Piece,
    Piecewise,
    Prefix,
    RFMatrix,
    ShapeError,
    abs_form,
    analyze,
    const_form,
    form_at,
    form_sequence,
    minus,
    sub_forms,
    truncations,
    zero_like,
)
from ..ratfunc import Infinite, RationalFunction, coeff_limit, decrease_onset, sign_onset_rf
from ..verdict import (
    CheckConfig,
    DecreasingWitness,
    DistinctLimitAlong,
    DominatedOnDensityOne,
    MassLowerBound,
    OrderBoundOnDensityOne,
    PointwiseFamily,
    Status,
    TailSupWitness,
    UnboundedAlong,
    Verdict,
)

# explicit prefixes longer than this are not built; the verdict is Undetermined
ONSET_CAP = 100_000

_ZERO = RationalFunction.const(0)


class PreconditionError(ValueError):
    """A constructive procedure was asked to run on an unproven hypothesis."""

    def __init__(self, message: str, verdict: Verdict):
        super().__init__(message)
        self.verdict = verdict


# ------------------------------------------------------------------ helpers


def _check_shape(seq: OperatorSequence, R: Operator):
    if seq.shape != R.shape:
        raise ShapeError(f"sequence of shape {seq.shape} compared with an operator of shape {R.shape}")


def _verdict(status, notion, cfg, seq, target, certificate=None, narrative="", evidence=None):
    return Verdict(
        status,
        notion,
        certificate=certificate,
        narrative=narrative,
        horizon=cfg.horizon,
        tolerance=cfg.tolerance,
        seed=cfg.seed,
        sequence=seq,
        target=target,
        evidence=evidence or {},
    )


def form_limit(form: RFMatrix) -> tuple[tuple[Fraction | Infinite, ...], ...]:
    return tuple(tuple(coeff_limit(f) for f in r) for r in form)


def _limit_matches(lim, R: Operator) -> bool:
    return all(a == b for r, s in zip(lim, R.entries) for a, b in zip(r, s))


def _first_infinite(lim) -> tuple[int, int] | None:
    for i, r in enumerate(lim):
        for j, a in enumerate(r):
            if isinstance(a, Infinite):
                return i, j
    return None


def _limit_op(lim, like: Operator) -> Operator:
    return Operator(like.domain, like.codomain, lim)


@dataclass
class _Split:
    good: list[Piece]
    finite: list[Piece]
    bad: list[tuple[Piece, tuple]]


def _split(pieces, R: Operator) -> _Split:
    good, fin, bad = [], [], []
    for p in pieces:
        if is_finite(p.cell) is True:
            fin.append(p)
            continue
        lim = form_limit(p.form)
        if _limit_matches(lim, R):
            good.append(p)
        else:
            bad.append((p, lim))
    return _Split(good, fin, bad)


def _refutation(p: Piece, lim, R: Operator):
    ij = _first_infinite(lim)
    if ij is not None:
        i, j = ij
        return UnboundedAlong(p.cell, p.form[i][j], ij, (p,)), f"entry {ij} grows like {p.form[i][j]} along {p.cell}"
    L = _limit_op(lim, R)
    return DistinctLimitAlong(p.cell, L, (p,)), f"along {p.cell} the sequence tends to {L}, not {R}"


def describe(seq: OperatorSequence) -> str:
    """Short text for narratives; long explicit prefixes are summarised."""
    if isinstance(seq, Prefix):
        return f"{len(seq.values)} explicit values, then {seq.tail}"
    return str(seq)


def _max_entry(T: Operator) -> Fraction:
    return max((a for r in T.entries for a in r), default=Fraction(0))


def tail_sup_evidence(seq: OperatorSequence, R: Operator, N: int) -> TailSupWitness:
    """``Y_n = sup_{n<=k<=N} |R_k - R|`` (largest entry) at a few checkpoints."""
    vals = [_max_entry(op_modulus(seq.at(k) - R)) for k in range(1, N + 1)]
    for k in range(N - 2, -1, -1):
        vals[k] = max(vals[k], vals[k + 1])
    checkpoints = sorted({1, 10, 100, 1000, N // 2, N} & set(range(1, N + 1)))
    return TailSupWitness(tuple(checkpoints), tuple(vals[c - 1] for c in checkpoints), seq)


def _undetermined(notion, cfg, seq, R, why, with_tail=True):
    evidence = {}
    if with_tail and R is not None:
        try:
            evidence["tail_sup"] = tail_sup_evidence(seq, R, min(cfg.horizon, 2000))
        except Exception as exc:  # evidence is best effort
            evidence["tail_sup_error"] = str(exc)
    return _verdict(Status.UNDETERMINED, notion, cfg, seq, R, narrative=why, evidence=evidence)


def _truncation_guard(seq, R, notion, cfg) -> Verdict | None:
    Ds = truncations(seq)
    if not Ds:
        return None
    if isinstance(seq, CoordFunctional) and (R is None or R.is_zero()) and notion in ("o", "soc", "statbound"):
        D = seq.truncation
        M = NATURALS
        count = count_upto(M, D)
        cert = MassLowerBound(M, Fraction(1), D, ceil(D / 2), count)
        return _verdict(
            Status.REFUTED,
            notion,
            cfg,
            seq,
            R,
            cert,
            f"any dominating functional must be >= e_j for every j in a density-one set M; "
            f"at truncation {D} that forces l1 mass >= {ceil(D / 2)}, and the bound grows without limit in D",
            {"truncation": D},
        )
    return _verdict(
        Status.UNDETERMINED,
        notion,
        cfg,
        seq,
        R,
        narrative=f"tree uses coordinate functionals truncated at {list(Ds)}; the truncated model is "
        "eventually zero, which says nothing about the untruncated sequence",
        evidence={"truncations": list(Ds)},
    )


# ------------------------------------------------------------------ dominators


def _entry_majorant(fs: list[RationalFunction]) -> tuple[RationalFunction, int]:
    """``c/n^k`` above every f eventually; returns it and the onset."""
    fs = [f for f in fs if not f.is_zero()]
    if not fs:
        return _ZERO, 1
    k = min(f.decay_order() for f in fs)
    c = max(f.leading_ratio() for f in fs if f.decay_order() == k)
    g = RationalFunction.monomial(c, -k)
    onset = 1
    for f in fs:
        s, n0 = sign_onset_rf(g - f)
        if s < 0:
            g = RationalFunction.monomial(2 * c, -k)
            return _entry_majorant_fixed(g, fs)
        onset = max(onset, n0)
    return g, onset


def _entry_majorant_fixed(g, fs):
    onset = 1
    for f in fs:
        s, n0 = sign_onset_rf(g - f)
        assert s >= 0, "doubled leading coefficient must dominate"
        onset = max(onset, n0)
    return g, onset


def build_dominator(
    seq: OperatorSequence, R: Operator, good: list[Piece], J: IndexSet, extra_onset: int = 1
) -> tuple[OperatorSequence, int] | None:
    """A sequence decreasing to zero from n = 1 with ``|R_n - R| <= dom_n`` on J.

    The tail is an entrywise majorant ``c/n^k`` of the moduli of the good
    forms; the first K values are exact suprema patched in by ``Prefix``.
    Returns None when the patch would be longer than ``ONSET_CAP``.
    """
    m, k = R.shape
    diffs = []
    K = extra_onset - 1
    for p in good:
        form, n0 = abs_form(sub_forms(p.form, const_form(R)))
        diffs.append(form)
        K = max(K, p.start - 1, n0 - 1)
    rows = []
    for i in range(m):
        row = []
        for j in range(k):
            g, n0 = _entry_majorant([d[i][j] for d in diffs])
            K = max(K, n0 - 1)
            row.append(g)
        rows.append(tuple(row))
    G: RFMatrix = tuple(rows)
    if K > ONSET_CAP:
        return None
    tail = form_sequence(G, seq)
    if K <= 0:
        return tail, 0
    values = [None] * K
    nxt = form_at(G, K + 1, seq.domain, seq.codomain)
    for n in range(K, 0, -1):
        if J.contains(n):
            nxt = op_join(nxt, op_modulus(seq.at(n) - R))
        values[n - 1] = nxt
    return Prefix(tuple(values), tail), K


# ------------------------------------------------------------------ o-convergence


def check_o_convergence(seq: OperatorSequence, R: Operator, cfg: CheckConfig | None = None) -> Verdict:
    """Order convergence ``R_n -> R`` with a dominating sequence decreasing to zero."""
    cfg = cfg or CheckConfig()
    _check_shape(seq, R)
    guard = _truncation_guard(seq, R, "o", cfg)
    if guard is not None:
        return guard
    try:
        pieces = analyze(seq)
    except NotAnalyzable as exc:
        return _undetermined("o", cfg, seq, R, f"{exc}; finite-horizon evidence only")
    split = _split(pieces, R)
    unknown = []
    for p, lim in split.bad:
        if is_finite(p.cell) is False:
            cert, why = _refutation(p, lim, R)
            return _verdict(Status.REFUTED, "o", cfg, seq, R, cert, why + " (an infinite set)")
        unknown.append(p)
    if unknown:
        return _undetermined("o", cfg, seq, R, f"cannot decide whether {unknown[0].cell} is finite")
    extra = 1
    for p in split.finite:
        b = finite_bound(p.cell)
        if b is None:
            return _undetermined("o", cfg, seq, R, f"no bound for the finite set {p.cell}")
        extra = max(extra, b + 1)
    built = build_dominator(seq, R, split.good, NATURALS, extra)
    if built is None:
        return _undetermined("o", cfg, seq, R, "domination starts beyond the explicit prefix cap")
    dom, K = built
    cert = DominatedOnDensityOne(NATURALS, dom, R, tuple(split.good))
    return _verdict(
        Status.PROVEN,
        "o",
        cfg,
        seq,
        R,
        cert,
        f"|R_n - R| <= {describe(dom)} for every n, and the dominator decreases to zero",
        {"prefix_length": K},
    )


# ------------------------------------------------------------------ doc


def _compat_onset(a: RFMatrix, b: RFMatrix) -> int | None:
    """n0 with ``a(n) >= b(n+1)`` entrywise for n >= n0, or None."""
    onset = 1
    for r, s in zip(a, b):
        for f, g in zip(r, s):
            sgn, n0 = sign_onset_rf(f - g.shift(1))
            if sgn < 0:
                return None
            onset = max(onset, n0)
    return onset


def _positive_density_bad(bad, notion, cfg, seq, S):
    for p, lim in bad:
        d = density_exact(p.cell)
        if d.known and d.value > 0:
            cert, why = _refutation(p, lim, S)
            return _verdict(
                Status.REFUTED, notion, cfg, seq, S, cert, why + f"; that set has density {d.value} > 0"
            )
    return None


def _doc_core(seq: OperatorSequence, S: Operator, cfg: CheckConfig, notion: str = "doc") -> Verdict:
    try:
        pieces = analyze(seq)
    except NotAnalyzable as exc:
        return _undetermined(notion, cfg, seq, S, f"{exc}; finite-horizon evidence only")
    split = _split(pieces, S)
    good = list(split.good)
    dropped: list[Piece] = []
    N0 = 1
    changed = True
    while changed:
        changed = False
        N0 = 1
        for a in good:
            N0 = max(N0, a.start)
            for b in good:
                n0 = _compat_onset(a.form, b.form)
                if n0 is None:
                    victim = next((x for x in (b, a) if density_exact(x.cell).is_zero()), None)
                    if victim is None:
                        return _undetermined(
                            notion, cfg, seq, S, f"the forms on {a.cell} and {b.cell} interleave without decreasing"
                        )
                    good.remove(victim)
                    dropped.append(victim)
                    changed = True
                    break
                N0 = max(N0, n0)
            if changed:
                break
    excluded = [p.cell for p in split.finite] + [p.cell for p in dropped] + [p.cell for p, _ in split.bad]
    B = union_all(excluded)
    if not density_exact(B).is_zero():
        refuted = _positive_density_bad(split.bad, notion, cfg, seq, S)
        if refuted is not None:
            return refuted
        return _undetermined(notion, cfg, seq, S, f"the exceptional set {B} has no exact density zero")
    if not good:
        return _undetermined(notion, cfg, seq, S, "no cell carries the limit")
    if N0 > ONSET_CAP:
        return _undetermined(notion, cfg, seq, S, "decrease starts beyond the explicit prefix cap")
    J0 = simplify(complement(B))
    nxt = seq.at(next_member(J0, N0))
    early_out = []
    for n in range(N0 - 1, 0, -1):
        if not J0.contains(n):
            continue
        v = seq.at(n)
        if op_leq(nxt, v):
            nxt = v
        else:
            early_out.append(n)
    J = simplify(intersect(J0, Cofinite(early_out))) if early_out else J0
    cert = DecreasingWitness(J, S, tuple(good), N0)
    return _verdict(
        Status.PROVEN,
        notion,
        cfg,
        seq,
        S,
        cert,
        f"R_j decreases to {S} along J = {J}, which has density 1",
        {"dropped_early": sorted(early_out)},
    )


def check_doc(seq: OperatorSequence, S: Operator, cfg: CheckConfig | None = None) -> Verdict:
    """Statistically order decreasing to S: decreasing along a density-one J with infimum S."""
    cfg = cfg or CheckConfig()
    _check_shape(seq, S)
    guard = _truncation_guard(seq, S, "doc", cfg)
    if guard is not None:
        return guard
    return _doc_core(seq, S, cfg, "doc")


# ------------------------------------------------------------------ soc


def _soc_core(seq: OperatorSequence, R: Operator, cfg: CheckConfig, notion: str = "soc") -> Verdict:
    try:
        pieces = analyze(seq)
    except NotAnalyzable as exc:
        return _undetermined(notion, cfg, seq, R, f"{exc}; finite-horizon evidence only")
    split = _split(pieces, R)
    B = union_all([p.cell for p in split.finite] + [p.cell for p, _ in split.bad])
    if not density_exact(B).is_zero():
        refuted = _positive_density_bad(split.bad, notion, cfg, seq, R)
        if refuted is not None:
            return refuted
        return _undetermined(notion, cfg, seq, R, f"the exceptional set {B} has no exact density zero")
    J = simplify(complement(B))
    built = build_dominator(seq, R, split.good, J)
    if built is None:
        return _undetermined(notion, cfg, seq, R, "domination starts beyond the explicit prefix cap")
    dom, K = built
    sanity = _doc_core(dom, zero_like(seq), cfg)
    if not sanity.proven:
        return _undetermined(notion, cfg, seq, R, f"dominator {describe(dom)} not shown to decrease to zero")
    cert = DominatedOnDensityOne(J, dom, R, tuple(split.good))
    phrase = "classical order convergence" if J == NATURALS else f"J = {J} has density 1"
    return _verdict(
        Status.PROVEN,
        notion,
        cfg,
        seq,
        R,
        cert,
        f"|R_j - R| <= {describe(dom)} for j in J; {phrase}",
        {"prefix_length": K},
    )


def check_soc(seq: OperatorSequence, R: Operator, cfg: CheckConfig | None = None) -> Verdict:
    """Statistical order convergence: domination on a density-one set by a doc-to-zero sequence."""
    cfg = cfg or CheckConfig()
    _check_shape(seq, R)
    guard = _truncation_guard(seq, R, "soc", cfg)
    if guard is not None:
        return guard
    return _soc_core(seq, R, cfg, "soc")


# ------------------------------------------------------------------ pointwise


def default_test_vectors(seq: OperatorSequence) -> tuple[LatticeVector, ...]:
    space = seq.domain
    return tuple(basis(space, i) for i in range(space.dim)) + (ones(space),)


def _pointwise(seq, R, cfg, notion, core) -> Verdict:
    _check_shape(seq, R)
    vectors = cfg.test_vectors if cfg.test_vectors is not None else default_test_vectors(seq)
    if not vectors:
        raise ValueError("no positive test vectors")
    for u in vectors:
        if u.space.dim != seq.domain.dim:
            raise ShapeError(f"test vector of dimension {u.space.dim} for a domain of dimension {seq.domain.dim}")
    subs = []
    for u in vectors:
        col = column(LatticeVector(seq.domain, u.coords))
        subs.append(core(ComposeRight(seq, col), compose(R, col), cfg, notion))
    statuses = {v.status for v in subs}
    sampled = f"positive cone sampled at {len(vectors)} vectors, not exhausted"
    cert = PointwiseFamily(tuple(vectors), tuple(subs))
    if Status.REFUTED in statuses:
        k = next(i for i, v in enumerate(subs) if v.refuted)
        return _verdict(
            Status.REFUTED, notion, cfg, seq, R, cert, f"fails at test vector {vectors[k]}: {subs[k].narrative}"
        )
    if statuses == {Status.PROVEN}:
        return _verdict(Status.PROVEN, notion, cfg, seq, R, cert, f"every test vector passes; {sampled}")
    return _verdict(
        Status.UNDETERMINED,
        notion,
        cfg,
        seq,
        R,
        narrative=f"some test vectors undetermined; {sampled}",
        evidence={"pointwise": [v.to_json() for v in subs]},
    )


def check_dopc(seq: OperatorSequence, S: Operator, cfg: CheckConfig | None = None) -> Verdict:
    """Pointwise statistically order decreasing, on the configured positive test vectors."""
    return _pointwise(seq, S, cfg or CheckConfig(), "dopc", _doc_core)


def check_socp(seq: OperatorSequence, R: Operator, cfg: CheckConfig | None = None) -> Verdict:
    """Pointwise statistical order convergence, on the configured positive test vectors."""
    return _pointwise(seq, R, cfg or CheckConfig(), "socp", _soc_core)


# ------------------------------------------------------------------ order boundedness


def _sup_abs_tail(f: RationalFunction, start: int) -> Fraction | None:
    """``sup_{n >= start} |f(n)|`` for a function with a finite limit."""
    if f.is_zero():
        return Fraction(0)
    s, n_sign = f.eventual_sign()
    g = -f if s < 0 else f
    _, n_mono = sign_onset_rf(g - g.shift(1))
    t = max(start, n_sign, n_mono)
    if t > ONSET_CAP:
        return None
    lim = abs(coeff_limit(f))
    return max([lim] + [abs(f(n)) for n in range(start, t + 1)])


def check_stat_order_bounded(seq: OperatorSequence, cfg: CheckConfig | None = None) -> Verdict:
    """Statistically order bounded: ``|R_j| <= S`` on a density-one set J."""
    cfg = cfg or CheckConfig()
    guard = _truncation_guard(seq, None, "statbound", cfg)
    if guard is not None:
        return guard
    try:
        pieces = analyze(seq)
    except NotAnalyzable as exc:
        return _undetermined("statbound", cfg, seq, None, str(exc), with_tail=False)
    unbounded, bounded, fin = [], [], []
    for p in pieces:
        if is_finite(p.cell) is True:
            fin.append(p)
            continue
        lim = form_limit(p.form)
        (unbounded if _first_infinite(lim) else bounded).append((p, lim))
    U = union_all([p.cell for p, _ in unbounded])
    if not density_exact(U).is_zero():
        for p, lim in unbounded:
            d = density_exact(p.cell)
            if d.known and d.value > 0:
                i, j = _first_infinite(lim)
                cert = UnboundedAlong(p.cell, p.form[i][j], (i, j), (p,))
                return _verdict(
                    Status.REFUTED,
                    "statbound",
                    cfg,
                    seq,
                    None,
                    cert,
                    f"entry {(i, j)} grows like {p.form[i][j]} on {p.cell}, a set of density {d.value}; "
                    "every density-one set meets it infinitely often",
                )
        return _undetermined("statbound", cfg, seq, None, f"{U} has no exact density zero", with_tail=False)

    # route through statistical convergence when the bounded cells share a limit
    limits = {lim for _, lim in bounded}
    if len(limits) == 1:
        L = _limit_op(next(iter(limits)), zero_like(seq))
        v = _soc_core(seq, L, cfg, "soc")
        if v.proven:
            cert = v.certificate
            S = op_modulus(L) + cert.dominator.at(1)
            out = OrderBoundOnDensityOne(cert.J, S, cert.tail)
            return _verdict(
                Status.PROVEN,
                "statbound",
                cfg,
                seq,
                None,
                out,
                f"|R_j| <= |L| + S_1 = {S} on J = {cert.J}, from R_n soc {L}",
                {"soc_limit": L},
            )

    J = simplify(complement(U))
    m, k = seq.shape
    bound = [[Fraction(0)] * k for _ in range(m)]
    K = 0
    for p, _ in bounded:
        K = max(K, p.start - 1)
        for i in range(m):
            for j in range(k):
                s = _sup_abs_tail(p.form[i][j], p.start)
                if s is None:
                    return _undetermined("statbound", cfg, seq, None, "bound search beyond the cap", with_tail=False)
                bound[i][j] = max(bound[i][j], s)
    for p in fin:
        b = finite_bound(p.cell)
        if b is None:
            return _undetermined("statbound", cfg, seq, None, f"no bound for {p.cell}", with_tail=False)
        K = max(K, b)
    if K > ONSET_CAP:
        return _undetermined("statbound", cfg, seq, None, "bound search beyond the cap", with_tail=False)
    S = Operator(seq.domain, seq.codomain, tuple(tuple(r) for r in bound))
    for n in range(1, K + 1):
        if J.contains(n):
            S = op_join(S, op_modulus(seq.at(n)))
    cert = OrderBoundOnDensityOne(J, S, tuple(p for p, _ in bounded))
    return _verdict(
        Status.PROVEN, "statbound", cfg, seq, None, cert, f"|R_j| <= {S} for every j in J = {J}"
    )


# ------------------------------------------------------------------ constructions


@dataclass(frozen=True)
class Decomposition:
    """``R_n = T_n + U_n`` with T order bounded and U supported on a density-zero set."""

    T_seq: OperatorSequence
    U_seq: OperatorSequence
    bound: Operator
    J: IndexSet
    support: IndexSet
    verdict: Verdict
    checked_upto: int

    def __iter__(self) -> Iterator[OperatorSequence]:
        return iter((self.T_seq, self.U_seq))


def decompose_stat_bounded(seq: OperatorSequence, cfg: CheckConfig | None = None) -> Decomposition:
    cfg = cfg or CheckConfig()
    v = check_stat_order_bounded(seq, cfg)
    if not v.proven:
        raise PreconditionError(f"not shown statistically order bounded: {v.narrative}", v)
    J, S = v.certificate.J, v.certificate.bound
    theta = Const(zero_like(seq))
    T = seq if J == NATURALS else Piecewise(J, seq, theta)
    U = theta if J == NATURALS else Piecewise(J, theta, seq)
    support = Intersection(complement(J), Predicate(lambda n: not seq.at(n).is_zero(), "nonzero"))
    N = min(cfg.horizon, 1000)
    for n in range(1, N + 1):
        t, u, r = T.at(n), U.at(n), seq.at(n)
        if t + u != r:
            raise AssertionError(f"decomposition does not recombine at n={n}")
        if not op_leq(op_modulus(t), S):
            raise AssertionError(f"bounded part exceeds {S} at n={n}")
    if not density_exact(support).is_zero():
        raise AssertionError(f"residual support {support} not of density zero")
    return Decomposition(T, U, S, J, support, v, N)


@dataclass(frozen=True)
class Witness:
    """Result of ``construct_witness``: the sequence, the agreement set and checks."""

    mode: str
    sequence: OperatorSequence
    agreement: IndexSet
    tail_dominator: OperatorSequence | None
    verdict: Verdict
    checked_upto: int


def _agreement_check(seq, W, D, N):
    for n in range(1, N + 1):
        if D.contains(n) and W.at(n) != seq.at(n):
            raise AssertionError(f"witness disagrees with the sequence at n={n} in the agreement set")


def construct_witness(
    seq: OperatorSequence, R: Operator, mode: str = "soc", cfg: CheckConfig | None = None
) -> Witness:
    """soc: an order convergent T with R_n = T_n on a density-one D.
    doc: a decreasing P with P_n = R_n on a density-one J."""
    cfg = cfg or CheckConfig()
    N = min(cfg.horizon, 2000)
    if mode == "soc":
        v = check_soc(seq, R, cfg)
        if not v.proven:
            raise PreconditionError(f"soc not proven: {v.narrative}", v)
        D = v.certificate.J
        T = seq if D == NATURALS else Piecewise(D, seq, Const(R))
        ov = check_o_convergence(T, R, cfg)
        if not ov.proven:
            raise AssertionError(f"constructed witness is not order convergent: {ov.narrative}")
        # tail-sup dominator: Y_n = Q at the next index of D; tight when |R_j - R| decreases along D
        A = Abs(minus(seq, R))
        along = _doc_core(A, zero_like(seq), cfg)
        tight = along.proven and intersect(D, complement(along.certificate.J)) == EMPTY
        Y = AtNext(D, A) if tight else AtNext(D, v.certificate.dominator)
        for n in range(1, N + 1):
            y = Y.at(n)
            if not op_leq(op_modulus(T.at(n) - R), y) or not op_leq(Y.at(n + 1), y):
                raise AssertionError(f"tail-sup dominator fails at n={n}")
        _agreement_check(seq, T, D, N)
        return Witness("soc", T, D, Y, ov, N)
    if mode == "doc":
        v = check_doc(seq, R, cfg)
        if not v.proven:
            raise PreconditionError(f"doc not proven: {v.narrative}", v)
        J = v.certificate.J
        forms = {p.form for p in v.certificate.tail}
        P: OperatorSequence = AtNext(J, seq)
        if len(forms) == 1:
            form = next(iter(forms))
            if all(decrease_onset(f) == 1 for r in form for f in r):
                cand = form_sequence(form, seq)
                try:
                    _agreement_check(seq, cand, J, N)
                    P = cand
                except AssertionError:
                    pass
        for n in range(1, N + 1):
            if not op_leq(P.at(n + 1), P.at(n)):
                raise AssertionError(f"witness not decreasing at n={n}")
        _agreement_check(seq, P, J, N)
        pv = _doc_core(P, R, cfg) if not isinstance(P, AtNext) else v
        return Witness("doc", P, J, None, pv, N)
    raise ValueError(f"unknown witness mode {mode!r}")


__all__ = [
    "PreconditionError",
    "Decomposition",
    "Witness",
    "check_o_convergence",
    "check_doc",
    "check_dopc",
    "check_soc",
    "check_socp",
    "check_stat_order_bounded",
    "decompose_stat_bounded",
    "construct_witness",
    "build_dominator",
    "default_test_vectors",
    "tail_sup_evidence",
    "form_limit",
]
