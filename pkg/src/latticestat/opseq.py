"""Closed-form operator sequences ``n -> T_n`` and their normal form.

A sequence is a combinator tree.  ``analyze`` reduces any tree (other than
``AtNext``) to finitely many *pieces*: an index-set cell, a matrix of
rational functions, and an onset index from which, on that cell, the
sequence equals the matrix.  The cells partition the positive integers.
Lattice operations stay inside this form because the difference of two
rational functions has an eventual sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .density import EMPTY, NATURALS, IndexSet, complement, intersect, next_member
from .lattice import DimensionError, SpaceDescriptor, finite, truncated
from .operators import (
    Operator,
    compose,
    op_join,
    op_meet,
    op_modulus,
    op_pos,
    zero_op,
)
from .ratfunc import RationalFunction

RFMatrix = tuple[tuple[RationalFunction, ...], ...]

_ZERO = RationalFunction.const(0)


class ShapeError(DimensionError):
    """Inconsistent domain/codomain shapes inside a sequence tree."""


class NotAnalyzable(ValueError):
    """The tree has no piecewise rational normal form."""


def _same_shape(a, b):
    if (a.domain.dim, a.codomain.dim) != (b.domain.dim, b.codomain.dim):
        raise ShapeError(
            f"{a.codomain.dim}x{a.domain.dim} and {b.codomain.dim}x{b.domain.dim} sequences do not combine"
        )


def op_text(T: Operator) -> str:
    m, n = T.shape
    if m == n and T == _identity_like(T):
        return f"id({m})"
    if T.is_zero():
        return f"zero({m},{n})"
    return "[" + ",".join("[" + ",".join(str(a) for a in r) + "]" for r in T.entries) + "]"


def _identity_like(T: Operator) -> Operator:
    m = T.codomain.dim
    rows = tuple(tuple(Fraction(int(i == j)) for j in range(m)) for i in range(m))
    return Operator(T.domain, T.codomain, rows)


class OperatorSequence:
    """Base class; every node knows its shape and can be evaluated at n >= 1."""

    domain: SpaceDescriptor
    codomain: SpaceDescriptor

    def at(self, n: int) -> Operator:
        raise NotImplementedError

    def children(self) -> tuple["OperatorSequence", ...]:
        return ()

    @property
    def shape(self) -> tuple[int, int]:
        return self.codomain.dim, self.domain.dim

    def walk(self) -> Iterator["OperatorSequence"]:
        yield self
        for c in self.children():
            yield from c.walk()


def evaluate(seq: OperatorSequence, n: int) -> Operator:
    if n < 1:
        raise ValueError("sequences are indexed from 1")
    return seq.at(n)


@dataclass(frozen=True)
class Const(OperatorSequence):
    op: Operator

    @property
    def domain(self):
        return self.op.domain

    @property
    def codomain(self):
        return self.op.codomain

    def at(self, n):
        return self.op

    def __str__(self):
        return f"const({op_text(self.op)})"


@dataclass(frozen=True)
class ScaledOp(OperatorSequence):
    coeff: RationalFunction
    op: Operator

    def __post_init__(self):
        if not self.coeff.pole_free():
            raise ValueError(f"coefficient {self.coeff} has a pole at a positive integer")

    @property
    def domain(self):
        return self.op.domain

    @property
    def codomain(self):
        return self.op.codomain

    def at(self, n):
        return self.op * self.coeff(n)

    def __str__(self):
        return f"scaled({self.coeff}, {op_text(self.op)})"


@dataclass(frozen=True)
class RatMatrix(OperatorSequence):
    """Entrywise rational functions of n."""

    entries: RFMatrix
    domain: SpaceDescriptor
    codomain: SpaceDescriptor

    def __post_init__(self):
        if len(self.entries) != self.codomain.dim or any(len(r) != self.domain.dim for r in self.entries):
            raise ShapeError("rational matrix does not match its spaces")
        for r in self.entries:
            for f in r:
                if not f.pole_free():
                    raise ValueError(f"entry {f} has a pole at a positive integer")

    def at(self, n):
        return Operator(self.domain, self.codomain, tuple(tuple(f(n) for f in r) for r in self.entries))

    def __str__(self):
        return "ratmat([" + ",".join("[" + ",".join(str(f) for f in r) + "]" for r in self.entries) + "])"


@dataclass(frozen=True)
class CoordFunctional(OperatorSequence):
    """n-th coordinate functional on a truncated sequence space; zero past D."""

    truncation: int
    flavor: str = "c0"

    def __post_init__(self):
        if self.truncation < 1:
            raise ValueError("truncation must be positive")

    @property
    def domain(self):
        return truncated(self.truncation, self.flavor)

    @property
    def codomain(self):
        return finite(1)

    def at(self, n):
        row = tuple(Fraction(int(k == n)) for k in range(1, self.truncation + 1))
        return Operator(self.domain, self.codomain, (row,))

    def __str__(self):
        return f"coordfun({self.truncation})" if self.flavor == "c0" else f"coordfun({self.truncation},{self.flavor})"


@dataclass(frozen=True)
class Piecewise(OperatorSequence):
    J: IndexSet
    on: OperatorSequence
    off: OperatorSequence

    def __post_init__(self):
        _same_shape(self.on, self.off)

    @property
    def domain(self):
        return self.on.domain

    @property
    def codomain(self):
        return self.on.codomain

    def at(self, n):
        return self.on.at(n) if self.J.contains(n) else self.off.at(n)

    def children(self):
        return (self.on, self.off)

    def __str__(self):
        return f"piecewise({self.J}, {self.on}, {self.off})"


@dataclass(frozen=True)
class _Binary(OperatorSequence):
    a: OperatorSequence
    b: OperatorSequence

    def __post_init__(self):
        _same_shape(self.a, self.b)

    @property
    def domain(self):
        return self.a.domain

    @property
    def codomain(self):
        return self.a.codomain

    def children(self):
        return (self.a, self.b)

    def __str__(self):
        return f"{self.keyword}({self.a}, {self.b})"


class Sum(_Binary):
    keyword = "sum"

    def at(self, n):
        return self.a.at(n) + self.b.at(n)


class Join(_Binary):
    keyword = "join"

    def at(self, n):
        return op_join(self.a.at(n), self.b.at(n))


class Meet(_Binary):
    keyword = "meet"

    def at(self, n):
        return op_meet(self.a.at(n), self.b.at(n))


@dataclass(frozen=True)
class Scale(OperatorSequence):
    alpha: Fraction
    a: OperatorSequence

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))

    @property
    def domain(self):
        return self.a.domain

    @property
    def codomain(self):
        return self.a.codomain

    def at(self, n):
        return self.a.at(n) * self.alpha

    def children(self):
        return (self.a,)

    def __str__(self):
        return f"scale({self.alpha}, {self.a})"


@dataclass(frozen=True)
class _Unary(OperatorSequence):
    a: OperatorSequence

    @property
    def domain(self):
        return self.a.domain

    @property
    def codomain(self):
        return self.a.codomain

    def children(self):
        return (self.a,)

    def __str__(self):
        return f"{self.keyword}({self.a})"


class Abs(_Unary):
    keyword = "abs"

    def at(self, n):
        return op_modulus(self.a.at(n))


class PosPart(_Unary):
    keyword = "pos"

    def at(self, n):
        return op_pos(self.a.at(n))


@dataclass(frozen=True)
class ComposeLeft(OperatorSequence):
    """n -> T o A_n."""

    T: Operator
    a: OperatorSequence

    def __post_init__(self):
        if self.T.domain.dim != self.a.codomain.dim:
            raise ShapeError(f"cannot compose a {self.T.shape} operator after {self.a.shape} sequence")

    @property
    def domain(self):
        return self.a.domain

    @property
    def codomain(self):
        return self.T.codomain

    def at(self, n):
        return compose(self.T, self.a.at(n))

    def children(self):
        return (self.a,)

    def __str__(self):
        return f"composel({op_text(self.T)}, {self.a})"


@dataclass(frozen=True)
class ComposeRight(OperatorSequence):
    """n -> A_n o P."""

    a: OperatorSequence
    P: Operator

    def __post_init__(self):
        if self.a.domain.dim != self.P.codomain.dim:
            raise ShapeError(f"cannot compose a {self.a.shape} sequence after {self.P.shape} operator")

    @property
    def domain(self):
        return self.P.domain

    @property
    def codomain(self):
        return self.a.codomain

    def at(self, n):
        if isinstance(self.a, CoordFunctional):
            # e_n o P is the n-th row of P
            m = self.P.domain.dim
            row = self.P.entries[n - 1] if n <= self.a.truncation else (Fraction(0),) * m
            return Operator(self.P.domain, self.a.codomain, (row,))
        return compose(self.a.at(n), self.P)

    def children(self):
        return (self.a,)

    def __str__(self):
        return f"composer({self.a}, {op_text(self.P)})"


@dataclass(frozen=True)
class Prefix(OperatorSequence):
    """Explicit values for n = 1..len(values), then ``tail``."""

    values: tuple[Operator, ...]
    tail: OperatorSequence

    def __post_init__(self):
        for v in self.values:
            if v.shape != self.tail.shape:
                raise ShapeError("prefix value shape differs from the tail")

    @property
    def domain(self):
        return self.tail.domain

    @property
    def codomain(self):
        return self.tail.codomain

    def at(self, n):
        return self.values[n - 1] if n <= len(self.values) else self.tail.at(n)

    def children(self):
        return (self.tail,)

    def __str__(self):
        return "prefix([" + ",".join(op_text(v) for v in self.values) + f"], {self.tail})"


@dataclass(frozen=True)
class AtNext(OperatorSequence):
    """n -> A at the least element of J that is >= n."""

    J: IndexSet
    a: OperatorSequence

    @property
    def domain(self):
        return self.a.domain

    @property
    def codomain(self):
        return self.a.codomain

    def at(self, n):
        return self.a.at(next_member(self.J, n))

    def children(self):
        return (self.a,)

    def __str__(self):
        return f"atnext({self.J}, {self.a})"


def neg_part(a: OperatorSequence) -> OperatorSequence:
    return PosPart(Scale(Fraction(-1), a))


def minus(a: OperatorSequence, R: Operator) -> OperatorSequence:
    """n -> A_n - R."""
    return Sum(a, Const(-R))


def truncations(seq: OperatorSequence) -> tuple[int, ...]:
    return tuple(sorted({s.truncation for s in seq.walk() if isinstance(s, CoordFunctional)}))


# --------------------------------------------------------------------- normal form


@dataclass(frozen=True)
class Piece:
    cell: IndexSet
    form: RFMatrix
    start: int = 1

    def at(self, n: int, like: OperatorSequence) -> Operator:
        return form_at(self.form, n, like.domain, like.codomain)


def form_at(form: RFMatrix, n: int, domain, codomain) -> Operator:
    return Operator(domain, codomain, tuple(tuple(f(n) for f in r) for r in form))


def const_form(T: Operator) -> RFMatrix:
    return tuple(tuple(RationalFunction.const(a) for a in r) for r in T.entries)


def zero_form(m: int, n: int) -> RFMatrix:
    return ((_ZERO,) * n,) * m


def _zip_forms(A: RFMatrix, B: RFMatrix, fn) -> RFMatrix:
    return tuple(tuple(fn(a, b) for a, b in zip(r, s)) for r, s in zip(A, B))


def add_forms(A: RFMatrix, B: RFMatrix) -> RFMatrix:
    return _zip_forms(A, B, lambda a, b: a + b)


def sub_forms(A: RFMatrix, B: RFMatrix) -> RFMatrix:
    return _zip_forms(A, B, lambda a, b: a - b)


def scale_form(A: RFMatrix, c) -> RFMatrix:
    return tuple(tuple(f * c for f in r) for r in A)


def abs_form(A: RFMatrix) -> tuple[RFMatrix, int]:
    """Entrywise modulus, valid from the returned onset."""
    start = 1
    rows = []
    for r in A:
        row = []
        for f in r:
            s, n0 = f.eventual_sign()
            start = max(start, n0)
            row.append(-f if s < 0 else f)
        rows.append(tuple(row))
    return tuple(rows), start


def lattice_form(A: RFMatrix, B: RFMatrix, take_max: bool) -> tuple[RFMatrix, int]:
    start = 1
    rows = []
    for r, q in zip(A, B):
        row = []
        for a, b in zip(r, q):
            s, n0 = (a - b).eventual_sign()
            start = max(start, n0)
            row.append(a if (s >= 0) == take_max else b)
        rows.append(tuple(row))
    return tuple(rows), start


def compose_forms_left(T: Operator, A: RFMatrix) -> RFMatrix:
    cols = list(zip(*A))
    return tuple(
        tuple(sum((f * t for t, f in zip(row, col) if t), _ZERO) for col in cols) for row in T.entries
    )


def compose_forms_right(A: RFMatrix, P: Operator) -> RFMatrix:
    pcols = list(zip(*P.entries))
    return tuple(
        tuple(sum((f * p for f, p in zip(r, col) if p), _ZERO) for col in pcols) for r in A
    )


def _pairs(A: tuple[Piece, ...], B: tuple[Piece, ...]):
    for a in A:
        for b in B:
            cell = intersect(a.cell, b.cell)
            if cell != EMPTY:
                yield cell, a, b


@lru_cache(maxsize=8192)
def analyze(seq: OperatorSequence) -> tuple[Piece, ...]:
    """Piecewise rational normal form of ``seq``."""
    if isinstance(seq, Const):
        return (Piece(NATURALS, const_form(seq.op)),)
    if isinstance(seq, ScaledOp):
        return (Piece(NATURALS, scale_form(const_form(seq.op), seq.coeff)),)
    if isinstance(seq, RatMatrix):
        return (Piece(NATURALS, seq.entries),)
    if isinstance(seq, CoordFunctional):
        return (Piece(NATURALS, zero_form(1, seq.truncation), seq.truncation + 1),)
    if isinstance(seq, Prefix):
        k = len(seq.values) + 1
        return tuple(Piece(p.cell, p.form, max(p.start, k)) for p in analyze(seq.tail))
    if isinstance(seq, Piecewise):
        out = []
        for J, branch in ((seq.J, seq.on), (complement(seq.J), seq.off)):
            for p in analyze(branch):
                cell = intersect(J, p.cell)
                if cell != EMPTY:
                    out.append(Piece(cell, p.form, p.start))
        return tuple(out)
    if isinstance(seq, Sum):
        return tuple(
            Piece(c, add_forms(a.form, b.form), max(a.start, b.start))
            for c, a, b in _pairs(analyze(seq.a), analyze(seq.b))
        )
    if isinstance(seq, (Join, Meet)):
        out = []
        for c, a, b in _pairs(analyze(seq.a), analyze(seq.b)):
            form, n0 = lattice_form(a.form, b.form, isinstance(seq, Join))
            out.append(Piece(c, form, max(a.start, b.start, n0)))
        return tuple(out)
    if isinstance(seq, Scale):
        return tuple(Piece(p.cell, scale_form(p.form, seq.alpha), p.start) for p in analyze(seq.a))
    if isinstance(seq, Abs):
        out = []
        for p in analyze(seq.a):
            form, n0 = abs_form(p.form)
            out.append(Piece(p.cell, form, max(p.start, n0)))
        return tuple(out)
    if isinstance(seq, PosPart):
        out = []
        for p in analyze(seq.a):
            form, n0 = lattice_form(p.form, zero_form(*seq.shape), True)
            out.append(Piece(p.cell, form, max(p.start, n0)))
        return tuple(out)
    if isinstance(seq, ComposeLeft):
        return tuple(Piece(p.cell, compose_forms_left(seq.T, p.form), p.start) for p in analyze(seq.a))
    if isinstance(seq, ComposeRight):
        return tuple(Piece(p.cell, compose_forms_right(p.form, seq.P), p.start) for p in analyze(seq.a))
    raise NotAnalyzable(f"no closed normal form for {type(seq).__name__} nodes")


def form_sequence(form: RFMatrix, like: OperatorSequence) -> OperatorSequence:
    """The tidiest tree for ``n -> form(n)``: Const, ScaledOp or RatMatrix."""
    m, n = len(form), len(form[0])
    if all(f.is_constant() for r in form for f in r):
        return Const(Operator(like.domain, like.codomain, tuple(tuple(f.constant_value() for f in r) for r in form)))
    pivot = next(f for r in form for f in r if not f.is_zero())
    coeffs = []
    for r in form:
        row = []
        for f in r:
            q = f / pivot
            if not q.is_constant():
                return RatMatrix(form, like.domain, like.codomain)
            row.append(q.constant_value())
        coeffs.append(tuple(row))
    return ScaledOp(pivot, Operator(like.domain, like.codomain, tuple(coeffs)))


def zero_like(seq: OperatorSequence) -> Operator:
    return zero_op(seq.domain, seq.codomain)
