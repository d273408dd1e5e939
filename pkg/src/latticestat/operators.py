"""Order bounded operators between coordinate lattices, as exact matrices.

The operator order is decided entrywise.  That is the same order as
``S <= T iff S(u) <= T(u) for every positive u``: the standard basis vectors
are positive, so the cone condition forces every entry, and entrywise
inequality gives the cone condition by linearity.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .lattice import (
    DimensionError,
    LatticeVector,
    SpaceDescriptor,
    finite,
    frac_str,
    to_fraction,
)

RK_MAX_DIM = 12

Rows = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class OrderBoundedOperator:
    domain: SpaceDescriptor
    codomain: SpaceDescriptor
    entries: Rows = field()

    def __post_init__(self):
        rows = tuple(
            tuple(x if type(x) is Fraction else to_fraction(x) for x in row) for row in self.entries
        )
        if len(rows) != self.codomain.dim or any(len(r) != self.domain.dim for r in rows):
            raise DimensionError(
                f"entries do not form a {self.codomain.dim}x{self.domain.dim} matrix"
            )
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(
        cls,
        rows: Iterable[Iterable],
        domain: SpaceDescriptor | None = None,
        codomain: SpaceDescriptor | None = None,
    ) -> "OrderBoundedOperator":
        rows = tuple(tuple(to_fraction(x) for x in r) for r in rows)
        if not rows or not rows[0]:
            raise DimensionError("an operator needs at least one row and one column")
        return cls(domain or finite(len(rows[0])), codomain or finite(len(rows)), rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.codomain.dim, self.domain.dim

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def _like(self, rows) -> "OrderBoundedOperator":
        # rows come from entrywise Fraction arithmetic on a checked operator
        out = object.__new__(OrderBoundedOperator)
        object.__setattr__(out, "domain", self.domain)
        object.__setattr__(out, "codomain", self.codomain)
        object.__setattr__(out, "entries", rows)
        return out

    def _check_same(self, other: "OrderBoundedOperator"):
        if self.shape != other.shape:
            raise DimensionError(f"shape {self.shape} vs {other.shape}")

    def _zip(self, other, fn) -> "OrderBoundedOperator":
        self._check_same(other)
        return self._like(
            tuple(tuple(fn(a, b) for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        )

    def _map(self, fn) -> "OrderBoundedOperator":
        return self._like(tuple(tuple(fn(a) for a in r) for r in self.entries))

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return self._map(lambda a: -a)

    def __mul__(self, alpha):
        alpha = to_fraction(alpha)
        return self._map(lambda a: alpha * a)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return compose(self, other)

    def __abs__(self):
        return op_modulus(self)

    def __le__(self, other):
        return op_leq(self, other)

    def __ge__(self, other):
        return op_leq(other, self)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def is_positive(self) -> bool:
        return all(a >= 0 for r in self.entries for a in r)

    def to_json(self) -> list[list[str]]:
        return [[frac_str(a) for a in r] for r in self.entries]

    @classmethod
    def from_json(cls, data, domain=None, codomain=None) -> "OrderBoundedOperator":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_rows(data, domain, codomain)

    def __str__(self):
        return "[" + "; ".join(" ".join(str(a) for a in r) for r in self.entries) + "]"


Operator = OrderBoundedOperator


def identity(space: SpaceDescriptor | int) -> Operator:
    if isinstance(space, int):
        space = finite(space)
    d = space.dim
    return Operator(space, space, tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)))


def zero_op(domain: SpaceDescriptor | int, codomain: SpaceDescriptor | int) -> Operator:
    if isinstance(domain, int):
        domain = finite(domain)
    if isinstance(codomain, int):
        codomain = finite(codomain)
    return Operator(domain, codomain, ((Fraction(0),) * domain.dim,) * codomain.dim)


def column(u: LatticeVector) -> Operator:
    """The operator ``t -> t*u`` from the real line into u's space."""
    return Operator(finite(1), u.space, tuple((a,) for a in u.coords))


def apply(T: Operator, u: LatticeVector) -> LatticeVector:
    if T.domain.dim != u.space.dim:
        raise DimensionError(f"operator on {T.domain} applied to a vector of {u.space}")
    return LatticeVector(T.codomain, tuple(sum((a * x for a, x in zip(r, u.coords)), Fraction(0)) for r in T.entries))


def op_leq(S: Operator, T: Operator) -> bool:
    S._check_same(T)
    return all(a <= b for r, s in zip(S.entries, T.entries) for a, b in zip(r, s))


def op_modulus(T: Operator) -> Operator:
    return T._map(abs)


def op_join(S: Operator, T: Operator) -> Operator:
    return S._zip(T, max)


def op_meet(S: Operator, T: Operator) -> Operator:
    return S._zip(T, min)


def op_pos(T: Operator) -> Operator:
    return T._map(lambda a: max(a, Fraction(0)))


def op_neg(T: Operator) -> Operator:
    return T._map(lambda a: max(-a, Fraction(0)))


def compose(S: Operator, T: Operator) -> Operator:
    """``S o T``: apply T first."""
    if T.codomain.dim != S.domain.dim:
        raise DimensionError(f"cannot compose {S.shape} after {T.shape}")
    cols = list(zip(*T.entries))
    rows = tuple(
        tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols) for r in S.entries
    )
    return Operator(T.domain, S.codomain, rows)


@dataclass(frozen=True)
class BandPattern:
    """Entry support (a band of the matrix lattice) and coordinate support
    (the range of a band projection on the codomain)."""

    entry_support: frozenset[tuple[int, int]] = frozenset()
    coord_support: frozenset[int] = frozenset()

    @classmethod
    def entries(cls, pairs: Iterable[tuple[int, int]]) -> "BandPattern":
        return cls(entry_support=frozenset((int(i), int(j)) for i, j in pairs))

    @classmethod
    def coords(cls, idx: Iterable[int]) -> "BandPattern":
        return cls(coord_support=frozenset(int(i) for i in idx))

    @classmethod
    def full(cls, shape: tuple[int, int]) -> "BandPattern":
        m, n = shape
        return cls.entries(itertools.product(range(m), range(n)))


def band_projection(pattern: BandPattern, m: int | SpaceDescriptor) -> Operator:
    """Diagonal 0/1 projection onto the coordinates in ``coord_support`` (0-based)."""
    space = finite(m) if isinstance(m, int) else m
    bad = [i for i in pattern.coord_support if not 0 <= i < space.dim]
    if bad:
        raise DimensionError(f"coordinates {sorted(bad)} outside a space of dimension {space.dim}")
    d = space.dim
    rows = tuple(
        tuple(Fraction(int(i == j and i in pattern.coord_support)) for j in range(d)) for i in range(d)
    )
    return Operator(space, space, rows)


def band_contains(pattern: BandPattern, T: Operator) -> bool:
    m, n = T.shape
    bad = [(i, j) for i, j in pattern.entry_support if not (0 <= i < m and 0 <= j < n)]
    if bad:
        raise DimensionError(f"band pattern entries {sorted(bad)} outside shape {T.shape}")
    return all(
        a == 0 for i, r in enumerate(T.entries) for j, a in enumerate(r) if (i, j) not in pattern.entry_support
    )


def rk_reference(kind: str, S: Operator, T: Operator | None, u: LatticeVector) -> LatticeVector:
    """Riesz-Kantorovich evaluation of ``|S|``, ``S v T`` or ``S ^ T`` at ``u >= 0``.

    Brute force over corner vectors; a test oracle only.
    """
    if not u.is_positive():
        raise ValueError("Riesz-Kantorovich formulas need a positive vector")
    if S.domain.dim != u.space.dim:
        raise DimensionError("vector does not match the operator domain")
    n = S.domain.dim
    if n > RK_MAX_DIM:
        raise ValueError(f"refusing corner enumeration in dimension {n} > {RK_MAX_DIM}")
    if kind == "modulus":
        best = None
        for signs in itertools.product((1, -1), repeat=n):
            v = LatticeVector(u.space, tuple(s * x for s, x in zip(signs, u.coords)))
            val = [abs(x) for x in apply(S, v).coords]
            best = val if best is None else [max(a, b) for a, b in zip(best, val)]
        return LatticeVector(S.codomain, tuple(best))
    if T is None:
        raise ValueError(f"{kind} needs two operators")
    S._check_same(T)
    pick = max if kind == "join" else min if kind == "meet" else None
    if pick is None:
        raise ValueError(f"unknown Riesz-Kantorovich kind {kind!r}")
    best = None
    for mask in itertools.product((0, 1), repeat=n):
        v = LatticeVector(u.space, tuple(x if b else 0 for b, x in zip(mask, u.coords)))
        w = LatticeVector(u.space, tuple(0 if b else x for b, x in zip(mask, u.coords)))
        val = [a + b for a, b in zip(apply(S, v).coords, apply(T, w).coords)]
        best = val if best is None else [pick(a, b) for a, b in zip(best, val)]
    return LatticeVector(S.codomain, tuple(best))
