"""Finite-dimensional coordinate Riesz spaces over the rationals."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

FINITE = "finite"
TRUNCATED = "truncated"
FLAVORS = ("c0", "l1")


class DimensionError(ValueError):
    """Operands live in spaces of different dimension (or shape)."""


def to_fraction(x) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings.  Floats are rejected."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational: {x!r}")


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class SpaceDescriptor:
    kind: str
    dim: int
    flavor: str | None = None

    def __post_init__(self):
        if self.kind not in (FINITE, TRUNCATED):
            raise ValueError(f"unknown space kind {self.kind!r}")
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ValueError(f"space dimension must be a positive integer, got {self.dim!r}")
        if self.kind == TRUNCATED:
            if self.flavor not in FLAVORS:
                raise ValueError(f"truncated sequence space needs flavor in {FLAVORS}")
        elif self.flavor is not None:
            raise ValueError("flavor only applies to truncated sequence spaces")

    def __str__(self):
        if self.kind == FINITE:
            return f"R^{self.dim}"
        return f"{self.flavor}[1..{self.dim}]"


def finite(dim: int) -> SpaceDescriptor:
    return SpaceDescriptor(FINITE, dim)


def truncated(dim: int, flavor: str = "c0") -> SpaceDescriptor:
    return SpaceDescriptor(TRUNCATED, dim, flavor)


@dataclass(frozen=True)
class LatticeVector:
    space: SpaceDescriptor
    coords: tuple[Fraction, ...] = field()

    def __post_init__(self):
        coords = tuple(to_fraction(x) for x in self.coords)
        if len(coords) != self.space.dim:
            raise DimensionError(f"{len(coords)} coordinates for a space of dimension {self.space.dim}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, coords: Iterable, space: SpaceDescriptor | None = None) -> "LatticeVector":
        coords = tuple(coords)
        return cls(space or finite(len(coords)), coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def _check(self, other: "LatticeVector"):
        if self.space.dim != other.space.dim:
            raise DimensionError(f"{self.space} vs {other.space}")

    def _zip(self, other, fn) -> "LatticeVector":
        self._check(other)
        return LatticeVector(self.space, tuple(fn(a, b) for a, b in zip(self.coords, other.coords)))

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return LatticeVector(self.space, tuple(-a for a in self.coords))

    def __mul__(self, alpha):
        alpha = to_fraction(alpha)
        return LatticeVector(self.space, tuple(alpha * a for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, alpha):
        return self * (1 / to_fraction(alpha))

    def __abs__(self):
        return LatticeVector(self.space, tuple(abs(a) for a in self.coords))

    def __le__(self, other):
        return leq(self, other)

    def __ge__(self, other):
        return leq(other, self)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_positive(self) -> bool:
        return all(a >= 0 for a in self.coords)

    def to_json(self) -> list[str]:
        return [frac_str(a) for a in self.coords]

    @classmethod
    def from_json(cls, data: Sequence[str] | str, space: SpaceDescriptor | None = None) -> "LatticeVector":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.of((to_fraction(x) for x in data), space)

    def __str__(self):
        return "[" + ", ".join(str(a) for a in self.coords) + "]"


def zero(space: SpaceDescriptor) -> LatticeVector:
    return LatticeVector(space, (Fraction(0),) * space.dim)


def basis(space: SpaceDescriptor, i: int) -> LatticeVector:
    return LatticeVector(space, tuple(Fraction(int(k == i)) for k in range(space.dim)))


def ones(space: SpaceDescriptor) -> LatticeVector:
    return LatticeVector(space, (Fraction(1),) * space.dim)


def join(u: LatticeVector, v: LatticeVector) -> LatticeVector:
    return u._zip(v, max)


def meet(u: LatticeVector, v: LatticeVector) -> LatticeVector:
    return u._zip(v, min)


def pos_part(u: LatticeVector) -> LatticeVector:
    return join(u, zero(u.space))


def neg_part(u: LatticeVector) -> LatticeVector:
    return join(-u, zero(u.space))


def leq(u: LatticeVector, v: LatticeVector) -> bool:
    u._check(v)
    return all(a <= b for a, b in zip(u.coords, v.coords))


def sup_list(vs: Sequence[LatticeVector]) -> LatticeVector:
    if not vs:
        raise ValueError("supremum of an empty family")
    return reduce(join, vs)


def inf_list(vs: Sequence[LatticeVector]) -> LatticeVector:
    if not vs:
        raise ValueError("infimum of an empty family")
    return reduce(meet, vs)
