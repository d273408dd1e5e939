"""Exact polynomials and rational functions in the index variable ``n``.

These are the coefficients of closed-form operator sequences.  Everything
here is exact; eventual sign questions are settled by a Cauchy root bound
followed by exact evaluation below the bound.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import ceil, comb, lcm
from typing import Iterable, Union

Number = Union[int, Fraction]

# Past this bound we stop scanning for the last sign change and report the
# bound itself as the onset (still sound, just not tight).
_SCAN_LIMIT = 200_000


class Infinite:
    """Divergent limit of a rational function, with its sign."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = 1 if sign > 0 else -1

    def __eq__(self, other):
        return isinstance(other, Infinite) and other.sign == self.sign

    def __hash__(self):
        return hash(("inf", self.sign))

    def __repr__(self):
        return "+inf" if self.sign > 0 else "-inf"


POS_INF = Infinite(1)
NEG_INF = Infinite(-1)


class Poly:
    """Univariate polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("c", "_hash", "_int")

    def __init__(self, coeffs: Iterable[Number] = ()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)
        self._hash = None
        self._int = None

    def eval_int(self, x: int) -> tuple[int, int]:
        """``p(x)`` for an integer ``x`` as an unreduced pair ``(num, den)``."""
        if self._int is None:
            m = lcm(*(a.denominator for a in self.c)) if self.c else 1
            self._int = (tuple(int(a * m) for a in reversed(self.c)), m)
        coeffs, m = self._int
        acc = 0
        for a in coeffs:
            acc = acc * x + a
        return acc, m

    @classmethod
    def const(cls, a: Number) -> "Poly":
        return cls((a,))

    @classmethod
    def n(cls) -> "Poly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lead(self) -> Fraction:
        return self.c[-1] if self.c else Fraction(0)

    def is_zero(self) -> bool:
        return not self.c

    def __eq__(self, other):
        return isinstance(other, Poly) and self.c == other.c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.c)
        return self._hash

    def __call__(self, x: Number) -> Fraction:
        acc = Fraction(0)
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        return Poly(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a))

    def __neg__(self) -> "Poly":
        return Poly(-x for x in self.c)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.c or not other.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    out[i + j] += x * y
        return Poly(out)

    def scale(self, a: Number) -> "Poly":
        return Poly(x * a for x in self.c)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        q = [Fraction(0)] * max(len(rem) - len(other.c) + 1, 0)
        dl, dd = other.lead, other.degree
        while len(rem) - 1 >= dd and rem:
            shift = len(rem) - 1 - dd
            f = rem[-1] / dl
            q[shift] = f
            for i, y in enumerate(other.c):
                rem[shift + i] -= f * y
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(q), Poly(rem)

    def monic(self) -> "Poly":
        return self.scale(1 / self.lead) if self.c else self

    def shift(self, k: int = 1) -> "Poly":
        """Return p(n + k)."""
        out = [Fraction(0)] * len(self.c)
        for i, a in enumerate(self.c):
            if a:
                for j in range(i + 1):
                    out[j] += a * comb(i, j) * k ** (i - j)
        return Poly(out)

    def integer_coeffs(self) -> tuple[int, ...]:
        """Positive rescaling to integer coefficients (same sign pattern)."""
        m = lcm(*(x.denominator for x in self.c)) if self.c else 1
        return tuple(int(x * m) for x in self.c)

    def cauchy_bound(self) -> Fraction:
        """Every real root lies strictly inside (-B, B)."""
        if self.degree <= 0:
            return Fraction(1)
        lc = abs(self.lead)
        return 1 + max(abs(x) / lc for x in self.c[:-1])

    def positive_root_bound(self) -> int:
        """Integer B with no real root of the polynomial in [B, oo).

        Kioustelidis: with the leading coefficient made positive, every
        positive root is below 2 * max (|a_i| / a_n)^(1/(n-i)) over the
        negative a_i.
        """
        if self.degree <= 0:
            return 1
        sgn = 1 if self.lead > 0 else -1
        n, lead = self.degree, abs(self.lead)
        best = 0.0
        for i, a in enumerate(self.c[:-1]):
            if a * sgn < 0:
                best = max(best, float(abs(a) / lead) ** (1.0 / (n - i)))
        # float slack: the bound only needs to be an overestimate
        return ceil(2 * best * (1 + 1e-9)) + 1

    def __repr__(self):
        return f"Poly({[str(x) for x in self.c]})"

    def __str__(self):
        if not self.c:
            return "0"
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            mag = abs(a)
            if i == 0:
                body = _frac_str(mag)
            else:
                var = "n" if i == 1 else f"n^{i}"
                body = var if mag == 1 else f"{_frac_str(mag, paren=True)}*{var}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _frac_str(a: Fraction, paren: bool = False) -> str:
    if a.denominator == 1:
        return str(a.numerator)
    s = f"{a.numerator}/{a.denominator}"
    return f"({s})" if paren else s


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else Poly((1,))


def sign_onset(p: Poly) -> tuple[int, int]:
    """Eventual sign of ``p`` on the positive integers.

    Returns ``(s, n0)`` with ``sign(p(n)) == s`` for every integer
    ``n >= n0``; ``n0`` is tight unless the root bound exceeds the scan limit.
    """
    if p.is_zero():
        return 0, 1
    coeffs = p.integer_coeffs()
    s = 1 if coeffs[-1] > 0 else -1
    bound = min(ceil(p.cauchy_bound()), p.positive_root_bound())
    if bound > _SCAN_LIMIT:
        return s, bound
    for m in range(bound, 0, -1):
        acc = 0
        for a in reversed(coeffs):
            acc = acc * m + a
        if (acc > 0) - (acc < 0) != s:
            return s, m + 1
    return s, 1


class RationalFunction:
    """Quotient ``num(n) / den(n)`` in lowest terms with a monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly | Number, den: Poly | Number = 1, *, _normal: bool = False):
        if not isinstance(num, Poly):
            num = Poly.const(num)
        if not isinstance(den, Poly):
            den = Poly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _normal:
            if num.is_zero():
                den = Poly((1,))
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num = num.divmod(g)[0]
                    den = den.divmod(g)[0]
                lc = den.lead
                num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num = num
        self.den = den
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, a: Number) -> "RationalFunction":
        return cls(Poly.const(a), Poly((1,)), _normal=True)

    @classmethod
    def n(cls) -> "RationalFunction":
        return cls(Poly.n(), Poly((1,)), _normal=True)

    @classmethod
    def monomial(cls, c: Number, k: int) -> "RationalFunction":
        """``c * n**k`` for any integer ``k``."""
        if k >= 0:
            return cls(Poly([0] * k + [c]), 1)
        return cls(Poly.const(c), Poly([0] * (-k) + [1]))

    # structure ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.const(other)
        return isinstance(other, RationalFunction) and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.lead if not self.num.is_zero() else Fraction(0)

    def __call__(self, n: Number) -> Fraction:
        if type(n) is int:
            a, ma = self.num.eval_int(n)
            b, mb = self.den.eval_int(n)
            if b == 0:
                raise ZeroDivisionError(f"{self} has a pole at n={n}")
            return Fraction(a * mb, b * ma)
        d = self.den(n)
        if d == 0:
            raise ZeroDivisionError(f"{self} has a pole at n={n}")
        return self.num(n) / d

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        return RationalFunction.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _normal=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RationalFunction.const(0)
            return RationalFunction(self.num.scale(other), self.den, _normal=True)
        other = self._coerce(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def shift(self, k: int = 1) -> "RationalFunction":
        return RationalFunction(self.num.shift(k), self.den.shift(k))

    # analysis -----------------------------------------------------------
    def pole_free(self) -> bool:
        """True iff the denominator has no root among the positive integers."""
        bound = ceil(self.den.cauchy_bound())
        return all(self.den(m) != 0 for m in range(1, bound + 1))

    def decay_order(self) -> int:
        """deg(den) - deg(num); positive iff the function tends to zero."""
        if self.is_zero():
            raise ValueError("zero function has no decay order")
        return self.den.degree - self.num.degree

    def leading_ratio(self) -> Fraction:
        return self.num.lead / self.den.lead

    def eventual_sign(self) -> tuple[int, int]:
        return _eventual_sign(self)

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        num = str(self.num)
        if len(self.num.c) > 1 and sum(1 for x in self.num.c if x) > 1:
            num = f"({num})"
        den = str(self.den)
        if sum(1 for x in self.den.c if x) > 1 or self.den.lead != 1:
            den = f"({den})"
        return f"{num}/{den}"


@lru_cache(maxsize=65536)
def _eventual_sign(f: RationalFunction) -> tuple[int, int]:
    # num/den has the sign of num*den wherever den != 0
    return sign_onset(f.num * f.den)


def coeff_limit(c: RationalFunction) -> Fraction | Infinite:
    """Limit of ``c(n)`` as ``n`` grows: a rational or a signed infinity."""
    if c.is_zero():
        return Fraction(0)
    dn, dd = c.num.degree, c.den.degree
    if dn < dd:
        return Fraction(0)
    if dn == dd:
        return c.num.lead / c.den.lead
    return POS_INF if c.leading_ratio() > 0 else NEG_INF


@lru_cache(maxsize=65536)
def _decrease(c: RationalFunction) -> tuple[bool, int]:
    s, n0 = sign_onset_rf(c - c.shift(1))
    return s >= 0, n0


def sign_onset_rf(f: RationalFunction) -> tuple[int, int]:
    return _eventual_sign(f)


def is_eventually_decreasing(c: RationalFunction) -> bool | None:
    """Whether ``c(n) >= c(n+1)`` for all large ``n``.

    Decided exactly from the eventual sign of ``c(n) - c(n+1)``; a rational
    function is always eventually monotone, so ``None`` is only returned
    when the root bound could not be scanned.
    """
    ok, n0 = _decrease(c)
    if n0 > _SCAN_LIMIT:
        return None
    return ok


def decrease_onset(c: RationalFunction) -> int | None:
    """Least ``n0`` with ``c(n) >= c(n+1)`` for every ``n >= n0``, or None."""
    ok, n0 = _decrease(c)
    return n0 if ok else None
