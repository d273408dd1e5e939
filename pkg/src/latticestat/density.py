"""Subsets of the positive integers and their natural density.

Index sets are small immutable trees.  ``density_exact`` is a conservative
structural calculus: it answers ``Density.UNKNOWN`` rather than guess.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Callable, Iterator


class IndexSet:
    """Base node.  Subclasses implement ``contains`` and ``__str__``."""

    def contains(self, n: int) -> bool:
        raise NotImplementedError

    def __contains__(self, n: int) -> bool:
        return self.contains(n)

    def count_upto(self, N: int) -> int:
        return count_upto(self, N)

    def iter_upto(self, N: int) -> Iterator[int]:
        return (k for k in range(1, N + 1) if self.contains(k))


@dataclass(frozen=True)
class Finite(IndexSet):
    elements: tuple[int, ...] = ()

    def __post_init__(self):
        els = tuple(sorted(set(int(x) for x in self.elements)))
        if els and els[0] < 1:
            raise ValueError("index sets live in the positive integers")
        object.__setattr__(self, "elements", els)

    def contains(self, n):
        return n in self.elements

    def __str__(self):
        return "finite(" + ",".join(map(str, self.elements)) + ")" if self.elements else "empty"


@dataclass(frozen=True)
class Cofinite(IndexSet):
    excluded: tuple[int, ...] = ()

    def __post_init__(self):
        els = tuple(sorted(set(int(x) for x in self.excluded)))
        if els and els[0] < 1:
            raise ValueError("index sets live in the positive integers")
        object.__setattr__(self, "excluded", els)

    def contains(self, n):
        return n not in self.excluded

    def __str__(self):
        return "cofinite(" + ",".join(map(str, self.excluded)) + ")" if self.excluded else "naturals"


@dataclass(frozen=True)
class AP(IndexSet):
    """``{offset, offset + step, offset + 2*step, ...}``."""

    offset: int
    step: int

    def __post_init__(self):
        if self.offset < 1 or self.step < 1:
            raise ValueError("arithmetic progressions need offset >= 1 and step >= 1")

    def contains(self, n):
        return n >= self.offset and (n - self.offset) % self.step == 0

    def __str__(self):
        return f"ap({self.offset},{self.step})"


@dataclass(frozen=True)
class Squares(IndexSet):
    def contains(self, n):
        return n >= 1 and isqrt(n) ** 2 == n

    def __str__(self):
        return "squares"


@dataclass(frozen=True)
class Union(IndexSet):
    a: IndexSet
    b: IndexSet

    def contains(self, n):
        return self.a.contains(n) or self.b.contains(n)

    def __str__(self):
        return f"union({self.a},{self.b})"


@dataclass(frozen=True)
class Intersection(IndexSet):
    a: IndexSet
    b: IndexSet

    def contains(self, n):
        return self.a.contains(n) and self.b.contains(n)

    def __str__(self):
        return f"inter({self.a},{self.b})"


@dataclass(frozen=True)
class Complement(IndexSet):
    a: IndexSet

    def contains(self, n):
        return not self.a.contains(n)

    def __str__(self):
        return f"complement({self.a})"


@dataclass(frozen=True, eq=False)
class Predicate(IndexSet):
    """Opaque membership rule; ``rule`` must be a pure function of n."""

    rule: Callable[[int], bool] = field(compare=False)
    label: str = "pred"

    def contains(self, n):
        return bool(self.rule(n))

    def __str__(self):
        return f"pred({self.label})"


NATURALS = Cofinite(())
EMPTY = Finite(())
SQUARES = Squares()


@dataclass(frozen=True)
class Density:
    value: Fraction | None = None

    def __post_init__(self):
        if self.value is not None and not 0 <= self.value <= 1:
            raise ValueError(f"density {self.value} outside [0, 1]")

    @property
    def known(self) -> bool:
        return self.value is not None

    def is_one(self) -> bool:
        return self.value == 1

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self):
        return "unknown" if self.value is None else str(self.value)


Density.UNKNOWN = Density(None)


def exact(q) -> Density:
    return Density(Fraction(q))


# ---------------------------------------------------------------- counting


def count_upto(J: IndexSet, N: int) -> int:
    """``|J intersect [1..N]|``, in closed form where one exists."""
    if N < 1:
        raise ValueError("count_upto needs N >= 1")
    if isinstance(J, Finite):
        return sum(1 for x in J.elements if x <= N)
    if isinstance(J, Cofinite):
        return N - sum(1 for x in J.excluded if x <= N)
    if isinstance(J, AP):
        return 0 if N < J.offset else (N - J.offset) // J.step + 1
    if isinstance(J, Squares):
        return isqrt(N)
    if isinstance(J, Complement):
        return N - count_upto(J.a, N)
    return sum(1 for k in range(1, N + 1) if J.contains(k))


def empirical_density(J: IndexSet, N: int) -> Fraction:
    return Fraction(count_upto(J, N), N)


# ---------------------------------------------------------------- density


@lru_cache(maxsize=4096)
def _density(J: IndexSet) -> Fraction | None:
    if isinstance(J, Finite):
        return Fraction(0)
    if isinstance(J, Cofinite):
        return Fraction(1)
    if isinstance(J, AP):
        return Fraction(1, J.step)
    if isinstance(J, Squares):
        return Fraction(0)
    if isinstance(J, Predicate):
        return None
    if isinstance(J, Complement):
        d = _density(J.a)
        return None if d is None else 1 - d
    if isinstance(J, Intersection):
        da, db = _density(J.a), _density(J.b)
        if da == 0 or db == 0:
            return Fraction(0)
        # a density-one set removes only a density-zero part
        if da == 1:
            return db
        if db == 1:
            return da
        if isinstance(J.a, AP) and isinstance(J.b, AP):
            return _ap_intersection_density(J.a, J.b)
        for x, y in ((J.a, J.b), (J.b, J.a)):
            if isinstance(y, Complement):
                dx, dxy = _density(x), _density(Intersection(x, y.a))
                if dx is not None and dxy is not None:
                    return dx - dxy
        return None
    if isinstance(J, Union):
        da, db = _density(J.a), _density(J.b)
        if da == 1 or db == 1:
            return Fraction(1)
        if da == 0:
            return db
        if db == 0:
            return da
        if da is None or db is None:
            return None
        dab = _density(Intersection(J.a, J.b))
        return None if dab is None else da + db - dab
    return None


def _ap_intersection_density(a: AP, b: AP) -> Fraction:
    g = gcd(a.step, b.step)
    if (a.offset - b.offset) % g:
        return Fraction(0)
    return Fraction(g, a.step * b.step)


def density_exact(J: IndexSet) -> Density:
    return Density(_density(J))


# ---------------------------------------------------------------- finiteness


@lru_cache(maxsize=4096)
def is_finite(J: IndexSet) -> bool | None:
    """True/False when decidable from structure, else None."""
    if isinstance(J, Finite):
        return True
    if isinstance(J, (Cofinite, AP, Squares)):
        return False
    d = _density(J)
    if d is not None and d > 0:
        return False
    if isinstance(J, Complement):
        inner = J.a
        if isinstance(inner, (Finite, Cofinite, Complement, Union, Intersection)):
            pushed = complement(inner)
            if not isinstance(pushed, Complement):
                return is_finite(pushed)
        return None
    if isinstance(J, Union):
        fa, fb = is_finite(J.a), is_finite(J.b)
        if fa is False or fb is False:
            return False
        if fa and fb:
            return True
        return None
    if isinstance(J, Intersection):
        fa, fb = is_finite(J.a), is_finite(J.b)
        if fa or fb:
            return True
        for x, y in ((J.a, J.b), (J.b, J.a)):
            if is_finite(complement(y)) is True:
                return is_finite(x)
        return None
    return None


def is_infinite(J: IndexSet) -> bool | None:
    f = is_finite(J)
    return None if f is None else not f


def finite_bound(J: IndexSet) -> int | None:
    """An integer at least as large as every element of a finite set."""
    if isinstance(J, Finite):
        return J.elements[-1] if J.elements else 0
    if isinstance(J, Complement):
        pushed = complement(J.a)
        return None if isinstance(pushed, Complement) else finite_bound(pushed)
    if isinstance(J, Union):
        a, b = finite_bound(J.a), finite_bound(J.b)
        return None if a is None or b is None else max(a, b)
    if isinstance(J, Intersection):
        bounds = [x for x in (finite_bound(J.a), finite_bound(J.b)) if x is not None]
        return min(bounds) if bounds else None
    return None


# ---------------------------------------------------------------- algebra


def complement(J: IndexSet) -> IndexSet:
    """Complement pushed through the tree where that stays readable."""
    if isinstance(J, Finite):
        return Cofinite(J.elements)
    if isinstance(J, Cofinite):
        return Finite(J.excluded)
    if isinstance(J, Complement):
        return J.a
    if isinstance(J, AP) and J.step == 1:
        return Finite(range(1, J.offset))
    if isinstance(J, Union):
        return intersect(complement(J.a), complement(J.b))
    if isinstance(J, Intersection):
        return union(complement(J.a), complement(J.b))
    return Complement(J)


def _flatten(J: IndexSet, kind) -> list[IndexSet]:
    if isinstance(J, kind):
        return _flatten(J.a, kind) + _flatten(J.b, kind)
    return [J]


def _dedupe(items):
    out = []
    for x in items:
        if x not in out:
            out.append(x)
    return out


def _has_complement_pair(atoms) -> bool:
    return any(isinstance(x, Complement) and x.a in atoms for x in atoms)


def _ap_meet(a: AP, b: AP) -> IndexSet:
    step = a.step * b.step // gcd(a.step, b.step)
    n = max(a.offset, b.offset)
    for k in range(n, n + step):
        if a.contains(k) and b.contains(k):
            return AP(k, step)
    return EMPTY


def _nest(kind, atoms) -> IndexSet:
    out = atoms[0]
    for x in atoms[1:]:
        out = kind(out, x)
    return out


def intersect(a: IndexSet, b: IndexSet) -> IndexSet:
    atoms = []
    for x in _flatten(a, Intersection) + _flatten(b, Intersection):
        if isinstance(x, AP) and x.step == 1:
            x = Cofinite(range(1, x.offset))
        atoms.append(x)
    atoms = _dedupe(atoms)
    if _has_complement_pair(atoms):
        return EMPTY
    unions = [x for x in atoms if isinstance(x, Union)]
    if unions:
        # distribute so that empty branches disappear
        others = [x for x in atoms if x is not unions[0]]
        base = _nest(Intersection, others) if others else NATURALS
        out = EMPTY
        for branch in _flatten(unions[0], Union):
            out = union(out, intersect(base, branch))
        return out
    finite = [x for x in atoms if isinstance(x, Finite)]
    if finite:
        els = finite[0].elements
        return Finite(k for k in els if all(x.contains(k) for x in atoms))
    excluded = [k for x in atoms if isinstance(x, Cofinite) for k in x.excluded]
    has_cofinite = any(isinstance(x, Cofinite) for x in atoms)
    rest = [x for x in atoms if not isinstance(x, Cofinite)]
    aps = [x for x in rest if isinstance(x, AP)]
    if len(aps) > 1:
        merged = aps[0]
        for x in aps[1:]:
            merged = _ap_meet(merged, x)
            if merged == EMPTY:
                return EMPTY
        rest = [merged] + [x for x in rest if not isinstance(x, AP)]
    if has_cofinite and (excluded or not rest):
        rest.append(Cofinite(excluded))
    if not rest:
        return NATURALS
    return _nest(Intersection, rest)


def union(a: IndexSet, b: IndexSet) -> IndexSet:
    atoms = _dedupe(_flatten(a, Union) + _flatten(b, Union))
    if _has_complement_pair(atoms):
        return NATURALS
    cofinite = [x for x in atoms if isinstance(x, Cofinite)]
    others = [x for x in atoms if not isinstance(x, Cofinite)]
    if cofinite:
        excluded = set(cofinite[0].excluded)
        for x in cofinite[1:]:
            excluded &= set(x.excluded)
        return Cofinite(k for k in excluded if not any(x.contains(k) for x in others))
    elements = [k for x in others if isinstance(x, Finite) for k in x.elements]
    rest = [x for x in others if not isinstance(x, Finite)]
    if elements:
        rest.append(Finite(elements))
    if not rest:
        return EMPTY
    return _nest(Union, rest)


def simplify(J: IndexSet) -> IndexSet:
    if isinstance(J, Complement):
        return complement(simplify(J.a))
    if isinstance(J, Intersection):
        return intersect(simplify(J.a), simplify(J.b))
    if isinstance(J, Union):
        return union(simplify(J.a), simplify(J.b))
    if isinstance(J, AP) and J.step == 1:
        return Cofinite(range(1, J.offset))
    return J


def union_all(sets) -> IndexSet:
    out: IndexSet = EMPTY
    for s in sets:
        out = union(out, s)
    return out


def next_member(J: IndexSet, n: int, limit: int = 10_000_000) -> int:
    """Least element of J that is >= n (J must be infinite)."""
    k = max(n, 1)
    while not J.contains(k):
        k += 1
        if k > limit:
            raise ValueError(f"no element of {J} found in [{n}, {limit}]")
    return k


# ---------------------------------------------------------------- real sequences


@dataclass(frozen=True)
class ScalarPiecewise:
    """Real sequence equal to ``on`` for n in J and ``off`` elsewhere."""

    J: IndexSet
    on: object
    off: object

    def __call__(self, n: int) -> Fraction:
        return _scalar_at(self.on if self.J.contains(n) else self.off, n)

    def __str__(self):
        return f"piecewise({self.J},{self.on},{self.off})"


def _scalar_at(rule, n: int) -> Fraction:
    if isinstance(rule, (int, Fraction)):
        return Fraction(rule)
    return Fraction(rule(n))


def _sign_set(g, keep_sign: int) -> IndexSet:
    """``{n : sign(g(n)) in {0, keep_sign}}`` as a finite or cofinite set."""
    s, n0 = g.eventual_sign()
    early = range(1, n0)
    if s == 0 or s == keep_sign:
        return Cofinite(k for k in early if (g(k) > 0) - (g(k) < 0) not in (0, keep_sign))
    return Finite(k for k in early if (g(k) > 0) - (g(k) < 0) in (0, keep_sign))


def exceptional_set(rule, r: Fraction, eps: Fraction) -> IndexSet | None:
    """``{n : |rule(n) - r| >= eps}`` symbolically, or None for opaque rules."""
    from .ratfunc import RationalFunction

    if isinstance(rule, (int, Fraction)):
        rule = RationalFunction.const(rule)
    if isinstance(rule, RationalFunction):
        upper = _sign_set(rule - r - eps, 1)
        lower = _sign_set(rule - r + eps, -1)
        return union(upper, lower)
    if isinstance(rule, ScalarPiecewise):
        on = exceptional_set(rule.on, r, eps)
        off = exceptional_set(rule.off, r, eps)
        if on is None or off is None:
            return None
        return union(intersect(rule.J, on), intersect(complement(rule.J), off))
    return None


def stat_converges_real(rule, r, eps, horizon: int = 10_000):
    """Statistical convergence of a real sequence to ``r``.

    ``rule`` is a constant, a RationalFunction, a ScalarPiecewise of those,
    or any callable (which can only ever be Undetermined).
    """
    from .lattice import to_fraction
    from .verdict import ExceptionalSetDensity, Status, Verdict

    r, eps = to_fraction(r), to_fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    exc = exceptional_set(rule, r, eps)
    common = dict(notion="stat-real", horizon=horizon, tolerance=eps, target=r)
    if exc is not None:
        d = density_exact(exc)
        if d.is_zero():
            return Verdict(
                Status.PROVEN,
                certificate=ExceptionalSetDensity(exc, Fraction(0)),
                narrative=f"exceptional set {exc} has density 0",
                **common,
            )
        if d.known:
            return Verdict(
                Status.REFUTED,
                certificate=ExceptionalSetDensity(exc, d.value),
                narrative=f"exceptional set {exc} has density {d.value} > 0",
                **common,
            )
    bad = sum(1 for j in range(1, horizon + 1) if abs(_scalar_at(rule, j) - r) >= eps)
    return Verdict(
        Status.UNDETERMINED,
        narrative=f"no symbolic exceptional set; empirical exceptional density {bad}/{horizon}",
        evidence={"exceptional_count": bad, "empirical_density": Fraction(bad, horizon)},
        **common,
    )
