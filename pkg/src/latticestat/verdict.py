"""Verdicts, certificates and checker configuration."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Any, ClassVar

from .lattice import LatticeVector, frac_str, to_fraction
from .operators import Operator
from .ratfunc import Infinite, RationalFunction

DEFAULT_HORIZON = 10_000
DEFAULT_TOLERANCE = Fraction(1, 10**9)


class Status(str, enum.Enum):
    PROVEN = "Proven"
    REFUTED = "Refuted"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class CheckConfig:
    horizon: int = DEFAULT_HORIZON
    tolerance: Fraction = DEFAULT_TOLERANCE
    test_vectors: tuple[LatticeVector, ...] | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.horizon < 10:
            raise ValueError("horizon must be at least 10")
        tol = to_fraction(self.tolerance)
        if tol <= 0:
            raise ValueError("tolerance must be positive")
        object.__setattr__(self, "tolerance", tol)
        if self.test_vectors is not None:
            vs = tuple(self.test_vectors)
            if not vs:
                raise ValueError("empty list of test vectors")
            if not all(v.is_positive() for v in vs):
                raise ValueError("test vectors must be positive")
            object.__setattr__(self, "test_vectors", vs)


def jsonify(x: Any) -> Any:
    from .density import IndexSet
    from .opseq import OperatorSequence, Piece

    if x is None or isinstance(x, (bool, int, str, float)):
        return x
    if isinstance(x, Fraction):
        return frac_str(x)
    if isinstance(x, (Operator, LatticeVector)):
        return x.to_json()
    if isinstance(x, (IndexSet, OperatorSequence, RationalFunction, Infinite)):
        return str(x)
    if isinstance(x, Piece):
        return {"cell": str(x.cell), "start": x.start, "form": [[str(f) for f in r] for r in x.form]}
    if isinstance(x, (Verdict, Certificate)):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): jsonify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonify(v) for v in x]
    if isinstance(x, enum.Enum):
        return x.value
    raise TypeError(f"cannot serialise {type(x).__name__}")


@dataclass(frozen=True)
class Certificate:
    variant: ClassVar[str] = "Certificate"

    def to_json(self) -> dict:
        out = {"variant": self.variant}
        for f in fields(self):
            out[f.name] = jsonify(getattr(self, f.name))
        return out


@dataclass(frozen=True)
class DominatedOnDensityOne(Certificate):
    """``|R_j - R| <= dominator(j)`` for j in J, dominator decreasing to zero."""

    variant: ClassVar[str] = "DominatedOnDensityOne"
    J: Any
    dominator: Any
    limit: Operator
    tail: tuple = ()


@dataclass(frozen=True)
class DecreasingWitness(Certificate):
    variant: ClassVar[str] = "DecreasingWitness"
    J: Any
    infimum: Operator
    tail: tuple = ()
    onset: int = 1


@dataclass(frozen=True)
class TailSupWitness(Certificate):
    """Finite-horizon tail suprema ``sup_{n<=k<=N} |R_k - R|`` (max entry)."""

    variant: ClassVar[str] = "TailSupWitness"
    checkpoints: tuple = ()
    values: tuple = ()
    sequence: Any = None


@dataclass(frozen=True)
class UnboundedAlong(Certificate):
    variant: ClassVar[str] = "UnboundedAlong"
    J: Any
    growth: RationalFunction
    entry: tuple[int, int] = (0, 0)
    tail: tuple = ()


@dataclass(frozen=True)
class DistinctLimitAlong(Certificate):
    """Along the infinite set J the sequence converges to something else."""

    variant: ClassVar[str] = "DistinctLimitAlong"
    J: Any
    limit: Operator
    tail: tuple = ()


@dataclass(frozen=True)
class MassLowerBound(Certificate):
    variant: ClassVar[str] = "MassLowerBound"
    M: Any
    mass: Fraction
    truncation: int
    lower_bound: int
    count: int


@dataclass(frozen=True)
class AgreementWitness(Certificate):
    variant: ClassVar[str] = "AgreementWitness"
    T_seq: Any
    agreement: Any


@dataclass(frozen=True)
class OrderBoundOnDensityOne(Certificate):
    """``|R_j| <= bound`` for every j in J."""

    variant: ClassVar[str] = "OrderBoundOnDensityOne"
    J: Any
    bound: Operator
    tail: tuple = ()


@dataclass(frozen=True)
class PointwiseFamily(Certificate):
    """One verdict per sampled positive vector; the cone is sampled, not exhausted."""

    variant: ClassVar[str] = "PointwiseFamily"
    vectors: tuple
    verdicts: tuple


@dataclass(frozen=True)
class ExceptionalSetDensity(Certificate):
    variant: ClassVar[str] = "ExceptionalSetDensity"
    exceptional: Any
    density: Fraction


@dataclass
class Verdict:
    status: Status
    notion: str
    certificate: Certificate | None = None
    narrative: str = ""
    horizon: int = DEFAULT_HORIZON
    tolerance: Fraction = DEFAULT_TOLERANCE
    seed: int | None = None
    sequence: Any = None
    target: Any = None
    evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status is not Status.UNDETERMINED and self.certificate is None:
            raise ValueError(f"{self.status.value} verdict without a certificate")

    @property
    def proven(self) -> bool:
        return self.status is Status.PROVEN

    @property
    def refuted(self) -> bool:
        return self.status is Status.REFUTED

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "notion": self.notion,
            "certificate": None if self.certificate is None else self.certificate.to_json(),
            "horizon": self.horizon,
            "tolerance": frac_str(self.tolerance),
            "seed": self.seed,
            "narrative": self.narrative,
            "subject": {"sequence": jsonify(self.sequence), "target": jsonify(self.target)},
            "evidence": jsonify(self.evidence),
        }

    def __str__(self):
        return f"{self.notion}: {self.status.value} ({self.narrative})"
