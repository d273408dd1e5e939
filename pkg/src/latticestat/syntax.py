"""Text syntax for rational functions, index sets, operators and sequences.

    rf      := 1/(n+1) | n^2/(n+3) | 3/2 | ...
    set     := squares | naturals | empty | finite(1,4,9) | cofinite(2)
             | ap(a,d) | complement(S) | inter(S,T) | union(S,T) | NAME
    op      := [[1,-2],[0,1/2]] | id(k) | zero(m,n) | NAME
    seq     := const(op) | scaled(rf, op) | coordfun(D[,l1]) | piecewise(set, seq, seq)
             | sum(A,B) | join(A,B) | meet(A,B) | scale(alpha, A) | abs(A) | pos(A)
             | neg(A) | composel(op, A) | composer(A, op) | ratmat([[rf,..],..])
             | prefix([op,..], A) | atnext(set, A) | NAME
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import density as ds
from . import opseq as sq
from .lattice import finite
from .operators import Operator, identity, zero_op
from .ratfunc import RationalFunction


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text, self.pos = text, pos
        where = f" at column {pos + 1}" if text else ""
        caret = f"\n  {text}\n  {' ' * pos}^" if text else ""
        super().__init__(f"{message}{where}{caret}")


class ResolutionError(KeyError):
    def __str__(self):
        return str(self.args[0])


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


@dataclass
class Env:
    operators: dict[str, Operator] = field(default_factory=dict)
    sets: dict[str, ds.IndexSet] = field(default_factory=dict)
    sequences: dict[str, sq.OperatorSequence] = field(default_factory=dict)


class _Parser:
    def __init__(self, text: str, env: Env | None = None):
        self.text = text
        self.env = env or Env()
        self.toks: list[tuple[str, str, int]] = []
        for m in _TOKEN.finditer(text):
            if m.group(1):
                self.toks.append(("int", m.group(1), m.start(1)))
            elif m.group(2):
                self.toks.append(("name", m.group(2), m.start(2)))
            elif m.group(3):
                self.toks.append(("sym", m.group(3), m.start(3)))
        self.i = 0

    # token helpers ------------------------------------------------------
    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "", len(self.text))

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self.text, tok[2])

    def take(self, kind=None, value=None):
        tok = self.peek()
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value or kind
            raise self.error(f"expected {want!r}, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def accept(self, value) -> bool:
        if self.peek()[1] == value and self.peek()[0] == "sym":
            self.i += 1
            return True
        return False

    def done(self):
        if self.peek()[0] != "eof":
            raise self.error(f"unexpected {self.peek()[1]!r}")

    # rational functions -------------------------------------------------
    def rf(self) -> RationalFunction:
        out = self.rf_term()
        while self.peek()[1] in "+-" and self.peek()[0] == "sym":
            op = self.take()[1]
            rhs = self.rf_term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def rf_term(self):
        out = self.rf_unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "sym":
            tok = self.take()
            rhs = self.rf_unary()
            if tok[1] == "*":
                out = out * rhs
            else:
                if rhs.is_zero():
                    raise self.error("division by zero", tok)
                out = out / rhs
        return out

    def rf_unary(self):
        if self.accept("-"):
            return -self.rf_unary()
        if self.accept("+"):
            return self.rf_unary()
        return self.rf_power()

    def rf_power(self):
        base = self.rf_atom()
        if self.accept("^"):
            neg = self.accept("-")
            k = int(self.take("int")[1])
            out = RationalFunction.const(1)
            for _ in range(k):
                out = out * base
            if neg:
                if out.is_zero():
                    raise self.error("negative power of zero")
                out = RationalFunction.const(1) / out
            return out
        return base

    def rf_atom(self):
        tok = self.peek()
        if tok[0] == "int":
            self.i += 1
            return RationalFunction.const(int(tok[1]))
        if tok[0] == "name" and tok[1] == "n":
            self.i += 1
            return RationalFunction.n()
        if self.accept("("):
            out = self.rf()
            self.take("sym", ")")
            return out
        raise self.error(f"expected a number, 'n' or '(', found {tok[1] or 'end of input'!r}")

    def scalar(self) -> Fraction:
        tok = self.peek()
        f = self.rf()
        if not f.is_constant():
            raise self.error("expected a constant", tok)
        return f.constant_value()

    def integer(self) -> int:
        neg = self.accept("-")
        v = int(self.take("int")[1])
        return -v if neg else v

    def int_list(self) -> list[int]:
        out = []
        if self.peek()[1] == ")":
            return out
        out.append(self.integer())
        while self.accept(","):
            out.append(self.integer())
        return out

    # index sets ---------------------------------------------------------
    def index_set(self) -> ds.IndexSet:
        tok = self.take("name")
        name = tok[1]
        simple = {"squares": ds.SQUARES, "naturals": ds.NATURALS, "empty": ds.EMPTY}
        if name in simple and self.peek()[1] != "(":
            return simple[name]
        if name in ("finite", "cofinite", "ap", "complement", "inter", "union"):
            self.take("sym", "(")
            try:
                if name == "finite":
                    out = ds.Finite(self.int_list())
                elif name == "cofinite":
                    out = ds.Cofinite(self.int_list())
                elif name == "ap":
                    a = self.integer()
                    self.take("sym", ",")
                    out = ds.AP(a, self.integer())
                elif name == "complement":
                    out = ds.Complement(self.index_set())
                else:
                    a = self.index_set()
                    self.take("sym", ",")
                    b = self.index_set()
                    out = ds.Intersection(a, b) if name == "inter" else ds.Union(a, b)
            except ValueError as exc:
                if isinstance(exc, ParseError):
                    raise
                raise ParseError(str(exc), self.text, tok[2]) from exc
            self.take("sym", ")")
            return out
        if name in self.env.sets:
            return self.env.sets[name]
        raise ResolutionError(f"unknown index set {name!r}")

    # operators ----------------------------------------------------------
    def operator(self) -> Operator:
        tok = self.peek()
        if self.accept("["):
            rows = [self.matrix_row()]
            while self.accept(","):
                rows.append(self.matrix_row())
            self.take("sym", "]")
            if len({len(r) for r in rows}) != 1:
                raise ParseError("ragged matrix literal", self.text, tok[2])
            return Operator.from_rows(rows)
        name = self.take("name")[1]
        if name == "id" and self.accept("("):
            k = self.integer()
            self.take("sym", ")")
            return identity(finite(k))
        if name == "zero" and self.accept("("):
            m = self.integer()
            self.take("sym", ",")
            n = self.integer()
            self.take("sym", ")")
            return zero_op(n, m)
        if name in self.env.operators:
            return self.env.operators[name]
        raise ResolutionError(f"unknown operator {name!r}")

    def matrix_row(self) -> list[Fraction]:
        self.take("sym", "[")
        row = [self.scalar()]
        while self.accept(","):
            row.append(self.scalar())
        self.take("sym", "]")
        return row

    # sequences ----------------------------------------------------------
    def sequence(self) -> sq.OperatorSequence:
        tok = self.take("name")
        name = tok[1]
        if self.peek()[1] != "(":
            if name in self.env.sequences:
                return self.env.sequences[name]
            raise ResolutionError(f"unknown sequence {name!r}")
        handler = _SEQ_FORMS.get(name)
        if handler is None:
            raise ParseError(f"unknown sequence constructor {name!r}", self.text, tok[2])
        self.take("sym", "(")
        try:
            out = handler(self)
        except (ParseError, ResolutionError):
            raise
        except sq.ShapeError:
            raise
        except ValueError as exc:
            raise ParseError(str(exc), self.text, tok[2]) from exc
        self.take("sym", ")")
        return out

    def comma(self):
        self.take("sym", ",")


def _binary(cls) -> Callable[[_Parser], sq.OperatorSequence]:
    def build(p: _Parser):
        a = p.sequence()
        p.comma()
        return cls(a, p.sequence())

    return build


def _piecewise(p):
    J = p.index_set()
    p.comma()
    a = p.sequence()
    p.comma()
    return sq.Piecewise(J, a, p.sequence())


def _scaled(p):
    c = p.rf()
    p.comma()
    return sq.ScaledOp(c, p.operator())


def _coordfun(p):
    D = p.integer()
    flavor = "c0"
    if p.accept(","):
        flavor = p.take("name")[1]
    return sq.CoordFunctional(D, flavor)


def _scale(p):
    alpha = p.scalar()
    p.comma()
    return sq.Scale(alpha, p.sequence())


def _composel(p):
    T = p.operator()
    p.comma()
    return sq.ComposeLeft(T, p.sequence())


def _composer(p):
    a = p.sequence()
    p.comma()
    return sq.ComposeRight(a, p.operator())


def _ratmat(p):
    p.take("sym", "[")
    rows = []
    while True:
        p.take("sym", "[")
        row = [p.rf()]
        while p.accept(","):
            row.append(p.rf())
        p.take("sym", "]")
        rows.append(tuple(row))
        if not p.accept(","):
            break
    p.take("sym", "]")
    return sq.RatMatrix(tuple(rows), finite(len(rows[0])), finite(len(rows)))


def _prefix(p):
    p.take("sym", "[")
    values = []
    if p.peek()[1] != "]":
        values.append(p.operator())
        while p.accept(","):
            values.append(p.operator())
    p.take("sym", "]")
    p.comma()
    return sq.Prefix(tuple(values), p.sequence())


def _atnext(p):
    J = p.index_set()
    p.comma()
    return sq.AtNext(J, p.sequence())


_SEQ_FORMS = {
    "const": lambda p: sq.Const(p.operator()),
    "scaled": _scaled,
    "coordfun": _coordfun,
    "piecewise": _piecewise,
    "sum": _binary(sq.Sum),
    "join": _binary(sq.Join),
    "meet": _binary(sq.Meet),
    "scale": _scale,
    "abs": lambda p: sq.Abs(p.sequence()),
    "pos": lambda p: sq.PosPart(p.sequence()),
    "neg": lambda p: sq.neg_part(p.sequence()),
    "composel": _composel,
    "composer": _composer,
    "ratmat": _ratmat,
    "prefix": _prefix,
    "atnext": _atnext,
}


def _parse(text: str, env: Env | None, method: str):
    p = _Parser(text, env)
    out = getattr(p, method)()
    p.done()
    return out


def parse_rf(text: str) -> RationalFunction:
    f = _parse(text, None, "rf")
    if not f.pole_free():
        raise ParseError(f"{f} has a pole at a positive integer", text, 0)
    return f


def parse_scalar(text: str | int | Fraction) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return _parse(str(text), None, "scalar")


def parse_index_set(text: str, env: Env | None = None) -> ds.IndexSet:
    return _parse(text, env, "index_set")


def parse_operator(text: str, env: Env | None = None) -> Operator:
    return _parse(text, env, "operator")


def parse_sequence(text: str, env: Env | None = None) -> sq.OperatorSequence:
    return _parse(text, env, "sequence")
