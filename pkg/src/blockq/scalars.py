"""Exact coefficient arithmetic: rationals, polynomials in q, and their fraction field.

Every computation runs in one of two modes:

* fixed mode  -- q is specialized to an exact rational; scalars are `Fraction`.
* generic mode -- q stays formal; scalars are `RatFunc`, elements of Q(q).

The mode is a property of the whole computation and is never mixed: the
module-level field operations raise `ModeMismatch` when handed one scalar of
each kind.  Throughout the package a value ``q: Fraction | None`` selects the
mode, with ``None`` meaning generic.

Polynomials are kept with trailing zero coefficients stripped; rational
functions are gcd-reduced with a monic denominator, so equality is structural.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Union

from .errors import DivisionByZero, ModeMismatch, ParseError, PoleAtQ0

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Poly:
    """Univariate polynomial in the formal parameter q over the rationals.

    Coefficients are stored low degree first; the zero polynomial is the
    empty tuple.  Instances are immutable and hashable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Fraction | int] = ()):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, c: Fraction | int) -> "Poly":
        return cls((Fraction(c),))

    @classmethod
    def q(cls) -> "Poly":
        return cls((_ZERO, _ONE))

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_one(self) -> bool:
        return self.coeffs == (_ONE,)

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise DivisionByZero("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [_ZERO] * (len(a) + len(b) - 1)
        for k, c in enumerate(a):
            if c:
                for l, d in enumerate(b):
                    out[k + l] += c * d
        return Poly(out)

    def scale(self, c: Fraction | int) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return Poly()
        return Poly(tuple(c * x for x in self.coeffs))

    def monic(self) -> "Poly":
        return self.scale(1 / self.leading)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Exact long division: self = quot*other + rem with deg rem < deg other."""
        if other.is_zero:
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        dlead = other.leading
        dd = other.degree
        quot = [_ZERO] * max(0, len(rem) - dd)
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            f = c / dlead
            quot[k - dd] = f
            for l, d in enumerate(other.coeffs):
                rem[k - dd + l] -= f * d
        return Poly(quot), Poly(rem)

    def __call__(self, q0: Fraction | int) -> Fraction:
        q0 = Fraction(q0)
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * q0 + c
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("Poly", self.coeffs))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "q" if k == 1 else f"q^{k}"
                body = var if mag == 1 else f"{mag}*{var}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(parts)


_P_ZERO = Poly()
_P_ONE = Poly.const(1)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) is the zero polynomial."""
    while not b.is_zero:
        a, b = b, a.divmod(b)[1]
    return a if a.is_zero else a.monic()


class RatFunc:
    """Element of Q(q): a gcd-reduced ratio of polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = _P_ONE):
        if den.is_zero:
            raise DivisionByZero("rational function with zero denominator")
        if num.is_zero:
            num, den = _P_ZERO, _P_ONE
        elif not den.is_one:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
            lc = den.leading
            if lc != 1:
                num = num.scale(1 / lc)
                den = den.scale(1 / lc)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def const(cls, c: Fraction | int) -> "RatFunc":
        return cls(Poly.const(c))

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFunc":
        return cls(p)

    @classmethod
    def q(cls) -> "RatFunc":
        return cls(Poly.q())

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        raise ModeMismatch(
            f"generic-mode scalar combined with {type(other).__name__}")

    def __add__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if self.den.is_one and other.den.is_one:
            return RatFunc(self.num + other.num)
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    def __sub__(self, other) -> "RatFunc":
        return self + (-self._coerce(other))

    def __neg__(self) -> "RatFunc":
        out = RatFunc.__new__(RatFunc)
        object.__setattr__(out, "num", -self.num)
        object.__setattr__(out, "den", self.den)
        return out

    def __mul__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if self.den.is_one and other.den.is_one:
            return RatFunc(self.num * other.num)
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other) -> "RatFunc":
        return self * self._coerce(other).inv()

    def __radd__(self, other):
        raise ModeMismatch("fixed-mode scalar combined with generic-mode scalar")

    __rsub__ = __radd__
    __rmul__ = __radd__
    __rtruediv__ = __radd__

    def inv(self) -> "RatFunc":
        if self.is_zero:
            raise DivisionByZero("inverse of zero")
        return RatFunc(self.den, self.num)

    def scale(self, c: Fraction | int) -> "RatFunc":
        return RatFunc(self.num.scale(c), self.den)

    def specialize(self, q0: Fraction | int) -> Fraction:
        q0 = Fraction(q0)
        d = self.den(q0)
        if d == 0:
            raise PoleAtQ0(f"denominator {self.den} vanishes at q = {q0}")
        return self.num(q0) / d

    def __eq__(self, other) -> bool:
        return (isinstance(other, RatFunc)
                and self.num == other.num and self.den == other.den)

    def __hash__(self) -> int:
        return hash(("RatFunc", self.num, self.den))

    def __bool__(self) -> bool:
        return not self.is_zero

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        if self.den.is_one:
            return str(self.num)
        return f"({self.num})/({self.den})"


Scalar = Union[Fraction, RatFunc]


def _check_same_mode(a: Scalar, b: Scalar) -> bool:
    """True for fixed mode, False for generic; raises on a mix."""
    fa = isinstance(a, Fraction)
    fb = isinstance(b, Fraction)
    if fa != fb:
        raise ModeMismatch(
            f"cannot combine {type(a).__name__} with {type(b).__name__}")
    return fa


def add(a: Scalar, b: Scalar) -> Scalar:
    _check_same_mode(a, b)
    return a + b


def sub(a: Scalar, b: Scalar) -> Scalar:
    _check_same_mode(a, b)
    return a - b


def mul(a: Scalar, b: Scalar) -> Scalar:
    _check_same_mode(a, b)
    return a * b


def neg(a: Scalar) -> Scalar:
    return -a


def inv(a: Scalar) -> Scalar:
    if isinstance(a, Fraction):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return 1 / a
    return a.inv()


def div(a: Scalar, b: Scalar) -> Scalar:
    return mul(a, inv(b))


def eq(a: Scalar, b: Scalar) -> bool:
    _check_same_mode(a, b)
    return a == b


def is_zero(a: Scalar) -> bool:
    if isinstance(a, Fraction):
        return a == 0
    return a.is_zero


def specialize_q(x: RatFunc | Poly, q0: Fraction | int) -> Fraction:
    """Evaluate a generic-mode scalar at an exact rational q0."""
    if isinstance(x, Poly):
        return x(q0)
    return x.specialize(q0)


def scalar_zero(q: Fraction | None) -> Scalar:
    return _ZERO if q is not None else RatFunc(_P_ZERO)


def scalar_one(q: Fraction | None) -> Scalar:
    return _ONE if q is not None else RatFunc(_P_ONE)


def from_fraction(c: Fraction | int, q: Fraction | None) -> Scalar:
    """Lift an exact rational constant into the active coefficient field."""
    return Fraction(c) if q is not None else RatFunc.const(c)


def format_scalar(x: Scalar) -> str:
    return str(x)


_Q_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def format_q(q: Fraction | None) -> str:
    return "generic" if q is None else str(q)


def parse_q(text: str) -> Fraction | None:
    """Parse a q-mode flag: 'generic' or an exact rational like '7/3'."""
    text = text.strip()
    if text == "generic":
        return None
    if not _Q_RE.match(text):
        raise ParseError(f"q must be 'generic' or an exact rational, got {text!r}")
    return Fraction(text)


# --- scalar string parsing -------------------------------------------------
#
# Grammar (tokens: INT, 'q', + - * / ^ parentheses):
#   expr   := term (('+'|'-') term)*
#   term   := factor (('*'|'/') factor)*
#   factor := '-' factor | atom ('^' INT)?
#   atom   := INT | 'q' | '(' expr ')'
#
# Everything is evaluated in Q(q); fixed-mode parsing additionally demands a
# constant result.

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([q+\-*/^()])|(\S))")


def _tokenize_scalar(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        mm = _TOKEN_RE.match(text, pos)
        if not mm:
            break
        if mm.group(3):
            raise ParseError(f"unexpected character {mm.group(3)!r}",
                             line=1, col=mm.start(3) + 1)
        if mm.group(1):
            toks.append(("INT", mm.group(1), mm.start(1) + 1))
        else:
            toks.append((mm.group(2), mm.group(2), mm.start(2) + 1))
        pos = mm.end()
    toks.append(("EOF", "", len(text) + 1))
    return toks


class _ScalarParser:
    def __init__(self, text: str):
        self.toks = _tokenize_scalar(text)
        self.k = 0

    def peek(self) -> str:
        return self.toks[self.k][0]

    def take(self, kind: str | None = None) -> tuple[str, str, int]:
        tok = self.toks[self.k]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"unexpected token {tok[1]!r}", line=1,
                             col=tok[2], expected=(kind,))
        self.k += 1
        return tok

    def parse(self) -> RatFunc:
        val = self.expr()
        tok = self.toks[self.k]
        if tok[0] != "EOF":
            raise ParseError(f"trailing input {tok[1]!r}", line=1, col=tok[2],
                             expected=("end of input",))
        return val

    def expr(self) -> RatFunc:
        val = self.term()
        while self.peek() in "+-":
            op = self.take()[0]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self) -> RatFunc:
        val = self.factor()
        while self.peek() in "*/":
            op = self.take()[0]
            rhs = self.factor()
            val = val * rhs if op == "*" else val / rhs
        return val

    def factor(self) -> RatFunc:
        if self.peek() == "-":
            self.take()
            return -self.factor()
        val = self.atom()
        if self.peek() == "^":
            self.take()
            exp = int(self.take("INT")[1])
            out = RatFunc.const(1)
            for _ in range(exp):
                out = out * val
            return out
        return val

    def atom(self) -> RatFunc:
        kind, text, col = self.take()
        if kind == "INT":
            return RatFunc.const(int(text))
        if kind == "q":
            return RatFunc.q()
        if kind == "(":
            val = self.expr()
            self.take(")")
            return val
        raise ParseError(f"unexpected token {text!r}", line=1, col=col,
                         expected=("INT", "q", "("))


def parse_scalar(text: str, q: Fraction | None = None) -> Scalar:
    """Parse the serialized scalar forms back into the active field.

    Accepts rationals ("p/q"), polynomials ("3*q^2 - 1/2*q + 4") and rational
    functions ("(num)/(den)").  In fixed mode the result must be constant.
    """
    val = _ScalarParser(text).parse()
    if q is None:
        return val
    if val.den.is_one and val.num.degree <= 0:
        return val.num(_ZERO)
    raise ModeMismatch(f"{text!r} is not a constant in fixed-q mode")
