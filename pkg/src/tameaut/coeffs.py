"""Exact scalars: the rational field, prime fields, and Laurent polynomials in t.

Coefficients inside polynomials are stored *raw* for speed: ``int`` or
``Fraction`` over Q (integral values always collapse to ``int``), ``int`` in
``[0, p)`` over F_p, and :class:`LaurentScalar` over a Laurent ring.  The
ring objects (:class:`FieldSpec`, :class:`LaurentRing`) know how to reduce,
invert, parse and print raw values.  :class:`Scalar` is the boxed public form.
"""

from __future__ import annotations

import math
import numbers
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DivisionByZero, FieldMismatch, InvalidField, PoleAtZero, ParseError

Raw = Union[int, Fraction, "LaurentScalar"]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    for d in range(3, math.isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Ground field: ``FieldSpec()`` is Q, ``FieldSpec.prime(p)`` is F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p and not is_prime(self.p):
            raise InvalidField(f"modulus {self.p} is not prime")
        if self.p < 0 or self.p == 1:
            raise InvalidField(f"invalid modulus {self.p}")

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        text = text.strip().lower()
        if text in ("q", "qq", "rational"):
            return cls(0)
        m = re.fullmatch(r"(?:fp|f|gf)[:_]?(\d+)", text)
        if m:
            return cls(int(m.group(1)))
        raise InvalidField(f"unknown field {text!r}; use 'q' or 'fp:<p>'")

    @property
    def kind(self) -> str:
        return "prime" if self.p else "rational"

    @property
    def char(self) -> int:
        return self.p

    @property
    def base(self) -> "FieldSpec":
        return self

    def __str__(self) -> str:
        return f"fp:{self.p}" if self.p else "q"

    # raw value handling

    def reduce(self, v):
        if self.p:
            return v % self.p
        if type(v) is Fraction and v.denominator == 1:
            return v.numerator
        return v

    def coerce(self, v) -> Raw:
        if isinstance(v, Scalar):
            if v.field != self:
                raise FieldMismatch(f"scalar over {v.field} used in {self}")
            return v.value
        if isinstance(v, str):
            return self.parse_value(v)
        if isinstance(v, bool):
            v = int(v)
        if isinstance(v, int):
            return v % self.p if self.p else v
        if isinstance(v, Fraction):
            if self.p:
                den = v.denominator % self.p
                if den == 0:
                    raise DivisionByZero(f"denominator {v.denominator} vanishes in F_{self.p}")
                return v.numerator * pow(den, -1, self.p) % self.p
            return self.reduce(v)
        if isinstance(v, numbers.Integral):
            return self.coerce(int(v))
        if isinstance(v, numbers.Rational):
            return self.coerce(Fraction(int(v.numerator), int(v.denominator)))
        raise TypeError(f"cannot interpret {v!r} as a scalar")

    def inv(self, v):
        if not v:
            raise DivisionByZero("inverse of zero")
        if self.p:
            return pow(v, -1, self.p)
        return self.reduce(Fraction(1) / v)

    def div(self, a, b):
        if not b:
            raise DivisionByZero("division by zero")
        if self.p:
            return a * pow(b, -1, self.p) % self.p
        return self.reduce(Fraction(a) / b)

    def neg(self, v):
        return (-v) % self.p if self.p else -v

    def parse_value(self, text: str) -> Raw:
        m = _RATIONAL_RE.match(text)
        if not m:
            raise ParseError(f"bad scalar {text!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise DivisionByZero("zero denominator")
        return self.coerce(Fraction(num, den))

    def format_value(self, v) -> str:
        return str(v)

    def is_negative(self, v) -> bool:
        return (not self.p) and v < 0

    def random(self, rng: random.Random, bound: int = 5, nonzero: bool = False):
        while True:
            if self.p:
                v = rng.randrange(self.p)
            else:
                num = rng.randint(-bound, bound)
                den = rng.choice((1, 1, 1, 2, 3))
                v = self.reduce(Fraction(num, den))
            if v or not nonzero:
                return v

    def elements(self, count: int):
        """``count`` distinct field elements 0, 1, -1, 2, -2, ... (F_p permitting)."""
        out = [0]
        k = 1
        while len(out) < count:
            for v in (k, -k):
                v = self.coerce(v)
                if v not in out and len(out) < count:
                    out.append(v)
            k += 1
            if self.p and k > self.p:
                raise InvalidField(f"F_{self.p} has fewer than {count} elements")
        return out


QQ = FieldSpec(0)


class LaurentScalar:
    """Finite sum of c_k t^k with exact coefficients; immutable."""

    __slots__ = ("field", "_terms", "_hash")

    def __init__(self, field: FieldSpec, terms=None):
        self.field = field
        clean = {}
        if terms:
            for k, c in terms.items():
                c = field.reduce(c)
                if c:
                    clean[int(k)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def monomial(cls, field: FieldSpec, k: int, c=1) -> "LaurentScalar":
        return cls(field, {k: field.coerce(c)})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def _lift(self, other) -> "LaurentScalar":
        if isinstance(other, LaurentScalar):
            if other.field != self.field:
                raise FieldMismatch("Laurent scalars over different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentScalar(self.field, {0: self.field.coerce(other)})
        return NotImplemented

    def __bool__(self):
        return bool(self._terms)

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentScalar(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentScalar(self.field, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + c1 * c2
        return LaurentScalar(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = LaurentScalar(self.field, {0: 1})
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def inverse(self) -> "LaurentScalar":
        if len(self._terms) != 1:
            raise DivisionByZero("only monomials c*t^k are units in K[t, 1/t]")
        (k, c), = self._terms.items()
        return LaurentScalar(self.field, {-k: self.field.inv(c)})

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            items = tuple(sorted(self._terms.items()))
            if not items:
                self._hash = hash(0)
            elif len(items) == 1 and items[0][0] == 0:
                self._hash = hash(items[0][1])
            else:
                self._hash = hash(items)
        return self._hash

    def valuation(self) -> int:
        return laurent_valuation(self)

    def at_zero(self):
        return laurent_at_zero(self)

    def __repr__(self):
        return f"LaurentScalar({format_laurent(self)!r})"

    def __str__(self):
        return format_laurent(self)


def laurent_valuation(x: LaurentScalar) -> int:
    """Lowest exponent of t carrying a nonzero coefficient."""
    if not x:
        raise DivisionByZero("valuation of zero is undefined")
    return min(x._terms)


def laurent_at_zero(x: LaurentScalar):
    """Value at t = 0; a negative valuation is a pole and raises."""
    if x and laurent_valuation(x) < 0:
        raise PoleAtZero(f"{format_laurent(x)} has a pole at t=0")
    return x._terms.get(0, 0)


def format_laurent(x: LaurentScalar) -> str:
    if not x:
        return "0"
    parts = []
    for k in sorted(x._terms):
        c = x._terms[k]
        neg = x.field.is_negative(c)
        mag = -c if neg else c
        if k == 0:
            body = str(mag)
        else:
            tp = "t" if k == 1 else f"t^{k}"
            body = tp if mag == 1 else f"{mag}*{tp}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


_LTERM_RE = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*(t(?:\s*\^\s*([+-]?\d+))?)?")


def parse_laurent(field: FieldSpec, text: str) -> LaurentScalar:
    """Parse ``3 + 2*t^-1 - t``-style text."""
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty Laurent scalar")
    pos = 0
    terms: dict[int, object] = {}
    while pos < len(s):
        m = _LTERM_RE.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ParseError(f"bad Laurent scalar {text!r} at column {pos + 1}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = field.parse_value(m.group(2)) if m.group(2) else 1
        if m.group(3):
            k = int(m.group(4)) if m.group(4) else 1
        else:
            k = 0
        terms[k] = terms.get(k, 0) + sign * coeff
        pos = m.end()
        if pos < len(s) and s[pos] not in "+-":
            raise ParseError(f"bad Laurent scalar {text!r} at column {pos + 1}")
    return LaurentScalar(field, terms)


class LaurentRing:
    """K[t, 1/t] over a base field, with the same raw-value protocol as FieldSpec."""

    def __init__(self, base: FieldSpec):
        self.base = base

    def __eq__(self, other):
        return isinstance(other, LaurentRing) and other.base == self.base

    def __hash__(self):
        return hash(("laurent", self.base))

    def __str__(self):
        return f"{self.base}[t,1/t]"

    @property
    def char(self) -> int:
        return self.base.char

    @property
    def p(self) -> int:
        return self.base.p

    def t(self, k: int = 1) -> LaurentScalar:
        return LaurentScalar.monomial(self.base, k)

    def reduce(self, v):
        return v

    def coerce(self, v) -> LaurentScalar:
        if isinstance(v, LaurentScalar):
            if v.field != self.base:
                raise FieldMismatch("Laurent scalar over another field")
            return v
        if isinstance(v, str):
            return parse_laurent(self.base, v)
        return LaurentScalar(self.base, {0: self.base.coerce(v)})

    def inv(self, v):
        return self.coerce(v).inverse()

    def div(self, a, b):
        return self.coerce(a) * self.coerce(b).inverse()

    def neg(self, v):
        return -v

    def parse_value(self, text):
        return parse_laurent(self.base, text)

    def format_value(self, v) -> str:
        s = format_laurent(v)
        return s if len(v._terms) <= 1 and not s.startswith("-") else f"({s})"

    def is_negative(self, v) -> bool:
        return False


@dataclass(frozen=True)
class Scalar:
    """A field element tagged with its field."""

    field: FieldSpec
    value: object

    @classmethod
    def of(cls, field: FieldSpec, v) -> "Scalar":
        return cls(field, field.coerce(v))

    @classmethod
    def parse(cls, field: FieldSpec, text: str) -> "Scalar":
        return cls(field, field.parse_value(text))

    def _check(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = Scalar.of(self.field, other)
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.reduce(self.value + other.value))

    def __sub__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.reduce(self.value - other.value))

    def __mul__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.reduce(self.value * other.value))

    def __truediv__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.div(self.value, other.value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __bool__(self):
        return bool(self.value)

    def __str__(self):
        return self.field.format_value(self.value)


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    ops = {"add": Scalar.__add__, "sub": Scalar.__sub__,
           "mul": Scalar.__mul__, "div": Scalar.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown op {op!r}")
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    return ops[op](a, b)
