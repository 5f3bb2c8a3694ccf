"""Sparse exact polynomials, commutative (K[x1..xn]) and free associative (K<x1..xn>).

Monomials are tuples: exponent vectors in the commutative flavor, words of
0-based variable indices in the noncommutative flavor.  Coefficients are raw
ring values (see :mod:`tameaut.coeffs`); zero coefficients are never stored.

Every product-like operation takes an optional ``trunc``: when given, the
computation happens in A/I^trunc, i.e. all monomials of total degree
``>= trunc`` are dropped as they are produced.
"""

from __future__ import annotations

import itertools
import math
import operator
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .coeffs import QQ, FieldSpec
from .errors import ContextMismatch, FlavorError

ALIASES = ("x", "y", "z", "t")


def _integral(terms: dict) -> tuple:
    """(D, D * terms) with D the lcm of the denominators, so every value is an int."""
    d = 1
    for c in terms.values():
        if type(c) is Fraction:
            d = d * c.denominator // math.gcd(d, c.denominator)
    if d == 1:
        return 1, terms
    return d, {m: int(c * d) for m, c in terms.items()}


@dataclass(frozen=True)
class PolyContext:
    n: int
    ring: object = QQ
    commutative: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one variable")

    @property
    def flavor(self) -> str:
        return "comm" if self.commutative else "nc"

    @property
    def field(self) -> FieldSpec:
        return self.ring.base

    @property
    def char(self) -> int:
        return self.ring.char

    def with_ring(self, ring) -> "PolyContext":
        return PolyContext(self.n, ring, self.commutative)

    def var(self, i: int) -> "Poly":
        if not 0 <= i < self.n:
            raise IndexError(f"variable index {i} outside 0..{self.n - 1}")
        if self.commutative:
            m = tuple(1 if j == i else 0 for j in range(self.n))
        else:
            m = (i,)
        return Poly._raw(self, {m: 1})

    def gens(self) -> list["Poly"]:
        return [self.var(i) for i in range(self.n)]

    @property
    def unit_monomial(self) -> tuple:
        return (0,) * self.n if self.commutative else ()

    def const(self, c) -> "Poly":
        c = self.ring.coerce(c)
        return Poly._raw(self, {self.unit_monomial: c} if c else {})

    @property
    def zero(self) -> "Poly":
        return Poly._raw(self, {})

    @property
    def one(self) -> "Poly":
        return self.const(1)

    def monomial(self, mono, c=1) -> "Poly":
        return Poly(self, {tuple(mono): self.ring.coerce(c)})

    def var_name(self, i: int, aliases: bool = False) -> str:
        if aliases and self.n <= len(ALIASES):
            return ALIASES[i]
        return f"x{i + 1}"

    def word_to_monomial(self, word: Sequence[int]) -> tuple:
        """Commutative image of a word, or the word itself in the nc flavor."""
        if not self.commutative:
            return tuple(word)
        e = [0] * self.n
        for v in word:
            e[v] += 1
        return tuple(e)


def mono_degree(m: tuple, commutative: bool) -> int:
    return sum(m) if commutative else len(m)


def mono_word(m: tuple, commutative: bool) -> tuple:
    """Monomial as a word; commutative monomials list variables in index order."""
    if not commutative:
        return m
    return tuple(i for i, e in enumerate(m) for _ in range(e))


def mono_contains(m: tuple, i: int, commutative: bool) -> bool:
    return m[i] > 0 if commutative else i in m


def mono_key(m: tuple, commutative: bool):
    """Canonical order: graded; deglex (x1 > x2) commutative, length-lex words nc."""
    if commutative:
        return (sum(m), tuple(-e for e in m))
    return (len(m), m)


_add = operator.add


class Poly:
    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: PolyContext, terms: Optional[dict] = None):
        ring = ctx.ring
        clean = {}
        if terms:
            for m, c in terms.items():
                c = ring.reduce(c)
                if c:
                    clean[tuple(m)] = c
        self.ctx = ctx
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ctx, terms):
        p = cls.__new__(cls)
        p.ctx = ctx
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def _from_acc(cls, ctx, acc):
        reduce = ctx.ring.reduce
        out = {}
        for m, c in acc.items():
            c = reduce(c)
            if c:
                out[m] = c
        return cls._raw(ctx, out)

    # basic queries

    @property
    def commutative(self) -> bool:
        return self.ctx.commutative

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        c = self.commutative
        return max(mono_degree(m, c) for m in self.terms)

    def low_degree(self) -> int:
        """Lowest total degree present; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        c = self.commutative
        return min(mono_degree(m, c) for m in self.terms)

    def sole_monomial(self) -> tuple:
        (m,) = self.terms
        return m

    def coefficient(self, mono) -> object:
        return self.terms.get(tuple(mono), 0)

    def constant_term(self):
        return self.terms.get(self.ctx.unit_monomial, 0)

    def sorted_terms(self) -> list:
        c = self.commutative
        return sorted(self.terms.items(), key=lambda mc: mono_key(mc[0], c))

    def homogeneous(self, d: int) -> "Poly":
        c = self.commutative
        return Poly._raw(self.ctx, {m: v for m, v in self.terms.items() if mono_degree(m, c) == d})

    def truncate(self, m: int) -> "Poly":
        """Drop all monomials of total degree >= m (the image in A/I^m)."""
        c = self.commutative
        return Poly._raw(self.ctx, {k: v for k, v in self.terms.items() if mono_degree(k, c) < m})

    def variables(self) -> set:
        out = set()
        c = self.commutative
        for m in self.terms:
            if c:
                out.update(i for i, e in enumerate(m) if e)
            else:
                out.update(m)
        return out

    def involves(self, i: int) -> bool:
        c = self.commutative
        return any(mono_contains(m, i, c) for m in self.terms)

    # arithmetic

    def _check(self, other: "Poly"):
        if other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx} vs {other.ctx}")

    def _lift(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        return self.ctx.const(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        reduce = self.ctx.ring.reduce
        for m, c in other.terms.items():
            v = reduce(out.get(m, 0) + c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._raw(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        reduce = self.ctx.ring.reduce
        return Poly._raw(self.ctx, {m: reduce(-c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = self.ctx.ring.coerce(c)
        if not c:
            return self.ctx.zero
        reduce = self.ctx.ring.reduce
        out = {}
        for m, v in self.terms.items():
            w = reduce(v * c)
            if w:
                out[m] = w
        return Poly._raw(self.ctx, out)

    def mul(self, other: "Poly", trunc: Optional[int] = None) -> "Poly":
        self._check(other)
        comm = self.commutative
        if not self.terms or not other.terms:
            return self.ctx.zero
        lhs_terms, rhs_terms, denom = self.terms, other.terms, 1
        if self.ctx.ring == QQ:
            # multiply integer numerators; Fraction arithmetic in the inner loop is the bottleneck
            (d1, lhs_terms), (d2, rhs_terms) = _integral(lhs_terms), _integral(rhs_terms)
            denom = d1 * d2
        rhs = sorted(((mono_degree(m, comm), m, c) for m, c in rhs_terms.items()),
                     key=operator.itemgetter(0))
        acc: dict = {}
        get = acc.get
        for m1, c1 in lhs_terms.items():
            d1 = mono_degree(m1, comm)
            for d2, m2, c2 in rhs:
                if trunc is not None and d1 + d2 >= trunc:
                    break
                m = tuple(map(_add, m1, m2)) if comm else m1 + m2
                acc[m] = get(m, 0) + c1 * c2
        if denom != 1:
            acc = {m: Fraction(c, denom) for m, c in acc.items()}
        return Poly._from_acc(self.ctx, acc)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, Poly):
            return other.mul(self)
        return self.scale(other)

    def pow(self, e: int, trunc: Optional[int] = None) -> "Poly":
        if e < 0:
            raise ValueError("negative power")
        out = self.ctx.one
        if trunc is not None:
            out = out.truncate(trunc)
        base = self
        while e:
            if e & 1:
                out = out.mul(base, trunc)
            e >>= 1
            if e:
                base = base.mul(base, trunc)
        return out

    def __pow__(self, e: int):
        return self.pow(e)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ctx.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self.terms.items())))
        return self._hash

    # structural operations

    def substitute(self, images: Sequence["Poly"], trunc: Optional[int] = None) -> "Poly":
        """Replace variable i by images[i] everywhere and expand."""
        if len(images) != self.ctx.n:
            raise ContextMismatch(f"need {self.ctx.n} images, got {len(images)}")
        out_ctx = images[0].ctx
        for im in images:
            if im.ctx != out_ctx:
                raise ContextMismatch("images live in different contexts")
        if out_ctx.commutative != self.commutative:
            raise FlavorError("substitution across flavors is not supported")
        if not self.terms:
            return out_ctx.zero
        comm = self.commutative
        one = out_ctx.one if trunc is None else out_ctx.one.truncate(trunc)
        acc: dict = {}
        if comm:
            powers = [[one] for _ in range(self.ctx.n)]

            def power(i, e):
                pw = powers[i]
                while len(pw) <= e:
                    pw.append(pw[-1].mul(images[i], trunc))
                return pw[e]

            cache = {(): one}
            for m, c in sorted(self.terms.items()):
                j = len(m)
                while m[:j] not in cache:
                    j -= 1
                prod = cache[m[:j]]
                while j < len(m):
                    if m[j]:
                        prod = prod.mul(power(j, m[j]), trunc)
                    j += 1
                    cache[m[:j]] = prod
                for mm, v in prod.terms.items():
                    acc[mm] = acc.get(mm, 0) + c * v
        else:
            cache = {(): one}
            for m, c in sorted(self.terms.items()):
                j = len(m)
                while m[:j] not in cache:
                    j -= 1
                prod = cache[m[:j]]
                while j < len(m):
                    prod = prod.mul(images[m[j]], trunc)
                    j += 1
                    cache[m[:j]] = prod
                for mm, v in prod.terms.items():
                    acc[mm] = acc.get(mm, 0) + c * v
        return Poly._from_acc(out_ctx, acc)

    def derivative(self, i: int) -> "Poly":
        """Formal partial derivative d/dx_i (commutative flavor only)."""
        if not self.commutative:
            raise FlavorError("partial derivatives need the commutative flavor")
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = m[:i] + (e - 1,) + m[i + 1:]
                out[mm] = c * e
        return Poly(self.ctx, out)

    def map_coefficients(self, fn, ctx: Optional[PolyContext] = None) -> "Poly":
        return Poly(ctx or self.ctx, {m: fn(m, c) for m, c in self.terms.items()})

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def format_monomial(ctx: PolyContext, m: tuple, aliases: bool = False) -> str:
    parts = []
    if ctx.commutative:
        for i, e in enumerate(m):
            if e:
                v = ctx.var_name(i, aliases)
                parts.append(v if e == 1 else f"{v}^{e}")
    else:
        for v, run in itertools.groupby(m):
            e = len(list(run))
            name = ctx.var_name(v, aliases)
            parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def format_poly(f: Poly, aliases: bool = False) -> str:
    if not f.terms:
        return "0"
    ring = f.ctx.ring
    out = []
    for m, c in f.sorted_terms():
        neg = ring.is_negative(c)
        mag = ring.neg(c) if neg else c
        mono = format_monomial(f.ctx, m, aliases)
        cstr = ring.format_value(mag)
        if not mono:
            body = cstr
        elif mag == 1:
            body = mono
        else:
            body = f"{cstr}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


# operations from the noncommutative toolkit


@dataclass(frozen=True)
class StarProduct:
    """x*y = a*xy + b*yx on the free associative algebra."""

    a: object = 1
    b: object = 0

    @classmethod
    def one_parameter(cls, lam) -> "StarProduct":
        return cls(1, lam)


def poly_arith(f: Poly, g: Poly, op: str) -> Poly:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f.mul(g)
    raise ValueError(f"unknown op {op!r}")


def _require_nc(*polys):
    for p in polys:
        if p.commutative:
            raise FlavorError("operation needs noncommutative polynomials")


def commutator(a: Poly, b: Poly, trunc: Optional[int] = None) -> Poly:
    _require_nc(a, b)
    return a.mul(b, trunc) - b.mul(a, trunc)


def star(f: Poly, g: Poly, s: StarProduct, trunc: Optional[int] = None) -> Poly:
    _require_nc(f, g)
    return f.mul(g, trunc).scale(s.a) + g.mul(f, trunc).scale(s.b)


def associator(f: Poly, g: Poly, h: Poly, s: StarProduct, trunc: Optional[int] = None) -> Poly:
    """{f,g,h} = (f*g)*h - f*(g*h)."""
    return star(star(f, g, s, trunc), h, s, trunc) - star(f, star(g, h, s, trunc), s, trunc)


def nc_derivation(images: Sequence[Poly], f: Poly) -> Poly:
    """Apply the derivation with D(x_i) = images[i] (Leibniz rule on words)."""
    _require_nc(f)
    ctx = f.ctx
    if len(images) != ctx.n:
        raise ContextMismatch(f"need {ctx.n} images, got {len(images)}")
    for im in images:
        if im.ctx != ctx:
            raise ContextMismatch("derivation images in another context")
    acc: dict = {}
    for w, c in f.terms.items():
        for j, v in enumerate(w):
            dv = images[v]
            if not dv.terms:
                continue
            left, right = w[:j], w[j + 1:]
            for mm, cc in dv.terms.items():
                key = left + mm + right
                acc[key] = acc.get(key, 0) + c * cc
    return Poly._from_acc(ctx, acc)


def split_by_support(f: Poly, vars: Iterable[int]) -> tuple[Poly, Poly]:
    """(terms touching some variable in ``vars``, all remaining terms)."""
    vs = set(vars)
    comm = f.commutative
    hit, rest = {}, {}
    for m, c in f.terms.items():
        if any(mono_contains(m, v, comm) for v in vs):
            hit[m] = c
        else:
            rest[m] = c
    return Poly._raw(f.ctx, hit), Poly._raw(f.ctx, rest)


def lex_min_term(f: Poly, order: Optional[Sequence[int]] = None) -> tuple[tuple, object]:
    """Lexicographically minimal term of the top-degree component.

    ``order`` lists variable indices from smallest to largest precedence
    (default x1 < x2 < ...).  Commutative monomials are compared as the
    sorted word of their variables.
    """
    if not f.terms:
        raise ValueError("zero polynomial has no terms")
    n = f.ctx.n
    order = list(range(n)) if order is None else list(order)
    rank = {v: r for r, v in enumerate(order)}
    top = f.degree()
    comm = f.commutative
    best = None
    for m, c in f.terms.items():
        if mono_degree(m, comm) != top:
            continue
        word = tuple(sorted(rank[v] for v in mono_word(m, comm))) if comm else \
            tuple(rank[v] for v in m)
        if best is None or word < best[0]:
            best = (word, m, c)
    return best[1], best[2]


def truncate(f: Poly, m: int) -> Poly:
    if m < 0:
        raise ValueError("truncation degree must be >= 0")
    return f.truncate(m)


def substitute(f: Poly, images: Sequence[Poly], trunc: Optional[int] = None) -> Poly:
    return f.substitute(images, trunc)


def all_monomials(ctx: PolyContext, degree: int, variables: Optional[Sequence[int]] = None):
    """Every monomial of exactly ``degree`` in the given variables."""
    vs = list(range(ctx.n)) if variables is None else list(variables)
    if ctx.commutative:
        for combo in itertools.combinations_with_replacement(vs, degree):
            yield ctx.word_to_monomial(combo)
    else:
        for word in itertools.product(vs, repeat=degree):
            yield tuple(word)


def random_poly(ctx: PolyContext, rng: random.Random, max_degree: int = 3, nterms: int = 4,
                min_degree: int = 0, variables: Optional[Sequence[int]] = None,
                coeff_bound: int = 5) -> Poly:
    vs = list(range(ctx.n)) if variables is None else list(variables)
    terms = {}
    field = ctx.field
    for _ in range(nterms):
        d = rng.randint(min_degree, max_degree)
        word = [rng.choice(vs) for _ in range(d)]
        m = ctx.word_to_monomial(word)
        terms[m] = field.random(rng, coeff_bound, nonzero=True)
    return Poly(ctx, terms)


def laurent_lift(f: Poly, ctx: PolyContext) -> Poly:
    """Re-home a base-field polynomial into a context over a Laurent ring."""
    coerce = ctx.ring.coerce
    return Poly(ctx, {m: coerce(c) for m, c in f.terms.items()})


__all__ = [
    "PolyContext", "Poly", "StarProduct", "poly_arith", "commutator", "star", "associator",
    "nc_derivation", "split_by_support", "lex_min_term", "truncate", "substitute",
    "all_monomials", "random_poly", "format_poly", "format_monomial", "laurent_lift",
]
