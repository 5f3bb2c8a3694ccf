"""Diagonal torus actions: coefficient transforms, t-parameter conjugation and centralizers."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from . import linalg
from .coeffs import LaurentRing, laurent_valuation
from .endo import Endo, product
from .errors import TameAutError
from .polyalg import Poly, PolyContext, laurent_lift, mono_word


@dataclass(frozen=True)
class DiagonalAction:
    """x_i -> weights[i] * x_i."""

    weights: tuple

    def __init__(self, weights: Sequence):
        object.__setattr__(self, "weights", tuple(weights))
        if any(not w for w in self.weights):
            raise ValueError("diagonal weights must be nonzero")

    @classmethod
    def t_powers(cls, ring: LaurentRing, exponents: Sequence[int]) -> "DiagonalAction":
        return cls([ring.t(e) for e in exponents])

    def inverse(self, ring) -> "DiagonalAction":
        return DiagonalAction([ring.inv(w) for w in self.weights])

    def endo(self, ctx: PolyContext) -> Endo:
        e = Endo.diagonal(ctx, [ctx.ring.coerce(w) for w in self.weights])
        e._inv = lambda: Endo.diagonal(ctx, [ctx.ring.inv(w) for w in self.weights])
        return e


def _exponents(m: tuple, n: int, commutative: bool) -> list:
    if commutative:
        return list(m)
    out = [0] * n
    for v in mono_word(m, False):
        out[v] += 1
    return out


def torus_conjugate(alpha: DiagonalAction, f: Endo, beta: DiagonalAction) -> Endo:
    """alpha * f * beta by the closed form a_iJ -> alpha_i a_iJ beta^J."""
    ctx = f.ctx
    ring = ctx.ring
    n = ctx.n
    if len(alpha.weights) != n or len(beta.weights) != n:
        raise ValueError("weight vectors must have one entry per variable")
    a = [ring.coerce(w) for w in alpha.weights]
    b = [ring.coerce(w) for w in beta.weights]
    images = []
    for i, im in enumerate(f.images):
        terms = {}
        for m, c in im.terms.items():
            coef = ring.reduce(a[i] * c)
            for j, e in enumerate(_exponents(m, n, ctx.commutative)):
                if e:
                    coef = ring.reduce(coef * b[j] ** e)
            terms[m] = coef
        images.append(Poly(ctx, terms))
    return Endo(ctx, images, affine=f.affine)


def torus_conjugate_direct(alpha: DiagonalAction, f: Endo, beta: DiagonalAction) -> Endo:
    """The same map computed by composing the three endomorphisms."""
    ctx = f.ctx
    return product(alpha.endo(ctx), f, beta.endo(ctx))


def lift_to_laurent(f: Endo) -> Endo:
    ring = LaurentRing(f.ctx.field)
    ctx = PolyContext(f.ctx.n, ring, f.ctx.commutative)
    return Endo(ctx, [laurent_lift(im, ctx) for im in f.images], affine=f.affine)


def t_conjugate(weights: Sequence[int], f: Endo) -> Endo:
    """D(t)^-1 * f * D(t) with D(t) = diag(t^w_i), over K[t, 1/t]."""
    g = f if isinstance(f.ctx.ring, LaurentRing) else lift_to_laurent(f)
    ring = g.ctx.ring
    alpha = DiagonalAction.t_powers(ring, [-w for w in weights])
    beta = DiagonalAction.t_powers(ring, weights)
    return torus_conjugate(alpha, g, beta)


def singularity_valuation(weights: Sequence[int], f: Endo) -> int:
    """Smallest t-valuation among the coefficients of D(t)^-1 f D(t).

    Negative means a pole at t = 0.
    """
    if len(weights) != f.ctx.n:
        raise ValueError("one weight per variable")
    g = t_conjugate(weights, f)
    vals = [laurent_valuation(c) for im in g.images for c in im.terms.values()]
    return min(vals) if vals else 0


def has_singularity(weights: Sequence[int], f: Endo) -> bool:
    return singularity_valuation(weights, f) < 0


# centralizers --------------------------------------------------------------------


def family_cocharacters(family: str, n: int) -> list:
    """Integer weight vectors whose one-parameter subgroups generate the named action."""
    if family == "scalar-torus":
        return [[1] * n]
    if family == "T2-weighted":
        if n < 3:
            raise ValueError("T2-weighted needs at least three variables")
        return [[1, 1, 0] + [0] * (n - 3), [1, 0, 1] + [0] * (n - 3)]
    if family == "T1-squared":
        if n < 2:
            raise ValueError("T1-squared needs at least two variables")
        return [[2, 1] + [0] * (n - 2)]
    raise TameAutError(f"unknown family {family!r}")


FAMILIES = ("scalar-torus", "T2-weighted", "T1-squared")


@dataclass(frozen=True)
class CentralizerResult:
    commutes: bool
    witness: Optional[tuple] = None  # (image index, monomial, coefficient, weight defect)

    def __bool__(self):
        return self.commutes


def centralizer_check(family: str, f: Endo) -> CentralizerResult:
    """Whether f commutes with the whole named torus action.

    A term a x^J in the image of x_i survives conjugation by the
    cocharacter lambda^w unchanged iff w.J == w_i, so commuting with every
    lambda is a weight condition checked term by term.
    """
    n = f.ctx.n
    cochars = family_cocharacters(family, n)
    for i, im in enumerate(f.images):
        for m, c in im.sorted_terms():
            J = _exponents(m, n, f.ctx.commutative)
            for w in cochars:
                defect = sum(a * b for a, b in zip(w, J)) - w[i]
                if defect:
                    return CentralizerResult(False, (i, m, c, defect))
    return CentralizerResult(True)


def centralizer_check_sampled(family: str, f: Endo, lambdas: Sequence) -> CentralizerResult:
    """Direct check: f commutes with the action at each sampled parameter value."""
    ctx = f.ctx
    ring = ctx.ring
    for w in family_cocharacters(family, ctx.n):
        for lam in lambdas:
            lam = ring.coerce(lam)
            act = DiagonalAction([_pow(ring, lam, e) for e in w])
            left = product(act.endo(ctx), f)
            right = product(f, act.endo(ctx))
            if left != right:
                diff = [a - b for a, b in zip(left.images, right.images)]
                for i, d in enumerate(diff):
                    if d:
                        m, c = d.sorted_terms()[0]
                        return CentralizerResult(False, (i, m, c, None))
    return CentralizerResult(True)


def _pow(ring, a, e):
    if e < 0:
        return _pow(ring, ring.inv(a), -e)
    out = ring.coerce(1)
    for _ in range(e):
        out = ring.reduce(out * a)
    return out


def centralizer_family(family: str, ctx: PolyContext, rng: random.Random, count: int = 4,
                       bound: int = 5) -> list:
    """Random elements of the centralizer families of the named action."""
    ring = ctx.ring
    n = ctx.n
    out = []
    for _ in range(count):
        eps = [ring.random(rng, bound, nonzero=True) for _ in range(n)]
        beta = ring.random(rng, bound, nonzero=True)
        x = ctx.gens()
        if family == "scalar-torus":
            while True:
                mat = [[ring.random(rng, bound) for _ in range(n)] for _ in range(n)]
                if linalg.det(ring, mat):
                    break
            out.append(Endo.linear(ctx, mat))
            continue
        if family == "T2-weighted":
            eps[0] = 1
            addend = x[1].mul(x[2]).scale(beta)
            if not ctx.commutative:
                gamma = ring.random(rng, bound)
                addend = addend + x[2].mul(x[1]).scale(gamma)
        elif family == "T1-squared":
            eps[0] = eps[1] = 1
            addend = x[1].mul(x[1]).scale(beta)
        else:
            raise TameAutError(f"unknown family {family!r}")
        diag = Endo.diagonal(ctx, eps)
        out.append(product(Endo.elementary(ctx, 0, addend), diag))
    return out


__all__ = [
    "DiagonalAction", "torus_conjugate", "torus_conjugate_direct", "t_conjugate",
    "singularity_valuation", "has_singularity", "centralizer_check", "centralizer_check_sampled",
    "centralizer_family", "family_cocharacters", "FAMILIES", "CentralizerResult", "lift_to_laurent",
]
