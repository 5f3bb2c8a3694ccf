"""Explicit commutator constructions and the starred free-associative pipelines."""

from __future__ import annotations

from .coeffs import QQ, FieldSpec
from .endo import Endo, group_commutator, product
from .polyalg import Poly, PolyContext, StarProduct, commutator, star


def power_pair(n: int, k: int, field_spec: FieldSpec = QQ) -> tuple:
    """psi1: x -> x + y^k and psi2: y -> y + x^n in K[x, y]."""
    ctx = PolyContext(2, field_spec, True)
    x, y = ctx.gens()
    return Endo.elementary(ctx, 0, y.pow(k)), Endo.elementary(ctx, 1, x.pow(n))


def power_pair_commutator(n: int, k: int, field_spec: FieldSpec = QQ, cap: int = None) -> Endo:
    """[psi1, psi2] modulo I^cap (default n + k + 1, enough to see the exact level)."""
    p1, p2 = power_pair(n, k, field_spec)
    return group_commutator(p1, p2, cap if cap is not None else n + k + 1)


def power_pair_formula(n: int, k: int, field_spec: FieldSpec = QQ) -> tuple:
    """The closed-form images of [psi1, psi2]."""
    ctx = PolyContext(2, field_spec, True)
    x, y = ctx.gens()
    inner = y + x.pow(n)
    fy = inner - (x + inner.pow(k)).pow(n)
    return x + inner.pow(k) - fy.pow(k), fy


def xyyz_commutant(field_spec: FieldSpec = QQ, cap: int = 4) -> Endo:
    """phi2^-1 phi1^-1 phi2 phi1 with phi1: x -> x + yz, phi2: z -> z + yx, mod I^cap."""
    ctx = PolyContext(3, field_spec, False)
    x, y, z = ctx.gens()
    p1 = Endo.elementary(ctx, 0, y * z)
    p2 = Endo.elementary(ctx, 2, y * x)
    return product(p2.inverse(), p1.inverse(), p2, p1, trunc=cap)


def xyyz_expected(field_spec: FieldSpec = QQ) -> Endo:
    ctx = PolyContext(3, field_spec, False)
    x, y, z = ctx.gens()
    return Endo(ctx, [x - y * y * x, y, z + y * y * z])


def elem_square_commutator(field_spec: FieldSpec = QQ, s: StarProduct = None,
                           cap: int = 4) -> Endo:
    """[psi1, psi2] = psi2^-1 psi1^-1 psi2 psi1 for psi1: x -> x + y*y, psi2: z -> z + x*x.

    With ``s`` given, the squares are star squares (the images of the
    classical maps under the star substitution).
    """
    ctx = PolyContext(3, field_spec, False)
    x, y, z = ctx.gens()
    sq = (lambda a: star(a, a, s)) if s is not None else (lambda a: a * a)
    p1 = Endo.elementary(ctx, 0, sq(y))
    p2 = Endo.elementary(ctx, 2, sq(x))
    return product(p2.inverse(), p1.inverse(), p2, p1, trunc=cap)


def elem_square_pipeline(lam, field_spec: FieldSpec = QQ, cap: int = 4) -> Poly:
    """z-deviation of phi_l^-1 phi_r^-1 [psi1, psi2] with every product starred, mod I^cap.

    phi_l: z -> z + y*(y*x), phi_r: z -> z + (x*y)*y.  For lam = 0 this is the
    classical map and the result vanishes.
    """
    ctx = PolyContext(3, field_spec, False)
    x, y, z = ctx.gens()
    s = StarProduct.one_parameter(lam)
    com = elem_square_commutator(field_spec, s, cap)
    phi_l = Endo.elementary(ctx, 2, star(y, star(y, x, s), s))
    phi_r = Endo.elementary(ctx, 2, star(star(x, y, s), y, s))
    total = product(phi_l.inverse(), phi_r.inverse(), com, trunc=cap)
    return total.images[2] - z


def elem_square_stated(lam, field_spec: FieldSpec = QQ) -> Poly:
    """4 lam [x, [x, y]], the closed form as printed."""
    ctx = PolyContext(3, field_spec, False)
    x, y, _ = ctx.gens()
    return commutator(x, commutator(x, y)).scale(ctx.ring.reduce(4 * ctx.ring.coerce(lam)))


def elem_square_derived(lam, field_spec: FieldSpec = QQ) -> Poly:
    """2 lam [y, [y, x]], what the associator identity gives for the same expression."""
    ctx = PolyContext(3, field_spec, False)
    x, y, _ = ctx.gens()
    return commutator(y, commutator(y, x)).scale(ctx.ring.reduce(2 * ctx.ring.coerce(lam)))


__all__ = [
    "power_pair", "power_pair_commutator", "power_pair_formula", "xyyz_commutant", "xyyz_expected",
    "elem_square_commutator", "elem_square_pipeline", "elem_square_stated",
    "elem_square_derived",
]
