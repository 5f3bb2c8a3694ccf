"""Endomorphisms of K[x1..xn] and K<x1..xn>, stored as tuples of variable images.

Two products are available and they differ only in order:

* ``compose(f, g)`` substitutes f's images into g's formulas, i.e. the image
  of x_i is ``g.images[i](f.images)``.  As maps on points this is "g after f".
* ``a * b`` is the product as written in formulas such as ``a^-1 m a``:
  the point map "a after b", so ``a * b == compose(b, a)``.  Group
  commutators ``[f, g] = f^-1 g^-1 f g`` and conjugations ``a^-1 m a`` are
  built from ``*``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce as _fold
from typing import Callable, Optional, Sequence, Union

from . import linalg
from .errors import ContextMismatch, FlavorError, NotElementary, NotInvertible, SingularSystem
from .polyalg import Poly, PolyContext, mono_degree, mono_key


class Endo:
    __slots__ = ("ctx", "images", "affine", "_inv", "_hash")

    def __init__(self, ctx: PolyContext, images: Sequence[Poly], affine: bool = False):
        images = tuple(images)
        if len(images) != ctx.n:
            raise ContextMismatch(f"expected {ctx.n} images, got {len(images)}")
        for im in images:
            if im.ctx != ctx:
                raise ContextMismatch("image polynomial lives in another context")
        if not affine:
            for i, im in enumerate(images):
                if im.constant_term():
                    raise ValueError(
                        f"image of x{i + 1} has a constant term; pass affine=True to allow it")
        self.ctx = ctx
        self.images = images
        self.affine = affine
        self._inv: Union[None, "Endo", Callable[[], "Endo"]] = None
        self._hash = None

    # constructors

    @classmethod
    def identity(cls, ctx: PolyContext) -> "Endo":
        e = cls(ctx, ctx.gens())
        e._inv = e
        return e

    @classmethod
    def elementary(cls, ctx: PolyContext, target: int, addend: Poly) -> "Endo":
        if addend.involves(target):
            raise NotElementary(f"addend involves the target variable x{target + 1}")
        ims = ctx.gens()
        ims[target] = ims[target] + addend
        e = cls(ctx, ims)
        e._inv = lambda: Endo.elementary(ctx, target, -addend)
        return e

    @classmethod
    def linear(cls, ctx: PolyContext, matrix) -> "Endo":
        """x_i -> sum_j matrix[i][j] x_j."""
        field = ctx.ring
        ims = []
        for row in matrix:
            terms = {}
            for j, a in enumerate(row):
                a = field.coerce(a)
                if a:
                    terms[ctx.var(j).sole_monomial()] = a
            ims.append(Poly(ctx, terms))
        return cls(ctx, ims)

    @classmethod
    def diagonal(cls, ctx: PolyContext, weights) -> "Endo":
        return cls(ctx, [ctx.var(i).scale(w) for i, w in enumerate(weights)])

    # basic properties

    def __eq__(self, other):
        if not isinstance(other, Endo):
            return NotImplemented
        return self.ctx == other.ctx and self.images == other.images

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, self.images))
        return self._hash

    def __repr__(self):
        body = ", ".join(str(im) for im in self.images)
        return f"Endo({body})"

    def degree(self) -> int:
        return max(im.degree() for im in self.images)

    def deviation(self) -> tuple:
        gens = self.ctx.gens()
        return tuple(im - g for im, g in zip(self.images, gens))

    def is_identity(self, cap: Optional[int] = None) -> bool:
        for im, g in zip(self.images, self.ctx.gens()):
            d = im - g
            if cap is not None:
                d = d.truncate(cap)
            if d:
                return False
        return True

    def truncate(self, m: int) -> "Endo":
        return Endo(self.ctx, [im.truncate(m) for im in self.images], affine=self.affine)

    def equal_mod(self, other: "Endo", m: int) -> bool:
        return all((a - b).truncate(m).is_zero() for a, b in zip(self.images, other.images))

    def linear_part(self) -> list:
        n = self.ctx.n
        mat = [[0] * n for _ in range(n)]
        comm = self.ctx.commutative
        for i, im in enumerate(self.images):
            for m, c in im.terms.items():
                if mono_degree(m, comm) == 1:
                    j = m.index(1) if comm else m[0]
                    mat[i][j] = c
        return mat

    def linear_endo(self) -> "Endo":
        return Endo.linear(self.ctx, self.linear_part())

    def is_linear(self) -> bool:
        comm = self.ctx.commutative
        return all(mono_degree(m, comm) == 1 for im in self.images for m in im.terms)

    def elementary_form(self) -> Optional[tuple[int, Poly]]:
        """(target, addend) if this is elementary, else None (identity gives None)."""
        dev = self.deviation()
        moved = [i for i, d in enumerate(dev) if d]
        if len(moved) != 1:
            return None
        i = moved[0]
        if dev[i].involves(i):
            return None
        return i, dev[i]

    # products

    def __mul__(self, other: "Endo") -> "Endo":
        return product(self, other)

    def __pow__(self, k: int) -> "Endo":
        if k < 0:
            return self.inverse() ** (-k)
        out = Endo.identity(self.ctx)
        for _ in range(k):
            out = out * self
        return out

    def then(self, other: "Endo", trunc: Optional[int] = None) -> "Endo":
        """compose(self, other)."""
        return compose(self, other, trunc)

    def inverse(self, cap: Optional[int] = None) -> "Endo":
        """Exact inverse, or the inverse jet mod I^cap when ``cap`` is given."""
        if cap is not None:
            if self._inv is not None:
                return self._exact_inverse().truncate(cap)
            return jet_invert(self, cap)
        return self._exact_inverse()

    def _exact_inverse(self) -> "Endo":
        inv = self._inv
        if callable(inv) and not isinstance(inv, Endo):
            inv = inv()
            self._inv = inv
        if inv is None:
            inv = exact_inverse(self)
            self._inv = inv
        if inv._inv is None:
            inv._inv = self
        return inv

    def has_known_inverse(self) -> bool:
        return self._inv is not None

    def apply(self, f: Poly, trunc: Optional[int] = None) -> Poly:
        """Algebra action: f(x) -> f(images)."""
        return f.substitute(self.images, trunc)


def _check_ctx(*maps: Endo):
    ctx = maps[0].ctx
    for m in maps[1:]:
        if m.ctx != ctx:
            raise ContextMismatch(f"{ctx} vs {m.ctx}")


def compose(f: Endo, g: Endo, trunc: Optional[int] = None) -> Endo:
    """Image of x_i is g.images[i] with f's images substituted (g after f on points)."""
    _check_ctx(f, g)
    ims = [im.substitute(f.images, trunc) for im in g.images]
    out = Endo(f.ctx, ims, affine=f.affine or g.affine)
    if trunc is None and f._inv is not None and g._inv is not None:
        out._inv = lambda: compose(g._exact_inverse(), f._exact_inverse())
    return out


def product(*maps: Endo, trunc: Optional[int] = None) -> Endo:
    """maps[0] * maps[1] * ... ; the last factor acts first on points."""
    if not maps:
        raise ValueError("empty product")
    _check_ctx(*maps)
    return _fold(lambda acc, m: compose(m, acc, trunc), maps[1:], maps[0]) if len(maps) > 1 \
        else maps[0]


def group_commutator(f: Endo, g: Endo, cap: Optional[int] = None) -> Endo:
    """[f, g] = f^-1 g^-1 f g; exact unless ``cap`` asks for jets mod I^cap."""
    _check_ctx(f, g)
    fi = f.inverse(cap)
    gi = g.inverse(cap)
    return product(fi, gi, f, g, trunc=cap)


def conjugate(a: Endo, m: Endo, cap: Optional[int] = None) -> Endo:
    """a^-1 m a."""
    _check_ctx(a, m)
    return product(a.inverse(cap), m, a, trunc=cap)


@dataclass(frozen=True)
class FiltrationReport:
    level: int
    scalar_flag: bool
    scalar_level: int
    witness: Optional[tuple]
    cap: int

    def witness_text(self, ctx: PolyContext) -> str:
        if self.witness is None:
            return "none"
        from .polyalg import format_monomial
        i, m, c = self.witness
        return f"x{i + 1}: {ctx.ring.format_value(c)}*{format_monomial(ctx, m) or '1'}"


def _lowest_deviation(polys, comm):
    best = None
    for i, d in enumerate(polys):
        for m, c in d.terms.items():
            key = (mono_degree(m, comm), i, mono_key(m, comm))
            if best is None or key < best[0]:
                best = (key, (i, m, c))
    return best


def filtration(f: Endo, cap: int) -> FiltrationReport:
    """Position of f in the augmentation filtration H_n (and G_n), up to ``cap``."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    comm = f.ctx.commutative
    dev = f.deviation()
    best = _lowest_deviation(dev, comm)
    if best is None:
        level, witness = cap, None
    else:
        d = best[0][0]
        level = 0 if d <= 1 else min(d, cap)
        witness = best[1]
    lin = f.linear_part()
    n = f.ctx.n
    lam = lin[0][0]
    scalar = bool(lam) and all(lin[i][j] == (lam if i == j else 0)
                               for i in range(n) for j in range(n))
    if scalar:
        gens = f.ctx.gens()
        sdev = [im - g.scale(lam) for im, g in zip(f.images, gens)]
        sb = _lowest_deviation(sdev, comm)
        if sb is None:
            scalar_level = cap
        else:
            scalar_level = min(sb[0][0], cap) if sb[0][0] > 1 else 0
    else:
        scalar_level = 0
    return FiltrationReport(level, scalar, scalar_level, witness, cap)


def jet_invert(f: Endo, m: int) -> Endo:
    """g with f*g and g*f congruent to the identity mod I^m."""
    if f.affine and any(im.constant_term() for im in f.images):
        raise NotInvertible("jet inversion needs maps fixing the origin")
    ctx = f.ctx
    if _is_field(ctx.ring):
        try:
            linv = linalg.inverse(ctx.ring, f.linear_part())
        except SingularSystem as exc:
            raise NotInvertible("linear part is singular") from exc
    else:
        linv = _laurent_linear_inverse(f)
    L_inv = Endo.linear(ctx, linv)
    # h = f after L^-1 has identity linear part; invert it by fixed-point iteration
    h = product(f, L_inv, trunc=m)
    nonlin = [im - g for im, g in zip(h.images, ctx.gens())]
    g = Endo(ctx, [x.truncate(m) for x in ctx.gens()])
    for step in range(3, m + 1):
        ims = [x - nl.substitute(g.images, step) for x, nl in zip(ctx.gens(), nonlin)]
        g = Endo(ctx, [im.truncate(m) for im in ims])
    return product(L_inv, g, trunc=m)


def _is_field(ring) -> bool:
    return ring is ring.base


def _laurent_linear_inverse(f: Endo):
    lin = f.linear_part()
    n = len(lin)
    for i in range(n):
        for j in range(n):
            if i != j and lin[i][j]:
                raise NotInvertible("only diagonal linear parts are inverted over Laurent rings")
    return [[f.ctx.ring.inv(lin[i][i]) if i == j else 0 for j in range(n)] for i in range(n)]


def exact_inverse(f: Endo, max_degree: Optional[int] = None) -> Endo:
    """Polynomial inverse of f, verified by exact composition on both sides."""
    ctx = f.ctx
    el = f.elementary_form()
    if el is not None:
        return Endo.elementary(ctx, el[0], -el[1])
    if f.is_identity():
        return f
    if f.is_linear():
        return jet_invert(f, 2)
    d = max(f.degree(), 1)
    bound = max_degree if max_degree is not None else min(d ** (ctx.n - 1), 64)
    m = d + 1
    while True:
        g = jet_invert(f, m)
        if compose(f, g).is_identity() and compose(g, f).is_identity():
            return g
        if m > bound:
            break
        m = min(2 * m - 1, bound + 1) if m <= bound else m + 1
    raise NotInvertible(f"no polynomial inverse of degree <= {bound} found")


def elementary_split(f: Endo) -> list:
    """Factor an elementary map into one elementary factor per monomial."""
    if f.is_identity():
        return []
    el = f.elementary_form()
    if el is None:
        raise NotElementary("map is not elementary")
    target, addend = el
    ctx = f.ctx
    return [Endo.elementary(ctx, target, Poly(ctx, {m: c})) for m, c in addend.sorted_terms()]


def jacobian_matrix(f: Endo) -> list:
    if not f.ctx.commutative:
        raise FlavorError("Jacobian needs the commutative flavor")
    n = f.ctx.n
    return [[f.images[i].derivative(j) for j in range(n)] for i in range(n)]


def jacobian_det(f: Endo, m: Optional[int] = None) -> Poly:
    """det(d f_i / d x_j), reduced mod I^m when m is given."""
    J = jacobian_matrix(f)
    n = f.ctx.n
    memo = {}

    def minor(row, cols):
        if row == n:
            return f.ctx.one
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = f.ctx.zero
        sign = 1
        for j in cols:
            entry = J[row][j]
            if entry:
                sub = minor(row + 1, tuple(c for c in cols if c != j))
                term = entry.mul(sub, m)
                total = total + term if sign > 0 else total - term
            sign = -sign
        memo[key] = total
        return total

    out = minor(0, tuple(range(n)))
    return out.truncate(m) if m is not None else out


__all__ = [
    "Endo", "compose", "product", "group_commutator", "conjugate", "FiltrationReport",
    "filtration", "jet_invert", "exact_inverse", "elementary_split", "jacobian_det",
    "jacobian_matrix",
]
