"""Words in tame generators and the constructive synthesis procedures.

A word ``[g1, g2, ..., gk]`` stands for the product ``g1 * g2 * ... * gk``
(see :mod:`tameaut.endo`: the last generator acts first on points).  The
only nonlinear generator the synthesizers emit is the quadratic elementary
map ``x3 -> x3 + x1*x2`` (``z -> z + xy``), conjugated by linear maps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Optional, Sequence

from . import linalg
from .coeffs import FieldSpec
from .endo import Endo
from .errors import NotElementary, SingularSystem, SynthesisError
from .polyalg import Poly, PolyContext

X, Y, Z, T = 0, 1, 2, 3


@dataclass(frozen=True)
class Generator:
    """A linear map (row i = image of x_i) or an elementary map x_target -> x_target + addend."""

    kind: str
    matrix: Optional[tuple] = None
    target: Optional[int] = None
    addend: Optional[Poly] = None
    inverted: bool = False

    @classmethod
    def linear(cls, matrix) -> "Generator":
        return cls("linear", matrix=tuple(tuple(row) for row in matrix))

    @classmethod
    def elementary(cls, target: int, addend: Poly) -> "Generator":
        if addend.involves(target):
            raise NotElementary(f"addend involves x{target + 1}")
        return cls("elementary", target=target, addend=addend)

    def inverse(self) -> "Generator":
        return Generator(self.kind, self.matrix, self.target, self.addend, not self.inverted)

    def effective_matrix(self, ring):
        if not self.inverted:
            return [list(r) for r in self.matrix]
        return [list(r) for r in _inverse_matrix(ring, self.matrix)]

    def effective_addend(self) -> Poly:
        return -self.addend if self.inverted else self.addend

    def endo(self, ctx: PolyContext) -> Endo:
        if self.kind == "linear":
            return Endo.linear(ctx, self.effective_matrix(ctx.ring))
        return Endo.elementary(ctx, self.target, self.effective_addend())


@lru_cache(maxsize=4096)
def _inverse_matrix(ring, matrix: tuple) -> tuple:
    return tuple(tuple(r) for r in linalg.inverse(ring, [list(r) for r in matrix]))


@dataclass(frozen=True)
class GenWord:
    ctx: PolyContext
    gens: tuple = ()

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __add__(self, other: "GenWord") -> "GenWord":
        if other.ctx != self.ctx:
            raise ValueError("words over different contexts")
        return GenWord(self.ctx, self.gens + other.gens)

    def inverse(self) -> "GenWord":
        return invert_word(self)

    def expand(self) -> Endo:
        return expand(self)

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gens if g.kind == kind)


def word(ctx: PolyContext, *parts) -> GenWord:
    """Concatenate generators and words into one word."""
    gens = []
    for p in parts:
        if isinstance(p, GenWord):
            gens.extend(p.gens)
        elif isinstance(p, Generator):
            gens.append(p)
        else:
            raise TypeError(f"not a generator or word: {p!r}")
    return GenWord(ctx, tuple(gens))


def invert_word(w: GenWord) -> GenWord:
    return GenWord(w.ctx, tuple(g.inverse() for g in reversed(w.gens)))


def _apply_generator(g: Generator, coords: list, ctx: PolyContext,
                     trunc: Optional[int] = None) -> list:
    """Coordinates of g after the point map given by ``coords``."""
    if g.kind == "elementary":
        out = list(coords)
        out[g.target] = coords[g.target] + g.effective_addend().substitute(coords, trunc)
        return out
    mat = g.effective_matrix(ctx.ring)
    out = []
    for row in mat:
        acc: dict = {}
        for a, c in zip(row, coords):
            if a:
                for m, v in c.terms.items():
                    acc[m] = acc.get(m, 0) + a * v
        out.append(Poly._from_acc(ctx, acc))
    return out


@lru_cache(maxsize=4096)
def _expand_cached(w: GenWord) -> tuple:
    coords = w.ctx.gens()
    for g in reversed(w.gens):
        coords = _apply_generator(g, coords, w.ctx)
    return tuple(coords)


def expand(w: GenWord) -> Endo:
    """Exact product of the generators; never truncated."""
    out = Endo(w.ctx, _expand_cached(w))
    out._inv = lambda: Endo(w.ctx, _expand_cached(invert_word(w)))
    return out


def expand_jet(w: GenWord, m: int) -> Endo:
    """The product modulo I^m, for words whose exact expansion is too large."""
    coords = [x.truncate(m) for x in w.ctx.gens()]
    for g in reversed(w.gens):
        coords = _apply_generator(g, coords, w.ctx, m)
    return Endo(w.ctx, coords)


# building blocks --------------------------------------------------------------


def _others(ctx: PolyContext, used) -> list:
    return [i for i in range(ctx.n) if i not in used]


def lin_elementary(ctx: PolyContext, v: int, a: int, c) -> GenWord:
    """x_v -> x_v + c*x_a as one linear generator."""
    c = ctx.ring.coerce(c)
    if not c:
        return GenWord(ctx)
    mat = linalg.identity(ctx.n)
    mat[v][a] = c
    return GenWord(ctx, (Generator.linear(mat),))


def base_generator(ctx: PolyContext) -> Generator:
    """The quadratic generator x3 -> x3 + x1*x2."""
    return Generator.elementary(Z, ctx.var(X).mul(ctx.var(Y)))


def quad(ctx: PolyContext, v: int, a: int, b: int, c=1) -> GenWord:
    """x_v -> x_v + c*x_a*x_b (a != b, both != v) by linearly conjugating the base generator."""
    if len({v, a, b}) != 3:
        raise SynthesisError("quadratic block needs three distinct variables")
    ring = ctx.ring
    c = ring.coerce(c)
    if not c:
        return GenWord(ctx)
    base = base_generator(ctx)
    if (v, a, b) == (Z, X, Y) and c == 1:
        return GenWord(ctx, (base,))
    n = ctx.n
    mat = [[0] * n for _ in range(n)]
    mat[X][a] = 1
    mat[Y][b] = 1
    mat[Z][v] = ring.inv(c)
    rest_rows = [r for r in range(n) if r not in (X, Y, Z)]
    rest_cols = [j for j in range(n) if j not in (a, b, v)]
    for r, j in zip(rest_rows, rest_cols):
        mat[r][j] = 1
    L = Generator.linear(mat)
    return GenWord(ctx, (L.inverse(), base, L))


def conjugate_word(w: GenWord, L: Generator) -> GenWord:
    """L^-1 w L."""
    return GenWord(w.ctx, (L.inverse(),) + w.gens + (L,))


def power(ctx: PolyContext, v: int, u: int, s: int, c, k: int) -> GenWord:
    """x_v -> x_v + c*x_u^k, recursing through the auxiliary variable x_s.

    With Y: x_s -> x_s + c*x_u^(k-1) and psi: x_v -> x_v + x_u*x_s,
    psi^-1 Y^-1 psi Y adds c*x_u^k to x_v and fixes everything else.
    """
    if k < 1:
        raise SynthesisError("power must be >= 1")
    if len({v, u, s}) != 3:
        raise SynthesisError("power block needs three distinct variables")
    if k == 1:
        return lin_elementary(ctx, v, u, c)
    inner = power(ctx, s, u, v, c, k - 1)
    psi = quad(ctx, v, u, s, 1)
    return word(ctx, invert_word(psi), invert_word(inner), psi, inner)


# commutative synthesis ------------------------------------------------------------


def _comm3(field: FieldSpec) -> PolyContext:
    return PolyContext(3, field, True)


def synth_power(b, k: int, ctx: Optional[PolyContext] = None) -> GenWord:
    """Word for z -> z + b*x^k over {linear maps, z -> z + xy}."""
    ctx = ctx or _comm3(FieldSpec())
    return power(ctx, Z, X, Y, b, k)


def _require_odd_char(ctx: PolyContext):
    if ctx.char == 2:
        raise SynthesisError("synthesis needs characteristic != 2")


def synth_edge(b, k: int, ctx: Optional[PolyContext] = None) -> GenWord:
    """Word for z -> z + b*y*x^k.

    Conjugating W: z -> z + y^2 by A: y -> y + c*x^k gives
    z -> z + y^2 + 2c*y*x^k + c^2*x^(2k); the outer two terms are cancelled,
    so c = b/2.
    """
    ctx = ctx or _comm3(FieldSpec())
    _require_odd_char(ctx)
    ring = ctx.ring
    b = ring.coerce(b)
    if k < 1:
        raise SynthesisError("edge exponent must be >= 1")
    if not b:
        return GenWord(ctx)
    if k == 1:
        return quad(ctx, Z, X, Y, b)
    c = ring.div(b, 2)
    W = power(ctx, Z, Y, X, 1, 2)
    A = power(ctx, Y, X, Z, c, k)
    cancel = power(ctx, Z, X, Y, ring.reduce(-c * c), 2 * k)
    return word(ctx, cancel, invert_word(W), invert_word(A), W, A)


def express_in_power_basis(target: Poly) -> list:
    """Pairs (c_j, x + s_j*y) with sum c_j (x + s_j*y)^d == target.

    ``target`` must be homogeneous of degree d >= 1 in the first two
    variables.  Uses d+1 distinct s_j (0, 1, -1, 2, ...).
    """
    ctx = target.ctx
    field = ctx.ring
    if target.variables() - {X, Y}:
        raise SynthesisError("target must only involve x and y")
    d = target.degree()
    if d < 1 or target.low_degree() != d:
        raise SynthesisError("target must be homogeneous of positive degree")
    p = ctx.char
    if p and d % p == 0:
        raise SynthesisError(f"characteristic {p} divides the degree {d}")
    try:
        svals = field.elements(d + 1)
    except Exception as exc:
        raise SynthesisError(f"F_{p} has too few elements for degree {d}") from exc
    x, y = ctx.var(X), ctx.var(Y)
    rows, rhs = [], []
    for j in range(d + 1):
        cb = comb(d, j)
        rows.append([field.reduce(cb * field.reduce(s ** j)) for s in svals])
        rhs.append(target.coefficient(ctx.word_to_monomial([X] * (d - j) + [Y] * j)))
    try:
        sol = linalg.solve(field, rows, rhs)
    except SingularSystem as exc:
        raise SynthesisError(f"power basis is singular in characteristic {p}") from exc
    out = []
    for c, s in zip(sol, svals):
        if c:
            out.append((c, x + y.scale(s) if s else x))
    return out


def _xy_substitution(ctx: PolyContext, a, b, c, e) -> Generator:
    """Point map x -> a*x + b*y, y -> c*x + e*y, others fixed."""
    mat = linalg.identity(ctx.n)
    mat[X][X], mat[X][Y], mat[Y][X], mat[Y][Y] = a, b, c, e
    return Generator.linear(mat)


def _power_route(ctx, P_d, d) -> GenWord:
    out = GenWord(ctx)
    for c, form in express_in_power_basis(P_d):
        s = form.coefficient(ctx.var(Y).sole_monomial())
        block = power(ctx, Z, X, Y, c, d)
        out = out + (conjugate_word(block, _xy_substitution(ctx, 1, s, 0, 1)) if s else block)
    return out


def _edge_route(ctx, P_d, d) -> GenWord:
    """Degree d with char | d: span of linear images of y*x^(d-1)."""
    field = ctx.ring
    x, y = ctx.var(X), ctx.var(Y)
    monos = [ctx.word_to_monomial([X] * (d - j) + [Y] * j) for j in range(d + 1)]
    target = [P_d.coefficient(m) for m in monos]
    elems = field.elements(min(field.p, 7) if field.p else 7)
    cands, cols = [], []
    for a, b, c, e in itertools.product(elems, repeat=4):
        if not field.reduce(a * e - b * c):
            continue
        form = (x.scale(c) + y.scale(e)).mul((x.scale(a) + y.scale(b)).pow(d - 1))
        vec = [form.coefficient(m) for m in monos]
        trial = cols + [vec]
        rows = [[col[i] for col in trial] for i in range(d + 1)]
        red, piv = linalg.rref(field, rows)
        if len(piv) > len(cols):
            cols.append(vec)
            cands.append((a, b, c, e))
        try:
            sol = linalg.solve(field, [[col[i] for col in cols] for i in range(d + 1)], target)
        except SingularSystem:
            continue
        out = GenWord(ctx)
        for coef, (a, b, c, e) in zip(sol, cands):
            if coef:
                L = _xy_substitution(ctx, a, b, c, e)
                out = out + conjugate_word(synth_edge(coef, d - 1, ctx), L)
        return out
    raise SynthesisError(
        f"linear images of y*x^{d - 1} do not span the target in characteristic {field.p}")


def synthesis_route(d: int, char: int) -> str:
    if d == 1:
        return "linear"
    if char and d % char == 0:
        return "edge"
    return "power"


def synthesis_supported(P: Poly) -> bool:
    """Whether :func:`synth_elementary` is guaranteed to succeed on P."""
    p = P.ctx.char
    if p == 2 or P.variables() - {X, Y} or P.constant_term():
        return False
    if not p:
        return True
    return all(d < p for d in {P.homogeneous(d).degree() for d in range(P.degree() + 1)} if d > 0)


def synth_elementary(P: Poly) -> GenWord:
    """Word for z -> z + P(x, y) in three commuting variables."""
    ctx = P.ctx
    if not ctx.commutative or ctx.n != 3:
        raise SynthesisError("commutative synthesis works in K[x, y, z]")
    _require_odd_char(ctx)
    if P.involves(Z):
        raise SynthesisError("P involves z; the map would not be elementary")
    if P.constant_term():
        raise SynthesisError("constant term would move the origin")
    out = GenWord(ctx)
    for d in range(1, P.degree() + 1):
        P_d = P.homogeneous(d)
        if not P_d:
            continue
        route = synthesis_route(d, ctx.char)
        if route == "linear":
            mat = linalg.identity(3)
            mat[Z][X] = P_d.coefficient(ctx.var(X).sole_monomial())
            mat[Z][Y] = P_d.coefficient(ctx.var(Y).sole_monomial())
            out = out + GenWord(ctx, (Generator.linear(mat),))
        elif route == "power":
            out = out + _power_route(ctx, P_d, d)
        else:
            out = out + _edge_route(ctx, P_d, d)
    return out


# noncommutative synthesis ----------------------------------------------------------


def height(w: Sequence[int]) -> int:
    """Number of maximal blocks of a repeated variable in a word."""
    return sum(1 for _ in itertools.groupby(w))


def _blocks(w):
    return [(v, len(list(run))) for v, run in itertools.groupby(w)]


def _nc_edge(ctx, v, first, second_var, k, c, reverse, free):
    """x_v -> x_v + c*w*u^k (or c*u^k*w when reverse), via the free variable r."""
    u = second_var
    w = first
    r = free
    alpha = power(ctx, r, u, v, 1, k)
    beta = quad(ctx, v, r, w, c) if reverse else quad(ctx, v, w, r, c)
    return word(ctx, invert_word(beta), invert_word(alpha), beta, alpha)


def _nc_mono(ctx, v, w, c, depth, max_depth) -> GenWord:
    if depth > max_depth:
        raise SynthesisError(f"height recursion exceeded depth {max_depth}")
    letters = set(w)
    free = [i for i in range(ctx.n) if i != v and i not in letters]
    blocks = _blocks(w)
    if len(w) == 1:
        return lin_elementary(ctx, v, w[0], c)
    if len(blocks) == 1:
        u = w[0]
        s = next(i for i in range(ctx.n) if i not in (v, u))
        return power(ctx, v, u, s, c, len(w))
    if len(w) == 2:
        return quad(ctx, v, w[0], w[1], c)
    if not free:
        raise SynthesisError("no auxiliary variable left; use at least four variables")
    aux = free[0]
    if len(blocks) == 2 and blocks[0][1] == 1:
        # w * u^k
        return _nc_edge(ctx, v, blocks[0][0], blocks[1][0], blocks[1][1], c, False, aux)
    if len(blocks) == 2 and blocks[1][1] == 1:
        # u^k * w
        return _nc_edge(ctx, v, blocks[1][0], blocks[0][0], blocks[0][1], c, True, aux)
    # peel the last block: M = M' u^k; [alpha, phi] with phi: aux -> aux + M'
    u, k = blocks[-1]
    prefix = w[:-k]
    phi = _nc_mono(ctx, aux, prefix, 1, depth + 1, max_depth)
    alpha = _nc_mono(ctx, v, (aux,) + (u,) * k, c, depth + 1, max_depth)
    return word(ctx, invert_word(alpha), invert_word(phi), alpha, phi)


def synth_nc_elementary(M: Sequence[int], target: int = T, coeff=1,
                        ctx: Optional[PolyContext] = None, max_depth: int = 32) -> GenWord:
    """Word for x_target -> x_target + coeff*M in K<x, y, z, t>.

    ``M`` is a word in the first two variables.  Long words are reduced by
    height: M = M' u^k comes from the commutator of x_aux -> x_aux + M' with
    x_target -> x_target + x_aux*u^k.
    """
    ctx = ctx or PolyContext(4, FieldSpec(), False)
    if ctx.commutative or ctx.n < 4:
        raise SynthesisError("noncommutative synthesis needs K<x, y, z, t> or more variables")
    M = tuple(M)
    if not M:
        raise SynthesisError("empty monomial would add a constant")
    if set(M) - {X, Y}:
        raise SynthesisError("monomial must be a word in x and y")
    if target in (X, Y):
        raise SynthesisError("target must differ from x and y")
    coeff = ctx.ring.coerce(coeff)
    if not coeff:
        return GenWord(ctx)
    return _nc_mono(ctx, target, M, coeff, 0, max_depth)


def nc_word_length(M: Sequence[int]) -> int:
    return len(synth_nc_elementary(M))


# torus normalization ----------------------------------------------------------------


@dataclass
class TorusSolution:
    """alpha_j = prod_i beta_i^exponents[j][i], plus the kernel of the exponent system."""

    n: int
    betas: list
    exponents: list
    kernel: list
    field: FieldSpec = field(default_factory=FieldSpec)

    def equations(self):
        m = len(self.betas)
        n = self.n
        for i in range(m):
            yield i, i, (i + 1) % n, (i + 2) % n

    def verify(self) -> bool:
        """Every equation beta_i*alpha_{i+1}^-1*alpha_{i+2}^-1*alpha_i = 1 holds formally."""
        E = self.exponents
        for i, a, b, c in self.equations():
            for j in range(len(self.betas)):
                if E[a][j] - E[b][j] - E[c][j] + (1 if j == i else 0) != 0:
                    return False
        return True

    def materialize(self) -> list:
        """Concrete alpha_j; only possible when every needed exponent is integral."""
        out = []
        for row in self.exponents:
            acc = 1
            for b, e in zip(self.betas, row):
                if b == 1 or e == 0:
                    continue
                if Fraction(e).denominator != 1:
                    raise SynthesisError("non-integral exponent; the field may lack the root")
                e = int(e)
                acc = self.field.reduce(acc * (pow(b, e, self.field.p) if self.field.p and e >= 0
                                               else _field_pow(self.field, b, e)))
            out.append(acc)
        return out


def _field_pow(field: FieldSpec, b, e: int):
    if e < 0:
        return _field_pow(field, field.inv(b), -e)
    out = 1
    for _ in range(e):
        out = field.reduce(out * b)
    return out


def torus_normalize(betas: Sequence, n: Optional[int] = None,
                    field_spec: Optional[FieldSpec] = None) -> TorusSolution:
    """Exponents making alpha psi_i alpha^-1 equal x_i -> x_i + x_{i+1}x_{i+2}.

    ``betas`` are the coefficients of psi_i: x_i -> x_i + beta_i x_{i+1} x_{i+2}
    (cyclic indices), i = 1..len(betas); ``n`` defaults to len(betas) + 1.
    """
    fs = field_spec or FieldSpec()
    betas = [fs.coerce(b) for b in betas]
    if any(not b for b in betas):
        raise SynthesisError("every beta_i must be nonzero")
    m = len(betas)
    n = n or m + 1
    if n < 3 or m > n:
        raise SynthesisError("need n >= 3 and at most n coefficients")
    q = FieldSpec()
    A = []
    for i in range(m):
        row = [0] * n
        row[i] += 1
        row[(i + 1) % n] -= 1
        row[(i + 2) % n] -= 1
        A.append(row)
    kernel = linalg.nullspace(q, A, n)
    cols = []
    for j in range(m):
        rhs = [-1 if i == j else 0 for i in range(m)]
        try:
            cols.append(linalg.solve(q, A, rhs))
        except SingularSystem as exc:
            raise SingularSystem("exponent system is inconsistent", kernel=kernel) from exc
    exponents = [[Fraction(cols[j][i]) for j in range(m)] for i in range(n)]
    return TorusSolution(n, betas, exponents, kernel, fs)


__all__ = [
    "Generator", "GenWord", "word", "invert_word", "expand", "expand_jet", "quad", "power",
    "lin_elementary",
    "synth_power", "synth_edge", "express_in_power_basis", "synth_elementary",
    "synthesis_supported", "synthesis_route", "height", "synth_nc_elementary", "TorusSolution",
    "torus_normalize", "base_generator", "conjugate_word",
]
