"""Augmentation-adic approximation, the Nagata map, hiking and inclusion-exclusion."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import comb
from typing import Optional, Sequence

from . import linalg
from .coeffs import QQ, FieldSpec
from .endo import Endo, exact_inverse, filtration, jet_invert, product
from .errors import FlavorError, NoPlan, NotInvertible, ShapeError, SingularSystem, SpanDeficiency
from .polyalg import Poly, PolyContext, all_monomials, mono_word, nc_derivation
from .tameword import Generator, GenWord, expand, expand_jet, invert_word
from .torus import DiagonalAction, torus_conjugate

DEFAULT_CAP = 8


def _require_comm(f: Endo):
    if not f.ctx.commutative:
        raise FlavorError("needs the commutative flavor")


def _leading_deviation(f: Endo, k: int) -> list:
    return [(im - x).homogeneous(k) for im, x in zip(f.images, f.ctx.gens())]


def _lowest_deviation_degree(f: Endo) -> Optional[int]:
    degs = [d.low_degree() for d in f.deviation() if d]
    return min(degs) if degs else None


def divergence(f: Endo, k: int) -> Poly:
    """Sum of d/dx_i of the degree-k part of image_i - x_i, for f in H_k."""
    _require_comm(f)
    low = _lowest_deviation_degree(f)
    if low is not None and low < k:
        raise ValueError(f"map is not in H_{k}: deviation starts in degree {low}")
    out = f.ctx.zero
    for i, d in enumerate(_leading_deviation(f, k)):
        out = out + d.derivative(i)
    return out


# peeling ---------------------------------------------------------------------------


def _random_invertible(field: FieldSpec, n: int, rng: random.Random, bound: int = 3):
    while True:
        mat = [[field.coerce(rng.randint(-bound, bound)) for _ in range(n)] for _ in range(n)]
        if linalg.det(field, mat):
            return mat


def _candidate_columns(ctx: PolyContext, L, k: int, rows: list):
    """Leading fields L^-1 e_v m(Lx) for every target v and degree-k monomial m free of x_v."""
    ring = ctx.ring
    n = ctx.n
    Linv = linalg.inverse(ring, L)
    Lx = Endo.linear(ctx, L).images
    index = {r: i for i, r in enumerate(rows)}
    out = []
    for v in range(n):
        others = [j for j in range(n) if j != v]
        for m in all_monomials(ctx, k, others):
            img = ctx.monomial(m).substitute(Lx)
            col = [0] * len(rows)
            for i in range(n):
                a = Linv[i][v]
                if not a:
                    continue
                for mm, c in img.terms.items():
                    col[index[(i, mm)]] = ring.reduce(col[index[(i, mm)]] + a * c)
            out.append(((v, m), col))
    return out


def peel_step(f: Endo, k: int, basis_budget: int = 8, seed: int = 0,
              cap: Optional[int] = None):
    """Tame tau in H_k with tau^-1 * f in H_{k+1}; returns (word, residual).

    The degree-k deviation of f is written as a combination of the leading
    fields of elementary maps conjugated by the identity and by up to
    ``basis_budget`` seeded random linear maps.
    """
    _require_comm(f)
    ctx = f.ctx
    if ctx.char:
        raise FlavorError("peeling is only supported in characteristic 0")
    low = _lowest_deviation_degree(f)
    if low is None or low > k:
        return GenWord(ctx), f
    if low < k:
        raise ValueError(f"map is not in H_{k}: deviation starts in degree {low}")
    ring = ctx.ring
    n = ctx.n
    target_polys = _leading_deviation(f, k)
    div = divergence(f, k)
    if div:
        raise SpanDeficiency("leading deviation has nonzero divergence; no tame map matches it",
                             unmatched=div)
    rows = [(i, m) for i in range(n) for m in all_monomials(ctx, k)]
    rhs = [target_polys[i].coefficient(m) for i, m in rows]
    rng = random.Random(seed)
    maps = [linalg.identity(n)]
    labels, cols = [], []
    sol = None
    for attempt in range(basis_budget + 1):
        if attempt:
            maps.append(_random_invertible(ring, n, rng))
        L = maps[-1]
        for label, col in _candidate_columns(ctx, L, k, rows):
            labels.append((len(maps) - 1, label))
            cols.append(col)
        matrix = [[col[r] for col in cols] for r in range(len(rows))]
        try:
            sol = linalg.solve(ring, matrix, rhs)
            break
        except SingularSystem:
            continue
    if sol is None:
        raise SpanDeficiency(f"degree-{k} deviation not in the sampled span "
                             f"after {basis_budget} linear conjugates", unmatched=target_polys)
    gens = []
    for li, L in enumerate(maps):
        block = [Generator.elementary(v, ctx.monomial(m, c))
                 for (lj, (v, m)), c in zip(labels, sol) if lj == li and c]
        if not block:
            continue
        if li == 0:
            gens.extend(block)
        else:
            lin = Generator.linear(L)
            gens.extend([lin.inverse()] + block + [lin])
    word = GenWord(ctx, tuple(gens))
    if cap is None:
        residual = product(expand(invert_word(word)), f)
    else:
        residual = product(expand_jet(invert_word(word), cap), f, trunc=cap)
    return word, residual


@dataclass
class TraceStep:
    degree: int
    word: GenWord
    level: int


@dataclass
class ApproxTrace:
    """f = expand(w_1) * ... * expand(w_r) * residual, modulo I^m."""

    source: Endo
    m: int
    steps: list = field(default_factory=list)
    residual: Optional[Endo] = None

    @property
    def levels(self) -> list:
        return [s.level for s in self.steps]

    def tame_part(self) -> Endo:
        ctx = self.source.ctx
        out = Endo.identity(ctx)
        for s in self.steps:
            out = product(out, expand_jet(s.word, self.m), trunc=self.m)
        return out

    def recomposes(self) -> bool:
        rebuilt = product(self.tame_part(), self.residual, trunc=self.m)
        return rebuilt.equal_mod(self.source, self.m)

    def reached(self) -> bool:
        return filtration(self.residual, self.m).level >= self.m

    def verify(self) -> bool:
        lv = self.levels
        increasing = all(a < b for a, b in zip(lv, lv[1:]))
        return increasing and self.reached() and self.recomposes()


def tame_approximate(f: Endo, m: int = DEFAULT_CAP, seed: int = 0,
                     basis_budget: int = 8) -> ApproxTrace:
    """Peel tame factors degree by degree until the residual lies in H_m."""
    _require_comm(f)
    ctx = f.ctx
    if ctx.char:
        raise FlavorError("approximation is only supported in characteristic 0")
    trace = ApproxTrace(f, m)
    res = f.truncate(m)
    lin = f.linear_part()
    if lin != linalg.identity(ctx.n):
        try:
            linalg.inverse(ctx.ring, lin)
        except SingularSystem as exc:
            raise NotInvertible("linear part is singular") from exc
        w = GenWord(ctx, (Generator.linear(lin),))
        res = product(expand_jet(invert_word(w), m), res, trunc=m)
        trace.steps.append(TraceStep(1, w, filtration(res, m).level))
    for k in range(2, m):
        low = _lowest_deviation_degree(res)
        if low is None or low >= m:
            break
        if low > k:
            continue
        w, res = peel_step(res, k, basis_budget, seed + k, cap=m)
        trace.steps.append(TraceStep(k, w, filtration(res, m).level))
    trace.residual = res
    if not trace.recomposes():
        raise AssertionError("approximation trace does not re-compose")
    return trace


@dataclass
class NiceVerdict:
    status: str  # "nice" | "inconclusive" | "unknown"
    level: int
    good: bool
    trace: Optional[ApproxTrace] = None
    reason: str = ""


def classify_nice(f: Endo, m: int = DEFAULT_CAP, seed: int = 0,
                  basis_budget: int = 8) -> NiceVerdict:
    """Jet-level nice/good verdict; positive characteristic is left undecided."""
    _require_comm(f)
    if f.ctx.char:
        return NiceVerdict("unknown", 0, False, None,
                           "approximation is not decided in positive characteristic")
    try:
        trace = tame_approximate(f, m, seed, basis_budget)
    except SpanDeficiency as exc:
        return NiceVerdict("inconclusive", 0, False, None, str(exc))
    if not trace.reached():
        return NiceVerdict("inconclusive", filtration(trace.residual, m).level, False, trace,
                           "residual did not reach H_m")
    # psi_m = f * T^-1 is conjugate to the residual, hence in H_m as well
    T = trace.tame_part()
    psi = product(f.truncate(m), jet_invert(T, m), trunc=m)
    good = filtration(psi, m).level >= m
    return NiceVerdict("nice", m, good, trace)


# the Nagata automorphism --------------------------------------------------------


def nagata(field_spec: FieldSpec = QQ) -> Endo:
    """(x - 2y(y^2+xz) - (y^2+xz)^2 z, y + (y^2+xz) z, z)."""
    if field_spec.char == 2:
        raise FlavorError("the Nagata map is only considered in characteristic != 2")
    ctx = PolyContext(3, field_spec, True)
    x, y, z = ctx.gens()
    s = y * y + x * z
    return Endo(ctx, [x - (y * s).scale(2) - s * s * z, y + s * z, z])


def nagata_inverse(field_spec: FieldSpec = QQ) -> Endo:
    """Exact inverse, found by jet inversion and confirmed by exact composition."""
    return exact_inverse(nagata(field_spec))


def nagata_invariant(ctx: PolyContext) -> Poly:
    x, y, z = ctx.gens()
    return y * y + x * z


# hiking ----------------------------------------------------------------------------


@dataclass(frozen=True)
class HikingPlan:
    """Multiplicities k_i and scales lambda_i cancelling z-degrees ``targets``.

    The product of the conjugates psi_lambda^-1 f psi_lambda raised to k_i
    multiplies the z-degree-j slice by sum_i k_i lambda_i^j, so the plan
    asks for sum k_i = 1 and sum_i k_i lambda_i^j = 0 for j in targets.
    """

    k: tuple
    lambdas: tuple
    targets: tuple
    field: FieldSpec = QQ

    def weight(self, j: int):
        f = self.field
        return f.reduce(sum(ki * f.reduce(lam ** j) for ki, lam in zip(self.k, self.lambdas)))

    def verify(self) -> bool:
        f = self.field
        if f.reduce(sum(self.k)) != 1:
            return False
        if any(not lam for lam in self.lambdas):
            return False
        return all(self.weight(j) == 0 for j in self.targets)

    def literal_residuals(self) -> dict:
        """sum_i k_i^j lambda_i for each target j (the exponents read the other way round)."""
        f = self.field
        return {j: f.reduce(sum(f.reduce(ki ** j) * lam for ki, lam in zip(self.k, self.lambdas)))
                for j in self.targets}


def hiking_solve(targets: Sequence[int], field_spec: FieldSpec = QQ,
                 max_size: Optional[int] = None) -> HikingPlan:
    """Plan with nodes lambda_i = 1..s and k_i = (-1)^(i-1) C(s, i), s = max(targets) + 1.

    These k_i are the values at 0 of the Lagrange basis on the nodes, so
    sum_i k_i p(lambda_i) = p(0) for every p of degree < s.
    """
    targets = tuple(sorted(set(int(t) for t in targets)))
    if any(t < 1 for t in targets):
        raise NoPlan("targets must be positive integers")
    if max_size is None and field_spec.char:
        max_size = 6
    if not targets:
        plan = HikingPlan((1,), (1,), (), field_spec)
        return plan
    s = targets[-1] + 1
    if max_size is not None and s > max_size:
        raise NoPlan(f"plan would need {s} factors, budget is {max_size}")
    p = field_spec.char
    if p and s >= p:
        raise NoPlan(f"F_{p} has too few nonzero elements for {s} distinct scales")
    k = tuple((-1) ** (i - 1) * comb(s, i) for i in range(1, s + 1))
    lambdas = tuple(field_spec.coerce(i) for i in range(1, s + 1))
    plan = HikingPlan(k, lambdas, targets, field_spec)
    if not plan.verify():
        raise NoPlan("constructed plan failed verification")
    return plan


def hiking_slices(f: Endo, y_slot: int = 1, z_slot: int = 2) -> tuple:
    """(N, {j: R_j}): the lowest-degree slice of the y-deviation split by z-degree."""
    ctx = f.ctx
    dev = f.images[y_slot] - ctx.var(y_slot)
    if not dev:
        return None, {}
    N = dev.low_degree()
    out = {}
    for m, c in dev.homogeneous(N).terms.items():
        j = sum(1 for v in mono_word(m, ctx.commutative) if v == z_slot)
        out.setdefault(j, {})[m] = c
    return N, {j: Poly(ctx, t) for j, t in out.items()}


def check_hiking_shape(f: Endo, x_slot: int = 0, y_slot: int = 1, z_slot: int = 2) -> int:
    ctx = f.ctx
    if ctx.n != 3:
        raise ShapeError("hiking works in three variables")
    if f.images[x_slot] != ctx.var(x_slot):
        raise ShapeError("x must be fixed")
    N, _ = hiking_slices(f, y_slot, z_slot)
    if N is None:
        raise ShapeError("y-image has no deviation")
    q = f.images[z_slot] - ctx.var(z_slot)
    if q and q.low_degree() < N:
        raise ShapeError("z-deviation starts below the y-slice degree")
    return N


def scale_conjugate(f: Endo, lam, z_slot: int = 2) -> Endo:
    """psi_lambda^-1 * f * psi_lambda with psi_lambda: z -> lambda z."""
    ring = f.ctx.ring
    lam = ring.coerce(lam)
    a = [1] * f.ctx.n
    b = [1] * f.ctx.n
    a[z_slot] = ring.inv(lam)
    b[z_slot] = lam
    return torus_conjugate(DiagonalAction(a), f, DiagonalAction(b))


def scaling_law_holds(f: Endo, lam, y_slot: int = 1, z_slot: int = 2) -> bool:
    """The conjugate's leading y-slice is sum_j lambda^j R_j."""
    ring = f.ctx.ring
    N, R = hiking_slices(f, y_slot, z_slot)
    N2, R2 = hiking_slices(scale_conjugate(f, lam, z_slot), y_slot, z_slot)
    expect = {j: r.scale(ring.reduce(ring.coerce(lam) ** j)) for j, r in R.items()}
    return N == N2 and expect == R2


def hiking_product(f: Endo, plan: HikingPlan, z_slot: int = 2, cap: int = DEFAULT_CAP,
                   y_slot: int = 1, x_slot: int = 0) -> Endo:
    """prod_i (psi_lambda_i^-1 f psi_lambda_i)^k_i, modulo I^cap."""
    check_hiking_shape(f, x_slot, y_slot, z_slot)
    ctx = f.ctx
    out = Endo.identity(ctx)
    for ki, lam in zip(plan.k, plan.lambdas):
        if not scaling_law_holds(f, lam, y_slot, z_slot):
            raise AssertionError("conjugate does not scale the z-degree slices by lambda^j")
        g = scale_conjugate(f, lam, z_slot).truncate(cap)
        if ki < 0:
            g = jet_invert(g, cap)
        for _ in range(abs(ki)):
            out = product(out, g, trunc=cap)
    return out


# the u / v constructions -------------------------------------------------------------
#
# M_{k1..ks} = x^k1 y^k2 x^k3 ...; the block peeled last is x^ks when s is
# odd and y^ks when s is even, and that letter decides which coordinate
# receives M: y -> y + z x^k feeds M' x^k into y, x -> x + z y^k feeds M' y^k
# into x.


def monomial_M(ctx: PolyContext, ks: Sequence[int]) -> Poly:
    """x^k1 y^k2 x^k3 ... (alternating, starting with x)."""
    word = []
    for i, k in enumerate(ks):
        word.extend([i % 2] * k)
    return ctx.monomial(ctx.word_to_monomial(word))


def _last_letter(ks: Sequence[int]) -> int:
    return (len(ks) - 1) % 2


def receiving_slot(ks: Sequence[int]) -> int:
    """Coordinate whose image picks up M: y if M ends in x, x if it ends in y."""
    return 1 - _last_letter(ks)


def phi_step(ctx: PolyContext, k: int, letter: int) -> Endo:
    """y -> y + z x^k (letter x) or x -> x + z y^k (letter y)."""
    x, y, z = ctx.gens()
    if letter == 0:
        return Endo.elementary(ctx, 1, z.mul(x.pow(k)))
    return Endo.elementary(ctx, 0, z.mul(y.pow(k)))


def psi_M(ctx: PolyContext, M: Poly) -> Endo:
    """z -> z + M."""
    return Endo.elementary(ctx, 2, M)


def u_construction(ctx: PolyContext, ks: Sequence[int], cap: int) -> Endo:
    """phi^-1 psi(M')^-1 phi psi(M') with M' = M_{k1..k(s-1)}, mod I^cap."""
    _check_blocks(ks)
    phi = phi_step(ctx, ks[-1], _last_letter(ks))
    pm = psi_M(ctx, monomial_M(ctx, ks[:-1]))
    return product(phi.inverse(), pm.inverse(), phi, pm, trunc=cap)


def alpha_shift(ctx: PolyContext, ks: Sequence[int]) -> Endo:
    """slot -> slot - z on the receiving coordinate."""
    return Endo.elementary(ctx, receiving_slot(ks), -ctx.var(2))


def v_construction(ctx: PolyContext, ks: Sequence[int], cap: int) -> Endo:
    """psi(M)^-1 alpha psi(M) u alpha^-1, mod I^cap."""
    u = u_construction(ctx, ks, cap)
    pm = psi_M(ctx, monomial_M(ctx, ks))
    a = alpha_shift(ctx, ks)
    return product(pm.inverse(), a, pm, u, a.inverse(), trunc=cap)


def D_term(ctx: PolyContext, ks: Sequence[int]) -> Poly:
    """The derivation sending the receiving coordinate to z*(last letter)^k, applied to M'."""
    x, y, z = ctx.gens()
    letter = _last_letter(ks)
    slot = receiving_slot(ks)
    images = [ctx.zero, ctx.zero, ctx.zero]
    images[slot] = z.mul((x if letter == 0 else y).pow(ks[-1]))
    return nc_derivation(images, monomial_M(ctx, ks[:-1]))


def z_degree(ctx: PolyContext, m: tuple, z_slot: int = 2) -> int:
    return sum(1 for v in mono_word(m, ctx.commutative) if v == z_slot)


def _check_blocks(ks: Sequence[int]):
    if len(ks) < 2 or any(k < 1 for k in ks):
        raise ShapeError("need at least two positive blocks")
    if sum(ks[:-1]) < 2:
        raise ShapeError("M' must have degree >= 2, otherwise psi(M') is linear")


def u_shape_holds(u: Endo, ks: Sequence[int]) -> bool:
    """Modulo degree > k: slot -> slot + M, z -> z - D(M'), the third coordinate fixed."""
    ctx = u.ctx
    k = sum(ks)
    slot = receiving_slot(ks)
    dev = [d.truncate(k + 1) for d in u.deviation()]
    return (dev[1 - slot].is_zero()
            and dev[slot] == monomial_M(ctx, ks)
            and dev[2] == -D_term(ctx, ks))


def final_type_holds(v: Endo, ks: Sequence[int]) -> bool:
    """Modulo degree > k: slot -> slot + H, z -> z + H1, with H and H1 homogeneous
    of degree k and of positive z-degree, and the third coordinate fixed."""
    ctx = v.ctx
    k = sum(ks)
    slot = receiving_slot(ks)
    dev = [d.truncate(k + 1) for d in v.deviation()]
    if not dev[1 - slot].is_zero():
        return False
    for d in (dev[slot], dev[2]):
        if d and d.low_degree() < k:
            return False
        if any(z_degree(ctx, m) == 0 for m in d.terms):
            return False
    return True


# inclusion-exclusion -------------------------------------------------------------------


def inclusion_exclusion_check(n: int, m: int, field_spec: FieldSpec = QQ) -> Poly:
    """sum over nonempty S of (-1)^(n-|S|) (sum_{i in S} x_i)^m."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    ctx = PolyContext(n, field_spec, True)
    xs = ctx.gens()
    out = ctx.zero
    for size in range(1, n + 1):
        sign = -1 if (n - size) % 2 else 1
        for S in itertools.combinations(range(n), size):
            s = ctx.zero
            for i in S:
                s = s + xs[i]
            out = out + s.pow(m).scale(sign)
    return out


__all__ = [
    "divergence", "peel_step", "tame_approximate", "ApproxTrace", "TraceStep", "classify_nice",
    "NiceVerdict", "nagata", "nagata_inverse", "nagata_invariant", "HikingPlan", "hiking_solve",
    "hiking_product", "hiking_slices", "scale_conjugate", "scaling_law_holds",
    "check_hiking_shape", "inclusion_exclusion_check", "u_construction", "v_construction",
    "monomial_M", "D_term", "phi_step", "psi_M", "u_shape_holds", "final_type_holds",
    "receiving_slot",
]
