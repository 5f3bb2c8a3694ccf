"""Named verification suites driven by ``tameaut verify <suite>``."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import approx, identities, textio
from .coeffs import QQ, FieldSpec
from .endo import Endo, filtration, group_commutator, jacobian_det, product
from .errors import SpanDeficiency, SynthesisError, TameAutError
from .polyalg import (PolyContext, StarProduct, associator, commutator, format_poly,
                      random_poly)
from .sampling import random_endo, random_in_G, random_in_H
from .tameword import (expand, height, synth_elementary, synth_nc_elementary, synthesis_supported,
                       torus_normalize)
from .torus import (DiagonalAction, centralizer_check, centralizer_family, singularity_valuation,
                    torus_conjugate, torus_conjugate_direct)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class Check:
    name: str
    status: str
    witness: Optional[str] = None


@dataclass
class SuiteResult:
    suite: str
    seed: int
    field: str
    checks: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def status(self) -> str:
        states = {c.status for c in self.checks}
        if FAIL in states:
            return FAIL
        if INCONCLUSIVE in states:
            return INCONCLUSIVE
        return PASS

    @property
    def exit_code(self) -> int:
        return {PASS: 0, FAIL: 1, INCONCLUSIVE: 3}[self.status]

    def records(self) -> list:
        out = []
        for c in self.checks:
            rec = {"suite": self.suite, "seed": self.seed, "field": self.field}
            rec.update(asdict(c))
            out.append(rec)
        return out

    def add(self, name: str, ok: bool, witness=None):
        self.checks.append(Check(name, PASS if ok else FAIL, None if ok else _text(witness)))


def _text(w) -> Optional[str]:
    if w is None:
        return None
    if isinstance(w, Endo):
        return textio.format_endo(w).strip()
    return str(w)


# weights with n1 < n2, so the x1-entry of the x2-image picks up t^(n1-n2)
LINEAR_POLE_GRID = [(0, 1), (0, 3), (1, 2), (1, 5), (-2, 3), (2, 7), (3, 4), (-1, 0), (4, 9),
                    (0, 10)]
# (k+1) n2 > n1 > k n2
ELEMENTARY_POLE_GRID = [(2, 5, 2), (2, 7, 3), (2, 8, 3), (2, 9, 4), (2, 11, 4), (3, 7, 2),
                  (3, 10, 3), (3, 11, 3), (3, 14, 4), (4, 11, 2)]


# individual suites ------------------------------------------------------------------


def suite_filtration(res: SuiteResult, rng: random.Random, fs: FieldSpec, quick: bool):
    for n, k in itertools.product((2, 3, 4), repeat=2):
        phi = identities.power_pair_commutator(n, k, fs)
        lv = filtration(phi, n + k + 1).level
        res.add(f"power-pair n={n} k={k}", lv == n + k - 1, f"level {lv}")
    ctx = PolyContext(3, fs, True)
    trials = 10 if quick else 30
    for t in range(trials):
        n, k = rng.choice((2, 3, 4)), rng.choice((2, 3, 4))
        f, g = random_in_H(ctx, n, rng, trunc=n + k), random_in_H(ctx, k, rng, trunc=n + k)
        lv = filtration(group_commutator(f, g, n + k), n + k).level
        res.add(f"[H_{n},H_{k}] #{t}", lv >= n + k - 1, f"level {lv}")
    for t in range(trials // 2):
        n = rng.choice((3, 4))
        f, g = random_in_G(ctx, n, rng, trunc=n + 1), random_in_G(ctx, n, rng, trunc=n + 1)
        lv = filtration(group_commutator(f, g, n + 1), n + 1).level
        res.add(f"[G_{n},G_{n}] #{t}", lv >= n, f"level {lv}")


def suite_commutators(res: SuiteResult, rng: random.Random, fs: FieldSpec, quick: bool):
    ctx = PolyContext(3, fs, False)
    x, y, z = ctx.gens()
    got = identities.xyyz_commutant(fs)
    res.add("xyyz-commutant", got == identities.xyyz_expected(fs), got)
    com = identities.elem_square_commutator(fs)
    want = z + y * y * x + x * y * y
    res.add("elem-square-commutator", com.images[2] == want and com.images[:2] == (x, y), com)
    for lam in (1, 2, 3, -1, 5):
        d = identities.elem_square_pipeline(lam, fs)
        res.add(f"elem-square-star lam={lam}", d == identities.elem_square_derived(lam, fs),
                format_poly(d))
    c3 = PolyContext(3, fs, True)
    for t in range(5 if quick else 15):
        f = random_in_H(c3, 2, rng, trunc=4)
        g = random_in_H(c3, 3, rng, trunc=4)
        a = product(f, g, trunc=4)
        b = product(g, f, trunc=4)
        res.add(f"H_2 H_3 commute mod I^4 #{t}", a == b)


def suite_torus(res: SuiteResult, rng: random.Random, fs: FieldSpec, quick: bool):
    ring = fs
    for t in range(30 if quick else 100):
        n = rng.choice((2, 3))
        ctx = PolyContext(n, fs, rng.random() < 0.5)
        f = random_endo(ctx, rng)
        a = DiagonalAction([ring.random(rng, 4, nonzero=True) for _ in range(n)])
        b = DiagonalAction([ring.random(rng, 4, nonzero=True) for _ in range(n)])
        res.add(f"formula=composition #{t}",
                torus_conjugate(a, f, b) == torus_conjugate_direct(a, f, b))
    c3 = PolyContext(3, fs, True)
    x, y, z = c3.gens()
    case1 = Endo.linear(c3, [[1, 0, 0], [2, 1, 0], [0, 0, 1]])  # x2 -> x2 + 2*x1
    for n1, n2 in LINEAR_POLE_GRID:
        v = singularity_valuation([n1, n2, 0], case1)
        res.add(f"pole linear n1={n1} n2={n2}", v == n1 - n2, f"valuation {v}")
    for k, n1, n2 in ELEMENTARY_POLE_GRID:
        f = Endo.elementary(c3, 0, y.pow(k))
        v = singularity_valuation([n1, n2, 0], f)
        res.add(f"pole elementary k={k} n1={n1} n2={n2}", v == k * n2 - n1, f"valuation {v}")
    for fam in ("scalar-torus", "T2-weighted", "T1-squared"):
        for g in centralizer_family(fam, c3, rng, 3):
            res.add(f"centralizer {fam}", bool(centralizer_check(fam, g)), g)
    res.add("T2 rejects x1 -> x1 + x2^3",
            not centralizer_check("T2-weighted", Endo.elementary(c3, 0, y.pow(3))))
    u, v = centralizer_family("T2-weighted", c3, rng, 2)
    com = group_commutator(u, v)
    dev = [im - g for im, g in zip(com.images, c3.gens())]
    ok = not dev[1] and not dev[2] and all(m == (0, 1, 1) for m in dev[0].terms)
    res.add("T2 commutators are x1 -> x1 + b x2 x3", ok, com)
    sol = torus_normalize([2, 3], 3)
    res.add("torus-normalize n=3", sol.verify(), sol.exponents)


def suite_synthesis_comm(res: SuiteResult, rng: random.Random, fs: FieldSpec, quick: bool):
    fields = [QQ, FieldSpec.prime(5), FieldSpec.prime(7), FieldSpec.prime(101)]
    max_deg = 4 if quick else 6
    for F in fields:
        ctx = PolyContext(3, F, True)
        x, y, z = ctx.gens()
        skipped = []
        for d in range(1, max_deg + 1):
            for a in range(d + 1):
                mono = x.pow(a).mul(y.pow(d - a))
                c = F.random(rng, 5, nonzero=True)
                P = mono.scale(c)
                if not synthesis_supported(P):
                    skipped.append(f"x^{a}y^{d - a}")
                    continue
                try:
                    w = synth_elementary(P)
                except SynthesisError as exc:
                    res.checks.append(Check(f"{F} x^{a}y^{d - a}", INCONCLUSIVE, str(exc)))
                    continue
                got = expand(w)
                res.add(f"{F} x^{a}y^{d - a}", got == Endo.elementary(ctx, 2, P), got)
        if skipped:
            res.checks.append(Check(f"{F} outside preconditions", PASS,
                                    "skipped: " + " ".join(skipped)))


def suite_synthesis_nc(res: SuiteResult, rng: random.Random, fs: FieldSpec, quick: bool):
    ctx = PolyContext(4, fs, False)
    max_deg = 5 if quick else 6
    for d in range(1, max_deg + 1):
        for M in itertools.product((0, 1), repeat=d):
            if height(M) > 4:
                continue
            got = expand(synth_nc_elementary(M, ctx=ctx))
            want = Endo.elementary(ctx, 3, ctx.monomial(M))
            res.add(f"t -> t + {format_poly(ctx.monomial(M), True)}", got == want, got)


def suite_star(res: SuiteResult, rng: random.Random, fs: FieldSpec, quick: bool):
    ctx = PolyContext(3, fs, False)
    for t in range(40 if quick else 200):
        f, g, h = (random_poly(ctx, rng, 3, 3) for _ in range(3))
        lam = fs.random(rng, 5)
        s = StarProduct.one_parameter(lam)
        lhs = associator(f, g, h, s)
        rhs = commutator(g, commutator(f, h)).scale(lam)
        res.add(f"associator #{t}", lhs == rhs, format_poly(lhs - rhs))
    x, y, z = ctx.gens()
    vals = [0, 1, 2, 3, -1]
    for a, b in itertools.product(vals, repeat=2):
        s = StarProduct(fs.coerce(a), fs.coerce(b))
        assoc = associator(x, y, z, s).is_zero()
        want = fs.reduce(fs.coerce(a) * fs.coerce(b)) == 0
        res.add(f"associative iff ab=0 a={a} b={b}", assoc == want)


def hiking_inputs(fs: FieldSpec) -> list:
    """Three maps of the shape x fixed, y -> y + sum R_i + ..., z -> z + Q."""
    ctx = PolyContext(3, fs, False)
    x, y, z = ctx.gens()
    out = [
        Endo.elementary(ctx, 1, x * z * x + x * x * x),
        product(Endo.elementary(ctx, 1, x * z * x + x * x * x + z * x * z),
                Endo.elementary(ctx, 2, x * y * x)),
        product(Endo.elementary(ctx, 1, z * x + x * z + x * x + z * z),
                Endo.elementary(ctx, 2, y * x + x * x * y)),
    ]
    return out


def suite_hiking(res: SuiteResult, rng: random.Random, fs: FieldSpec, quick: bool):
    for targets in ((1,), (1, 2), (1, 2, 3)):
        plan = approx.hiking_solve(targets, fs)
        res.add(f"plan {targets}", plan.verify(), plan)
    cap = 6
    for i, f in enumerate(hiking_inputs(fs)):
        N, R = approx.hiking_slices(f)
        targets = tuple(j for j in R if j > 0)
        plan = approx.hiking_solve(targets, fs)
        h = approx.hiking_product(f, plan, cap=cap)
        N2, R2 = approx.hiking_slices(h)
        ok = N2 == N and set(R2) <= {0} and R2.get(0) == R.get(0)
        res.add(f"hiking product #{i}", ok, {j: format_poly(r) for j, r in R2.items()})
    ctx = PolyContext(3, fs, False)
    for ks in [(2, 1), (1, 1, 1), (2, 1, 2), (1, 2, 1, 1)]:
        k = sum(ks)
        u = approx.u_construction(ctx, ks, k + 1)
        v = approx.v_construction(ctx, ks, k + 1)
        res.add(f"u shape {ks}", approx.u_shape_holds(u, ks), u)
        res.add(f"v final type {ks}", approx.final_type_holds(v, ks), v)


def suite_nagata(res: SuiteResult, rng: random.Random, fs: FieldSpec, quick: bool):
    if fs.char:
        fs = QQ
    N = approx.nagata(fs)
    res.add("jacobian = 1", jacobian_det(N) == N.ctx.one, jacobian_det(N))
    inv = approx.nagata_inverse(fs)
    from .endo import compose
    res.add("exact inverse", compose(N, inv).is_identity() and compose(inv, N).is_identity(), inv)
    s = approx.nagata_invariant(N.ctx)
    res.add("fixes y^2 + xz", N.apply(s) == s)
    res.add("filtration level 3", filtration(N, 10).level == 3)
    try:
        trace = approx.tame_approximate(N, 6, seed=res.seed)
        res.add("tame approximation to H_6", trace.verify(), trace.levels)
    except SpanDeficiency as exc:
        res.checks.append(Check("tame approximation to H_6", INCONCLUSIVE, str(exc)))


def suite_inclexcl(res: SuiteResult, rng: random.Random, fs: FieldSpec, quick: bool):
    from math import factorial
    for n in range(1, 6):
        ctx = PolyContext(n, fs, True)
        prod = ctx.one
        for xi in ctx.gens():
            prod = prod * xi
        for m in range(1, n + 1):
            got = approx.inclusion_exclusion_check(n, m, fs)
            want = prod.scale(factorial(n)) if m == n else ctx.zero
            res.add(f"n={n} m={m}", got == want, format_poly(got))


SUITES: dict = {
    "filtration": suite_filtration,
    "commutators": suite_commutators,
    "torus": suite_torus,
    "synthesis-comm": suite_synthesis_comm,
    "synthesis-nc": suite_synthesis_nc,
    "star": suite_star,
    "hiking": suite_hiking,
    "nagata": suite_nagata,
    "inclexcl": suite_inclexcl,
}


def run_suite(name: str, seed: int = 0, field_spec: FieldSpec = QQ,
              quick: bool = False) -> SuiteResult:
    if name not in SUITES:
        raise TameAutError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    res = SuiteResult(name, seed, str(field_spec))
    start = time.perf_counter()
    SUITES[name](res, random.Random(seed), field_spec, quick)
    res.wall_time = time.perf_counter() - start
    return res


__all__ = ["Check", "SuiteResult", "SUITES", "run_suite", "hiking_inputs", "PASS", "FAIL",
           "INCONCLUSIVE"]
