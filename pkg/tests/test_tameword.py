import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from tameaut.coeffs import QQ, FieldSpec
from tameaut.endo import Endo, product
from tameaut.errors import SingularSystem, SynthesisError, TameAutError
from tameaut.polyalg import PolyContext
from tameaut.sampling import random_word
from tameaut.tameword import (Generator, GenWord, expand, expand_jet, express_in_power_basis,
                              height, invert_word, synth_edge, synth_elementary,
                              synth_nc_elementary, synth_power, synthesis_supported,
                              torus_normalize)
from tameaut.textio import parse_poly

from conftest import F5, F7, F101, to_sympy

F3 = FieldSpec.prime(3)


def comm3(F=QQ):
    ctx = PolyContext(3, F, True)
    return ctx, *ctx.gens()


def test_expand_basics():
    ctx, x, y, z = comm3()
    assert expand(GenWord(ctx)).is_identity()
    w = GenWord(ctx, (Generator.elementary(2, x * y),))
    assert expand(w) == Endo(ctx, [x, y, z + x * y])


def test_invert_word_examples():
    ctx, x, y, z = comm3()
    w = GenWord(ctx, (Generator.elementary(2, x * y),))
    inv = invert_word(w)
    assert inv.gens[0].effective_addend() == -(x * y)
    assert expand(inv) == Endo.elementary(ctx, 2, -(x * y))
    A = Generator.linear([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    E = Generator.elementary(2, x * y)
    assert invert_word(GenWord(ctx, (A, E))).gens == (E.inverse(), A.inverse())


@pytest.mark.parametrize("commutative", [True, False])
@pytest.mark.parametrize("F", [QQ, F7])
def test_word_times_inverse(commutative, F):
    rng = random.Random(3 if commutative else 4)
    ctx = PolyContext(3, F, commutative)
    # nc expansions of degree 4 composed with their inverses reach words of length 16
    budget = 4 if commutative else 3
    for _ in range(200):
        w = random_word(ctx, rng, max_length=8, degree_budget=budget)
        assert expand(GenWord(ctx, w.gens + invert_word(w).gens)).is_identity()
        assert product(expand(invert_word(w)), expand(w)).is_identity()


def test_same_target_elementaries_commute():
    for ctx in (PolyContext(3, QQ, True), PolyContext(3, QQ, False)):
        x, y, z = ctx.gens()
        a = Generator.elementary(2, x * y + x)
        b = Generator.elementary(2, y * x * x)
        assert expand(GenWord(ctx, (a, b))) == expand(GenWord(ctx, (b, a)))


def test_expand_jet_agrees_with_truncated_expansion():
    ctx, x, y, z = comm3()
    w = synth_power(2, 4, ctx)
    assert expand_jet(w, 4) == expand(w).truncate(4)


# commutative synthesis ---------------------------------------------------------------


def test_synth_power_examples():
    ctx, x, y, z = comm3()
    w1 = synth_power(5, 1, ctx)
    assert all(g.kind == "linear" for g in w1.gens)
    assert expand(w1) == Endo.elementary(ctx, 2, x.scale(5))
    assert expand(synth_power(1, 2, ctx)) == Endo.elementary(ctx, 2, x * x)
    b = Fraction(3, 2)
    assert expand(synth_power(b, 5, ctx)) == Endo.elementary(ctx, 2, x.pow(5).scale(b))


def test_synth_power_only_uses_the_base_quadratic():
    ctx, x, y, z = comm3()
    for g in synth_power(1, 4, ctx).gens:
        if g.kind == "elementary":
            assert (g.target, g.addend) == (2, x * y)


def test_synth_edge_examples():
    ctx, x, y, z = comm3()
    assert expand(synth_edge(1, 1, ctx)) == Endo.elementary(ctx, 2, y * x)
    assert expand(synth_edge(1, 2, ctx)) == Endo.elementary(ctx, 2, y * x * x)
    with pytest.raises(SynthesisError):
        synth_edge(1, 2, PolyContext(3, FieldSpec.prime(2), True))


def test_power_basis_examples():
    ctx, x, y, z = comm3()
    pairs = express_in_power_basis(x * y)
    X, Y = sympy.symbols("x1 x2")
    total = sum(sympy.Rational(c) * to_sympy(l) ** 2 for c, l in pairs)
    assert sympy.expand(total - X * Y) == 0
    for _, l in pairs:
        assert l.degree() == 1 and l.coefficient((1, 0, 0)) == 1
    assert express_in_power_basis(x * x) == [(1, x)]
    c3 = PolyContext(3, F3, True)
    with pytest.raises((SynthesisError, SingularSystem)):
        express_in_power_basis(parse_poly(c3, "x^2*y"))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.lists(st.integers(-5, 5), min_size=7, max_size=7))
def test_power_basis_identity(d, coeffs):
    ctx, x, y, z = comm3()
    target = ctx.zero
    for a, c in zip(range(d + 1), coeffs):
        target = target + (x.pow(a) * y.pow(d - a)).scale(c)
    if not target:
        return
    pairs = express_in_power_basis(target)
    got = sum((sympy.Rational(c) * to_sympy(l) ** d for c, l in pairs), sympy.Integer(0))
    assert sympy.expand(got - to_sympy(target)) == 0


def test_synth_elementary_examples():
    ctx, x, y, z = comm3()
    P = x * x + x * y
    assert expand(synth_elementary(P)) == Endo.elementary(ctx, 2, P)
    assert len(synth_elementary(ctx.zero).gens) == 0
    nag = (y * (y * y + x * z)).scale(-2)
    with pytest.raises(SynthesisError):
        synth_elementary(nag)


def test_synthesis_refuses_char_two():
    c2 = PolyContext(3, FieldSpec.prime(2), True)
    with pytest.raises(SynthesisError):
        synth_elementary(parse_poly(c2, "x*y^2"))


@pytest.mark.parametrize("F", [QQ, F5, F7, F101])
def test_synth_elementary_over_fields(F):
    ctx, x, y, z = comm3(F)
    rng = random.Random(F.char)
    for d in range(1, 6):
        P = ctx.zero
        for a in range(d + 1):
            P = P + (x.pow(a) * y.pow(d - a)).scale(F.random(rng, 4))
        if not P or not synthesis_supported(P):
            continue
        assert expand(synth_elementary(P)) == Endo.elementary(ctx, 2, P)


def test_edge_route_when_char_divides_degree():
    ctx, x, y, z = comm3(F3)
    P = x * x * y
    assert expand(synth_elementary(P)) == Endo.elementary(ctx, 2, P)


def test_word_length_grows_polynomially():
    ctx, x, y, z = comm3()
    lengths = {}
    for d in range(1, 9):
        P = ctx.zero
        for a in range(d + 1):
            P = P + x.pow(a) * y.pow(d - a)
        lengths[d] = len(synth_elementary(P).gens)
    # recorded: 1, 12, 58, 158, 526, 950, 2878, 4966
    assert all(lengths[d] <= 10 * d ** 4 for d in lengths)


# noncommutative synthesis -----------------------------------------------------------


def test_height_examples():
    assert height((0, 0, 1, 1, 1)) == 2
    assert height((0, 1, 0)) == 3
    assert height(()) == 0


def test_nc_xy_is_the_generator_relabelled():
    ctx = PolyContext(4, QQ, False)
    w = synth_nc_elementary((0, 1), ctx=ctx)
    elems = [g for g in w.gens if g.kind == "elementary"]
    assert len(elems) == 1 and elems[0].addend == ctx.var(0) * ctx.var(1)
    assert expand(w) == Endo.elementary(ctx, 3, ctx.var(0) * ctx.var(1))


def test_nc_example_over_f5():
    ctx = PolyContext(4, F5, False)
    x, y, z, t = ctx.gens()
    M = x * x * y * x
    assert expand(synth_nc_elementary((0, 0, 1, 0), ctx=ctx)) == Endo.elementary(ctx, 3, M)


def test_nc_depth_limit_is_reported():
    ctx = PolyContext(4, QQ, False)
    with pytest.raises(TameAutError):
        synth_nc_elementary((0, 1, 0, 1, 0), ctx=ctx, max_depth=1)


@pytest.mark.parametrize("d", range(1, 6))
def test_nc_all_short_monomials(d):
    ctx = PolyContext(4, QQ, False)
    for M in itertools.product((0, 1), repeat=d):
        if height(M) <= 4:
            want = Endo.elementary(ctx, 3, ctx.monomial(M).scale(3))
            assert expand(synth_nc_elementary(M, coeff=3, ctx=ctx)) == want


# torus normalisation -----------------------------------------------------------------


def test_torus_normalize_trivial():
    sol = torus_normalize([1, 1], 3)
    assert sol.materialize() == [1, 1, 1]


def test_torus_normalize_formal_solution():
    sol = torus_normalize([2, 3], 3)
    assert sol.verify()
    # plug back symbolically: beta_i alpha_{i+1}^-1 alpha_{i+2}^-1 alpha_i = 1, indices mod n
    b = sympy.symbols("b1 b2", positive=True)
    alpha = [sympy.prod([bj ** sympy.Rational(e) for bj, e in zip(b, row)]) for row in
             sol.exponents]
    n = 3
    for i in range(2):
        expr = b[i] * alpha[i] / (alpha[(i + 1) % n] * alpha[(i + 2) % n])
        assert sympy.simplify(expr) == 1
    assert sol.kernel


def test_torus_normalize_zero_beta():
    with pytest.raises(TameAutError):
        torus_normalize([2, 0], 3)
