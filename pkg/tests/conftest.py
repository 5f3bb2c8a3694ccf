import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import strategies as st

from tameaut.coeffs import QQ, FieldSpec
from tameaut.endo import Endo
from tameaut.polyalg import Poly, PolyContext, random_poly

F5 = FieldSpec.prime(5)
F7 = FieldSpec.prime(7)
F101 = FieldSpec.prime(101)

FIELDS = [QQ, F7, F101]


def sym_vars(n, commutative=True):
    return sympy.symbols(f"x1:{n + 1}", commutative=commutative)


def to_sympy(p: Poly):
    """Independent expression for a Poly (sympy noncommutative symbols for the nc flavor)."""
    xs = sym_vars(p.ctx.n, p.commutative)
    out = sympy.Integer(0)
    for m, c in p.terms.items():
        term = sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
        if p.commutative:
            for x, e in zip(xs, m):
                term = term * x ** e
        else:
            for i in m:
                term = term * xs[i]
        out = out + term
    return sympy.expand(out)


def sympy_equal(a, b, p=0):
    d = sympy.expand(a - b)
    if not p:
        return d == 0
    if d == 0:
        return True
    poly = sympy.Poly(d, *sorted(d.free_symbols, key=str))
    return all(int(c) % p == 0 for c in poly.coeffs())


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def xyz():
    ctx = PolyContext(3, QQ, True)
    return ctx, *ctx.gens()


@pytest.fixture
def nc_xyz():
    ctx = PolyContext(3, QQ, False)
    return ctx, *ctx.gens()


# hypothesis strategies ---------------------------------------------------------------

fields = st.sampled_from(FIELDS)
flavors = st.booleans()


@st.composite
def polys(draw, ctx=None, max_degree=3, nterms=4, min_degree=0):
    if ctx is None:
        ctx = PolyContext(draw(st.integers(2, 3)), draw(fields), draw(flavors))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_poly(ctx, random.Random(seed), max_degree, nterms, min_degree)


@st.composite
def contexts(draw, n=None, commutative=None, field=None):
    return PolyContext(n if n is not None else draw(st.integers(2, 3)),
                       field if field is not None else draw(fields),
                       commutative if commutative is not None else draw(flavors))


@st.composite
def endos(draw, ctx=None, max_degree=3, min_degree=2):
    """x_i + higher terms; min_degree=1 allows (possibly singular) linear parts."""
    if ctx is None:
        ctx = draw(contexts())
    ims = [x + draw(polys(ctx, max_degree, 3, min_degree=min_degree)) for x in ctx.gens()]
    return Endo(ctx, ims)


# acceptance report -------------------------------------------------------------------

ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
