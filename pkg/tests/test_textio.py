import random

import pytest

from tameaut.approx import nagata
from tameaut.coeffs import QQ
from tameaut.endo import Endo
from tameaut.errors import ParseError
from tameaut.polyalg import PolyContext
from tameaut.sampling import random_endo, random_word
from tameaut.tameword import GenWord, Generator
from tameaut.textio import format_endo, format_word, parse_endo, parse_poly, parse_word

from conftest import F7


def test_parse_elementary_with_aliases():
    f = parse_endo("[comm] n=3 field=q\nx = x;\ny = y;\nz = z + x*y;")
    ctx = f.ctx
    x, y, z = ctx.gens()
    assert f == Endo.elementary(ctx, 2, x * y)


def test_parse_nagata_text():
    text = """[comm] n=3 field=q
    # the classical wild candidate
    x = x - 2*y*(y^2 + x*z) - (y^2 + x*z)^2*z;
    y = y + (y^2 + x*z)*z;
    z = z;
    """
    assert parse_endo(text) == nagata()


def test_undeclared_variable_is_located():
    with pytest.raises(ParseError) as info:
        parse_endo("[comm] n=3 field=q\nx = x;\ny = y;\nz = z + w;")
    assert "undeclared" in str(info.value)
    assert info.value.line == 4 and info.value.col == 9


@pytest.mark.parametrize("text", [
    "[comm] n=3 field=q\nx1 = x1;\nx2 = x2;",                       # missing x3
    "[comm] n=2 field=q\nx1 = x1 + 1;\nx2 = x2;",                   # constant without affine
    "[comm] n=2 field=q\nx1 = x1\nx2 = x2;",                        # missing ';'
    "[comm] n=2 field=q\nx1 = 2x1;\nx2 = x2;",                      # implicit product
    "[comm] n=2 field=fp:6\nx1 = x1;\nx2 = x2;",                    # not a prime
    "[comm] n=2\nx1 = x1;\nx2 = x2;",                               # header
    "[comm] n=2 field=q\nx1 = x1;\nx1 = x2;",                       # assigned twice
    "[comm] n=2 field=q\nx1 = x1^(2);\nx2 = x2;",                   # exponent
])
def test_malformed_input(text):
    with pytest.raises(ParseError):
        parse_endo(text)


def test_affine_flag_allows_constants():
    f = parse_endo("[comm] n=2 field=q affine\nx1 = x1 + 1;\nx2 = x2;")
    assert f.affine and parse_endo(format_endo(f)) == f


def test_identity_format():
    ctx = PolyContext(3)
    assert format_endo(Endo.identity(ctx)).splitlines()[1:] == ["x1 = x1;", "x2 = x2;",
                                                               "x3 = x3;"]


def test_residues_printed_in_range():
    ctx = PolyContext(2, F7, True)
    f = Endo(ctx, [ctx.var(0) - ctx.var(1).pow(2), ctx.var(1)])
    body = format_endo(f).splitlines()[1]
    assert body == "x1 = x1 + 6*x2^2;"


def test_rational_coefficients_and_nc_order():
    ctx = PolyContext(2, QQ, False)
    p = parse_poly(ctx, "3/2*x1*x2 - x2*x1 + 1/3")
    x1, x2 = ctx.gens()
    assert p == (x1 * x2).scale(QQ.parse_value("3/2")) - x2 * x1 + ctx.const(QQ.parse_value("1/3"))


def test_word_format_example():
    ctx = PolyContext(4, QQ, False)
    x = ctx.gens()
    w = GenWord(ctx, (Generator.elementary(2, x[0] * x[1]).inverse(),
                      Generator.linear([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])))
    text = format_word(w)
    assert text.splitlines() == ["[nc] n=4 field=q", "ELEM x3 x1*x2 ^-1",
                                 "LIN [[1,1,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]"]
    assert parse_word(text) == w


def test_word_rejects_singular_and_bad_target():
    with pytest.raises(ParseError):
        parse_word("[comm] n=2 field=q\nLIN [[1,1],[1,1]]")
    with pytest.raises(ParseError):
        parse_word("[comm] n=2 field=q\nELEM x1 x1*x2")
    with pytest.raises(ParseError):
        parse_word("[comm] n=2 field=q\nSWAP x1 x2")


@pytest.mark.parametrize("commutative", [True, False])
@pytest.mark.parametrize("F", [QQ, F7])
def test_endo_round_trip(commutative, F):
    rng = random.Random(11)
    for _ in range(500):
        ctx = PolyContext(rng.choice((2, 3, 4)), F, commutative)
        f = random_endo(ctx, rng, max_degree=4, nterms=4)
        text = format_endo(f, aliases=rng.random() < 0.3)
        g = parse_endo(text)
        assert g == f and g.images == f.images


@pytest.mark.parametrize("commutative", [True, False])
@pytest.mark.parametrize("F", [QQ, F7])
def test_word_round_trip(commutative, F):
    rng = random.Random(12)
    for _ in range(200):
        ctx = PolyContext(rng.choice((2, 3, 4)), F, commutative)
        w = random_word(ctx, rng, max_length=6)
        assert parse_word(format_word(w)) == w
