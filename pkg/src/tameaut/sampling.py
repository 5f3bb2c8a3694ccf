"""Seeded random endomorphisms, words and filtration samples."""

from __future__ import annotations

import random
from typing import Optional

from . import linalg
from .endo import Endo, product
from .polyalg import PolyContext, random_poly
from .tameword import Generator, GenWord


def random_matrix(ctx: PolyContext, rng: random.Random, bound: int = 2):
    ring = ctx.ring
    while True:
        mat = [[ring.coerce(rng.randint(-bound, bound)) for _ in range(ctx.n)]
               for _ in range(ctx.n)]
        if linalg.det(ring, mat):
            return mat


def random_unimodular(ctx: PolyContext, rng: random.Random, steps: int = 4):
    """Product of integer row operations: invertible with an integral inverse."""
    n = ctx.n
    mat = linalg.identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            break
        c = rng.choice((-1, 1, 2))
        mat[i] = [ctx.ring.reduce(a + c * b) for a, b in zip(mat[i], mat[j])]
    if rng.random() < 0.5 and n > 1:
        mat[0], mat[1] = mat[1], mat[0]
    return mat


def random_endo(ctx: PolyContext, rng: random.Random, max_degree: int = 3,
                nterms: int = 3) -> Endo:
    """x_i -> x_i + random terms of degree 1..max_degree (not necessarily invertible)."""
    ims = [x + random_poly(ctx, rng, max_degree, nterms, min_degree=1) for x in ctx.gens()]
    return Endo(ctx, ims)


def random_generator(ctx: PolyContext, rng: random.Random, max_degree: int = 2) -> Generator:
    if rng.random() < 0.4:
        g = Generator.linear(random_unimodular(ctx, rng, steps=2))
    else:
        v = rng.randrange(ctx.n)
        others = [i for i in range(ctx.n) if i != v]
        addend = random_poly(ctx, rng, max_degree, 2, min_degree=1, variables=others)
        if not addend:
            addend = ctx.var(others[0])
        g = Generator.elementary(v, addend)
    return g.inverse() if rng.random() < 0.3 else g


def random_word(ctx: PolyContext, rng: random.Random, length: Optional[int] = None,
                max_length: int = 8, max_degree: int = 2,
                degree_budget: Optional[int] = None) -> GenWord:
    """Random generator word.

    The expansion's degree is at most the product of the addend degrees;
    ``degree_budget`` caps that product (later elementaries fall back to
    linear addends) so exact expansion stays cheap.
    """
    if length is None:
        length = rng.randint(0, max_length)
    gens = []
    bound = 1
    for _ in range(length):
        deg = max_degree
        if degree_budget is not None:
            while deg > 1 and bound * deg > degree_budget:
                deg -= 1
        g = random_generator(ctx, rng, deg)
        if g.kind == "elementary":
            bound *= max(1, g.addend.degree())
        gens.append(g)
    return GenWord(ctx, tuple(gens))


def random_in_H(ctx: PolyContext, k: int, rng: random.Random, factors: int = 2,
                trunc: Optional[int] = None) -> Endo:
    """A tame element of H_k: linear conjugates of elementaries of degree k and k+1.

    With ``trunc`` only the jet modulo I^trunc is kept, which is all a
    filtration check below that degree can see.
    """
    out = Endo.identity(ctx)
    for _ in range(factors):
        v = rng.randrange(ctx.n)
        others = [i for i in range(ctx.n) if i != v]
        addend = random_poly(ctx, rng, k + 1, 2, min_degree=k, variables=others)
        if not addend:
            continue
        L = Endo.linear(ctx, random_unimodular(ctx, rng))
        Linv = Endo.linear(ctx, linalg.inverse(ctx.ring, [list(r) for r in L.linear_part()]))
        out = product(out, Linv, Endo.elementary(ctx, v, addend), L, trunc=trunc)
    return out


def random_in_G(ctx: PolyContext, k: int, rng: random.Random,
                trunc: Optional[int] = None) -> Endo:
    """A scalar linear part times an element of H_k."""
    lam = ctx.ring.random(rng, 3, nonzero=True)
    return product(Endo.diagonal(ctx, [lam] * ctx.n), random_in_H(ctx, k, rng, trunc=trunc),
                   trunc=trunc)


__all__ = ["random_matrix", "random_unimodular", "random_endo", "random_generator", "random_word",
           "random_in_H", "random_in_G"]
