import random
from fractions import Fraction

import pytest

from extreg import AlgebraContext, Element
from extreg.fields import PrimeField, QQ

ALL_FIELDS = (QQ, PrimeField(2), PrimeField(3), PrimeField(5), PrimeField(7))


def random_scalar(rng: random.Random, field, nonzero=False):
    if field.characteristic == 0:
        while True:
            value = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            if value or not nonzero:
                return value
    while True:
        value = rng.randrange(field.p)
        if value or not nonzero:
            return value


def random_element(rng: random.Random, ctx: AlgebraContext, max_terms=4):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        mask = rng.randrange(1 << ctx.n_vars)
        terms[mask] = random_scalar(rng, ctx.field)
    return Element(ctx, terms)


def random_homogeneous(rng: random.Random, ctx: AlgebraContext, d: int,
                       max_terms=4, nonzero=False):
    from extreg import basis
    monos = basis(ctx, d)
    while True:
        terms = {}
        for _ in range(rng.randint(0, max_terms)):
            terms[rng.choice(monos)] = random_scalar(rng, ctx.field)
        e = Element(ctx, terms)
        if e or not nonzero:
            return e


def small_context(field, n_vars: int) -> AlgebraContext:
    return AlgebraContext(tuple(f"e{i}" for i in range(1, n_vars + 1)), field)


@pytest.fixture
def rng():
    return random.Random(20240811)
