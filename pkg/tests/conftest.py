"""Shared generators for randomized suites.

Everything is driven by seeded random.Random instances so suites are
reproducible; rejection sampling keeps only configurations satisfying the
relevant genericity (nonzero section, reduced divisor, off the branch
locus).
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from apparent.exact import GR_ONE, GRat, Poly, RatFun
from apparent.higgs import HiggsTriple
from apparent.derham import ConnectionTriple
from apparent.linalg import mat, mat_inverse, mat_mul, mat_vec


def rand_grat(rng, span=2, imag=True):
    re = Fraction(rng.randint(-span, span),
                  rng.choice([1, 1, 2]))
    im = Fraction(rng.randint(-1, 1)) if imag and rng.random() < 0.3 \
        else Fraction(0)
    return GRat(re, im)


def rand_poly(rng, deg=1, span=2):
    return Poly([rand_grat(rng, span) for _ in range(deg + 1)])


def rand_ratfun(rng, deg=1, span=2):
    return RatFun(rand_poly(rng, deg, span))


def random_higgs_triple(rng, n=2, deg=1):
    phi = [[rand_ratfun(rng, deg) for _ in range(n)] for _ in range(n)]
    s = [rand_ratfun(rng, deg) for _ in range(n)]
    if all(x.is_zero for x in s):
        s[0] = RatFun(1)
    return HiggsTriple(n, phi, s)


def random_connection_triple(rng, n=2, deg=1, lam=1):
    a = [[rand_ratfun(rng, deg) for _ in range(n)] for _ in range(n)]
    s = [rand_ratfun(rng, deg) for _ in range(n)]
    if all(x.is_zero for x in s):
        s[0] = RatFun(1)
    return ConnectionTriple(n, GRat(lam), a, s)


def unimodular_gauge(rng, n, deg=1, steps=3):
    """Product of elementary polynomial shears: det = 1 everywhere."""
    g = [[RatFun(1) if i == j else RatFun(0) for j in range(n)]
         for i in range(n)]
    g = mat(g)
    for _ in range(steps):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        e = [[RatFun(1) if a == b else RatFun(0) for b in range(n)]
             for a in range(n)]
        e[i][j] = rand_ratfun(rng, deg)
        g = mat_mul(g, mat(e))
    return g


def gauged_polynomial_basis_triple(rng, n, roots):
    """A connection triple whose section has exactly the given simple zeros:
    start from (A=0, s=polynomial basis), then apply a unimodular gauge."""
    wr = Poly([1])
    for r in roots:
        wr = wr * Poly([-GRat(r), GR_ONE])
    if n == 2:
        f = Poly([0] + [wr[k] / (k + 1) for k in range(wr.degree + 1)])
        basis = [RatFun(1), RatFun(f)]
    elif n == 3:
        g2 = Poly([0, 0] + [wr[k] / ((k + 1) * (k + 2))
                            for k in range(wr.degree + 1)])
        basis = [RatFun(1), RatFun.x(), RatFun(g2)]
    else:
        raise ValueError("ranks 2 and 3 only")
    g = unimodular_gauge(rng, n)
    gi = mat_inverse(g)
    dg = mat([[x.derivative() for x in row] for row in g])
    a_new = mat_mul(gi, dg)
    s_new = mat_vec(gi, basis)
    return ConnectionTriple(n, GRat(1), a_new, s_new)


@pytest.fixture
def rng():
    return random.Random(20260809)
