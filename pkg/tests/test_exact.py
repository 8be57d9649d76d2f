import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apparent.exact import (
    CertifiedComplex,
    Divisor,
    GRat,
    LaurentJet,
    Poly,
    RatFun,
    TruncationError,
    laurent_expand,
    roots_with_multiplicity,
    try_sqrt,
)


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

small_fracs = st.builds(
    Fraction,
    st.integers(min_value=-50, max_value=50),
    st.integers(min_value=1, max_value=9),
)
grats = st.builds(GRat, small_fracs, small_fracs)


def test_parse_roundtrip_examples():
    for text in ["3/4", "-2", "1/2+3/5*i", "1/2-3/5*i", "i", "-i", "2*i"]:
        g = GRat.parse(text)
        assert GRat.parse(g.to_json()) == g


@given(grats, grats)
def test_field_ops(a, b):
    assert (a + b) - b == a
    if b:
        assert (a * b) / b == a


@given(grats)
def test_sqrt_of_square(a):
    r = try_sqrt(a * a)
    assert r is not None and r * r == a * a


def test_sqrt_nonsquare():
    assert try_sqrt(GRat(2)) is None
    assert try_sqrt(GRat(0, 2)) == GRat(1, 1)  # sqrt(2i) = 1 + i


# ---------------------------------------------------------------------------
# Polynomials and rational functions
# ---------------------------------------------------------------------------

def test_poly_divmod_and_gcd():
    x = Poly.x()
    p = (x - Poly([1])) * (x - Poly([2])) ** 2
    q = (x - Poly([2])) * (x - Poly([3]))
    g = p.gcd(q)
    assert g == (x - Poly([2])).monic()
    quo, rem = p.divmod(x - Poly([2]))
    assert not rem
    assert quo == (x - Poly([1])) * (x - Poly([2]))


def test_ratfun_normalization_idempotent(rng):
    for _ in range(40):
        num = Poly([GRat(rng.randint(-4, 4)) for _ in range(4)])
        den = Poly([GRat(rng.randint(-4, 4)) for _ in range(3)] + [GRat(1)])
        if not num:
            continue
        f = RatFun(num, den)
        again = RatFun(f.num, f.den)
        assert again.num == f.num and again.den == f.den
        assert f.den.leading() == GRat(1)
        assert f.num.gcd(f.den).degree == 0


def test_ratfun_derivative_quotient_rule():
    z = RatFun.x()
    f = (z * z + 1) / (z - 2)
    g = f.derivative()
    h = 1e-6
    at = 1.0
    fd = (f.eval_complex(at + h) - f.eval_complex(at - h)) / (2 * h)
    assert abs(fd - g.eval_complex(at)) < 1e-7


# ---------------------------------------------------------------------------
# Laurent expansion: the three stated examples plus the h-scaling property
# ---------------------------------------------------------------------------

def test_laurent_simple_pole():
    f = RatFun(Poly([1]), Poly([0, 1]))  # 1/z
    j = laurent_expand(f, GRat(0), 2)
    assert j.lowest_order == -1
    assert [c.to_json() for c in j.coefficients] == ["1", "0", "0", "0"]


def test_laurent_derived_example():
    f = RatFun(Poly([2, 6]), Poly([0, 2, 3]))
    j = laurent_expand(f, GRat(0), 1)
    assert j.lowest_order == -1
    assert j.coefficient(-1) == GRat(1)
    assert j.coefficient(0) == GRat(Fraction(3, 2))
    # long-division oracle for the next coefficient: -9/4
    assert j.coefficient(1) == GRat(Fraction(-9, 4))


def test_laurent_monomial():
    f = RatFun(Poly([0, 0, 1]))
    j = laurent_expand(f, GRat(0), 3)
    assert j.lowest_order == 2
    assert [c.to_json() for c in j.coefficients] == ["1", "0"]


def test_laurent_truncation_error():
    f = RatFun(Poly([1]), Poly([0, 0, 1]))  # 1/z^2
    with pytest.raises(TruncationError):
        laurent_expand(f, GRat(0), -3)


def test_laurent_jet_eval_order(rng):
    # evaluating the truncated jet at p + h matches f to O(h^{order+1})
    for _ in range(10):
        num = Poly([GRat(rng.randint(-3, 3)) for _ in range(3)])
        den = Poly([GRat(rng.randint(1, 3)), GRat(rng.randint(-2, 2)),
                    GRat(1)])
        f = RatFun(num, den)
        p = GRat(0)
        if not f.is_regular_at(p) or f.is_zero:
            continue
        order = 3
        jet = laurent_expand(f, p, order)
        errs = []
        for h in (1e-2, 1e-3):
            approx = jet.eval(h)
            exact = f.eval_complex(complex(p.to_complex()) + h)
            errs.append(abs(approx - exact))
        if errs[1] < 1e-17:
            continue  # below float noise
        ratio = errs[0] / errs[1]
        assert ratio > 10 ** (order + 1) / 30


def test_laurent_numeric_center():
    f = RatFun(Poly([1]), Poly([-1, 0, 1]))  # 1/(z^2-1)
    div = roots_with_multiplicity(Poly([-2, 0, 0, 1]))  # z^3 = 2
    center = next(p for p, _ in div if isinstance(p, CertifiedComplex))
    j = laurent_expand(f, center, 1)
    z0 = center.to_complex()
    val = complex(j.coefficient(0))
    assert abs(val - 1 / (z0 ** 2 - 1)) < 1e-12


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------

def test_roots_factorable():
    div = roots_with_multiplicity(Poly([-1, 0, 1]))
    assert div.same_multiset(Divisor([(GRat(1), 1), (GRat(-1), 1)]))


def test_roots_mixed_exact_certified():
    div = roots_with_multiplicity(Poly([0, 2, 0, 0, -1]))  # 2z - z^4
    exact = [p for p, _ in div if isinstance(p, GRat)]
    certified = [p for p, _ in div if isinstance(p, CertifiedComplex)]
    assert exact == [GRat(0)]
    assert len(certified) == 3
    import mpmath
    for c in certified:
        with mpmath.workprec(c.prec):
            assert abs(c.mid ** 3 - 2) < mpmath.mpf(2) ** (-c.prec + 20)


def test_roots_multiplicity():
    div = roots_with_multiplicity(Poly([0, 0, 1]))
    assert div.points == ((GRat(0), 2),)


def test_roots_product_multiset(rng):
    for _ in range(15):
        f = Poly([GRat(rng.randint(-3, 3)) for _ in range(3)] + [GRat(1)])
        g = Poly([GRat(rng.randint(-3, 3)) for _ in range(2)] + [GRat(1)])
        dp = roots_with_multiplicity(f * g)
        dsum = roots_with_multiplicity(f) + roots_with_multiplicity(g)
        assert dp.degree == dsum.degree
        assert dp.same_multiset(dsum)


def test_gaussian_roots_exact():
    # (z^2+1)(z-3/2): roots i, -i, 3/2 all exact
    p = Poly([1, 0, 1]) * Poly([GRat(Fraction(-3, 2)), GRat(1)])
    div = roots_with_multiplicity(p)
    pts = {x.to_json() for x, _ in div.points}
    assert pts == {"1*i", "-1*i", "3/2"}


def test_divisor_degree_and_reduction():
    d = Divisor([(GRat(1), 2), (GRat(0), 1)])
    assert d.degree == 3
    assert not d.is_reduced()
    assert d.multiplicity_at(GRat(1)) == 2
