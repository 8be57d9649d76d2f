import random
from fractions import Fraction

import pytest

from apparent.exact import Divisor, GR_ONE, GRat, Poly, RatFun
from apparent.higgs import (
    BranchCollisionError,
    HeckeData,
    HiggsTriple,
    LiftedDivisor,
    ReducibleError,
    build_lagrangian_point,
    divisor_lift,
    hecke_gauge,
    hecke_transform,
    higgs_divisor,
    higgs_section,
    hitchin_section,
    spectral_data,
)
from apparent.linalg import det, grat_kernel, mat, mat_eval, mat_mul, mat_vec

from conftest import random_higgs_triple

ONE, Z = RatFun(1), RatFun.x()
ZERO = RatFun(0)


def companion2(a2):
    return [[ZERO, a2], [ONE, ZERO]]


# ---------------------------------------------------------------------------
# Sections
# ---------------------------------------------------------------------------

def test_section_hitchin_unit():
    t = HiggsTriple(2, companion2(Z), [ONE, ZERO])
    assert higgs_section(t) == RatFun(1)
    assert higgs_divisor(t).is_empty()


def test_section_hand_oracle():
    t = HiggsTriple(2, companion2(ONE), [ONE, Z])
    # det [[1, z],[z, 1]] = 1 - z^2 by hand
    assert higgs_section(t) == RatFun(Poly([1, 0, -1]))
    assert higgs_divisor(t).same_multiset(
        Divisor([(GRat(1), 1), (GRat(-1), 1)]))


def test_section_reducible_zero():
    # s spanning a phi-invariant line: phi = diag-ish with eigenvector s
    phi = [[ONE, ZERO], [ZERO, 2 * ONE]]
    t = HiggsTriple(2, phi, [ONE, ZERO])
    assert higgs_section(t).is_zero
    with pytest.raises(ReducibleError):
        higgs_divisor(t)


def test_section_scaling_covariance():
    # replacing s by f s multiplies the section by f^n
    t = HiggsTriple(2, companion2(ONE), [ONE, Z])
    f = Z - 3
    scaled = [f * x for x in t.s]
    sec_scaled = det(mat(zip(*[scaled, mat_vec(t.phi, scaled)])))
    assert sec_scaled == f * f * higgs_section(t)
    # the divisor of the primitive triple is unchanged, per normalization
    t2 = HiggsTriple(2, t.phi, scaled)
    assert higgs_divisor(t2).same_multiset(higgs_divisor(t))


# ---------------------------------------------------------------------------
# Spectral data
# ---------------------------------------------------------------------------

def test_spectral_companion():
    sd = spectral_data(companion2(Z))
    assert sd.char_coeffs[0].is_zero
    assert sd.char_coeffs[1] == -Z


def test_spectral_constant_disc():
    sd = spectral_data([[ZERO, ONE], [ONE, ZERO]])
    assert sd.char_coeffs[1] == RatFun(-1)
    assert sd.discriminant_divisor.is_empty()


def test_spectral_branch_point():
    sd = spectral_data(companion2(Z))
    assert sd.discriminant_divisor.same_multiset(Divisor([(GRat(0), 1)]))


# ---------------------------------------------------------------------------
# Divisor lift
# ---------------------------------------------------------------------------

def test_lift_example():
    t = HiggsTriple(2, [[ZERO, ONE], [ONE, ZERO]], [ONE, Z])
    lift = divisor_lift(t)
    assert lift.same_multiset(LiftedDivisor(
        ((GRat(1), GRat(-1)), (GRat(-1), GRat(1)))))


def test_lift_empty_for_hitchin():
    t = hitchin_section(2, [Z])
    assert divisor_lift(t).degree == 0


def test_lift_on_spectral_curve():
    t = HiggsTriple(2, [[ZERO, ONE], [ONE, ZERO]], [ONE, Z])
    sd = spectral_data(t.phi)
    for u, lam in divisor_lift(t).points:
        assert sd.char_at(lam, u).is_zero


def test_lift_norm_identity_random(rng):
    checked = 0
    for _ in range(120):
        n = rng.choice([2, 3])
        t = random_higgs_triple(rng, n)
        try:
            div = higgs_divisor(t)
            if not div.is_reduced():
                continue
            lift = divisor_lift(t)
        except (ReducibleError, BranchCollisionError, ZeroDivisionError):
            continue
        assert lift.base_projection().same_multiset(div)
        checked += 1
    assert checked >= 30


def test_section_never_zero_squarefree_disc(rng):
    # contrapositive of the reducibility lemma, 100 random triples
    count = 0
    while count < 100:
        t = random_higgs_triple(rng, 2)
        sd = spectral_data(t.phi)
        # squarefree characteristic discriminant
        disc = sd.discriminant_divisor
        if any(m > 1 for _, m in disc):
            continue
        assert not higgs_section(t).is_zero
        count += 1


def test_gauge_invariance(rng):
    for _ in range(20):
        t = random_higgs_triple(rng, 2)
        try:
            sec = higgs_section(t)
            if sec.is_zero:
                continue
        except ZeroDivisionError:
            continue
        g = [[GRat(rng.randint(-2, 2)) for _ in range(2)] for _ in range(2)]
        detg = g[0][0] * g[1][1] - g[0][1] * g[1][0]
        if not detg:
            continue
        grf = mat([[RatFun(Poly([c])) for c in row] for row in g])
        from apparent.linalg import mat_inverse
        gi = mat_inverse(grf)
        phi2 = mat_mul(gi, mat_mul(t.phi, grf))
        s2 = mat_vec(gi, t.s)
        t2 = HiggsTriple(2, phi2, s2)
        # section scales by det(g)^{-1} up to the primitive renormalization;
        # the divisor data is identical
        try:
            assert higgs_divisor(t2).same_multiset(higgs_divisor(t))
            assert divisor_lift(t2).same_multiset(divisor_lift(t))
        except (BranchCollisionError, ReducibleError):
            continue


# ---------------------------------------------------------------------------
# Hitchin section
# ---------------------------------------------------------------------------

def test_hitchin_roundtrip_n2():
    b = [Z]
    t = hitchin_section(2, b)
    sd = spectral_data(t.phi)
    assert list(sd.char_coeffs) == [ZERO, Z]
    assert higgs_section(t) == RatFun(1)


def test_hitchin_nilpotent_n3():
    t = hitchin_section(3, [ZERO, ZERO])
    assert higgs_section(t) == RatFun(1)
    sd = spectral_data(t.phi)
    assert all(b.is_zero for b in sd.char_coeffs)


def test_hitchin_roundtrip_random(rng):
    for _ in range(10):
        n = rng.choice([2, 3])
        b = [RatFun(Poly([GRat(rng.randint(-2, 2)) for _ in range(2)]))
             for _ in range(n - 1)]
        t = hitchin_section(n, b)
        sd = spectral_data(t.phi)
        assert sd.char_coeffs[0].is_zero
        assert list(sd.char_coeffs[1:]) == b


# ---------------------------------------------------------------------------
# Hecke transforms
# ---------------------------------------------------------------------------

def _eigenline(t, u, lam):
    phi_u = mat_eval(t.phi, u)
    m = mat([[phi_u[i][j] - (lam if i == j else GRat(0))
              for j in range(t.n)] for i in range(t.n)])
    ker = grat_kernel(m)
    assert len(ker) == 1
    return ker[0]


def test_hecke_adds_divisor_and_lift_point():
    b2 = RatFun(Poly([-4, 0, 1]))  # z^2 - 4; curve lam^2 = 4 - z^2... sign:
    t = hitchin_section(2, [b2])   # char: lam^2 + b2 = 0
    u, lam = GRat(0), GRat(2)      # lam^2 = -b2(0) = 4
    v = _eigenline(t, u, lam)
    t2 = hecke_transform(t, HeckeData(u, (v,)))
    sd1, sd2 = spectral_data(t.phi), spectral_data(t2.phi)
    assert list(sd1.char_coeffs) == list(sd2.char_coeffs)
    div = higgs_divisor(t2)
    assert div.same_multiset(Divisor([(u, 1)]))
    lift = divisor_lift(t2)
    assert lift.same_multiset(LiftedDivisor(((u, lam),)))


def test_double_hecke_is_point_twist():
    b2 = RatFun(Poly([-4, 0, 1]))
    t = hitchin_section(2, [b2])
    u = GRat(0)
    v1 = _eigenline(t, u, GRat(2))
    t1 = hecke_transform(t, HeckeData(u, (v1,)))
    g1 = hecke_gauge(t, HeckeData(u, (v1,)))
    v2 = _eigenline(t1, u, GRat(-2))
    t2 = hecke_transform(t1, HeckeData(u, (v2,)))
    g2 = hecke_gauge(t1, HeckeData(u, (v2,)))
    # composite gauge = (z - u) * C with C constant invertible
    comp = mat_mul(g1, g2)
    zp = RatFun(Poly([-u, GR_ONE]))
    c = [[entry / zp for entry in row] for row in comp]
    for row in c:
        for entry in row:
            assert entry.num.degree <= 0 and entry.den.degree == 0
    cg = mat([[entry.num[0] if entry.num.degree == 0 else GRat(0)
               for entry in row] for row in c])
    detc = cg[0][0] * cg[1][1] - cg[0][1] * cg[1][0]
    assert detc
    # phi returns to a constant conjugate of the original; divisor data equal
    assert spectral_data(t2.phi).char_coeffs == spectral_data(t.phi).char_coeffs
    assert higgs_divisor(t2).same_multiset(higgs_divisor(t))
    assert divisor_lift(t2).same_multiset(divisor_lift(t))
    # and the conjugation by the constant matrix recovers phi exactly
    crf = mat([[RatFun(Poly([x])) for x in row] for row in cg])
    from apparent.linalg import mat_inverse
    lhs = mat_mul(mat_inverse(crf), mat_mul(t.phi, crf))
    assert all(lhs[i][j] == t2.phi[i][j] for i in range(2) for j in range(2))


def test_hecke_requires_invariance():
    t = hitchin_section(2, [RatFun(Poly([-4, 0, 1]))])
    with pytest.raises(ValueError):
        hecke_transform(t, HeckeData(GRat(0), ((GRat(1), GRat(1)),)))


def test_hecke_char_poly_invariance_random(rng):
    for _ in range(15):
        b2 = RatFun(Poly([GRat(rng.randint(-5, -1)), GRat(rng.randint(-2, 2)),
                          GRat(1)]))
        t = hitchin_section(2, [b2])
        u = GRat(rng.randint(-2, 2))
        lam2 = -b2.eval(u)
        from apparent.exact import try_sqrt
        lam = try_sqrt(lam2)
        if lam is None or not lam:
            continue
        v = _eigenline(t, u, lam)
        t2 = hecke_transform(t, HeckeData(u, (v,)))
        assert spectral_data(t2.phi).char_coeffs == \
            spectral_data(t.phi).char_coeffs


# ---------------------------------------------------------------------------
# Building Lagrangian members
# ---------------------------------------------------------------------------

def test_build_empty_lift_is_hitchin():
    b = [RatFun(Poly([1, 1]))]
    t = build_lagrangian_point(2, b, LiftedDivisor(()))
    t0 = hitchin_section(2, b)
    assert t.phi == t0.phi and t.s == t0.s


def test_build_single_point():
    b2 = RatFun(Poly([-4, 0, 1]))
    lift = LiftedDivisor(((GRat(0), GRat(2)),))
    t = build_lagrangian_point(2, [b2], lift)
    assert divisor_lift(t).same_multiset(lift)
    assert list(spectral_data(t.phi).char_coeffs) == [ZERO, b2]


def test_build_two_points_order_independent():
    # eigenvalues (1 + z^2) and -(1 + z^2): exact lift points everywhere
    b2 = RatFun(Poly([-1, 0, -2, 0, -1]))
    p1 = (GRat(0), GRat(1))
    p2 = (GRat(1), GRat(2))
    lift_a = LiftedDivisor((p1, p2))
    lift_b = LiftedDivisor((p2, p1))
    ta = build_lagrangian_point(2, [b2], lift_a)
    tb = build_lagrangian_point(2, [b2], lift_b)
    assert higgs_divisor(ta).same_multiset(higgs_divisor(tb))
    assert divisor_lift(ta).same_multiset(divisor_lift(tb))
    assert higgs_section(ta) == higgs_section(tb)


def test_build_rejects_off_curve_point():
    b2 = RatFun(Poly([-4, 0, 1]))
    with pytest.raises(ValueError):
        build_lagrangian_point(2, [b2], LiftedDivisor(((GRat(0), GRat(1)),)))
