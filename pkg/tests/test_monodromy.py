from fractions import Fraction

import numpy as np
import pytest

from apparent.exact import GRat, Poly, RatFun
from apparent.derham import ConnectionTriple
from apparent.monodromy import (
    PathTooCloseError,
    certify_apparent,
    global_representation,
    integrate_along,
    loop_monodromy,
)
from apparent.oper import ScalarOperator
from apparent.oracles import indicial_exponents, operator_from_basis

ONE, Z = RatFun(1), RatFun.x()
ZERO = RatFun(0)

OP_APPARENT = operator_from_basis([ONE, Z * Z])
OP_EXPONENTS = ScalarOperator(
    2, (ZERO, RatFun(Poly([GRat(Fraction(3, 16))]), Poly([0, 0, 1]))))
OP_FAILING = ScalarOperator(3, (RatFun(-1) / Z, RatFun(1) / Z, ZERO))


def hypergeometric_op():
    a, b, c = Fraction(1, 3), Fraction(1, 5), Fraction(1, 2)
    den = Poly([0, 1]) * Poly([1, -1])
    return ScalarOperator(2, (RatFun(Poly([GRat(c), GRat(-(a + b + 1))]), den),
                              RatFun(Poly([GRat(-a * b)]), den)))


def test_zero_connection_identity():
    t = ConnectionTriple(2, 1, [[ZERO, ZERO], [ZERO, ZERO]], [ONE, Z])
    tm = integrate_along(t, [0, 1 + 1j, 2 - 1j])
    assert tm.deviation_from_identity() < 1e-12


def test_power_solutions():
    # solutions z^{1/4}, z^{3/4} of the indicial example, on a real segment
    tm = integrate_along(OP_EXPONENTS, [1, 2], estimate=True)
    for rho in (0.25, 0.75):
        y0 = np.array([1.0, rho], dtype=complex)       # (y, y') at z=1
        y1 = tm.matrix @ y0
        assert abs(y1[0] - 2 ** rho) < 1e-9
        assert abs(y1[1] - rho * 2 ** (rho - 1)) < 1e-9


def test_concatenation_product():
    op = OP_EXPONENTS
    s1 = integrate_along(op, [1, 1 + 1j])
    s2 = integrate_along(op, [1 + 1j, 2 + 1j])
    tot = integrate_along(op, [1, 1 + 1j, 2 + 1j])
    assert np.max(np.abs(s2.matrix @ s1.matrix - tot.matrix)) < 1e-9


def test_margin_guard():
    with pytest.raises(PathTooCloseError):
        integrate_along(OP_APPARENT, [-1, 1])  # straight through z = 0


def test_loop_identity_for_apparent():
    tm = loop_monodromy(OP_APPARENT, GRat(0))
    assert tm.deviation_from_identity() < 1e-9


def test_loop_exponent_eigenvalues():
    tm = loop_monodromy(OP_EXPONENTS, GRat(0))
    eigs = sorted(np.linalg.eigvals(tm.matrix), key=lambda x: x.imag)
    assert abs(eigs[0] + 1j) < 1e-8
    assert abs(eigs[1] - 1j) < 1e-8
    # against the indicial oracle: exponents 1/4, 3/4
    exps = indicial_exponents(OP_EXPONENTS, GRat(0))
    expected = sorted(np.exp(2j * np.pi * np.array(
        [complex(e) for e in exps])), key=lambda x: x.imag)
    assert max(abs(a - b) for a, b in zip(eigs, expected)) < 1e-8


def test_loop_nontrivial_for_failing_recursion():
    tm = loop_monodromy(OP_FAILING, GRat(0))
    assert tm.deviation_from_identity() > 1e-3


def test_certify_examples():
    ok, _ = certify_apparent(OP_APPARENT, GRat(0), tol=1e-8)
    assert ok
    ok2, _ = certify_apparent(OP_EXPONENTS, GRat(0), tol=1e-8)
    assert not ok2
    ok3, _ = certify_apparent(OP_FAILING, GRat(0), tol=1e-8)
    assert not ok3


def test_basepoint_conjugation_equivariance():
    op = OP_EXPONENTS
    spectra = []
    for base in (0.5, 0.25 + 0.1j):
        tm = loop_monodromy(op, GRat(0), basepoint=base, radius=0.5)
        spectra.append(sorted(np.linalg.eigvals(tm.matrix),
                              key=lambda x: (round(x.real, 6), x.imag)))
    assert max(abs(a - b) for a, b in zip(*spectra)) < 1e-8


def test_radius_independence_certified():
    m1 = loop_monodromy(OP_APPARENT, GRat(0), radius=0.8)
    m2 = loop_monodromy(OP_APPARENT, GRat(0), radius=0.4)
    assert np.max(np.abs(m1.matrix - m2.matrix)) < 1e-8


def test_global_hypergeometric():
    rep = global_representation(hypergeometric_op())
    assert rep.product_ok(1e-8)
    assert rep.irreducible
    assert len(rep.punctures) == 2


def test_global_polynomial_basis_trivial():
    rep = global_representation(OP_APPARENT)
    assert rep.product_ok(1e-8)
    for g in rep.generators:
        assert g.deviation_from_identity() < 1e-8
    assert not rep.irreducible


def test_global_reducible_flag():
    # {1, z^2 + z^3}: rational solutions, generators trivial, reducible
    op = operator_from_basis([ONE, RatFun(Poly([0, 0, 1, 1]))])
    rep = global_representation(op)
    assert not rep.irreducible
    assert rep.product_ok(1e-7)
