"""Higgs triples (a line embedding into a trivialized rank-n bundle plus a
Higgs field) in the genus-0 meromorphic model.

A triple carries a rank-n matrix of rational functions phi (poles only at the
marked points) and a primitive rational section vector s.  From these we
compute the Wronskian-type section det(s, phi s, ..., phi^{n-1} s), its zero
divisor, the characteristic data of phi, the eigenvalue-decorated lift of the
divisor to the spectral curve, Hecke transforms at invariant fiber subspaces,
and companion-form Hitchin representatives.

Degree bookkeeping at infinity replaces genus bookkeeping: every local
formula from the curve case holds verbatim on the affine chart.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from apparent.exact import (
    CertifiedComplex,
    Divisor,
    GR_ONE,
    GR_ZERO,
    GRat,
    Poly,
    RatFun,
    point_to_complex,
    points_coincide,
    roots_with_multiplicity,
)
from apparent import linalg
from apparent.linalg import mat, mat_eval, mat_inverse, mat_mul, mat_vec

__all__ = [
    "HiggsTriple",
    "SpectralData",
    "LiftedDivisor",
    "HeckeData",
    "ReducibleError",
    "BranchCollisionError",
    "higgs_section",
    "higgs_divisor",
    "spectral_data",
    "divisor_lift",
    "hitchin_section",
    "hecke_transform",
    "build_lagrangian_point",
    "primitive_section",
]


class ReducibleError(ValueError):
    """The section vanished identically: invariant-line configuration."""


class BranchCollisionError(ValueError):
    """Divisor point meets the branch locus (or is not reduced)."""


def primitive_section(s) -> tuple:
    """Canonical primitive representative of a projective section vector.

    Clears denominators, removes the common polynomial factor, and scales so
    the first nonzero component has leading coefficient 1.
    """
    s = [x if isinstance(x, RatFun) else RatFun(x) for x in s]
    if all(x.is_zero for x in s):
        raise ValueError("zero section vector")
    den = Poly([1])
    for x in s:
        den = den * x.den.exact_div(den.gcd(x.den))
    nums = [x.num * den.exact_div(x.den) for x in s]
    g = Poly()
    for p in nums:
        g = p if not g else g.gcd(p)
    if g.degree > 0:
        nums = [p.exact_div(g) for p in nums]
    lead = next(p for p in nums if p).leading()
    return tuple(RatFun(p.scale(GR_ONE / lead)) for p in nums)


@dataclass(frozen=True)
class HiggsTriple:
    n: int
    phi: tuple            # n x n matrix of RatFun
    s: tuple              # length-n vector of RatFun, primitive
    marked: tuple = ()    # allowed pole locations of phi (exact points)

    def __post_init__(self):
        object.__setattr__(self, "phi", mat(self.phi))
        object.__setattr__(self, "s", primitive_section(self.s))

    def iterates(self) -> list:
        """Columns s, phi s, ..., phi^{n-1} s."""
        out = [self.s]
        v = self.s
        for _ in range(self.n - 1):
            v = mat_vec(self.phi, v)
            out.append(v)
        return out


@dataclass(frozen=True)
class SpectralData:
    char_coeffs: tuple        # b_1..b_n, char(t) = t^n + b_1 t^{n-1} + ...
    discriminant_divisor: Divisor

    def char_at(self, lam, z) -> GRat:
        """chi(lam, z) exactly, for exact lam and z."""
        out = GRat(1)
        for b in self.char_coeffs:
            out = out * lam + b.eval(z)
        return out


@dataclass(frozen=True)
class LiftedDivisor:
    """Points (u, lambda) of the spectral surface, all multiplicity one."""

    points: tuple  # ((u, lam), ...)

    def base_projection(self) -> Divisor:
        return Divisor([(u, 1) for u, _ in self.points])

    @property
    def degree(self) -> int:
        return len(self.points)

    def same_multiset(self, other: "LiftedDivisor") -> bool:
        if len(self.points) != len(other.points):
            return False
        used = [False] * len(other.points)
        for u, lam in self.points:
            for k, (u2, lam2) in enumerate(other.points):
                if not used[k] and points_coincide(u, u2) \
                        and points_coincide(lam, lam2):
                    used[k] = True
                    break
            else:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, LiftedDivisor):
            return NotImplemented
        return self.same_multiset(other)


@dataclass(frozen=True)
class HeckeData:
    point: GRat
    subspace: tuple  # k linearly independent constant n-vectors (GRat tuples)


# ---------------------------------------------------------------------------
# Sections and divisors
# ---------------------------------------------------------------------------

def higgs_section(t: HiggsTriple) -> RatFun:
    """det(s, phi s, ..., phi^{n-1} s) as a rational function."""
    cols = t.iterates()
    m = mat(zip(*cols))  # rows indexed by component, columns by iterate
    return linalg.det(m)


def higgs_divisor(t: HiggsTriple, with_boundary: bool = False):
    """Zero divisor of the section away from the marked points.

    Zeros sitting at marked points are boundary data; request them with
    with_boundary=True.
    """
    sec = higgs_section(t)
    if sec.is_zero:
        raise ReducibleError("section vanishes identically: "
                             "phi-invariant line through s")
    full = roots_with_multiplicity(sec.num) if sec.num.degree > 0 else Divisor()
    interior, boundary = [], []
    for p, m in full:
        if any(points_coincide(p, q) for q in t.marked):
            boundary.append((p, m))
        else:
            interior.append((p, m))
    if with_boundary:
        return Divisor(interior), Divisor(boundary)
    return Divisor(interior)


def spectral_data(phi) -> SpectralData:
    """Characteristic coefficients b_k and the lambda-discriminant divisor."""
    phi = mat(phi)
    bs = linalg.char_poly_coeffs(phi)
    n = len(phi)
    # chi as a polynomial in lambda over the rational-function field
    chi = list(reversed([RatFun(1)] + list(bs)))  # low -> high in lambda
    dchi = [chi[k] * k for k in range(1, n + 1)]
    res = linalg.fieldpoly_resultant(chi, dchi)
    if res.is_zero:
        disc = Divisor()  # identically degenerate spectrum
    elif res.num.degree > 0:
        disc = roots_with_multiplicity(res.num)
    else:
        disc = Divisor()
    return SpectralData(tuple(bs), disc)


# ---------------------------------------------------------------------------
# The eigenvalue lift
# ---------------------------------------------------------------------------

class LiftInconsistencyError(ArithmeticError):
    pass


def divisor_lift(t: HiggsTriple) -> LiftedDivisor:
    """Decorate each divisor point with the eigenvalue whose image contains s.

    Requires the divisor to be reduced and disjoint from the branch locus.
    The certificate for the choice: the left-kernel vector w of phi(p) - lam
    annihilates s(p); exactness is preserved when p and lam are exact.
    """
    div = higgs_divisor(t)
    spec = spectral_data(t.phi)
    if not div.is_reduced():
        raise BranchCollisionError("divisor not reduced; lift undefined here")
    for p, _ in div:
        if spec.discriminant_divisor.multiplicity_at(p):
            raise BranchCollisionError(
                f"divisor point {p!r} lies on the branch locus")
    points = []
    for p, _ in div:
        points.append((p, _lift_eigenvalue(t, p, spec)))
    return LiftedDivisor(tuple(points))


def _lift_eigenvalue(t: HiggsTriple, p, spec: SpectralData):
    if isinstance(p, GRat):
        phi_p = mat_eval(t.phi, p)
        s_p = tuple(x.eval(p) for x in t.s)
        coeffs = [GRat(1)]
        for b in spec.char_coeffs:
            coeffs.append(b.eval(p))
        lam_poly = Poly(list(reversed(coeffs)))
        eigs = roots_with_multiplicity(lam_poly)
        passing = []
        for lam, _ in eigs:
            if isinstance(lam, GRat):
                m = mat([[phi_p[i][j] - (lam if i == j else GR_ZERO)
                          for j in range(t.n)] for i in range(t.n)])
                kers = linalg.grat_left_kernel(m)
                if kers and all(_dot(w, s_p).is_zero for w in kers):
                    passing.append(lam)
            else:
                if _numeric_membership(phi_p, s_p, lam.to_complex()):
                    passing.append(lam)
        if len(passing) != 1:
            raise LiftInconsistencyError(
                f"{len(passing)} eigenvalues pass the membership test at {p!r}")
        return passing[0]
    # certified/numeric point
    z = point_to_complex(p)
    phi_p = linalg.mat_eval_complex(t.phi, z)
    s_p = np.array([x.eval_complex(z) for x in t.s])
    eigs = np.linalg.eigvals(phi_p)
    resids = []
    for lam in eigs:
        resids.append(_membership_residual(phi_p, s_p, lam))
    order = np.argsort(resids)
    best, second = order[0], order[1] if len(order) > 1 else None
    scale = max(1.0, float(np.max(np.abs(s_p))))
    if resids[best] > 1e-8 * scale:
        raise LiftInconsistencyError(
            f"no eigenvalue passes the membership test at {p!r}")
    if second is not None and resids[second] < 1e-6 * scale:
        raise LiftInconsistencyError(
            f"ambiguous eigenvalue membership at {p!r}")
    import mpmath
    lam = complex(eigs[best])
    rad = mpmath.mpf(1e-10) * max(1.0, abs(lam))
    return CertifiedComplex(mpmath.mpc(lam), rad, prec=53)


def _dot(w, v):
    acc = GR_ZERO
    for a, b in zip(w, v):
        acc = acc + a * b
    return acc


def _numeric_membership(phi_p, s_p, lam, tol=1e-9) -> bool:
    a = np.array([[x.to_complex() for x in row] for row in phi_p])
    s = np.array([x.to_complex() for x in s_p])
    return _membership_residual(a, s, lam) < tol * max(1.0, np.max(np.abs(s)))

def _membership_residual(a, s, lam) -> float:
    n = a.shape[0]
    m = a - lam * np.eye(n)
    # distance of s from the column space of m, via SVD rank projection
    u, sv, _ = np.linalg.svd(m)
    cutoff = 1e-9 * max(1.0, float(sv[0]) if len(sv) else 1.0)
    rank = int(np.sum(sv > cutoff))
    ur = u[:, :rank]
    proj = ur @ (ur.conj().T @ s)
    return float(np.linalg.norm(s - proj))


# ---------------------------------------------------------------------------
# Hitchin section and Hecke transforms
# ---------------------------------------------------------------------------

def hitchin_section(n: int, b, l_twist: RatFun | None = None) -> HiggsTriple:
    """Companion-form triple with prescribed characteristic coefficients.

    b = (b_2, ..., b_n); the characteristic polynomial of the result is
    exactly t^n + b_2 t^{n-2} + ... + b_n, so spectral_data inverts this map.
    """
    b = [x if isinstance(x, RatFun) else RatFun(x) for x in b]
    if len(b) != n - 1:
        raise ValueError("need coefficients b_2..b_n")
    zero, one = RatFun(0), RatFun(1)
    phi = [[zero for _ in range(n)] for _ in range(n)]
    for j in range(n - 1):
        phi[j + 1][j] = one
    # last column (-b_n, ..., -b_2, 0)^T makes the char poly come out exactly
    for i in range(n - 1):
        phi[i][n - 1] = -b[n - 2 - i]
    s = [zero] * n
    s[0] = l_twist if l_twist is not None else one
    marked = _pole_points(b)
    return HiggsTriple(n, phi, s, tuple(marked))


def _pole_points(fs) -> list:
    pts = []
    for f in fs:
        if f.den.degree > 0:
            for p, _ in roots_with_multiplicity(f.den):
                if not any(points_coincide(p, q) for q in pts):
                    pts.append(p)
    return pts


def hecke_transform(t: HiggsTriple, h: HeckeData) -> HiggsTriple:
    """Lower Hecke transform at the invariant subspace V of the fiber at p.

    The adapted meromorphic gauge is the identity on a V-adapted frame and
    (z - p) on a deterministic pivot completion; the characteristic
    polynomial is untouched and the new Higgs field is regular at p.
    """
    p = h.point
    if not isinstance(p, GRat):
        raise TypeError("Hecke points must be exact Gaussian rationals")
    if any(points_coincide(p, q) for q in t.marked):
        raise ValueError("Hecke point collides with a marked point")
    v_list = [tuple(GRat(x) for x in v) for v in h.subspace]
    k = len(v_list)
    if not 1 <= k <= t.n - 1:
        raise ValueError("subspace dimension must be between 1 and n-1")
    phi_p = mat_eval(t.phi, p)
    _check_invariance(phi_p, v_list)
    basis = _complete_basis(v_list, t.n)
    zp = RatFun(Poly([-p, GR_ONE]))
    cols = []
    for j, vec in enumerate(basis):
        scale = RatFun(1) if j < k else zp
        cols.append([RatFun(Poly([c])) * scale for c in vec])
    g = mat(zip(*cols))
    ginv = mat_inverse(g)
    phi_new = mat_mul(ginv, mat_mul(t.phi, g))
    for row in phi_new:
        for entry in row:
            if not entry.is_regular_at(p):
                raise ArithmeticError("Hecke transform left a pole at p; "
                                      "subspace was not invariant")
    s_new = mat_vec(ginv, t.s)
    return HiggsTriple(t.n, phi_new, s_new, t.marked)


def hecke_gauge(t: HiggsTriple, h: HeckeData):
    """The meromorphic gauge matrix used by hecke_transform."""
    p = h.point
    v_list = [tuple(GRat(x) for x in v) for v in h.subspace]
    basis = _complete_basis(v_list, t.n)
    zp = RatFun(Poly([-p, GR_ONE]))
    cols = []
    for j, vec in enumerate(basis):
        scale = RatFun(1) if j < len(v_list) else zp
        cols.append([RatFun(Poly([c])) * scale for c in vec])
    return mat(zip(*cols))


def _check_invariance(phi_p, v_list):
    span_rows = [list(v) for v in v_list]
    for v in v_list:
        img = mat_vec(phi_p, v)
        if _rank_of(span_rows + [list(img)]) != _rank_of(span_rows):
            raise ValueError("subspace is not invariant under phi(p)")


def _rank_of(rows) -> int:
    return linalg.grat_rank(mat(rows)) if rows else 0


def _complete_basis(v_list, n) -> list:
    basis = [list(v) for v in v_list]
    for j in range(n):
        e = [GR_ONE if i == j else GR_ZERO for i in range(n)]
        if _rank_of(basis + [e]) > _rank_of(basis):
            basis.append(e)
        if len(basis) == n:
            break
    return basis


def build_lagrangian_point(n: int, b, lift: LiftedDivisor,
                           s0: RatFun | None = None) -> HiggsTriple:
    """Member of the Hecke-of-Hitchin family with prescribed spectral data
    and lifted divisor: successive lower Hecke transforms at the eigenlines
    the lift points select."""
    t = hitchin_section(n, b, s0)
    spec = spectral_data(t.phi)
    for u, lam in lift.points:
        if not isinstance(u, GRat) or not isinstance(lam, GRat):
            raise TypeError("lift points must be exact for the builder")
        if not spec.char_at(lam, u).is_zero:
            raise ValueError(f"lift point ({u!r}, {lam!r}) not on the "
                             "spectral curve")
        phi_u = mat_eval(t.phi, u)
        m = mat([[phi_u[i][j] - (lam if i == j else GR_ZERO)
                  for j in range(n)] for i in range(n)])
        kernel = linalg.grat_kernel(m)
        if len(kernel) != 1:
            raise BranchCollisionError(
                f"eigenvalue {lam!r} not simple at {u!r}")
        t = hecke_transform(t, HeckeData(u, (kernel[0],)))
    result_lift = divisor_lift(t)
    if not result_lift.same_multiset(lift):
        raise LiftInconsistencyError("constructed triple does not reproduce "
                                     "the requested lift")
    return t
