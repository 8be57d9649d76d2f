"""Numerical symplectic pairings and the Lagrangian-correspondence verdicts.

Three pairings are compared on two-parameter families:

* the configuration form on d points, sum_i (dlam1_i du2_i - dlam2_i du1_i);
* the spectral residue form, computed from transition-function logarithmic
  derivatives along the moving divisor branch;
* the Cech-residue form for connection families, computed from the local
  normal forms A_i and the factorized transition matrices
  G_i = (z - u_i)^{w} N_i with N_i unipotent.

Both residue forms are evaluated against the corresponding identity
(residue form = - configuration form) by central finite differences on
exactly solved family members; the observed O(h^2) convergence is part of
the report.  A Lie-Poisson bracket on rank-2 residue matrices provides the
independent separation-of-variables oracle for the canonical relations.

Families deliberately freeze all non-divisor data (marked points, exponent
data, characteristic coefficients away from the interpolation move) so that
no boundary terms appear at the marked points.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from apparent.exact import GRat, Poly, RatFun, point_to_complex
from apparent.residue_system import (
    ResidueSystem,
    assemble_residue_system,
    _newton,
)

__all__ = [
    "hilbert_form",
    "PairingReport",
    "SpectralFamily",
    "spectral_pairing",
    "DerhamFamily",
    "atiyah_bott_pairing",
    "family_flows",
    "lagrangian_report",
    "lie_poisson_bracket",
    "gaudin_darboux_matrix",
    "BranchJumpError",
]


class BranchJumpError(ArithmeticError):
    pass


def hilbert_form(flows1, flows2) -> complex:
    """Configuration-space form: sum_i (dlam1 du2 - dlam2 du1)."""
    if len(flows1) != len(flows2):
        raise ValueError("flow lists differ in length")
    out = 0j
    for (du1, dl1), (du2, dl2) in zip(flows1, flows2):
        out += complex(dl1) * complex(du2) - complex(dl2) * complex(du1)
    return out


@dataclass
class PairingReport:
    which: str
    omega_moduli: complex
    omega_hilb: complex
    residual: float
    step: float
    order_estimate: float | None

    def to_json(self) -> dict:
        return {
            "which": self.which,
            "omega_moduli": {"re": f"{self.omega_moduli.real:.17e}",
                             "im": f"{self.omega_moduli.imag:.17e}"},
            "omega_hilb": {"re": f"{self.omega_hilb.real:.17e}",
                           "im": f"{self.omega_hilb.imag:.17e}"},
            "residual": f"{self.residual:.6e}",
            "step": f"{self.step:.3e}",
            "order_estimate": (None if self.order_estimate is None
                               else f"{self.order_estimate:.3f}"),
        }


# ---------------------------------------------------------------------------
# Spectral families (rank 2 construction, generic-rank evaluation)
# ---------------------------------------------------------------------------

@dataclass
class SpectralInstance:
    n: int
    b_polys: tuple          # CPoly coefficients b_1..b_n of the curve
    lift: tuple             # ((u, lam) complex pairs)

    def chi(self, y, x) -> complex:
        out = complex(y) ** self.n
        for k, b in enumerate(self.b_polys, start=1):
            out += b.eval(x) * complex(y) ** (self.n - k)
        return out

    def dchi_dy(self, y, x) -> complex:
        out = self.n * complex(y) ** (self.n - 1)
        for k, b in enumerate(self.b_polys[:-1], start=1):
            out += (self.n - k) * b.eval(x) * complex(y) ** (self.n - k - 1)
        return out

    def level_zeros(self, lam: complex) -> list:
        """All x with chi(lam, x) = 0."""
        from apparent.numrat import CPoly
        acc = CPoly([complex(lam) ** self.n])
        for k, b in enumerate(self.b_polys, start=1):
            acc = acc + b * (complex(lam) ** (self.n - k))
        return acc.roots()

    def branch_points(self) -> list:
        """Rank-2 branch locus: zeros of the lambda-discriminant."""
        from apparent.numrat import CPoly
        if self.n != 2:
            return []
        b1, b2 = self.b_polys
        disc = b1 * b1 - 4.0 * b2
        return disc.roots()


class SpectralFamily:
    """Rank-2 family: fixed trace-free base coefficient b2, lift points moving
    along prescribed affine flows, the curve interpolating through them.

    The characteristic coefficient at parameters (t1, t2) is
    b2 + sum_j eps_j x^{j-1} with eps solved exactly so each moved lift point
    stays on the spectral curve; everything away from the interpolation move
    is frozen.
    """

    def __init__(self, b2_base: RatFun, lift0, du, dlam):
        self.b2 = b2_base if isinstance(b2_base, RatFun) else RatFun(b2_base)
        self.lift0 = [(GRat(u), GRat(l)) for u, l in lift0]
        self.du = [(GRat(a), GRat(b)) for a, b in du]
        self.dlam = [(GRat(a), GRat(b)) for a, b in dlam]
        self.d = len(self.lift0)
        for (u, lam) in self.lift0:
            resid = lam * lam + self.b2.eval(u)
            if not resid.is_zero:
                raise ValueError(f"lift point ({u!r}, {lam!r}) is not on the "
                                 "base spectral curve")

    def evaluate(self, t1: Fraction, t2: Fraction) -> SpectralInstance:
        t1, t2 = GRat(Fraction(t1)), GRat(Fraction(t2))
        pts = []
        for (u0, l0), (a1, a2), (b1, b2) in zip(self.lift0, self.du,
                                                self.dlam):
            pts.append((u0 + a1 * t1 + a2 * t2, l0 + b1 * t1 + b2 * t2))
        # interpolate: b2(x; t) = b2 + sum eps_j x^{j-1} through the points
        rows = []
        rhs = []
        for (u, lam) in pts:
            rows.append([u ** j for j in range(self.d)])
            rhs.append(-(lam * lam + self.b2.eval(u)))
        from apparent.linalg import grat_solve, mat
        eps = grat_solve(mat(rows), tuple(rhs)) if self.d else ()
        bump = Poly(list(eps))
        b2t = self.b2 + RatFun(bump)
        if b2t.den.degree != 0:
            raise ValueError("spectral families need polynomial coefficients")
        from apparent.numrat import CPoly
        b2_poly = CPoly([c.to_complex() for c in b2t.num.coeffs])
        return SpectralInstance(
            2, (CPoly(), b2_poly),
            tuple((u.to_complex(), lam.to_complex()) for u, lam in pts))


def _branch_value(inst: SpectralInstance, x: complex, seed: complex,
                  steps: int = 40) -> complex:
    y = complex(seed)
    for _ in range(steps):
        f = inst.chi(y, x)
        df = inst.dchi_dy(y, x)
        if df == 0:
            raise BranchJumpError("branch collision during tracking")
        step = f / df
        y -= step
        if abs(step) < 1e-14 * max(1.0, abs(y)):
            break
    return y


def spectral_pairing(family: SpectralFamily, h: Fraction = Fraction(1, 10000),
                     nodes: int = 128) -> complex:
    """Residue form of the spectral transition data, by central differences
    at exact stencil offsets and contour quadrature around each base point."""
    h = Fraction(h)
    inst0 = family.evaluate(0, 0)
    stencil = {
        (1, 0): family.evaluate(h, 0), (-1, 0): family.evaluate(-h, 0),
        (0, 1): family.evaluate(0, h), (0, -1): family.evaluate(0, -h),
    }
    hf = float(h)
    total = 0j
    base_pts = [u for u, _ in inst0.lift]
    for i, (u0, lam0) in enumerate(inst0.lift):
        radius = _spectral_radius(inst0, i, base_pts)
        acc = 0j
        for j in range(nodes):
            x = u0 + radius * cmath.exp(2j * cmath.pi * j / nodes)
            y0 = _branch_value(inst0, x, lam0)
            dy = []
            dlogf = []
            for a in range(2):
                plus = stencil[(1, 0)] if a == 0 else stencil[(0, 1)]
                minus = stencil[(-1, 0)] if a == 0 else stencil[(0, -1)]
                yp = _branch_value(plus, x, y0)
                ym = _branch_value(minus, x, y0)
                dy.append((yp - ym) / (2 * hf))
                fp = plus.chi(plus.lift[i][1], x)
                fm = minus.chi(minus.lift[i][1], x)
                f0 = inst0.chi(lam0, x)
                dlogf.append((fp - fm) / (2 * hf) / f0)
            integrand = dy[0] * dlogf[1] - dy[1] * dlogf[0]
            acc += integrand * (x - u0)
        total += acc / nodes
    return total


def _spectral_radius(inst: SpectralInstance, i: int, base_pts,
                     safety: float = 0.45) -> float:
    u0, lam0 = inst.lift[i]
    dists = [abs(u0 - p) for k, p in enumerate(base_pts) if k != i]
    # stay clear of other zeros of chi(lam0, .) and of the branch locus
    from apparent.numrat import CPoly
    # rank-2: chi(lam0, x) = lam0^2 + b2(x); zeros via sampling refinement
    zeros = _other_zero_estimates(inst, lam0, u0)
    dists.extend(abs(u0 - z) for z in zeros if abs(u0 - z) > 1e-9)
    if not dists:
        return 0.5
    return safety * min(dists)


def _other_zero_estimates(inst: SpectralInstance, lam0, u0):
    """Crude estimates of nearby zeros of x -> chi(lam0, x) other than u0."""
    out = []
    for angle in range(8):
        x = u0 + 0.7 * cmath.exp(2j * cmath.pi * angle / 8)
        for _ in range(30):
            f = inst.chi(lam0, x)
            df = (inst.chi(lam0, x + 1e-6) - inst.chi(lam0, x - 1e-6)) / 2e-6
            if abs(df) < 1e-12:
                break
            step = f / df
            x -= step
            if abs(step) < 1e-12:
                break
        if abs(inst.chi(lam0, x)) < 1e-8 and abs(x - u0) > 1e-6:
            if not any(abs(x - y) < 1e-6 for y in out):
                out.append(x)
    return out


# ---------------------------------------------------------------------------
# Connection-side families through the residue system
# ---------------------------------------------------------------------------

class DerhamFamily:
    """Family of certified residue-system solutions with moving apparent
    points; marked data and accessory values stay frozen.

    Stencil offsets are exact rationals, so each instance is an exactly
    assembled system; the solution vector is tracked from the base solution
    by Newton continuation (a jump beyond 10*h*scale is an error).
    """

    def __init__(self, n, marked, apparent0, base_solution, du,
                 accessory=None, daccessory=None):
        self.n = n
        self.marked = marked
        self.apparent0 = [GRat(p) for p in apparent0]
        self.base = np.array([complex(x) for x in base_solution],
                             dtype=complex)
        self.du = [(GRat(a), GRat(b)) for a, b in du]
        self.accessory = accessory or {}
        self.daccessory = {int(k): [(GRat(a), GRat(b)) for a, b in v]
                           for k, v in (daccessory or {}).items()}
        self.d = len(self.apparent0)

    def evaluate(self, t1: Fraction, t2: Fraction):
        t1, t2 = GRat(Fraction(t1)), GRat(Fraction(t2))
        pts = [p + a * t1 + b * t2
               for p, (a, b) in zip(self.apparent0, self.du)]
        acc = {}
        for level, vals in (self.accessory or {}).items():
            moves = self.daccessory.get(int(level))
            out = []
            for i, val in enumerate(vals):
                val = GRat(val)
                if moves and i < len(moves):
                    a, b = moves[i]
                    val = val + a * t1 + b * t2
                out.append(val)
            acc[int(level)] = out
        sys = assemble_residue_system(self.n, self.marked, pts, acc)
        v = _newton(sys, list(self.base))
        resid = max(abs(eq.eval_complex(list(v))) for eq in sys.equations)
        if resid > 1e-8:
            raise BranchJumpError("Newton failed to track the solution")
        scale = max(1.0, float(np.max(np.abs(self.base))))
        step = max(abs(complex(t1.to_complex())), abs(complex(t2.to_complex())))
        dist = float(np.max(np.abs(v - self.base)))
        if dist > max(10.0 * step * scale, 1e-6):
            raise BranchJumpError("solution jumped branches during stencil "
                                  "evaluation")
        return ([complex(p.to_complex()) for p in pts], np.array(v))


def _ab_local_matrix(n: int, u: complex, v: complex):
    """The local normal form A_i as a polynomial-in-z matrix evaluator."""

    def a_at(z):
        m = np.zeros((n, n), dtype=complex)
        m[0, 0] = v
        m[1, 0] = -(z - u)
        m[1, 1] = -v
        for k in range(2, n):
            m[k, k - 1] = -1.0
        return m

    return a_at


def _ab_transition_relative(n: int, z: complex, u_t: complex, v_t: complex,
                            u_0: complex, v_0: complex):
    """G(t) G(0)^{-1} at z, with fractional powers taken on ratios so the
    result is single-valued near the contour."""
    ratio = (z - u_t) / (z - u_0)
    beta = [(n - 1) / n] + [-1 / n] * (n - 1)
    n_t = _ab_unipotent(n, z, u_t, v_t)
    n_0 = _ab_unipotent(n, z, u_0, v_0)
    x = n_t @ np.linalg.inv(n_0)
    out = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            power = ratio ** beta[i] * (z - u_0) ** (beta[i] - beta[j])
            out[i, j] = power * x[i, j]
    return out


def _ab_unipotent(n: int, z: complex, u: complex, v: complex):
    m = np.eye(n, dtype=complex)
    s = z - u
    m[0, 1] = -(n - 1) / (n * s * s) + v / s
    for k in range(1, n - 1):
        m[k, k + 1] = -(n - 1 - k) / (n * s)
    return m


def atiyah_bott_pairing(family: DerhamFamily,
                        h: Fraction = Fraction(1, 10000),
                        nodes: int = 128) -> complex:
    """Cech-residue pairing of two family directions via the factorized
    transition matrices; returns the residue sum."""
    h = Fraction(h)
    hf = float(h)
    pts0, v0 = family.evaluate(0, 0)
    inst = {
        (1, 0): family.evaluate(h, 0), (-1, 0): family.evaluate(-h, 0),
        (0, 1): family.evaluate(0, h), (0, -1): family.evaluate(0, -h),
    }
    n = family.n
    marked_pts = [complex(GRat(m[0]).to_complex())
                  if not hasattr(m, "z") else complex(m.z.to_complex())
                  for m in family.marked]
    total = 0j
    for i in range(family.d):
        dists = [abs(pts0[i] - q) for k, q in enumerate(pts0) if k != i]
        dists += [abs(pts0[i] - q) for q in marked_pts]
        radius = 0.4 * min(dists)
        da = []
        for a in range(2):
            plus = inst[(1, 0)] if a == 0 else inst[(0, 1)]
            minus = inst[(-1, 0)] if a == 0 else inst[(0, -1)]
            du = (plus[0][i] - minus[0][i]) / (2 * hf)
            dv = (plus[1][i] - minus[1][i]) / (2 * hf)
            m = np.zeros((n, n), dtype=complex)
            m[0, 0] = dv
            m[1, 1] = -dv
            m[1, 0] = du
            da.append(m)
        acc = 0j
        for j in range(nodes):
            z = pts0[i] + radius * cmath.exp(2j * cmath.pi * j / nodes)
            dg = []
            for a in range(2):
                plus = inst[(1, 0)] if a == 0 else inst[(0, 1)]
                minus = inst[(-1, 0)] if a == 0 else inst[(0, -1)]
                gp = _ab_transition_relative(n, z, plus[0][i], plus[1][i],
                                             pts0[i], v0[i])
                gm = _ab_transition_relative(n, z, minus[0][i], minus[1][i],
                                             pts0[i], v0[i])
                dg.append((gp - gm) / (2 * hf))
            integrand = np.trace(da[0] @ dg[1]) - np.trace(da[1] @ dg[0])
            acc += integrand * (z - pts0[i])
        total += acc / nodes
    return total


def family_flows(family, h: Fraction = Fraction(1, 10000)):
    """Central-difference flows ((du, dlam) per point) for both directions."""
    h = Fraction(h)
    hf = float(h)
    if isinstance(family, SpectralFamily):
        get = lambda t1, t2: family.evaluate(t1, t2).lift
    else:
        def get(t1, t2):
            pts, v = family.evaluate(t1, t2)
            return list(zip(pts, v))
    flows = []
    for a in range(2):
        plus = get(h, 0) if a == 0 else get(0, h)
        minus = get(-h, 0) if a == 0 else get(0, -h)
        fl = []
        for (up, lp), (um, lm) in zip(plus, minus):
            fl.append(((complex(up) - complex(um)) / (2 * hf),
                       (complex(lp) - complex(lm)) / (2 * hf)))
        flows.append(fl)
    return flows[0], flows[1]


def lagrangian_report(family, which: str,
                      h: Fraction = Fraction(1, 10000),
                      richardson: bool = True) -> PairingReport:
    """Evaluate the correspondence identity residual at h (and order at
    h, h/2 when richardson is set)."""
    pairing = spectral_pairing if which == "spectral" else atiyah_bott_pairing
    f1, f2 = family_flows(family, h)
    hil = hilbert_form(f1, f2)
    omega = pairing(family, h)
    residual = abs(omega + hil)
    order = None
    if richardson:
        h2 = Fraction(h) / 2
        f1b, f2b = family_flows(family, h2)
        hil2 = hilbert_form(f1b, f2b)
        omega2 = pairing(family, h2)
        r2 = abs(omega2 + hil2)
        if r2 > 1e-15 and residual > 1e-15:
            order = math.log2(residual / r2)
    return PairingReport(which, omega, hil, residual, float(h), order)


# ---------------------------------------------------------------------------
# Lie-Poisson oracle on rank-2 residue matrices
# ---------------------------------------------------------------------------

def lie_poisson_bracket(obs1, obs2, residues, step: float = 1e-5) -> complex:
    """{obs1, obs2} for the product Lie-Poisson structure on the residue
    matrices: {A_ij, A_kl} = A_il delta_kj - A_kj delta_il per marked point.

    Observables are callables on the list of residue matrices; gradients are
    central differences on matrix entries.
    """
    residues = [np.array(a, dtype=complex) for a in residues]
    nmat = len(residues)
    nn = residues[0].shape[0]

    def grad(obs, r):
        g = np.zeros((nmat, nn, nn), dtype=complex)
        for m in range(nmat):
            for i in range(nn):
                for j in range(nn):
                    rp = [a.copy() for a in residues]
                    rm = [a.copy() for a in residues]
                    rp[m][i, j] += step
                    rm[m][i, j] -= step
                    g[m, i, j] = (obs(rp) - obs(rm)) / (2 * step)
        return g

    g1 = grad(obs1, residues)
    g2 = grad(obs2, residues)
    out = 0j
    for m in range(nmat):
        a = residues[m]
        for i in range(nn):
            for j in range(nn):
                for k in range(nn):
                    for l in range(nn):
                        br = (a[i, l] if k == j else 0) \
                            - (a[k, j] if i == l else 0)
                        if br != 0:
                            out += g1[m, i, j] * g2[m, k, l] * br
    return out


def gaudin_darboux_matrix(residues, marked, tol_rank: float = 1e-9):
    """Separated coordinates (u_i, lam_i) of a rank-2 residue configuration
    with the section vector e_1: u_i are the zeros of the (2,1) entry of
    phi(z) = sum_r A_r/(z - z_r), lam_i the matching eigenvalue phi_22(u_i)."""
    residues = [np.array(a, dtype=complex) for a in residues]
    zr = [complex(z) for z in marked]
    # numerator polynomial of phi_21
    from apparent.numrat import CPoly, CRat
    phi21 = CRat(0.0)
    phi22 = CRat(0.0)
    for a, z0 in zip(residues, zr):
        den = CPoly([-z0, 1.0])
        phi21 = phi21 + CRat(CPoly([a[1, 0]]), den)
        phi22 = phi22 + CRat(CPoly([a[1, 1]]), den)
    roots = [z for z in phi21.num.roots()
             if min(abs(z - q) for q in zr) > 1e-8]
    roots.sort(key=lambda z: (z.real, z.imag))
    return [(u, phi22.eval(u)) for u in roots]
