"""Scalar operators on the sphere: apparent-singularity certificates, residue
parameters and their chart transition law, and the normalized form with no
subprincipal term (the higher projective-connection coefficients Q_k).

An order-n operator is stored monic, d^n + a_1 d^{n-1} + ... + a_n, with the
cleared principal symbol kept separately.  At a candidate apparent point the
coefficients must expand as

    a_1 = -1/s + delta_1 + O(s),      a_k = c_k/s + delta_k + O(s),

and the point certificate checks the residual chain

    r_k = v c_k + delta_k + c_{k+1} (2 <= k <= n-1),   r_n = v c_n + delta_n,

with v = c_2 + delta_1.  All residuals vanish exactly on exact data iff the
local solutions are single-valued with exponents {0, 1, ..., n-2, n}.

The residue parameter v transforms under a chart change z = phi(w) by

    v^w = v^z phi'(0) - ((n^2 + 2)/(2n)) phi''(0)/phi'(0),

which is the transition rule of an affine bundle modeled on the cotangent
line; TwistedPoint values live there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from apparent.exact import (
    CertifiedComplex,
    GR_ONE,
    GR_ZERO,
    GRat,
    LaurentJet,
    Poly,
    RatFun,
    laurent_expand,
    roots_with_multiplicity,
)

__all__ = [
    "ScalarOperator",
    "ApparentCertificate",
    "TwistedPoint",
    "DSForm",
    "CertificateError",
    "apparent_certificate",
    "residue_parameter",
    "change_coordinates",
    "to_ds_form",
    "a_from_Q",
    "transition_constant",
    "apply_transition",
    "diffop_mul",
    "diffop_apply",
    "conjugate_by_exp",
]


# ---------------------------------------------------------------------------
# Differential-operator algebra (coefficient lists low -> high in d/dz)
# ---------------------------------------------------------------------------

def diffop_mul(a: tuple, b: tuple) -> tuple:
    """Composition a o b of operators over any differential coefficient
    ring (entries need ring ops and .derivative())."""
    zero = a[0] - a[0]
    out = [zero] * (len(a) + len(b) - 1)
    for i, ci in enumerate(a):
        if not ci:
            continue
        # derivatives of each b-coefficient up to order i
        for j, dj in enumerate(b):
            if not dj:
                continue
            g = dj
            for l in range(i + 1):
                if g:
                    out[i + j - l] = out[i + j - l] + ci * comb(i, l) * g
                g = g.derivative()
    return tuple(out)


def diffop_apply(a: tuple, y: RatFun) -> RatFun:
    out = RatFun(0)
    d = y
    for c in a:
        if c:
            out = out + c * d
        d = d.derivative()
    return out


def conjugate_by_exp(a: tuple, u) -> tuple:
    """e^{-U} o a o e^{U} with U' = u, i.e. substitute d -> d + u.

    Exact on rational data: only u and its derivatives appear.  Works for
    any coefficient type with ring operations and .derivative() (exact
    rational functions or unreduced complex ones).
    """
    zero = u - u
    one = zero + 1
    shift = (u, one)
    power = (one,)
    out = [zero] * len(a)
    for k, c in enumerate(a):
        if c:
            for j, pc in enumerate(power):
                out[j] = out[j] + c * pc
        if k + 1 < len(a):
            power = diffop_mul(power, shift)
    return tuple(out)


# ---------------------------------------------------------------------------
# Scalar operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalarOperator:
    """Monic order-n operator d^n + a_1 d^{n-1} + ... + a_n.

    weight is the density weight of the domain, -(n-1)/2 by default; symbol
    is the principal symbol before monic normalization, when known.
    """

    n: int
    a: tuple                      # (a_1, ..., a_n) as RatFun
    weight: Fraction = None
    symbol: RatFun | None = None

    def __post_init__(self):
        if len(self.a) != self.n:
            raise ValueError("need exactly n coefficients")
        object.__setattr__(self, "a", tuple(
            x if isinstance(x, RatFun) else RatFun(x) for x in self.a))
        if self.weight is None:
            object.__setattr__(self, "weight", Fraction(-(self.n - 1), 2))

    def coeff(self, k: int) -> RatFun:
        """a_k, with a_0 = 1."""
        if k == 0:
            return RatFun(1)
        return self.a[k - 1]

    def to_diffop(self) -> tuple:
        return tuple(list(reversed(self.a)) + [RatFun(1)])

    def apply(self, y: RatFun) -> RatFun:
        return diffop_apply(self.to_diffop(), y)

    def annihilates(self, y: RatFun) -> bool:
        return self.apply(y).is_zero

    def singular_points(self):
        """Exact-or-certified pole locations of the coefficients."""
        den = Poly([1])
        for c in self.a:
            den = den * c.den.exact_div(den.gcd(c.den))
        if den.degree == 0:
            return []
        return roots_with_multiplicity(den).locations()

    def __eq__(self, other):
        if not isinstance(other, ScalarOperator):
            return NotImplemented
        return self.n == other.n and self.a == other.a


def monic_from_diffop(coeffs: tuple, weight=None) -> ScalarOperator:
    """Normalize a nonzero operator to monic form, keeping the symbol."""
    coeffs = tuple(coeffs)
    lead = coeffs[-1]
    if not lead:
        raise ValueError("leading coefficient vanishes")
    n = len(coeffs) - 1
    a = tuple(coeffs[n - k] / lead for k in range(1, n + 1))
    return ScalarOperator(n, a, weight=weight, symbol=lead)


# ---------------------------------------------------------------------------
# Apparent-singularity certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ApparentCertificate:
    point: object
    c: tuple                 # c_2..c_n (c entries aligned with a_2..a_n)
    delta: tuple             # delta_1..delta_n
    v: object                # residue parameter c_2 + delta_1
    residuals: tuple         # r_2..r_n
    passed: bool
    tolerance: float
    exact: bool
    reason: str = ""

    def max_residual(self) -> float:
        vals = []
        for r in self.residuals:
            vals.append(abs(r.to_complex()) if isinstance(r, GRat) else abs(r))
        return max(vals, default=0.0)


class CertificateError(ArithmeticError):
    def __init__(self, certificate: ApparentCertificate):
        super().__init__(f"apparent certificate failed at "
                         f"{certificate.point!r}: {certificate.reason}")
        self.certificate = certificate


def _laurent_pair(f: RatFun, p, exact: bool):
    """(residue, constant term) of f at p, plus the pole-order flag."""
    jet = laurent_expand(f, p, 0)
    if jet.lowest_order < -1:
        return None, None, jet.lowest_order
    cm1 = jet.coefficient(-1)
    c0 = jet.coefficient(0)
    return cm1, c0, jet.lowest_order


def apparent_certificate(op: ScalarOperator, p,
                         tol: float = 1e-10) -> ApparentCertificate:
    """Run the residual chain at p; exact on exact data.

    Failure certificates (not exceptions) are returned when the local
    expansion is not of simple apparent type: higher-order poles, or a_1 not
    -1/s + O(1).
    """
    if op.n < 2:
        raise ValueError("apparent-singularity theory needs order >= 2")
    if isinstance(p, (int, Fraction)):
        p = GRat(p)
    exact = isinstance(p, GRat)

    def fail(reason):
        zero = GR_ZERO if exact else 0j
        return ApparentCertificate(p, (), (), zero, (), False, tol, exact,
                                   reason)

    cs, ds = [], []
    for k in range(1, op.n + 1):
        cm1, c0, low = _laurent_pair(op.coeff(k), p, exact)
        if low < -1:
            return fail(f"a_{k} has a pole of order {-low} (not simple type)")
        cs.append(cm1)
        ds.append(c0)
    res_a1 = cs[0]
    one = GR_ONE if exact else 1.0
    if exact:
        if not (res_a1 + one).is_zero:
            return fail(f"a_1 residue {res_a1!r} is not -1")
    else:
        if abs(complex(res_a1) + 1) > tol:
            return fail(f"a_1 residue {res_a1!r} is not -1")
    v = cs[1] + ds[0] if op.n >= 2 else ds[0]
    residuals = []
    for k in range(2, op.n + 1):
        r = v * cs[k - 1] + ds[k - 1]
        if k < op.n:
            r = r + cs[k]
        residuals.append(r)
    if exact:
        passed = all((isinstance(r, GRat) and r.is_zero) for r in residuals)
    else:
        passed = all(abs(complex(r)) <= tol for r in residuals)
    reason = "" if passed else "nonzero recursion residual"
    return ApparentCertificate(p, tuple(cs[1:]), tuple(ds), v,
                               tuple(residuals), passed, tol, exact, reason)


# ---------------------------------------------------------------------------
# Residue parameters and the affine transition law
# ---------------------------------------------------------------------------

def certify_apparent_all_zeros(op: ScalarOperator, sigma: Poly = None):
    """Exact certificate at every zero of sigma simultaneously.

    The Laurent data of a_k at a simple zero p of sigma are rational
    functions of p (residue P(p)/Q'(p), constant term P'/Q' - P Q''/(2Q'^2)),
    so each recursion residual is a rational function whose numerator must be
    divisible by sigma.  This certifies all zeros at once, including the
    ones that are not Gaussian rational.  Returns (passed, diagnostics).
    """
    if sigma is None:
        if op.symbol is None:
            raise ValueError("need sigma or a stored principal symbol")
        sigma = op.symbol.num.squarefree_part()
    sigma = sigma.monic()
    if not sigma.is_squarefree():
        return False, "sigma not squarefree"
    dsigma = RatFun(sigma.derivative())
    cs, ds = [], []
    for k in range(1, op.n + 1):
        ak = op.coeff(k)
        g = ak * RatFun(sigma)
        if g.den.gcd(sigma).degree > 0:
            return False, f"a_{k} has a pole of order > 1 at a zero"
        p_k = RatFun(g.num)
        q_k = RatFun(g.den * sigma)   # a_k = p_k / q_k with q_k = den * sigma
        dq = q_k.derivative()
        c_k = p_k / dq
        ddq = dq.derivative()
        d_k = p_k.derivative() / dq - p_k * ddq / (2 * dq * dq)
        cs.append(c_k)
        ds.append(d_k)
    res1 = cs[0] + 1
    if not _vanishes_on(res1, sigma):
        return False, "a_1 residue is not -1 at every zero"
    v = cs[1] + ds[0]
    for k in range(2, op.n + 1):
        r = v * cs[k - 1] + ds[k - 1]
        if k < op.n:
            r = r + cs[k]
        if not _vanishes_on(r, sigma):
            return False, f"residual r_{k} nonzero at some zero"
    return True, ""


def _vanishes_on(f: RatFun, sigma: Poly) -> bool:
    if f.is_zero:
        return True
    if f.den.gcd(sigma).degree > 0:
        return False
    return f.num.gcd(sigma) == sigma.monic()


@dataclass(frozen=True)
class TwistedPoint:
    point: object
    v: object
    chart: str = "z"


def residue_parameter(op: ScalarOperator, p, tol: float = 1e-10,
                      chart: str = "z") -> TwistedPoint:
    cert = apparent_certificate(op, p, tol)
    if not cert.passed:
        raise CertificateError(cert)
    return TwistedPoint(p, cert.v, chart)


def transition_constant(n: int) -> Fraction:
    return Fraction(n * n + 2, 2 * n)


def apply_transition(tp: TwistedPoint, n: int, dphi0, ddphi0,
                     chart: str = "w") -> TwistedPoint:
    """Affine transition v^w = v^z phi'(0) - ((n^2+2)/2n) phi''(0)/phi'(0)."""
    c = transition_constant(n)
    if isinstance(tp.v, GRat) and isinstance(dphi0, GRat):
        v_new = tp.v * dphi0 - GRat(Fraction(c)) * (ddphi0 / dphi0)
    else:
        v_new = complex(tp.v) * complex(dphi0) \
            - float(c) * complex(ddphi0) / complex(dphi0)
    return TwistedPoint(tp.point, v_new, chart)


def change_coordinates(op: ScalarOperator, phi_map: RatFun,
                       chart: str = "w") -> ScalarOperator:
    """Pull the operator back along z = phi(w), exactly on rational data.

    Solutions pull back as sections of the density bundle the operator acts
    on: the plain substitution is followed by conjugation with
    phi'^((n-2)(n+1)/(2n)), whose logarithmic derivative is rational.  This
    is the normalization that makes the residue-parameter transition law
    hold verbatim in every rank (for n = 2 the exponent vanishes and the
    pullback is plain).
    """
    dphi = phi_map.derivative()
    if dphi.is_zero:
        raise ValueError("phi must be non-constant")
    # d/dz = (1/phi') d/dw; build (1/phi' d)^k by composition
    inv = RatFun(1) / dphi
    dz = (RatFun(0), inv)
    powers = [(RatFun(1),)]
    for _ in range(op.n):
        powers.append(diffop_mul(powers[-1], dz))
    out = [RatFun(0)] * (op.n + 1)
    for k in range(op.n + 1):
        # coefficient of d_z^k is a_{n-k}
        c = op.coeff(op.n - k).compose_rat(phi_map)
        if not c:
            continue
        pk = powers[k]
        for j, pc in enumerate(pk):
            if pc:
                out[j] = out[j] + c * pc
    weight_exp = Fraction((op.n - 2) * (op.n + 1), 2 * op.n)
    if weight_exp:
        u = (dphi.derivative() / dphi) * weight_exp
        out = conjugate_by_exp(tuple(out), u)
    return monic_from_diffop(tuple(out), weight=op.weight)


# ---------------------------------------------------------------------------
# Normalized (no-subprincipal-term) form and the k-differentials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DSForm:
    """Operator d^n + Q_2 d^{n-2} + ... + Q_n plus the gauge that removed the
    subprincipal term (gauge = logarithmic derivative of the conjugator)."""

    n: int
    Q: tuple                     # (Q_2, ..., Q_n) as RatFun
    gauge: RatFun

    def w_differentials(self) -> dict:
        """The first few invariant k-differentials w_2, w_3, w_4."""
        n = self.n
        out = {2: self.Q[0]}
        if n >= 3:
            out[3] = self.Q[1] - Fraction(n - 2, 2) * self.Q[0].derivative()
        if n >= 4:
            q2, q3, q4 = self.Q[0], self.Q[1], self.Q[2]
            out[4] = (q4 - Fraction(n - 3, 2) * q3.derivative()
                      + Fraction((n - 2) * (n - 3), 10)
                      * q2.derivative().derivative()
                      - Fraction((n - 2) * (n - 3) * (5 * n + 7),
                                 10 * n * (n * n - 1)) * q2 * q2)
        return out


def to_ds_form(op: ScalarOperator) -> DSForm:
    """Conjugate away the subprincipal term: substitute d -> d - a_1/n.

    At a simple apparent point the resulting Q_2 has double-pole coefficient
    exactly -(n^2-1)/(2n), and in the normalized chart its residue there is
    the residue parameter.
    """
    u = op.a[0] * Fraction(-1, op.n)
    conj = conjugate_by_exp(op.to_diffop(), u)
    if conj[op.n - 1]:
        raise AssertionError("subprincipal term failed to cancel")
    qs = tuple(conj[op.n - k] for k in range(2, op.n + 1))
    return DSForm(op.n, qs, u)


def a_from_Q(ds: DSForm, apparent_points=None) -> ScalarOperator:
    """Inverse of to_ds_form.

    With apparent_points given (and no stored gauge wanted), the conjugation
    uses the canonical gauge -sigma'/(n sigma) for sigma the monic polynomial
    vanishing on those points; the reconstructed a_1 is then -sigma'/sigma.
    """
    if apparent_points is not None:
        sigma = Poly([1])
        for p in apparent_points:
            if not isinstance(p, GRat):
                raise TypeError("apparent points must be exact here")
            sigma = sigma * Poly([-p, GR_ONE])
        sig = RatFun(sigma)
        u = (sig.derivative() / sig) * Fraction(-1, ds.n)
    else:
        u = RatFun(-1) * ds.gauge
    coeffs = [RatFun(0)] * (ds.n + 1)
    coeffs[ds.n] = RatFun(1)
    for k in range(2, ds.n + 1):
        coeffs[ds.n - k] = ds.Q[k - 2]
    back = conjugate_by_exp(tuple(coeffs), u)
    return monic_from_diffop(back)
