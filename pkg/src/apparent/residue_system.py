"""The residue-parameter polynomial system on the marked sphere and its
solvers.

Configuration: marked points z_r with prescribed leading pole data for each
coefficient level j (for rank 2 a single double-pole coefficient delta_r),
apparent points p_1..p_d, and accessory values pinning whatever linear
freedom survives the decay conditions at infinity.

Assembly builds the normalized coefficients Q_2..Q_n as partial fractions
whose apparent-point pole parts are forced by the simple-apparent local
analysis: writing alpha = -1/n and s = y - p_k, the local operator
coefficients are

    a_i = sum_l  C(n-l, i-l) (alpha)_{i-l} Q_l / s^{i-l},

so vanishing of the order >= 2 poles of a_i fixes the deep pole coefficients
of Q_i at p_k, the residue chain c_{i+1} = -(v_k c_i + delta_i) fixes the
simple-pole coefficients, and decay at infinity (coefficient of y^{-1} ..
y^{-(2j-1)} of Q_j equal to zero) pins the marked-point tails by an exact
linear solve with polynomial-in-v right-hand sides.  The leftover top
relation v_k c_n + delta_n = 0 at each apparent point is the system: d
polynomial equations of degree n in v_1..v_d, of total homotopy degree n^d.

For rank 2 this reproduces the classical sphere picture: Q_2 is the
projective-connection coefficient t(y) with double poles -3/4 at apparent
points, and the equations are nu_k^2 + t_k(p_k) = 0 after eliminating the
marked-point residues against the three decay conditions.

Solvers: exact resultants (small systems, via the oracle module), a
total-degree homotopy with gamma trick and adaptive tracking, and Newton
refinement.  Path tracking is deterministic for a fixed seed.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from apparent.exact import (
    GR_ONE,
    GR_ZERO,
    GRat,
    Poly,
    RatFun,
)
from apparent.mpoly import MPoly
from apparent.numrat import CPoly, CRat
from apparent.oper import (
    DSForm,
    ScalarOperator,
    a_from_Q,
    apparent_certificate,
    conjugate_by_exp,
)

__all__ = [
    "MarkedPoint",
    "ResidueSystem",
    "Solution",
    "DegenerateConfigurationError",
    "assemble_residue_system",
    "solve_residue_system",
    "reconstruct_operator",
    "NumericOperator",
    "numeric_operator",
]


class DegenerateConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class MarkedPoint:
    z: GRat
    delta: dict     # level j -> top pole coefficient (order j) of Q_j

    def top(self, j: int) -> GRat:
        val = self.delta.get(j, GR_ZERO)
        return val if isinstance(val, GRat) else GRat(val)


def _falling(alpha: Fraction, m: int) -> GRat:
    out = Fraction(1)
    for i in range(m):
        out *= alpha - i
    return GRat(out)


def _binom(a: int, b: int) -> int:
    return math.comb(a, b) if 0 <= b <= a else 0


@dataclass(frozen=True)
class ResidueSystem:
    n: int
    apparent: tuple                       # p_1..p_d (exact)
    marked: tuple                         # MarkedPoint
    accessory: dict                       # level -> tuple of pinned values
    levels: dict                          # level j -> [(point, m, MPoly)]
    equations: tuple                      # d polynomials in v_1..v_d
    local_c: tuple                        # per point: dict level -> MPoly c_j
    local_delta: tuple                    # per point: dict level -> MPoly

    @property
    def d(self) -> int:
        return len(self.apparent)

    @property
    def nvars(self) -> int:
        return len(self.apparent)

    def degree_bound(self) -> int:
        return self.n ** self.d

    def q_ratfun(self, j: int, v_values) -> RatFun:
        """Exact Q_j for exact residue-parameter values."""
        out = RatFun(0)
        for point, m, coeff in self.levels[j]:
            num = coeff.eval_exact(list(v_values))
            out = out + RatFun(Poly([num]), Poly([-point, GR_ONE]) ** m)
        return out

    def q_crat(self, j: int, v_values) -> CRat:
        """Numeric Q_j for complex residue-parameter values."""
        out = CRat(0.0)
        vv = [complex(x) for x in v_values]
        for point, m, coeff in self.levels[j]:
            num = coeff.eval_complex(vv)
            den = CPoly([1.0])
            lin = CPoly([-complex(point.to_complex()), 1.0])
            for _ in range(m):
                den = den * lin
            out = out + CRat(CPoly([num]), den)
        return out


def assemble_residue_system(n: int, marked, apparent,
                            accessory=None) -> ResidueSystem:
    """Build the degree-n^d polynomial system for the configuration.

    marked: iterable of MarkedPoint (or (z, {level: top}) pairs);
    apparent: exact points p_k; accessory: {level: values} pinning the
    trailing marked-point tail coefficients beyond the decay conditions.
    """
    marked = tuple(m if isinstance(m, MarkedPoint)
                   else MarkedPoint(GRat(m[0]), {int(k): GRat(v)
                                                 for k, v in m[1].items()})
                   for m in marked)
    apparent = tuple(GRat(p) for p in apparent)
    accessory = {int(k): tuple(GRat(x) for x in v)
                 for k, v in (accessory or {}).items()}
    d = len(apparent)
    npts = [m.z for m in marked] + list(apparent)
    for i in range(len(npts)):
        for j in range(i + 1, len(npts)):
            if npts[i] == npts[j]:
                raise DegenerateConfigurationError(
                    f"coincident points {npts[i]!r}")
    alpha = Fraction(-1, n)
    nv = d
    zero = MPoly(nv)

    # per-point jets of assembled levels: jets[k][j][nu] = MPoly
    jets = [dict() for _ in apparent]
    local_c = [dict() for _ in apparent]
    local_delta = [dict() for _ in apparent]
    levels: dict = {}

    def q_jet(k: int, l: int, nu: int) -> MPoly:
        if l == 0:
            return MPoly.const(nv, 1) if nu == 0 else zero
        if l == 1:
            return zero
        return jets[k][l].get(nu, zero)

    for j in range(2, n + 1):
        terms = []  # (point, order m, MPoly coefficient)
        # apparent-point pole parts
        app_coeffs = []
        for k, p in enumerate(apparent):
            per = {}
            for m in range(j, 1, -1):
                acc = zero
                for l in range(0, j):
                    if l == 1:
                        continue
                    c = _binom(n - l, j - l)
                    if not c:
                        continue
                    w = GRat(c) * _falling(alpha, j - l)
                    acc = acc + w * q_jet(k, l, (j - l) - m)
                per[m] = -acc
            # residue from the recursion chain
            if j == 2:
                cj = MPoly.var(nv, k)
            else:
                cj = -(MPoly.var(nv, k) * local_c[k][j - 1]
                       + local_delta[k][j - 1])
            local_c[k][j] = cj
            acc = zero
            for l in range(0, j):
                if l == 1:
                    continue
                c = _binom(n - l, j - l)
                if not c:
                    continue
                w = GRat(c) * _falling(alpha, j - l)
                acc = acc + w * q_jet(k, l, (j - l) - 1)
            per[1] = cj - acc
            app_coeffs.append(per)
            for m, coeff in per.items():
                if not coeff.is_zero:
                    terms.append((p, m, coeff))
        # marked-point parts: top coefficient given, tails unknown
        unknowns = []  # (r, m)
        for r in range(len(marked)):
            for m in range(1, j):
                unknowns.append((r, m))
        n_closure = 2 * j - 1
        excess = len(unknowns) - n_closure
        if excess < 0:
            raise DegenerateConfigurationError(
                f"level {j}: {len(unknowns)} tail coefficients cannot meet "
                f"{n_closure} decay conditions; add marked points")
        pins = accessory.get(j, ())
        if len(pins) != excess:
            raise DegenerateConfigurationError(
                f"level {j}: need exactly {excess} accessory values, "
                f"got {len(pins)}")
        pinned = {unknowns[len(unknowns) - excess + i]: pins[i]
                  for i in range(excess)}
        free = [u for u in unknowns if u not in pinned]
        # closure conditions: coefficient of y^{-nu}, nu = 1..2j-1
        rows = []
        rhs = []
        for nu in range(1, n_closure + 1):
            row = []
            for (r, m) in free:
                q = marked[r].z
                row.append(GRat(_binom(nu - 1, m - 1)) * q ** (nu - m)
                           if nu >= m else GR_ZERO)
            acc = zero
            for k, p in enumerate(apparent):
                for m, coeff in app_coeffs[k].items():
                    if nu >= m:
                        acc = acc + (GRat(_binom(nu - 1, m - 1))
                                     * p ** (nu - m)) * coeff
            for r, mk in enumerate(marked):
                if nu >= j:
                    acc = acc + MPoly.const(
                        nv, GRat(_binom(nu - 1, j - 1)) * mk.z ** (nu - j)
                        * mk.top(j))
                for (rr, m), val in pinned.items():
                    if rr == r and nu >= m:
                        acc = acc + MPoly.const(
                            nv, GRat(_binom(nu - 1, m - 1))
                            * mk.z ** (nu - m) * val)
            rows.append(row)
            rhs.append(-acc)
        sol = _solve_mpoly_system(rows, rhs)
        tail = dict(zip(free, sol))
        tail.update({u: MPoly.const(nv, val) for u, val in pinned.items()})
        for r, mk in enumerate(marked):
            if mk.top(j):
                terms.append((mk.z, j, MPoly.const(nv, mk.top(j))))
            for m in range(1, j):
                coeff = tail[(r, m)]
                if not coeff.is_zero:
                    terms.append((mk.z, m, coeff))
        levels[j] = terms
        # jets of Q_j at each apparent point, orders -j .. n-j
        for k, p in enumerate(apparent):
            jd = {}
            for m, coeff in app_coeffs[k].items():
                jd[-m] = coeff
            for nu in range(0, n - j + 1):
                acc = zero
                for point, m, coeff in terms:
                    if point == p:
                        continue
                    base = p - point
                    w = GRat((-1) ** nu * _binom(m - 1 + nu, nu)) \
                        / base ** (m + nu)
                    acc = acc + w * coeff
                jd[nu] = acc
            jets[k][j] = jd
            # delta_j = order-0 coefficient of a_j at p
            acc = zero
            for l in range(0, j + 1):
                if l == 1:
                    continue
                cbin = _binom(n - l, j - l)
                if not cbin:
                    continue
                w = GRat(cbin) * _falling(alpha, j - l)
                acc = acc + w * q_jet(k, l, j - l)
            local_delta[k][j] = acc
    equations = []
    for k in range(d):
        if n == 1:
            raise ValueError("rank must be at least 2")
        eq = MPoly.var(nv, k) * local_c[k][n] + local_delta[k][n]
        equations.append(eq)
    return ResidueSystem(n, apparent, marked, accessory, levels,
                         tuple(equations), tuple(local_c), tuple(local_delta))


def _solve_mpoly_system(rows, rhs):
    """Exact solve of a square GRat system with MPoly right-hand side."""
    m = len(rows)
    ncols = len(rows[0]) if m else 0
    if m != ncols:
        raise DegenerateConfigurationError("closure system is not square")
    work = [list(r) for r in rows]
    vec = list(rhs)
    for col in range(ncols):
        piv = None
        for r in range(col, m):
            if work[r][col]:
                piv = r
                break
        if piv is None:
            raise DegenerateConfigurationError(
                "closure system is rank deficient")
        work[col], work[piv] = work[piv], work[col]
        vec[col], vec[piv] = vec[piv], vec[col]
        pval = work[col][col]
        work[col] = [x / pval for x in work[col]]
        vec[col] = MPoly(vec[col].nvars,
                         {e: c / pval for e, c in vec[col].terms.items()})
        for r in range(m):
            if r != col and work[r][col]:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
                vec[r] = vec[r] - MPoly(
                    vec[col].nvars,
                    {e: c * f for e, c in vec[col].terms.items()})
    return vec


# ---------------------------------------------------------------------------
# Reconstruction
# ---------------------------------------------------------------------------

def reconstruct_operator(sys: ResidueSystem, v_values) -> ScalarOperator:
    """Exact operator for exact residue-parameter values."""
    v_values = [GRat(x) if not isinstance(x, GRat) else x for x in v_values]
    qs = tuple(sys.q_ratfun(j, v_values) for j in range(2, sys.n + 1))
    ds = DSForm(sys.n, qs, RatFun(0))
    return a_from_Q(ds, apparent_points=list(sys.apparent))


class _NumJet:
    """Short complex Taylor jet at a fixed point; enough arithmetic for the
    exp-conjugation to run with jet coefficients (numerically stable)."""

    __slots__ = ("c",)

    def __init__(self, c):
        self.c = list(c)

    def _coerce(self, o, length):
        if isinstance(o, _NumJet):
            return o
        return _NumJet([complex(o)] + [0j] * (length - 1))

    def __add__(self, o):
        o = self._coerce(o, len(self.c))
        return _NumJet([a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __sub__(self, o):
        o = self._coerce(o, len(self.c))
        return _NumJet([a - b for a, b in zip(self.c, o.c)])

    def __mul__(self, o):
        o = self._coerce(o, len(self.c))
        out = [0j] * len(self.c)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j in range(len(self.c) - i):
                out[i + j] += a * o.c[j]
        return _NumJet(out)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._coerce(o, len(self.c))
        inv = [1 / o.c[0]]
        for m in range(1, len(self.c)):
            acc = 0j
            for j in range(1, m + 1):
                acc += o.c[j] * inv[m - j]
            inv.append(-acc / o.c[0])
        return self * _NumJet(inv)

    def derivative(self):
        return _NumJet([(k + 1) * self.c[k + 1]
                        for k in range(len(self.c) - 1)] + [0j])

    def __bool__(self):
        return any(x != 0 for x in self.c)


def _pole_jet(at: complex, q: complex, m: int, length: int) -> _NumJet:
    """Jet of 1/(z - q)^m at the point `at` (which must differ from q)."""
    base = at - q
    # d^k/dz^k (z-q)^{-m} = (-1)^k m(m+1)...(m+k-1) (z-q)^{-m-k}
    out = []
    coef = 1.0
    for k in range(length):
        out.append(coef * base ** (-m - k) / 1.0)
        coef *= -(m + k)
    # convert derivative values to Taylor coefficients
    fact = 1.0
    taylor = []
    for k, val in enumerate(out):
        if k:
            fact *= k
        taylor.append(val / fact)
    return _NumJet(taylor)


@dataclass
class NumericOperator:
    """Monic operator for float residue-parameter vectors; coefficients are
    evaluated through local jets of the partial-fraction data, which keeps
    the exp-conjugation numerically stable."""

    n: int
    sys: ResidueSystem
    v: tuple
    poles: tuple

    def coeffs_at(self, z: complex):
        length = self.n + 1
        sys = self.sys
        zero = _NumJet([0j] * length)
        qjets = {}
        for j in range(2, sys.n + 1):
            acc = _NumJet([0j] * length)
            for point, m, coeff in sys.levels[j]:
                num = coeff.eval_complex(list(self.v))
                acc = acc + num * _pole_jet(z, complex(point.to_complex()),
                                            m, length)
            qjets[j] = acc
        ujet = _NumJet([0j] * length)
        for p in sys.apparent:
            ujet = ujet + _pole_jet(z, complex(p.to_complex()), 1, length)
        ujet = (-1.0 / sys.n) * ujet
        coeffs = [zero] * (sys.n + 1)
        coeffs[sys.n] = _NumJet([1.0 + 0j] + [0j] * (length - 1))
        for j in range(2, sys.n + 1):
            coeffs[sys.n - j] = qjets[j]
        back = conjugate_by_exp(tuple(coeffs), ujet)
        lead = back[sys.n].c[0]
        return [back[sys.n - k].c[0] / lead for k in range(1, sys.n + 1)]

    def coeff_eval(self, k: int, z: complex) -> complex:
        if k == 0:
            return 1.0 + 0j
        return self.coeffs_at(z)[k - 1]

    def singular_points(self):
        return list(self.poles)


def numeric_operator(sys: ResidueSystem, v_values) -> NumericOperator:
    """Operator with complex coefficients for float solutions."""
    poles = [complex(p.to_complex()) for p in sys.apparent] \
        + [complex(m.z.to_complex()) for m in sys.marked]
    return NumericOperator(sys.n, sys, tuple(complex(x) for x in v_values),
                           tuple(poles))


def local_certificate_numeric(sys: ResidueSystem, v_values, k: int,
                              tol: float = 1e-10):
    """Residual chain at apparent point k for a float solution vector."""
    vv = [complex(x) for x in v_values]
    cs = {j: sys.local_c[k][j].eval_complex(vv) for j in range(2, sys.n + 1)}
    ds = {j: sys.local_delta[k][j].eval_complex(vv)
          for j in range(2, sys.n + 1)}
    v = vv[k]
    residuals = []
    for j in range(2, sys.n + 1):
        r = v * cs[j] + ds[j]
        if j < sys.n:
            r = r + cs[j + 1]
        residuals.append(r)
    return max(abs(r) for r in residuals) <= tol, residuals


# ---------------------------------------------------------------------------
# Solvers
# ---------------------------------------------------------------------------

@dataclass
class Solution:
    values: tuple
    multiplicity: int
    residual: float
    certified: bool
    exact: bool
    flagged_multiple: bool = False


class PathFailure(ArithmeticError):
    def __init__(self, index, reason):
        super().__init__(f"path {index}: {reason}")
        self.index = index
        self.reason = reason


def solve_residue_system(sys: ResidueSystem, mode: str = "homotopy",
                         seed: int = 0, tol: float = 1e-10,
                         jobs: int = 1) -> list:
    """All isolated solutions of the residue system, with certificates.

    modes: 'exact' (resultants; at most two unknowns), 'homotopy'
    (total-degree start system v_k^n = 1, gamma trick, adaptive tracking),
    'newton-refine' (homotopy followed by high-precision polishing).
    Paths are tracked independently and merged in sorted order, so the
    result does not depend on the worker count.
    """
    if sys.d == 0:
        return []
    if mode == "exact":
        from apparent.oracles import exact_resultant_solve
        raw = exact_resultant_solve(sys)
        out = []
        for values, mult in raw:
            out.append(_package_solution(sys, values, mult, tol))
        return _sorted_solutions(out)
    if mode not in ("homotopy", "newton-refine"):
        raise ValueError(f"unknown mode {mode!r}")
    sols = _homotopy_solve(sys, seed=seed, jobs=jobs)
    out = []
    for values, mult in sols:
        if mode == "newton-refine":
            values = _newton_polish(sys, values)
        out.append(_package_solution(sys, values, mult, tol))
    return _sorted_solutions(out)


def _package_solution(sys, values, mult, tol) -> Solution:
    exact = all(isinstance(x, GRat) for x in values)
    if exact:
        resid = max(abs(eq.eval_exact(list(values)).to_complex())
                    for eq in sys.equations)
        cert = True
        for k in range(sys.d):
            op = reconstruct_operator(sys, values)
            c = apparent_certificate(op, sys.apparent[k], tol)
            cert = cert and c.passed
    else:
        vv = [complex(x) if not hasattr(x, "to_complex") else x.to_complex()
              for x in values]
        resid = max(abs(eq.eval_complex(vv)) for eq in sys.equations)
        cert = True
        for k in range(sys.d):
            ok, _ = local_certificate_numeric(sys, vv, k, tol)
            cert = cert and ok
        values = tuple(vv)
    return Solution(tuple(values), mult, float(resid), cert, exact,
                    flagged_multiple=mult > 1)


def _sorted_solutions(sols):
    def key(s):
        return tuple((round(complex(_as_c(x)).real, 9),
                      round(complex(_as_c(x)).imag, 9)) for x in s.values)
    return sorted(sols, key=key)


def _as_c(x):
    return x.to_complex() if hasattr(x, "to_complex") else complex(x)


def _eval_system(sys, v):
    return np.array([eq.eval_complex(v) for eq in sys.equations])


def _jacobian(sys, v):
    d = sys.d
    out = np.zeros((d, d), dtype=complex)
    for i, eq in enumerate(sys.equations):
        for j in range(d):
            out[i, j] = eq.diff(j).eval_complex(v)
    return out


def _newton(sys, v, steps=60, target=1e-13):
    v = np.array(v, dtype=complex)
    for _ in range(steps):
        f = _eval_system(sys, list(v))
        if np.max(np.abs(f)) < target:
            break
        try:
            delta = np.linalg.solve(_jacobian(sys, list(v)), f)
        except np.linalg.LinAlgError:
            break
        v = v - delta
        if np.max(np.abs(delta)) < 1e-15 * max(1.0, np.max(np.abs(v))):
            break
    return v


def _newton_polish(sys, values):
    v = _newton(sys, [complex(_as_c(x)) for x in values], steps=100)
    return tuple(v)


def _homotopy_solve(sys: ResidueSystem, seed: int = 0,
                    max_step: float = 0.1, jobs: int = 1) -> list:
    """Total-degree homotopy: H(v,t) = (1-t) gamma (v_k^n - 1) + t F(v).

    If two paths merge (a tracking accident for an unlucky gamma), the run
    is retried with further deterministic gamma draws and the attempt with
    the largest distinct solution count wins.
    """
    best = None
    for attempt in range(4):
        rng = random.Random((seed + 1000003 * attempt) ^ 0x5EED)
        theta = rng.uniform(0.1, 0.9) * 2 * math.pi
        gamma = cmath.exp(1j * theta)
        result = _track_all(sys, gamma, max_step, jobs)
        distinct = len(result)
        if best is None or distinct > len(best):
            best = result
        if distinct == sys.degree_bound():
            break
    return best


def _track_all(sys: ResidueSystem, gamma: complex, max_step: float,
               jobs: int) -> list:
    d = sys.d
    n = sys.n

    def h_val(v, t):
        out = np.empty(d, dtype=complex)
        fv = _eval_system(sys, list(v))
        for k in range(d):
            g = v[k] ** n - 1
            out[k] = (1 - t) * gamma * g + t * fv[k]
        return out

    def h_jac(v, t):
        jf = _jacobian(sys, list(v))
        out = t * jf
        for k in range(d):
            out[k, k] += (1 - t) * gamma * n * v[k] ** (n - 1)
        return out

    def h_dt(v, t):
        fv = _eval_system(sys, list(v))
        out = np.empty(d, dtype=complex)
        for k in range(d):
            g = v[k] ** n - 1
            out[k] = fv[k] - gamma * g
        return out

    roots = [cmath.exp(2j * math.pi * i / n) for i in range(n)]
    import itertools

    def track(work):
        pidx, combo = work
        v = np.array([roots[i] for i in combo], dtype=complex)
        t = 0.0
        dt = 0.05
        fails = 0
        while t < 1.0 - 1e-10:
            dt = min(dt, max_step, 1.0 - t, max(0.02, 0.3 * (1.0 - t)))
            try:
                pred = v - np.linalg.solve(h_jac(v, t),
                                           h_dt(v, t)) * dt
            except np.linalg.LinAlgError:
                fails += 1
                dt /= 2
                if fails > 60:
                    raise PathFailure(pidx, "singular Jacobian on path")
                continue
            t_new = t + dt
            w = pred
            good = False
            for _ in range(12):
                hv = h_val(w, t_new)
                if np.max(np.abs(hv)) < 1e-10 * max(1.0, np.max(np.abs(w))):
                    good = True
                    break
                try:
                    w = w - np.linalg.solve(h_jac(w, t_new), hv)
                except np.linalg.LinAlgError:
                    break
            if good:
                v, t = w, t_new
                dt = min(dt * 1.6, max_step)
                fails = 0
            else:
                dt /= 2
                fails += 1
                if fails > 60:
                    raise PathFailure(pidx, "corrector divergence")
            if np.max(np.abs(v)) > 1e8:
                raise PathFailure(pidx, "path diverged to infinity")
        return _newton(sys, list(v))

    work = list(enumerate(itertools.product(range(n), repeat=d)))
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            endpoints = list(pool.map(track, work))
    else:
        endpoints = [track(w) for w in work]
    return _cluster_endpoints(sys, endpoints)


def _cluster_endpoints(sys, endpoints, radius=1e-6):
    clusters = []
    for v in endpoints:
        for cl in clusters:
            if np.max(np.abs(cl[0] - v)) < radius * max(
                    1.0, float(np.max(np.abs(v)))):
                cl.append(v)
                break
        else:
            clusters.append([v])
    out = []
    for cl in clusters:
        avg = np.mean(np.array(cl), axis=0)
        avg = _newton(sys, list(avg))
        out.append((tuple(avg), len(cl)))
    return out
