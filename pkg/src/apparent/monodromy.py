"""Numerical analytic continuation: transfer matrices along polyline paths,
loop monodromy, trivial-monodromy certification, and the global monodromy
representation on the punctured sphere.

Scalar operators are integrated as their companion first-order systems;
connection triples as the matrix equation they define.  The integrator is
an explicit adaptive order-8 method (DOP853) per path segment; loops are
regular 64-gon polylines whose vertex count doubles until the step-doubling
error estimate meets the target.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.integrate import solve_ivp

from apparent.exact import GRat, RatFun, point_to_complex
from apparent.oper import ScalarOperator

__all__ = [
    "TransferMatrix",
    "PathTooCloseError",
    "integrate_along",
    "loop_monodromy",
    "certify_apparent",
    "global_representation",
    "GlobalRepresentation",
]


class PathTooCloseError(ValueError):
    """Path runs closer to a singular point than the safety margin."""


@dataclass
class TransferMatrix:
    matrix: np.ndarray
    path: tuple
    error_estimate: float

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def deviation_from_identity(self) -> float:
        return float(np.max(np.abs(self.matrix - np.eye(self.n))))

    def to_json(self) -> dict:
        return {
            "matrix": [[{"re": f"{x.real:.17e}", "im": f"{x.imag:.17e}"}
                        for x in row] for row in self.matrix.tolist()],
            "error": f"{self.error_estimate:.3e}",
            "path": [{"re": f"{z.real:.17e}", "im": f"{z.imag:.17e}"}
                     for z in self.path],
        }


# ---------------------------------------------------------------------------
# Sources: anything that yields a first-order system Y' = C(z) Y
# ---------------------------------------------------------------------------

def _system_builder(source):
    """Return (n, C(z) callable, singular points as complex list)."""
    if isinstance(source, ScalarOperator):
        n = source.n
        coeffs = source.a

        def c_mat(z):
            m = np.zeros((n, n), dtype=complex)
            for k in range(n - 1):
                m[k, k + 1] = 1.0
            for k in range(1, n + 1):
                m[n - 1, n - k] = -coeffs[k - 1].eval_complex(z)
            return m

        sing = [point_to_complex(p) for p in source.singular_points()]
        return n, c_mat, sing
    if hasattr(source, "coeff_eval"):  # NumericOperator duck type
        n = source.n
        batched = getattr(source, "coeffs_at", None)

        def c_mat(z):
            m = np.zeros((n, n), dtype=complex)
            for k in range(n - 1):
                m[k, k + 1] = 1.0
            if batched is not None:
                vals = batched(z)
                for k in range(1, n + 1):
                    m[n - 1, n - k] = -vals[k - 1]
            else:
                for k in range(1, n + 1):
                    m[n - 1, n - k] = -source.coeff_eval(k, z)
            return m

        return n, c_mat, [complex(p) for p in source.singular_points()]
    if hasattr(source, "A"):  # ConnectionTriple duck type
        n = source.n
        lam = complex(source.lam.to_complex())
        if lam == 0:
            raise ValueError("lambda = 0 has no flat sections to continue")
        rows = source.A

        def c_mat(z):
            a = np.array([[entry.eval_complex(z) for entry in row]
                          for row in rows], dtype=complex)
            return -a / lam

        sing = set()
        for row in rows:
            for entry in row:
                if entry.den.degree > 0:
                    from apparent.exact import roots_with_multiplicity
                    for p, _ in roots_with_multiplicity(entry.den):
                        sing.add(point_to_complex(p))
        return n, c_mat, sorted(sing, key=lambda z: (z.real, z.imag))
    raise TypeError(f"cannot build a system from {type(source).__name__}")


def _segment_min_distance(a: complex, b: complex, p: complex) -> float:
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0:
        return abs(p - a)
    t = ((p - a) * ab.conjugate()).real / denom
    t = min(1.0, max(0.0, t))
    return abs(a + t * ab - p)


def _check_margin(path, sing):
    if not sing:
        return
    if len(sing) > 1:
        spacing = min(abs(p - q) for p, q in combinations(sing, 2))
    else:
        spacing = 1.0
    margin = 1e-3 * spacing
    for a, b in zip(path[:-1], path[1:]):
        for p in sing:
            d = _segment_min_distance(a, b, p)
            if d < margin:
                raise PathTooCloseError(
                    f"segment [{a}, {b}] passes at {d:.2e} from singular "
                    f"point {p} (margin {margin:.2e})")


def _integrate_path(n, c_mat, path, rtol):
    y = np.eye(n, dtype=complex)
    for a, b in zip(path[:-1], path[1:]):
        delta = b - a

        def rhs(t, vec):
            m = c_mat(a + t * delta)
            return (delta * (m @ vec.reshape(n, n))).ravel()

        sol = solve_ivp(rhs, (0.0, 1.0), y.ravel().astype(complex),
                        method="DOP853", rtol=rtol, atol=rtol * 1e-2,
                        dense_output=False)
        if not sol.success:
            raise ArithmeticError(
                f"integration collapsed on segment [{a}, {b}]: "
                f"{sol.message}; a singular point may be nearby")
        y = sol.y[:, -1].reshape(n, n)
    return y


def integrate_along(source, path, rtol: float = 1e-12,
                    estimate: bool = True) -> TransferMatrix:
    """Fundamental-solution transfer matrix along a polyline path.

    The a posteriori error estimate re-integrates with halved segments at a
    tighter tolerance and reports the difference.
    """
    path = [complex(z) for z in path]
    n, c_mat, sing = _system_builder(source)
    _check_margin(path, sing)
    m1 = _integrate_path(n, c_mat, path, rtol)
    err = 0.0
    if estimate:
        refined = []
        for a, b in zip(path[:-1], path[1:]):
            refined.extend([a, (a + b) / 2])
        refined.append(path[-1])
        m2 = _integrate_path(n, c_mat, refined, rtol * 1e-2)
        err = float(np.max(np.abs(m1 - m2)))
        m1 = m2
    return TransferMatrix(m1, tuple(path), err)


def _loop_path(center: complex, radius: float, vertices: int,
               basepoint: complex | None = None):
    pts = [center + radius * cmath.exp(2j * cmath.pi * k / vertices)
           for k in range(vertices)]
    pts.append(pts[0])
    if basepoint is not None and abs(basepoint - pts[0]) > 1e-15:
        return [basepoint] + pts + [basepoint]
    return pts


def loop_monodromy(source, center, basepoint=None, radius: float | None = None,
                   target: float = 1e-10, rtol: float = 1e-12,
                   max_vertices: int = 512) -> TransferMatrix:
    """Monodromy around one singular point, normalized at the basepoint.

    Default radius: half the distance to the nearest other singular point.
    The 64-gon is refined by doubling until the vertex-doubling estimate
    meets the target.
    """
    center = point_to_complex(center) if not isinstance(center, complex) \
        else center
    n, c_mat, sing = _system_builder(source)
    others = [p for p in sing if abs(p - center) > 1e-12]
    if radius is None:
        radius = min((abs(p - center) for p in others), default=2.0) / 2
    base = complex(basepoint) if basepoint is not None else None
    vertices = 64
    prev = None
    path = _loop_path(center, radius, vertices, base)
    m = _integrate_path(n, c_mat, path, rtol)
    while vertices <= max_vertices:
        vertices *= 2
        path2 = _loop_path(center, radius, vertices, base)
        m2 = _integrate_path(n, c_mat, path2, rtol)
        err = float(np.max(np.abs(m - m2)))
        prev, m, path = m, m2, path2
        if err < target:
            return TransferMatrix(m, tuple(path), err)
    return TransferMatrix(m, tuple(path),
                          float(np.max(np.abs(m - prev))))


def certify_apparent(source, p, tol: float = 1e-8):
    """True iff the loop monodromy around p is the identity within tol."""
    tm = loop_monodromy(source, p, target=min(tol * 1e-2, 1e-10))
    return tm.deviation_from_identity() <= tol, tm


# ---------------------------------------------------------------------------
# Global representation
# ---------------------------------------------------------------------------

@dataclass
class GlobalRepresentation:
    punctures: tuple
    generators: tuple          # TransferMatrix per puncture (same order)
    infinity_generator: TransferMatrix
    product_defect: float
    irreducible: bool

    def product_ok(self, tol: float = 1e-8) -> bool:
        return self.product_defect <= tol


def global_representation(source, basepoint=None, rtol: float = 1e-12,
                          irr_tol: float = 1e-6) -> GlobalRepresentation:
    """Keyhole generators around every finite singular point plus infinity.

    The product of the finite generators in decreasing angular order times
    the infinity generator is checked against the identity; the reducibility
    scan looks for a joint invariant subspace of all generators.
    """
    n, c_mat, sing = _system_builder(source)
    if not sing:
        raise ValueError("no singular points: the representation is trivial")
    spread = max((abs(p - q) for p, q in combinations(sing, 2)), default=1.0)
    center = sum(sing) / len(sing)
    if basepoint is None:
        basepoint = center - 2.5j * max(spread, 1.0)
    base = complex(basepoint)
    margin = 0.4 * (min((abs(p - q) for p, q in combinations(sing, 2)),
                        default=1.0) if len(sing) > 1 else 1.0)
    # generators are listed in the order their loops compose into the big
    # circle: increasing angle as seen from the basepoint, applied first
    punctures = sorted(sing, key=lambda z: (cmath.phase(z - base),
                                            abs(z - base)))
    gens = []
    for p in punctures:
        others = [q for q in sing if abs(q - p) > 1e-12]
        radius = min((abs(q - p) for q in others), default=1.0) / 2
        radius = min(radius, abs(p - base) / 2)
        direction = (base - p) / abs(base - p)
        entry = p + radius * direction
        approach = _safe_route(base, entry, others, margin)
        k = 64
        loop = [p + radius * cmath.exp(1j * (cmath.phase(direction)
                                             + 2 * cmath.pi * t / k))
                for t in range(k + 1)]
        path = approach + loop[1:] + list(reversed(approach))
        m = _integrate_path(n, c_mat, [complex(z) for z in path], rtol)
        gens.append(TransferMatrix(m, tuple(path), 0.0))
    big_r = 2.0 * max(abs(p - base) for p in sing) + abs(spread)
    k = 128
    start = base
    big_center = base
    # enter the big circle radially from the basepoint
    entry = big_center + big_r
    big_path = [start, entry] + [
        big_center + big_r * cmath.exp(1j * 2 * cmath.pi * t / k)
        for t in range(1, k + 1)] + [entry, start]
    m_big = _integrate_path(n, c_mat, [complex(z) for z in big_path], rtol)
    m_inf = np.linalg.inv(m_big)
    prod = np.eye(n, dtype=complex)
    for g in gens:
        prod = g.matrix @ prod
    defect = float(np.max(np.abs(m_inf @ prod - np.eye(n))))
    irreducible = _is_irreducible([g.matrix for g in gens] + [m_inf], irr_tol)
    return GlobalRepresentation(tuple(punctures), tuple(gens),
                                TransferMatrix(m_inf, tuple(big_path), 0.0),
                                defect, irreducible)


def _safe_route(a: complex, b: complex, obstacles, margin: float,
                depth: int = 0) -> list:
    """Polyline from a to b staying margin away from the obstacles."""
    blocked = [p for p in obstacles
               if _segment_min_distance(a, b, p) < margin]
    if not blocked or depth > 6:
        return [a, b]
    p = min(blocked, key=lambda q: _segment_min_distance(a, b, q))
    ab = b - a
    normal = 1j * ab / abs(ab)
    side = normal if ((p - a) * normal.conjugate()).real < 0 else -normal
    t = max(0.0, min(1.0, ((p - a) * ab.conjugate()).real / abs(ab) ** 2))
    mid = a + t * ab + side * 2.0 * margin
    return (_safe_route(a, mid, obstacles, margin, depth + 1)[:-1]
            + _safe_route(mid, b, obstacles, margin, depth + 1))


def _is_irreducible(mats, tol: float) -> bool:
    """Search for a joint invariant subspace via eigenvector combinations."""
    n = mats[0].shape[0]
    ref = mats[0]
    _, vecs = np.linalg.eig(ref)
    for k in range(1, n):
        for idx in combinations(range(n), k):
            basis = vecs[:, list(idx)]
            q, _ = np.linalg.qr(basis)
            q = q[:, :k]
            invariant = True
            for m in mats:
                img = m @ q
                resid = img - q @ (q.conj().T @ img)
                if np.max(np.abs(resid)) > tol * max(1.0,
                                                     float(np.max(np.abs(m)))):
                    invariant = False
                    break
            if invariant:
                return False
    return True
