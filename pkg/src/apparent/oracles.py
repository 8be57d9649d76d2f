"""Independent ground-truth constructions used by the test suite (and exposed
behind the CLI for reproducibility): operators with prescribed polynomial
solution bases, exact resultant solving of small residue systems, and
indicial exponents.

These deliberately share no code with the machinery they check beyond the
exact arithmetic substrate.
"""

from __future__ import annotations

from apparent.exact import (
    Divisor,
    GR_ONE,
    GR_ZERO,
    GRat,
    Poly,
    RatFun,
    laurent_expand,
    roots_with_multiplicity,
    try_sqrt,
)
from apparent.mpoly import MPoly
from apparent.oper import ScalarOperator, monic_from_diffop

__all__ = [
    "operator_from_basis",
    "exact_resultant_solve",
    "indicial_exponents",
]


def operator_from_basis(basis) -> ScalarOperator:
    """Monic operator annihilating the given rational solution basis.

    Built as the bordered Wronskian D y = Wr(f_1..f_n, y) / Wr(f_1..f_n);
    every zero of the Wronskian is an apparent singularity by construction
    (the solutions are single-valued rational functions).
    """
    basis = [f if isinstance(f, RatFun) else RatFun(f) for f in basis]
    n = len(basis)
    rows = []
    cur = list(basis)
    for _ in range(n + 1):
        rows.append(list(cur))
        cur = [f.derivative() for f in cur]
    # coefficient of y^{(k)}: (-1)^{n-k} * minor omitting derivative row k
    coeffs = []
    for k in range(n + 1):
        minor = [rows[i] for i in range(n + 1) if i != k]
        d = _det(minor)
        if (n - k) % 2:
            d = RatFun(0) - d
        coeffs.append(d)
    if not coeffs[n]:
        raise ValueError("dependent basis: Wronskian vanishes identically")
    op = monic_from_diffop(tuple(coeffs))
    return op


def _det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    out = None
    for j in range(n):
        if not rows[0][j]:
            continue
        minor = [[row[c] for c in range(n) if c != j] for row in rows[1:]]
        term = rows[0][j] * _det(minor)
        if j % 2:
            term = RatFun(0) - term
        out = term if out is None else out + term
    return RatFun(0) if out is None else out


# ---------------------------------------------------------------------------
# Exact resultant solving (rank 2, up to two apparent points)
# ---------------------------------------------------------------------------

def exact_resultant_solve(system) -> list:
    """All solutions, with multiplicity, of a rank-2 residue system with at
    most two unknowns, via exact resultants and certified root isolation.

    Accepts a ResidueSystem (or anything with .equations as MPoly and
    .nvars); returns a list of (values tuple, multiplicity), values exact
    GRat where the algebra permits, certified complex otherwise.
    """
    eqs = list(system.equations)
    nv = eqs[0].nvars if eqs else 0
    if nv == 0:
        return []
    if nv == 1:
        poly = eqs[0].to_univariate(0)
        return [((r,), m) for r, m in _poly_roots_sorted(poly)]
    if nv != 2 or len(eqs) != 2:
        raise ValueError("exact resultant solver handles at most 2 unknowns")
    f, g = eqs
    fv = f.as_poly_in(1)
    gv = g.as_poly_in(1)
    res = _sylvester_resultant(fv, gv)
    rpoly = res.to_univariate(0)
    if not rpoly:
        raise ValueError("degenerate system: identically zero resultant")
    sols = []
    for r1, m1 in _poly_roots_sorted(rpoly):
        if isinstance(r1, GRat):
            f1 = _subs_to_poly(f, 0, r1)
            g1 = _subs_to_poly(g, 0, r1)
            common = f1.gcd(g1)
            if common.degree < 1:
                continue
            for r2, m2 in _poly_roots_sorted(common):
                sols.append(((r1, r2), m1 * m2))
        else:
            z1 = r1.to_complex()
            f1 = [c.eval_complex([z1, 0]) for c in fv]
            g1 = [c.eval_complex([z1, 0]) for c in gv]
            roots_f = _complex_poly_roots(f1)
            roots_g = _complex_poly_roots(g1)
            for rf in roots_f:
                if any(abs(rf - rg) < 1e-8 * max(1, abs(rf)) for rg in roots_g):
                    sols.append(((r1, rf), m1))
    return sols


def _subs_to_poly(mp: MPoly, k: int, value: GRat) -> Poly:
    sub = mp.subs_partial(k, value)
    return sub.to_univariate(1 - k)


def _sylvester_resultant(fv: list, gv: list) -> MPoly:
    """Resultant in the second variable of two MPoly coefficient lists."""
    m, n = len(fv) - 1, len(gv) - 1
    if m < 0 or n < 0:
        raise ValueError("zero polynomial in resultant")
    size = m + n
    if size == 0:
        return MPoly.const(fv[0].nvars, 1)
    zero = MPoly(fv[0].nvars)
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(fv)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(gv)):
            row[i + j] = c
        rows.append(row)
    return _mp_det(rows)


def _mp_det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    out = None
    for j in range(n):
        if rows[0][j].is_zero:
            continue
        minor = [[row[c] for c in range(n) if c != j] for row in rows[1:]]
        term = rows[0][j] * _mp_det(minor)
        if j % 2:
            term = -term
        out = term if out is None else out + term
    return rows[0][0] - rows[0][0] if out is None else out


def _poly_roots_sorted(poly: Poly) -> list:
    if poly.degree == 1:
        return [(-poly[0] / poly[1], 1)]
    if poly.degree == 2:
        # exact quadratic formula when the discriminant is a square in Q(i)
        a, b, c = poly[2], poly[1], poly[0]
        disc = b * b - GRat(4) * a * c
        root = try_sqrt(disc)
        if root is not None:
            r1 = (-b + root) / (GRat(2) * a)
            r2 = (-b - root) / (GRat(2) * a)
            if r1 == r2:
                return [(r1, 2)]
            return sorted([(r1, 1), (r2, 1)], key=_root_key)
    div = roots_with_multiplicity(poly)
    return sorted(list(div.points), key=lambda pm: _root_key((pm[0], pm[1])))


def _root_key(pm):
    from apparent.exact import point_to_complex
    z = point_to_complex(pm[0])
    return (round(z.real, 12), round(z.imag, 12))


def _complex_poly_roots(coeffs_low_to_high) -> list:
    import numpy as np
    cs = [complex(c) for c in coeffs_low_to_high]
    while cs and abs(cs[-1]) < 1e-14:
        cs.pop()
    if len(cs) <= 1:
        return []
    return list(np.roots(list(reversed(cs))))


# ---------------------------------------------------------------------------
# Indicial exponents
# ---------------------------------------------------------------------------

def indicial_exponents(op: ScalarOperator, p) -> list:
    """Roots of the indicial polynomial of a regular singular point p.

    Exponents rho solve sum_k alpha_k rho(rho-1)...(rho-(n-k)+1) = 0 where
    alpha_k is the order -k Laurent coefficient of a_k (alpha_0 = 1).
    """
    n = op.n
    alphas = [GR_ONE]
    for k in range(1, n + 1):
        jet = laurent_expand(op.coeff(k), p, 0)
        if jet.lowest_order < -k:
            raise ValueError(f"a_{k} pole order exceeds {k}: not regular "
                             "singular")
        alphas.append(jet.coefficient(-k))
    # build the indicial polynomial in rho
    rho = Poly([0, 1])
    total = Poly()
    for k in range(n + 1):
        falling = Poly([1])
        for j in range(n - k):
            falling = falling * (rho - Poly([j]))
        if isinstance(alphas[k], GRat):
            total = total + falling.scale(alphas[k])
        else:
            raise ValueError("indicial data must be exact here")
    return [r for r, m in _poly_roots_sorted(total) for _ in range(m)]
