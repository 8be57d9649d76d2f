"""Lambda-connection triples: Wronskian sections, the scalar operator of a
triple via cyclic-vector elimination, companion connections, and the local
normal form of the dual connection at a simple zero of the section.

The section of a triple (lambda, A, s) is det(s, Ds, ..., D^{n-1}s) with
D = lambda d/dz + A.  Its classical flat-frame definition agrees with this
rational-function determinant because pairing against dual-flat frames turns
D-iterates into plain derivatives; the pipeline therefore never needs
numerical flat frames (monodromy regression-tests the equivalence).

Dual-connection convention: the dual of d + A is d - A^T.  All signs in the
local normal form follow this choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from apparent import linalg
from apparent.exact import (
    Divisor,
    GR_ONE,
    GR_ZERO,
    GRat,
    Poly,
    RatFun,
    points_coincide,
    roots_with_multiplicity,
)
from apparent.higgs import HiggsTriple, ReducibleError, primitive_section
from apparent.linalg import mat, mat_eval, mat_vec
from apparent.oper import ScalarOperator, monic_from_diffop

__all__ = [
    "ConnectionTriple",
    "nabla_power",
    "derham_section",
    "scalar_from_triple",
    "companion_connection",
    "local_normal_form",
    "filtration_rank_at",
    "LocalNormalForm",
]


@dataclass(frozen=True)
class ConnectionTriple:
    """Rank-n lambda-connection triple: operator lambda*d + A on the
    trivialized bundle, with a primitive section vector s."""

    n: int
    lam: GRat
    A: tuple
    s: tuple
    marked: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "lam", GRat(self.lam))
        object.__setattr__(self, "A", mat(self.A))
        object.__setattr__(self, "s", primitive_section(self.s))

    def as_higgs(self) -> HiggsTriple:
        if self.lam:
            raise ValueError("lambda != 0; not a Higgs triple")
        return HiggsTriple(self.n, self.A, self.s, self.marked)


def nabla_power(t: ConnectionTriple, k: int) -> tuple:
    """(lambda d + A)^k applied to s, exactly."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    v = t.s
    for _ in range(k):
        v = tuple(t.lam * x.derivative() + y
                  for x, y in zip(v, mat_vec(t.A, v)))
    return v


def _iterates(t: ConnectionTriple) -> list:
    out = [t.s]
    for _ in range(t.n - 1):
        v = out[-1]
        out.append(tuple(t.lam * x.derivative() + y
                         for x, y in zip(v, mat_vec(t.A, v))))
    return out


def derham_section(t: ConnectionTriple) -> RatFun:
    """det of the nabla-iterate columns; for lambda = 0 this is the Higgs
    section, for A = 0, lambda = 1 the classical Wronskian."""
    cols = _iterates(t)
    return linalg.det(mat(zip(*cols)))


def scalar_from_triple(t: ConnectionTriple) -> ScalarOperator:
    """The monic operator whose solutions are pairings of s against flat
    frames of the dual connection.

    Built from the cyclic-vector relation: with M_k the determinant of the
    iterate columns omitting the k-th, the operator is
    sum_k (-1)^{n-k} M_k lambda^k d^k, then normalized monic.  Its cleared
    principal symbol equals the section exactly.
    """
    if not t.lam:
        raise ValueError("scalar operator needs lambda != 0")
    cols = _iterates(t)
    v = cols[-1]
    cols.append(tuple(t.lam * x.derivative() + y
                      for x, y in zip(v, mat_vec(t.A, v))))
    section = linalg.det(mat(zip(*cols[:t.n])))
    if section.is_zero:
        raise ReducibleError("section vanishes identically; "
                             "the dual connection is reducible")
    coeffs = []
    lam_pow = GR_ONE
    for k in range(t.n + 1):
        omit = cols[:k] + cols[k + 1:]
        det_k = linalg.det(mat(zip(*omit)))
        sign = -1 if (t.n - k) % 2 else 1
        coeffs.append(det_k * lam_pow * sign)
        lam_pow = lam_pow * t.lam
    op = monic_from_diffop(tuple(coeffs))
    return ScalarOperator(op.n, op.a, symbol=section)


def companion_connection(op: ScalarOperator) -> ConnectionTriple:
    """First-order realization with the oper subdiagonal.

    The matrix is the transpose of the classical companion matrix, so the
    dual flat sections are solution jets (y, y', ..., y^{(n-1)}) and
    scalar_from_triple with s = e_1 inverts this construction exactly.
    """
    n = op.n
    zero, one = RatFun(0), RatFun(1)
    a_mat = [[zero for _ in range(n)] for _ in range(n)]
    for j in range(n - 1):
        a_mat[j + 1][j] = one
    for i in range(n):
        a_mat[i][n - 1] = -op.a[n - 1 - i]
    s = [one] + [zero] * (n - 1)
    marked = []
    for p in op.singular_points():
        if not any(points_coincide(p, q) for q in marked):
            marked.append(p)
    return ConnectionTriple(n, GRat(1), a_mat, s, tuple(marked))


# ---------------------------------------------------------------------------
# Local normal form at a simple section zero
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalNormalForm:
    point: GRat
    v: GRat
    frame: tuple           # columns: s, Ds, ..., D^{n-2}s, Hecke vector
    dual_matrix: tuple     # dual connection in the reversed dual frame

    def pattern_residuals(self) -> dict:
        """Exact residuals of the pattern entries the construction pins:
        (2,1) + (z - p), the +1 shifts on the subdiagonal of rows >= 3,
        everything below the subdiagonal, and (1,1)(p) - v."""
        n = len(self.dual_matrix)
        zp = RatFun(Poly([-self.point, GR_ONE]))
        out = {"sub21": self.dual_matrix[1][0] + zp,
               "diag_value": self.dual_matrix[0][0].eval(self.point) - self.v}
        for i in range(2, n):
            out[f"sub{i + 1}{i}"] = self.dual_matrix[i][i - 1] + RatFun(1)
        for i in range(2, n):
            for j in range(i - 1):
                out[f"low{i + 1}{j + 1}"] = self.dual_matrix[i][j]
        return out


def filtration_rank_at(t: ConnectionTriple, p: GRat) -> int:
    """Rank at p of the first n-1 iterate columns (the subbundle test)."""
    cols = _iterates(t)[: t.n - 1]
    vals = mat([[c.eval(p) for c in col] for col in cols])
    return linalg.grat_rank(vals)


def local_normal_form(t: ConnectionTriple, p) -> LocalNormalForm:
    """Filtration-adapted gauge of the dual connection at a simple zero p.

    The frame is (s, Ds, ..., D^{n-2}s, h) with h the Hecke vector
    (D^{n-1}s - sum c_k D^{k-1}s)/(z - p), constants c_k taken from the rank
    drop at p.  In the reversed dual frame the dual connection has exact
    subdiagonal (-(z-p), -1, ..., -1), exact zeros below it, and its (1,1)
    entry at p is the residue parameter in the DM07 normalization, matching
    oper.residue_parameter of the triple's scalar operator.  (The literal
    symmetric splitting diag(v, -v) of the top block corresponds to the
    rigidified local trivialization and differs by the (n-1)/n multiple of
    the subprincipal constant; see the module docs.)
    """
    if not isinstance(p, GRat):
        raise TypeError("local normal form needs an exact point")
    if not t.lam:
        raise ValueError("lambda = 0 has no local connection normal form")
    sec = derham_section(t)
    if sec.is_zero:
        raise ReducibleError("section vanishes identically")
    num_shift = sec.num.shift(p)
    if not num_shift[0].is_zero or num_shift[1].is_zero \
            or not sec.is_regular_at(p):
        raise ValueError(f"{p!r} is not a simple zero of the section")
    n = t.n
    cols = _iterates(t)
    top = tuple(t.lam * x.derivative() + y
                for x, y in zip(cols[-1], mat_vec(t.A, cols[-1])))
    # constants c_k with D^{n-1}s(p) = sum c_k D^{k-1}s(p)
    vals = mat([[c.eval(p) for c in col] for col in cols[: n - 1]])
    rhs = tuple(c.eval(p) for c in cols[n - 1]) if n >= 2 else ()
    sq = mat([[vals[j][i] for j in range(n - 1)] for i in range(n)])
    consts = _solve_overdetermined(sq, rhs)
    zp = RatFun(Poly([-p, GR_ONE]))
    h = []
    for i in range(n):
        acc = cols[n - 1][i]
        for k in range(n - 1):
            acc = acc - consts[k] * cols[k][i]
        h.append(acc / zp)
        if not h[-1].is_regular_at(p):
            raise ValueError("Hecke vector failed exact division; "
                             "zero not simple")
    frame_cols = cols[: n - 1] + [tuple(h)]
    frame = mat(zip(*frame_cols))
    finv = linalg.mat_inverse(frame)
    dframe = mat([[entry.derivative() for entry in row] for row in frame])
    b_new = linalg.mat_mul(finv, linalg.mat_add(
        linalg.mat_scale(dframe, RatFun(Poly([t.lam]))),
        linalg.mat_mul(t.A, frame)))
    # dual in the reversed dual frame: J (-B^T) J
    m = [[-b_new[n - 1 - j][n - 1 - i] for j in range(n)] for i in range(n)]
    v = -b_new[n - 1][n - 1].eval(p)
    return LocalNormalForm(p, v, frame, mat(m))


def _solve_overdetermined(a, rhs):
    """Solve a (rows >= cols) exact system known to be consistent."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    work = [list(r) + [rhs[i]] for i, r in enumerate(a)]
    piv_rows = []
    r = 0
    for c in range(cols):
        piv = None
        for rr in range(r, rows):
            if work[rr][c]:
                piv = rr
                break
        if piv is None:
            raise ValueError("rank-deficient filtration at the point")
        work[r], work[piv] = work[piv], work[r]
        pval = work[r][c]
        work[r] = [x / pval for x in work[r]]
        for rr in range(rows):
            if rr != r and work[rr][c]:
                f = work[rr][c]
                work[rr] = [x - f * y for x, y in zip(work[rr], work[r])]
        piv_rows.append(c)
        r += 1
    for rr in range(r, rows):
        if work[rr][cols]:
            raise ValueError("inconsistent filtration system")
    return tuple(work[i][cols] for i in range(cols))
