"""Small dense linear algebra over RatFun and over Q(i) constants.

Matrices are tuples of tuples.  Sizes stay at desk scale (n <= 5), so
cofactor expansion and fraction-field Gaussian elimination are fine.
"""

from __future__ import annotations

from apparent.exact import GR_ONE, GR_ZERO, GRat, Poly, RatFun

Matrix = tuple  # tuple of row tuples


def mat(rows) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(n: int, one=None) -> Matrix:
    one = RatFun(1) if one is None else one
    zero = one - one
    return mat([[one if i == j else zero for j in range(n)] for i in range(n)])


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return mat([[a[i][j] + b[i][j] for j in range(len(a[0]))]
                for i in range(len(a))])

def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return mat([[a[i][j] - b[i][j] for j in range(len(a[0]))]
                for i in range(len(a))])


def mat_scale(a: Matrix, c) -> Matrix:
    return mat([[x * c for x in row] for row in a])


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = a[i][0] * b[0][j]
            for l in range(1, k):
                acc = acc + a[i][l] * b[l][j]
            row.append(acc)
        out.append(row)
    return mat(out)


def mat_vec(a: Matrix, v) -> tuple:
    out = []
    for row in a:
        acc = row[0] * v[0]
        for l in range(1, len(v)):
            acc = acc + row[l] * v[l]
        out.append(acc)
    return tuple(out)


def transpose(a: Matrix) -> Matrix:
    return mat(zip(*a))


def det(a: Matrix):
    """Determinant by cofactor expansion along the first row."""
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    out = None
    for j in range(n):
        if not a[0][j]:
            continue
        minor = [tuple(row[:j] + row[j + 1:]) for row in a[1:]]
        term = a[0][j] * det(mat(minor))
        if j % 2:
            term = -term
        out = term if out is None else out + term
    if out is None:
        zero = a[0][0] - a[0][0]
        return zero
    return out


def mat_inverse(a: Matrix) -> Matrix:
    """Inverse over a field (RatFun or GRat entries) by Gauss-Jordan."""
    n = len(a)
    work = [list(row) for row in a]
    one = _one_like(a[0][0])
    zero = one - one
    inv = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if work[r][col]:
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        work[col], work[piv] = work[piv], work[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        p = work[col][col]
        work[col] = [x / p for x in work[col]]
        inv[col] = [x / p for x in inv[col]]
        for r in range(n):
            if r == col or not work[r][col]:
                continue
            f = work[r][col]
            work[r] = [x - f * y for x, y in zip(work[r], work[col])]
            inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return mat(inv)


def _one_like(x):
    if isinstance(x, RatFun):
        return RatFun(1)
    if isinstance(x, GRat):
        return GRat(1)
    return 1


def mat_eval(a: Matrix, p) -> Matrix:
    """Evaluate a RatFun matrix at an exact point."""
    return mat([[entry.eval(p) for entry in row] for row in a])


def mat_eval_complex(a: Matrix, z):
    import numpy as np
    return np.array([[entry.eval_complex(z) for entry in row] for row in a],
                    dtype=complex)


def grat_solve(a: Matrix, b: tuple) -> tuple:
    """Solve a GRat linear system exactly (square, nonsingular)."""
    n = len(a)
    work = [list(row) + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if work[r][col]:
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("singular system")
        work[col], work[piv] = work[piv], work[col]
        p = work[col][col]
        work[col] = [x / p for x in work[col]]
        for r in range(n):
            if r == col or not work[r][col]:
                continue
            f = work[r][col]
            work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return tuple(work[i][n] for i in range(n))


def grat_left_kernel(a: Matrix) -> list[tuple]:
    """Basis of the left kernel {w : w^T a = 0} of a GRat matrix."""
    return grat_kernel(transpose(a))


def grat_kernel(a: Matrix) -> list[tuple]:
    """Basis of the right kernel of a GRat matrix, by exact row reduction."""
    rows = len(a)
    cols = len(a[0])
    work = [list(r) for r in a]
    pivots = []
    r = 0
    for c in range(cols):
        piv = None
        for rr in range(r, rows):
            if work[rr][c]:
                piv = rr
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        p = work[r][c]
        work[r] = [x / p for x in work[r]]
        for rr in range(rows):
            if rr != r and work[rr][c]:
                f = work[rr][c]
                work[rr] = [x - f * y for x, y in zip(work[rr], work[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [GR_ZERO] * cols
        v[fc] = GR_ONE
        for i, pc in enumerate(pivots):
            v[pc] = -work[i][fc]
        basis.append(tuple(v))
    return basis


def grat_rank(a: Matrix) -> int:
    return len(a[0]) - len(grat_kernel(a))


def fieldpoly_divmod(a: list, b: list) -> tuple[list, list]:
    """Division with remainder for polynomials given as low->high coefficient
    lists over any field (entries support arithmetic and truthiness)."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    a = list(a)
    db, lead = len(b) - 1, b[-1]
    q = [a[0] - a[0]] * max(0, len(a) - len(b) + 1)
    while len(a) - 1 >= db and any(bool(c) for c in a):
        while a and not a[-1]:
            a.pop()
        if len(a) - 1 < db:
            break
        k = len(a) - 1 - db
        c = a[-1] / lead
        q[k] = c
        for j, bj in enumerate(b):
            a[k + j] = a[k + j] - c * bj
        a.pop()
    while a and not a[-1]:
        a.pop()
    return q, a


def fieldpoly_resultant(a: list, b: list):
    """Resultant of two field-coefficient polynomials (low->high lists)."""
    if not a or not b:
        raise ValueError("resultant needs nonzero polynomials")
    one = a[-1] / a[-1]
    sign = one
    res = one
    a, b = list(a), list(b)
    while len(b) > 1:
        _, r = fieldpoly_divmod(a, b)
        if not r:
            return one - one
        da, db, dr = len(a) - 1, len(b) - 1, len(r) - 1
        res = res * b[-1] ** (da - dr)
        if (da * db) % 2:
            sign = -sign
        a, b = b, r
    return sign * res * b[-1] ** (len(a) - 1)


def char_poly_coeffs(a: Matrix) -> list:
    """Coefficients b_1..b_n with det(tI - a) = t^n + b_1 t^{n-1} + ... + b_n.

    Faddeev-LeVerrier over the entry field; exact for RatFun/GRat entries.
    """
    n = len(a)
    one = _one_like(a[0][0])
    zero = one - one
    coeffs = []
    m = a
    for k in range(1, n + 1):
        tr = zero
        for i in range(n):
            tr = tr + m[i][i]
        c = -(tr / k)
        coeffs.append(c)
        if k < n:
            m = mat_mul(a, mat_add(m, mat_scale(identity(n, one), c)))
    return coeffs
