"""Exact arithmetic substrate: Gaussian rationals, univariate polynomials and
rational functions over them, truncated Laurent expansions, and certified root
finding.

Everything downstream (matrices of rational functions, Wronskian sections,
scalar operators, residue-parameter systems) is built on the field Q(i).
Identities that can hold exactly are tested exactly; floating point enters
only at genuinely algebraic points, which are carried as certified complex
values (midpoint + radius) refined by Newton iteration at 128..1024 bits.

Points at infinity are never expanded here; callers chart-change with
w = 1/z first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np
import sympy

__all__ = [
    "GRat",
    "Poly",
    "RatFun",
    "LaurentJet",
    "CertifiedComplex",
    "Divisor",
    "laurent_expand",
    "roots_with_multiplicity",
    "RootIsolationError",
    "TruncationError",
    "try_sqrt",
    "points_coincide",
    "point_to_complex",
    "GR_ZERO",
    "GR_ONE",
    "RF_ZERO",
    "RF_ONE",
]

DEFAULT_PRECISION = 128
MAX_PRECISION = 1024

import os as _os
if _os.environ.get("APPARENT_PREC_CAP"):
    MAX_PRECISION = max(DEFAULT_PRECISION,
                        int(_os.environ["APPARENT_PREC_CAP"]))


def set_precision_cap(bits: int) -> None:
    """Raise or lower the certified-refinement precision ceiling."""
    global MAX_PRECISION
    MAX_PRECISION = max(DEFAULT_PRECISION, int(bits))


class TruncationError(ValueError):
    """Requested expansion order is below the pole order at the center."""


class RootIsolationError(ArithmeticError):
    """Root cluster could not be separated at the maximum working precision."""


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

class GRat:
    """An element a + b*i of Q(i), with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GRat):
            self.re, self.im = re.re, re.im
            return
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def i() -> "GRat":
        return GRat(0, 1)

    @staticmethod
    def parse(text: str) -> "GRat":
        """Parse "p/q", "p/q+r/s*i", "p/q-r/s*i", "r/s*i", "i", "-i"."""
        s = text.strip().replace(" ", "")
        if not s:
            raise ValueError("empty Gaussian rational")
        if not s.endswith("i"):
            return GRat(Fraction(s))
        body = s[:-1]
        if body.endswith("*"):
            body = body[:-1]
        # split off the real part at the last top-level +/- (skip position 0)
        split = -1
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "+-/*e":
                split = k
                break
        if split == -1:
            imag = body if body not in ("", "+", "-") else body + "1"
            return GRat(0, Fraction(imag))
        re_part = body[:split]
        im_part = body[split:]
        if im_part in ("+", "-"):
            im_part += "1"
        return GRat(Fraction(re_part), Fraction(im_part))

    # -- predicates --------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    @property
    def is_zero(self) -> bool:
        return not self

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, GRat):
            return other
        if isinstance(other, (int, Fraction)):
            return GRat(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GRat(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GRat(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GRat(self.re * o.re - self.im * o.im,
                    self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GRat((self.re * o.re + self.im * o.im) / n,
                    (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return GRat(1) / self ** (-k)
        out = GRat(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "GRat":
        return GRat(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    # -- comparisons, hashing ----------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    # -- conversions ---------------------------------------------------------

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __complex__(self) -> complex:
        return self.to_complex()

    def to_mpc(self) -> mpmath.mpc:
        return mpmath.mpc(mpmath.mpf(self.re.numerator) / self.re.denominator,
                          mpmath.mpf(self.im.numerator) / self.im.denominator)

    def to_json(self) -> str:
        if self.im == 0:
            return str(self.re)
        im = f"{self.im}*i"
        if self.re == 0:
            return im
        sign = "+" if self.im >= 0 else ""
        return f"{self.re}{sign}{im}"

    def __repr__(self):
        return f"GRat({self.to_json()!r})"


GR_ZERO = GRat(0)
GR_ONE = GRat(1)


def try_sqrt(w: GRat) -> GRat | None:
    """Exact square root of w in Q(i), or None if w is not a square there."""
    if not w:
        return GR_ZERO
    # |w| must be a rational square for sqrt(w) to lie in Q(i)
    n2 = w.norm2()
    m = _frac_sqrt(n2)
    if m is None:
        return None
    # a^2 = (re + |w|)/2, b = im/(2a);  fall back to the a=0 branch
    a2 = (w.re + m) / 2
    a = _frac_sqrt(a2)
    if a is not None and a != 0:
        b = w.im / (2 * a)
        cand = GRat(a, b)
        if cand * cand == w:
            return cand
    b2 = (m - w.re) / 2
    b = _frac_sqrt(b2)
    if b is not None:
        for bb in (b, -b):
            cand = GRat(0, bb)
            if cand * cand == w:
                return cand
    return None


def _frac_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


# ---------------------------------------------------------------------------
# Dense univariate polynomials over Q(i)
# ---------------------------------------------------------------------------

def _as_grat(x) -> GRat:
    return x if isinstance(x, GRat) else GRat(x)


class Poly:
    """Dense univariate polynomial over Q(i), coefficients low -> high.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):  # noqa: D401
        cs = [_as_grat(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- basics --------------------------------------------------------------

    @staticmethod
    def const(c) -> "Poly":
        return Poly([c])

    @staticmethod
    def x() -> "Poly":
        return Poly([0, 1])

    @staticmethod
    def monomial(k: int, c=1) -> "Poly":
        return Poly([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> GRat:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return GR_ZERO

    def leading(self) -> GRat:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    # -- ring operations -------------------------------------------------------

    def __add__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly([self[k] + o[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        if not self or not o:
            return Poly()
        out = [GR_ZERO] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = _as_grat(c)
        return Poly([a * c for a in self.coeffs])

    def __pow__(self, k: int):
        out = Poly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        q = [GR_ZERO] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        lead = other.leading()
        dn = other.degree
        while len(r) - 1 >= dn and any(bool(c) for c in r):
            while r and not r[-1]:
                r.pop()
            if len(r) - 1 < dn:
                break
            k = len(r) - 1 - dn
            c = r[-1] / lead
            q[k] = c
            for j, b in enumerate(other.coeffs):
                r[k + j] = r[k + j] - c * b
            r.pop()
        return Poly(q), Poly(r)

    def __floordiv__(self, other):
        return self.divmod(_as_poly(other))[0]

    def __mod__(self, other):
        return self.divmod(_as_poly(other))[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("exact_div with nonzero remainder")
        return q

    # -- calculus, evaluation ---------------------------------------------------

    def derivative(self) -> "Poly":
        return Poly([self.coeffs[k] * k for k in range(1, len(self.coeffs))])

    def eval(self, p) -> GRat:
        p = _as_grat(p)
        out = GR_ZERO
        for c in reversed(self.coeffs):
            out = out * p + c
        return out

    def eval_complex(self, z):
        out = 0j if not isinstance(z, mpmath.mpc) else mpmath.mpc(0)
        for c in reversed(self.coeffs):
            if isinstance(z, mpmath.mpc):
                out = out * z + c.to_mpc()
            else:
                out = out * z + c.to_complex()
        return out

    def shift(self, p) -> "Poly":
        """Taylor shift: returns q with q(s) = self(s + p)."""
        p = _as_grat(p)
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * Poly([p, 1]) + Poly([c])
        return out

    def compose_poly(self, g: "Poly") -> "Poly":
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * g + Poly([c])
        return out

    # -- gcd machinery ---------------------------------------------------------

    def monic(self) -> "Poly":
        if not self:
            return self
        lead = self.leading()
        return Poly([c / lead for c in self.coeffs])

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while b:
            a, b = b, a % b
            if b:
                b = b.monic()
        return a.monic() if a else Poly()

    def squarefree_part(self) -> "Poly":
        if self.degree <= 0:
            return self.monic() if self else Poly()
        g = self.gcd(self.derivative())
        if g.degree == 0:
            return self.monic()
        return self.exact_div(g).monic()

    def is_squarefree(self) -> bool:
        if self.degree <= 0:
            return True
        return self.gcd(self.derivative()).degree == 0

    def resultant(self, other: "Poly") -> GRat:
        """Resultant via the Euclidean remainder sequence over the field."""
        a, b = self, other
        if not a or not b:
            return GR_ZERO
        res = GR_ONE
        while b.degree > 0:
            r = a % b
            if not r:
                return GR_ZERO
            res = res * (b.leading() ** (a.degree - r.degree)) \
                * (GRat(-1) ** (a.degree * b.degree))
            a, b = b, r
        return res * b.leading() ** a.degree

    # -- misc ----------------------------------------------------------------

    def __eq__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def to_sympy(self, var):
        expr = sympy.Integer(0)
        for k, c in enumerate(self.coeffs):
            sc = sympy.Rational(c.re.numerator, c.re.denominator) \
                + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)
            expr += sc * var ** k
        return expr

    @staticmethod
    def from_sympy(expr, var) -> "Poly":
        p = sympy.Poly(expr, var, domain="QQ_I")
        cs = [GR_ZERO] * (p.degree() + 1 if p.degree() >= 0 else 0)
        for (k,), c in p.terms():
            cc = sympy.expand(c)
            re = sympy.re(cc)
            im = sympy.im(cc)
            cs[k] = GRat(Fraction(int(re.p), int(re.q)),
                         Fraction(int(im.p), int(im.q)))
        return Poly(cs)

    def __repr__(self):
        if not self:
            return "Poly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"({c.to_json()})*z^{k}")
        return "Poly(" + " + ".join(terms) + ")"


def _as_poly(x) -> Poly | None:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction, GRat)):
        return Poly([x])
    return None


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------

class RatFun:
    """Reduced rational function num/den over Q(i); den monic, gcd = 1.

    The zero function is 0/1.  Normalization is canonical, so equality of
    representations is equality of functions.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        num = _as_poly(num) if not isinstance(num, Poly) else num
        if den is None:
            den = Poly([1])
        else:
            den = _as_poly(den) if not isinstance(den, Poly) else den
        if num is None or den is None:
            raise TypeError("RatFun needs polynomial data")
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = Poly(), Poly([1])
            return
        if not _reduced:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
            lead = den.leading()
            if not (lead == GR_ONE):
                num = num.scale(GR_ONE / lead)
                den = den.scale(GR_ONE / lead)
        self.num, self.den = num, den

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def const(c) -> "RatFun":
        return RatFun(Poly([c]))

    @staticmethod
    def x() -> "RatFun":
        return RatFun(Poly.x())

    @staticmethod
    def from_poly(p: Poly) -> "RatFun":
        return RatFun(p)

    # -- predicates ---------------------------------------------------------

    def __bool__(self):
        return bool(self.num)

    @property
    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    # -- field operations ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatFun):
            return other
        if isinstance(other, (int, Fraction, GRat, Poly)):
            return RatFun(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by the zero function")
        return RatFun(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return (RatFun(1) / self) ** (-k)
        return RatFun(self.num ** k, self.den ** k)

    def derivative(self) -> "RatFun":
        return RatFun(self.num.derivative() * self.den
                      - self.num * self.den.derivative(),
                      self.den * self.den)

    # -- evaluation and local data ------------------------------------------

    def eval(self, p) -> GRat:
        p = _as_grat(p)
        d = self.den.eval(p)
        if not d:
            raise ZeroDivisionError(f"pole at {p!r}")
        return self.num.eval(p) / d

    def eval_complex(self, z):
        return self.num.eval_complex(z) / self.den.eval_complex(z)

    def is_regular_at(self, p) -> bool:
        return bool(self.den.eval(_as_grat(p)))

    def pole_order_at(self, p) -> int:
        """Order of the pole at exact p (0 if regular there)."""
        p = _as_grat(p)
        k = 0
        den = self.den
        while not den.eval(p):
            den = den.exact_div(Poly([-p, 1]))
            k += 1
        return k

    def compose_rat(self, g: "RatFun") -> "RatFun":
        """self(g(w)) as a rational function of w."""
        num = RatFun(0)
        for c in reversed(self.num.coeffs):
            num = num * g + RatFun(Poly([c]))
        den = RatFun(0)
        for c in reversed(self.den.coeffs):
            den = den * g + RatFun(Poly([c]))
        return num / den

    def shift(self, p) -> "RatFun":
        """self(s + p) as a rational function of s."""
        return RatFun(self.num.shift(p), self.den.shift(p))

    def degree_at_infinity(self) -> int:
        """Order of vanishing at infinity (negative if it blows up)."""
        if not self.num:
            raise ValueError("zero function")
        return self.den.degree - self.num.degree

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def to_json(self) -> dict:
        return {"num": [c.to_json() for c in self.num.coeffs],
                "den": [c.to_json() for c in self.den.coeffs]}

    @staticmethod
    def from_json(obj) -> "RatFun":
        if isinstance(obj, str):
            return RatFun(Poly([GRat.parse(obj)]))
        if isinstance(obj, (int, float)):
            return RatFun(Poly([GRat(Fraction(obj))]))
        num = Poly([GRat.parse(c) for c in obj["num"]])
        den = Poly([GRat.parse(c) for c in obj.get("den", ["1"])])
        return RatFun(num, den)

    def __repr__(self):
        if self.den.degree == 0:
            return f"RatFun({self.num!r})"
        return f"RatFun({self.num!r} / {self.den!r})"


RF_ZERO = RatFun(0)
RF_ONE = RatFun(1)


# ---------------------------------------------------------------------------
# Certified complex values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CertifiedComplex:
    """Algebraic point beyond Q(i): midpoint at working precision + radius."""

    mid: mpmath.mpc
    rad: mpmath.mpf
    prec: int = DEFAULT_PRECISION

    def to_complex(self) -> complex:
        return complex(self.mid)

    def overlaps(self, other: "CertifiedComplex") -> bool:
        return abs(self.mid - other.mid) <= self.rad + other.rad

    def matches(self, other) -> bool:
        if isinstance(other, GRat):
            return abs(self.mid - other.to_mpc()) <= self.rad
        if isinstance(other, CertifiedComplex):
            return self.overlaps(other)
        return abs(self.mid - mpmath.mpc(other)) <= self.rad

    def to_json(self) -> dict:
        return {"re": mpmath.nstr(self.mid.real, 25),
                "im": mpmath.nstr(self.mid.imag, 25),
                "rad": mpmath.nstr(self.rad, 5)}

    def __repr__(self):
        return (f"CertifiedComplex({mpmath.nstr(self.mid, 17)}, "
                f"rad={mpmath.nstr(self.rad, 3)})")


def point_to_complex(p) -> complex:
    if isinstance(p, GRat):
        return p.to_complex()
    if isinstance(p, CertifiedComplex):
        return p.to_complex()
    return complex(p)


def points_coincide(p, q) -> bool:
    """Equality for divisor points: exact where exact, radius-aware otherwise."""
    if isinstance(p, GRat) and isinstance(q, GRat):
        return p == q
    if isinstance(p, CertifiedComplex):
        return p.matches(q)
    if isinstance(q, CertifiedComplex):
        return q.matches(p)
    a, b = point_to_complex(p), point_to_complex(q)
    return abs(a - b) <= 1e-11 * max(1.0, abs(a), abs(b))


# ---------------------------------------------------------------------------
# Divisors
# ---------------------------------------------------------------------------

class Divisor:
    """Effective divisor: distinct points with positive multiplicities."""

    __slots__ = ("points",)

    def __init__(self, points: Sequence[tuple] = ()):  # [(location, mult)]
        merged: list[list] = []
        for p, m in points:
            if m <= 0:
                raise ValueError("multiplicities must be positive")
            for entry in merged:
                if points_coincide(entry[0], p):
                    entry[1] += m
                    break
            else:
                merged.append([p, m])
        merged.sort(key=lambda e: (point_to_complex(e[0]).real,
                                   point_to_complex(e[0]).imag))
        self.points = tuple((p, m) for p, m in merged)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.points)

    def is_reduced(self) -> bool:
        return all(m == 1 for _, m in self.points)

    def is_empty(self) -> bool:
        return not self.points

    def locations(self):
        return [p for p, _ in self.points]

    def multiplicity_at(self, p) -> int:
        for q, m in self.points:
            if points_coincide(p, q):
                return m
        return 0

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(list(self.points) + list(other.points))

    def same_multiset(self, other: "Divisor") -> bool:
        if self.degree != other.degree or len(self.points) != len(other.points):
            return False
        used = [False] * len(other.points)
        for p, m in self.points:
            for k, (q, mm) in enumerate(other.points):
                if not used[k] and m == mm and points_coincide(p, q):
                    used[k] = True
                    break
            else:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return self.same_multiset(other)

    def __iter__(self):
        return iter(self.points)

    def __repr__(self):
        return f"Divisor({list(self.points)!r})"


# ---------------------------------------------------------------------------
# Laurent jets
# ---------------------------------------------------------------------------

class LaurentJet:
    """Truncated Laurent expansion around a finite center.

    Coefficients run lowest_order..truncation_order inclusive; they are exact
    GRat when the center is exact, complex otherwise.  The leading stored
    coefficient is nonzero unless the jet is identically zero to truncation.
    """

    __slots__ = ("center", "lowest_order", "coefficients", "truncation_order")

    def __init__(self, center, lowest_order: int, coefficients: Sequence,
                 truncation_order: int):
        coefficients = list(coefficients)
        # normalize: strip leading (low-order) zeros
        while coefficients and not coefficients[0]:
            coefficients.pop(0)
            lowest_order += 1
        if not coefficients:
            lowest_order = truncation_order + 1
        if truncation_order < lowest_order - 1:
            raise ValueError("truncation_order below lowest_order")
        self.center = center
        self.lowest_order = lowest_order
        self.coefficients = coefficients
        self.truncation_order = truncation_order

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, k: int):
        """Coefficient of (z - center)^k; raises if k beyond truncation."""
        if k > self.truncation_order:
            raise TruncationError(f"order {k} beyond truncation "
                                  f"{self.truncation_order}")
        if k < self.lowest_order:
            return GR_ZERO if self._exact() else 0j
        return self.coefficients[k - self.lowest_order]

    def _exact(self) -> bool:
        return all(isinstance(c, GRat) for c in self.coefficients)

    def eval(self, h):
        """Evaluate the truncated jet at center + h (numerically)."""
        z = complex(h)
        out = 0j
        for c in reversed(self.coefficients):
            cc = c.to_complex() if isinstance(c, GRat) else complex(c)
            out = out * z + cc
        return out * z ** self.lowest_order

    def __repr__(self):
        return (f"LaurentJet(center={self.center!r}, low={self.lowest_order}, "
                f"coeffs={self.coefficients!r}, trunc={self.truncation_order})")


def _poly_local_series(p: Poly, center: GRat, length: int) -> tuple[int, list]:
    """Shift p to the center and peel the leading power: p(c+s) = s^k * unit."""
    sh = p.shift(center)
    k = 0
    while k <= sh.degree and not sh[k]:
        k += 1
    return k, [sh[k + j] for j in range(length)]


def _series_inverse(c: list, length: int) -> list:
    """Multiplicative inverse of a unit power series, exact coefficients."""
    inv = [GR_ONE / c[0]]
    for m in range(1, length):
        acc = GR_ZERO
        for j in range(1, m + 1):
            cj = c[j] if j < len(c) else GR_ZERO
            acc = acc + cj * inv[m - j]
        inv.append(-acc / c[0])
    return inv


def laurent_expand(f: RatFun, p, order: int) -> LaurentJet:
    """Laurent expansion of f at the finite point p through z^order.

    Exact for exact centers.  For certified/complex centers the expansion is
    computed in floating point at the certificate's precision.
    """
    if f.is_zero:
        return LaurentJet(p, order + 1, [], order)
    if isinstance(p, (GRat, int, Fraction)):
        p = _as_grat(p)
        length = order + 2 + f.num.degree + f.den.degree  # generous work length
        kn, num_ser = _poly_local_series(f.num, p, length)
        kd, den_ser = _poly_local_series(f.den, p, length)
        low = kn - kd
        if order < low:
            raise TruncationError(
                f"requested order {order} below leading order {low}")
        want = order - low + 1
        inv = _series_inverse(den_ser, want)
        out = []
        for m in range(want):
            acc = GR_ZERO
            for j in range(m + 1):
                a = num_ser[j] if j < len(num_ser) else GR_ZERO
                acc = acc + a * inv[m - j]
            out.append(acc)
        return LaurentJet(p, low, out, order)
    # numeric center: series arithmetic in complex floats at high precision
    z0 = p.mid if isinstance(p, CertifiedComplex) else mpmath.mpc(p)
    prec = p.prec if isinstance(p, CertifiedComplex) else DEFAULT_PRECISION
    with mpmath.workprec(prec):
        num_ser = _mp_shift_series(f.num, z0)
        den_ser = _mp_shift_series(f.den, z0)
        tiny = mpmath.mpf(2) ** (-prec // 2)
        kn = _leading_index(num_ser, tiny)
        kd = _leading_index(den_ser, tiny)
        low = kn - kd
        if order < low:
            raise TruncationError(
                f"requested order {order} below leading order {low}")
        want = order - low + 1
        ns = num_ser[kn:kn + want + 4] + [mpmath.mpc(0)] * want
        ds = den_ser[kd:kd + want + 4] + [mpmath.mpc(0)] * want
        inv = [1 / ds[0]]
        for m in range(1, want):
            acc = mpmath.mpc(0)
            for j in range(1, m + 1):
                acc += ds[j] * inv[m - j]
            inv.append(-acc / ds[0])
        out = []
        for m in range(want):
            acc = mpmath.mpc(0)
            for j in range(m + 1):
                acc += ns[j] * inv[m - j]
            out.append(acc)
    return LaurentJet(p, low, out, order)


def _mp_shift_series(poly: Poly, z0) -> list:
    cs = [c.to_mpc() for c in poly.coeffs]
    n = len(cs)
    out = [mpmath.mpc(0)] * n
    for c in reversed(cs):
        # multiply 'out' by (s + z0) and add c
        prev = out[:]
        for k in range(n - 1, 0, -1):
            out[k] = prev[k - 1] + prev[k] * z0
        out[0] = prev[0] * z0 + c
    return out


def _leading_index(series: list, tiny) -> int:
    scale = max((abs(c) for c in series), default=mpmath.mpf(1))
    for k, c in enumerate(series):
        if abs(c) > tiny * scale:
            return k
    return len(series)


# ---------------------------------------------------------------------------
# Certified root finding
# ---------------------------------------------------------------------------

_SYMPY_Z = sympy.symbols("_z_apparent")


def roots_with_multiplicity(poly: Poly) -> Divisor:
    """All roots of a nonzero polynomial, with multiplicities.

    Gaussian-rational roots are reported exactly (via factorization over
    Q(i)); the rest come back as certified complex values with isolation
    radii.  Total multiplicity equals the degree.
    """
    if not poly:
        raise ValueError("root finding needs a nonzero polynomial")
    if poly.degree == 0:
        return Divisor()
    expr = poly.to_sympy(_SYMPY_Z)
    _, factors = sympy.factor_list(expr, gaussian=True)
    points: list[tuple] = []
    for fac, mult in factors:
        fp = Poly.from_sympy(fac, _SYMPY_Z)
        if fp.degree == 0:
            continue
        if fp.degree == 1:
            root = -fp[0] / fp[1]
            points.append((root, mult))
            continue
        for cert in _certified_roots_of_irreducible(fp):
            points.append((cert, mult))
    div = Divisor(points)
    assert div.degree == poly.degree
    return div


def _certified_roots_of_irreducible(fp: Poly) -> list[CertifiedComplex]:
    """Certified roots of a squarefree (irreducible over Q(i)) polynomial."""
    seeds = np.roots([c.to_complex() for c in reversed(fp.coeffs)])
    deg = fp.degree
    der = fp.derivative()
    prec = DEFAULT_PRECISION
    while True:
        with mpmath.workprec(prec):
            roots = []
            ok = True
            for seed in seeds:
                x = mpmath.mpc(seed)
                for _ in range(prec):
                    fx = fp.eval_complex(x)
                    dfx = der.eval_complex(x)
                    if dfx == 0:
                        ok = False
                        break
                    step = fx / dfx
                    x = x - step
                    if abs(step) < mpmath.mpf(2) ** (-prec + 8) * max(1, abs(x)):
                        break
                if not ok:
                    break
                fx = fp.eval_complex(x)
                dfx = der.eval_complex(x)
                if dfx == 0:
                    ok = False
                    break
                rad = deg * abs(fx / dfx) + mpmath.mpf(2) ** (-prec + 16)
                roots.append(CertifiedComplex(x, mpmath.mpf(rad), prec))
            if ok and len(roots) == deg and _pairwise_isolated(roots):
                return roots
        prec *= 2
        if prec > MAX_PRECISION:
            radii = [mpmath.nstr(r.rad, 5) for r in roots] if roots else []
            raise RootIsolationError(
                f"roots not isolated at {MAX_PRECISION} bits; radii {radii}")


def _pairwise_isolated(roots: list[CertifiedComplex]) -> bool:
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if roots[i].overlaps(roots[j]):
                return False
    return True
