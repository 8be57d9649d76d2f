"""Complex-coefficient rational functions without reduction.

Solutions of residue systems found by path tracking are floating complex
numbers; operators reconstructed from them need coefficient functions that
can be evaluated and differentiated but not reduced.  Degrees stay tiny at
desk scale, so an unreduced numerator/denominator pair is enough.
"""

from __future__ import annotations

import numpy as np

__all__ = ["CPoly", "CRat"]


class CPoly:
    """Dense complex polynomial, coefficients low -> high."""

    __slots__ = ("c",)

    def __init__(self, c=()):
        arr = [complex(x) for x in c]
        while arr and arr[-1] == 0:
            arr.pop()
        self.c = tuple(arr)

    def __bool__(self):
        return bool(self.c)

    @property
    def degree(self):
        return len(self.c) - 1

    def __add__(self, o):
        o = o if isinstance(o, CPoly) else CPoly([o])
        n = max(len(self.c), len(o.c))
        return CPoly([(self.c[k] if k < len(self.c) else 0)
                      + (o.c[k] if k < len(o.c) else 0) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return CPoly([-x for x in self.c])

    def __sub__(self, o):
        o = o if isinstance(o, CPoly) else CPoly([o])
        return self + (-o)

    def __mul__(self, o):
        o = o if isinstance(o, CPoly) else CPoly([o])
        if not self.c or not o.c:
            return CPoly()
        out = [0j] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            for j, b in enumerate(o.c):
                out[i + j] += a * b
        return CPoly(out)

    __rmul__ = __mul__

    def derivative(self):
        return CPoly([k * self.c[k] for k in range(1, len(self.c))])

    def eval(self, z):
        out = 0j
        for a in reversed(self.c):
            out = out * z + a
        return out

    def roots(self):
        if len(self.c) <= 1:
            return []
        return list(np.roots(list(reversed(self.c))))


class CRat:
    """Unreduced quotient of complex polynomials."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        self.num = num if isinstance(num, CPoly) else CPoly(
            num if isinstance(num, (list, tuple)) else [num])
        if den is None:
            den = CPoly([1.0])
        self.den = den if isinstance(den, CPoly) else CPoly(
            den if isinstance(den, (list, tuple)) else [den])
        if not self.den:
            raise ZeroDivisionError("zero denominator")

    @staticmethod
    def x():
        return CRat(CPoly([0, 1]))

    def __bool__(self):
        return bool(self.num)

    def _coerce(self, o):
        if isinstance(o, CRat):
            return o
        return CRat(CPoly([complex(o)]))

    def __add__(self, o):
        o = self._coerce(o)
        return CRat(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return CRat(-self.num, self.den)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) + (-self)

    def __mul__(self, o):
        o = self._coerce(o)
        return CRat(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._coerce(o)
        return CRat(self.num * o.den, self.den * o.num)

    def derivative(self):
        return CRat(self.num.derivative() * self.den
                    - self.num * self.den.derivative(),
                    self.den * self.den)

    def eval(self, z):
        return self.num.eval(z) / self.den.eval(z)

    # mirror the RatFun helpers used by generic operator code
    def eval_complex(self, z):
        return self.eval(z)

    @property
    def is_zero(self):
        return not self.num
