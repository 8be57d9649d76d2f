"""Minimal multivariate polynomials over Q(i): containers for the residue
parameter systems and their oracles.

A polynomial in v_1..v_m is a dict from exponent tuples to GRat.  Only what
the system assembly and the solvers need lives here: ring operations, partial
derivatives, evaluation, and conversion to univariate Poly form.
"""

from __future__ import annotations

from apparent.exact import GR_ONE, GR_ZERO, GRat, Poly

__all__ = ["MPoly"]


class MPoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for expo, c in (terms.items() if isinstance(terms, dict) else terms):
                c = c if isinstance(c, GRat) else GRat(c)
                if c:
                    expo = tuple(expo)
                    cur = self.terms.get(expo)
                    new = c if cur is None else cur + c
                    if new:
                        self.terms[expo] = new
                    elif expo in self.terms:
                        del self.terms[expo]

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(nvars: int, c) -> "MPoly":
        return MPoly(nvars, {(0,) * nvars: c})

    @staticmethod
    def var(nvars: int, k: int) -> "MPoly":
        e = [0] * nvars
        e[k] = 1
        return MPoly(nvars, {tuple(e): GR_ONE})

    # -- predicates ---------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, k: int) -> int:
        return max((e[k] for e in self.terms), default=0)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> GRat:
        return self.terms.get((0,) * self.nvars, GR_ZERO)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable-count mismatch")
            return other
        return MPoly.const(self.nvars, other)

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.terms)
        for e, c in o.terms.items():
            cur = out.get(e)
            new = c if cur is None else cur + c
            if new:
                out[e] = new
            elif e in out:
                del out[e]
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                cur = out.get(e)
                new = c if cur is None else cur + c
                if new:
                    out[e] = new
                elif e in out:
                    del out[e]
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def diff(self, k: int) -> "MPoly":
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                e2 = list(e)
                e2[k] -= 1
                out[tuple(e2)] = c * e[k]
        return MPoly(self.nvars, out)

    # -- evaluation -----------------------------------------------------------

    def eval_exact(self, values) -> GRat:
        out = GR_ZERO
        for e, c in self.terms.items():
            term = c
            for k, ek in enumerate(e):
                if ek:
                    term = term * (values[k] ** ek)
            out = out + term
        return out

    def eval_complex(self, values) -> complex:
        out = 0j
        for e, c in self.terms.items():
            term = c.to_complex()
            for k, ek in enumerate(e):
                if ek:
                    term *= values[k] ** ek
            out += term
        return out

    def subs_partial(self, k: int, value: GRat) -> "MPoly":
        """Substitute an exact value for variable k (keeps nvars)."""
        out = {}
        for e, c in self.terms.items():
            c2 = c * (value ** e[k]) if e[k] else c
            e2 = list(e)
            e2[k] = 0
            e2 = tuple(e2)
            cur = out.get(e2)
            new = c2 if cur is None else cur + c2
            if new:
                out[e2] = new
            elif e2 in out:
                del out[e2]
        return MPoly(self.nvars, out)

    def as_poly_in(self, k: int) -> list:
        """Coefficient list (low -> high in variable k) of MPoly coefficients
        in the remaining variables."""
        deg = self.degree_in(k)
        out = [MPoly(self.nvars) for _ in range(deg + 1)]
        for e, c in self.terms.items():
            e2 = list(e)
            d = e2[k]
            e2[k] = 0
            out[d] = out[d] + MPoly(self.nvars, {tuple(e2): c})
        return out

    def to_univariate(self, k: int) -> Poly:
        """Exact univariate Poly, requiring all other variables absent."""
        cs = [GR_ZERO] * (self.degree_in(k) + 1)
        for e, c in self.terms.items():
            if any(ek for j, ek in enumerate(e) if j != k):
                raise ValueError("polynomial is not univariate in that slot")
            cs[e[k]] = c
        return Poly(cs)

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "MPoly(0)"
        bits = []
        for e in sorted(self.terms, key=lambda t: (sum(t), t)):
            mono = "*".join(f"v{k}^{d}" for k, d in enumerate(e) if d)
            c = self.terms[e].to_json()
            bits.append(f"({c}){'*' + mono if mono else ''}")
        return "MPoly(" + " + ".join(bits) + ")"
