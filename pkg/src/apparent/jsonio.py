"""JSON encoding and decoding for all value types crossing the CLI boundary.

Rationals travel as strings "p/q" or "p/q+r/s*i"; polynomials as coefficient
arrays low -> high; rational functions as {"num": [...], "den": [...]};
certified complex values as decimal strings with a radius field.  Numeric
output is always a decimal string with explicit precision, so byte-identical
reruns are possible.
"""

from __future__ import annotations

from fractions import Fraction

from apparent.exact import (
    CertifiedComplex,
    Divisor,
    GRat,
    Poly,
    RatFun,
)
from apparent.derham import ConnectionTriple
from apparent.higgs import HeckeData, HiggsTriple, LiftedDivisor
from apparent.oper import ApparentCertificate, DSForm, ScalarOperator
from apparent.residue_system import MarkedPoint

FLOAT_DIGITS = 17


def fmt_complex(z) -> dict:
    z = complex(z)
    return {"re": f"{z.real:.{FLOAT_DIGITS}e}", "im": f"{z.imag:.{FLOAT_DIGITS}e}"}


def encode_value(x):
    if isinstance(x, GRat):
        return x.to_json()
    if isinstance(x, CertifiedComplex):
        return x.to_json()
    if isinstance(x, complex):
        return fmt_complex(x)
    if isinstance(x, RatFun):
        return x.to_json()
    return x


def decode_grat(obj) -> GRat:
    if isinstance(obj, str):
        return GRat.parse(obj)
    if isinstance(obj, int):
        return GRat(obj)
    raise ValueError(f"cannot decode exact value from {obj!r}")


def decode_ratfun(obj) -> RatFun:
    if isinstance(obj, (str, int)):
        return RatFun(Poly([decode_grat(obj)]))
    if isinstance(obj, list):
        return RatFun(Poly([decode_grat(c) for c in obj]))
    if isinstance(obj, dict):
        num = Poly([decode_grat(c) for c in obj["num"]])
        den = Poly([decode_grat(c) for c in obj.get("den", ["1"])])
        return RatFun(num, den)
    raise ValueError(f"cannot decode rational function from {obj!r}")


def encode_divisor(d: Divisor) -> list:
    return [{"point": encode_value(p), "mult": m} for p, m in d]


def encode_lift(l: LiftedDivisor) -> list:
    return [{"u": encode_value(u), "lambda": encode_value(lam)}
            for u, lam in l.points]


def decode_lift(obj) -> LiftedDivisor:
    return LiftedDivisor(tuple((decode_grat(e["u"]), decode_grat(e["lambda"]))
                               for e in obj))


def encode_higgs(t: HiggsTriple) -> dict:
    return {"n": t.n,
            "phi": [[entry.to_json() for entry in row] for row in t.phi],
            "s": [x.to_json() for x in t.s],
            "marked": [encode_value(p) for p in t.marked]}


def decode_higgs(obj) -> HiggsTriple:
    n = int(obj["n"])
    phi = [[decode_ratfun(e) for e in row] for row in obj["phi"]]
    s = [decode_ratfun(e) for e in obj["s"]]
    marked = tuple(decode_grat(p) for p in obj.get("marked", []))
    return HiggsTriple(n, phi, s, marked)


def decode_connection(obj) -> ConnectionTriple:
    n = int(obj["n"])
    lam = decode_grat(obj.get("lambda", "1"))
    a = [[decode_ratfun(e) for e in row] for row in obj["A"]]
    s = [decode_ratfun(e) for e in obj["s"]]
    marked = tuple(decode_grat(p) for p in obj.get("marked", []))
    return ConnectionTriple(n, lam, a, s, marked)


def encode_operator(op: ScalarOperator) -> dict:
    out = {"n": op.n, "a": [c.to_json() for c in op.a],
           "weight": str(op.weight)}
    if op.symbol is not None:
        out["symbol"] = op.symbol.to_json()
    return out


def decode_operator(obj) -> ScalarOperator:
    n = int(obj["n"])
    a = tuple(decode_ratfun(c) for c in obj["a"])
    weight = Fraction(obj["weight"]) if "weight" in obj else None
    return ScalarOperator(n, a, weight=weight)


def encode_certificate(c: ApparentCertificate) -> dict:
    return {"point": encode_value(c.point),
            "passed": c.passed,
            "exact": c.exact,
            "v": encode_value(c.v),
            "c": [encode_value(x) for x in c.c],
            "delta": [encode_value(x) for x in c.delta],
            "residuals": [encode_value(x) for x in c.residuals],
            "max_residual": f"{c.max_residual():.6e}",
            "tolerance": f"{c.tolerance:.3e}",
            "reason": c.reason}


def encode_ds(ds: DSForm) -> dict:
    out = {"n": ds.n, "Q": [q.to_json() for q in ds.Q],
           "gauge": ds.gauge.to_json()}
    out["w"] = {str(k): w.to_json() for k, w in ds.w_differentials().items()}
    return out


def decode_config(obj):
    """Residue-system configuration: n, marked, apparent, accessory."""
    n = int(obj["n"])
    marked = []
    for m in obj["marked"]:
        z = decode_grat(m["z"])
        delta = m.get("delta", {})
        if not isinstance(delta, dict):
            delta = {2: delta}
        marked.append(MarkedPoint(z, {int(k): decode_grat(v)
                                      for k, v in delta.items()}))
    apparent = [decode_grat(p) for p in obj.get("apparent", [])]
    accessory = {int(k): [decode_grat(x) for x in v]
                 for k, v in obj.get("accessory", {}).items()}
    return n, marked, apparent, accessory
