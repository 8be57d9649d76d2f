"""Command-line front end.

Machine-readable JSON goes to stdout, a short human summary to stderr.
Exit codes: 0 success, 1 certificate or verification failure (diagnostics in
the JSON), 2 malformed input, 3 numerical failure.

Subcommands: analyze, solve, monodromy, higgs lift, higgs hecke, build,
pair, oracle from-basis | resultant | indicial.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import apparent.jsonio as jio
from apparent.exact import (
    GRat,
    RatFun,
    RootIsolationError,
    roots_with_multiplicity,
)

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_BAD_INPUT = 2
EXIT_NUMERIC = 3


class InputError(ValueError):
    pass


def _emit(payload, summary: str) -> None:
    print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    print(summary, file=sys.stderr)


def _load_input(args) -> dict:
    try:
        if args.input == "-":
            return json.load(sys.stdin)
        if args.input is not None:
            with open(args.input) as fh:
                return json.load(fh)
        if args.json is not None:
            return json.loads(args.json)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(str(exc)) from exc
    raise InputError("no input: pass --input FILE or --json '...'")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_analyze(args) -> int:
    from apparent.oper import apparent_certificate, to_ds_form
    data = _load_input(args)
    op = jio.decode_operator(data)
    points = []
    if "points" in data:
        points = [jio.decode_grat(p) for p in data["points"]]
    else:
        points = [p for p in op.singular_points() if isinstance(p, GRat)]
        points += [p for p in op.singular_points() if not isinstance(p, GRat)]
    certs = [apparent_certificate(op, p, args.tol) for p in points]
    ds = to_ds_form(op)
    payload = {"certificates": [jio.encode_certificate(c) for c in certs],
               "ds_form": jio.encode_ds(ds),
               "all_passed": all(c.passed for c in certs)}
    n_pass = sum(c.passed for c in certs)
    _emit(payload, f"analyze: {n_pass}/{len(certs)} candidate points "
                   "certified apparent")
    return EXIT_OK if payload["all_passed"] else EXIT_VERIFICATION


def cmd_solve(args) -> int:
    from apparent.residue_system import (assemble_residue_system,
                                         solve_residue_system)
    data = _load_input(args)
    n, marked, apparent, accessory = jio.decode_config(data)
    sys_ = assemble_residue_system(n, marked, apparent, accessory)
    mode = data.get("mode", args.mode)
    sols = solve_residue_system(sys_, mode=mode, seed=args.seed, tol=args.tol,
                                jobs=args.jobs)
    payload = {
        "count": len(sols),
        "bound": sys_.degree_bound(),
        "solutions": [{
            "v": [jio.encode_value(x) for x in s.values],
            "multiplicity": s.multiplicity,
            "residual": f"{s.residual:.6e}",
            "certified": s.certified,
            "flagged_multiple": s.flagged_multiple,
        } for s in sols],
    }
    ok = all(s.certified for s in sols) and len(sols) >= 1
    _emit(payload, f"solve: {len(sols)} solutions (bound {payload['bound']}), "
                   f"{'all certified' if ok else 'CERTIFICATION FAILURE'}")
    return EXIT_OK if ok else EXIT_VERIFICATION


def cmd_monodromy(args) -> int:
    from apparent.monodromy import (certify_apparent, global_representation,
                                    loop_monodromy)
    data = _load_input(args)
    op = jio.decode_operator(data["op"] if "op" in data else data)
    payload = {}
    failures = 0
    if data.get("global"):
        rep = global_representation(op)
        payload["global"] = {
            "punctures": [jio.fmt_complex(p) for p in rep.punctures],
            "generators": [g.to_json() for g in rep.generators],
            "infinity": rep.infinity_generator.to_json(),
            "product_defect": f"{rep.product_defect:.6e}",
            "irreducible": rep.irreducible,
        }
        if not rep.product_ok(args.mono_tol):
            failures += 1
    loops = data.get("loops", [])
    out = []
    for spec in loops:
        center = jio.decode_grat(spec["center"]) if isinstance(
            spec, dict) else jio.decode_grat(spec)
        ok, tm = certify_apparent(op, center, args.mono_tol)
        out.append({"center": jio.encode_value(center),
                    "trivial": ok,
                    "deviation": f"{tm.deviation_from_identity():.6e}",
                    "matrix": tm.to_json()["matrix"],
                    "error": tm.to_json()["error"]})
        if not ok:
            failures += 1
    if out:
        payload["loops"] = out
    _emit(payload, f"monodromy: {len(out)} loops, {failures} failures")
    return EXIT_OK if failures == 0 else EXIT_VERIFICATION


def cmd_higgs(args) -> int:
    from apparent.higgs import (HeckeData, divisor_lift, hecke_transform,
                                higgs_divisor, higgs_section)
    data = _load_input(args)
    t = jio.decode_higgs(data["triple"] if "triple" in data else data)
    if args.higgs_action == "lift":
        sec = higgs_section(t)
        div, boundary = higgs_divisor(t, with_boundary=True)
        lift = divisor_lift(t)
        payload = {"section": sec.to_json(),
                   "divisor": jio.encode_divisor(div),
                   "boundary": jio.encode_divisor(boundary),
                   "lift": jio.encode_lift(lift)}
        _emit(payload, f"higgs lift: degree {div.degree} divisor")
        return EXIT_OK
    hd = data["hecke"]
    h = HeckeData(jio.decode_grat(hd["point"]),
                  tuple(tuple(jio.decode_grat(x) for x in v)
                        for v in hd["subspace"]))
    t2 = hecke_transform(t, h)
    payload = {"triple": jio.encode_higgs(t2)}
    _emit(payload, "higgs hecke: transformed triple emitted")
    return EXIT_OK


def cmd_build(args) -> int:
    from apparent.higgs import build_lagrangian_point, divisor_lift
    data = _load_input(args)
    n = int(data["n"])
    b = [jio.decode_ratfun(x) for x in data["b"]]
    lift = jio.decode_lift(data["lift"])
    t = build_lagrangian_point(n, b, lift)
    check = divisor_lift(t)
    payload = {"triple": jio.encode_higgs(t),
               "lift_check": jio.encode_lift(check)}
    _emit(payload, f"build: triple with {check.degree} lifted points")
    return EXIT_OK if check.same_multiset(lift) else EXIT_VERIFICATION


def _family_from_spec(data):
    from apparent.pairings import DerhamFamily, SpectralFamily
    kind = data.get("which", "spectral")
    if kind == "spectral":
        b2 = jio.decode_ratfun(data["b2"])
        lift = [(jio.decode_grat(e["u"]), jio.decode_grat(e["lambda"]))
                for e in data["lift"]]
        du = [(jio.decode_grat(e[0]), jio.decode_grat(e[1]))
              for e in data["du"]]
        dlam = [(jio.decode_grat(e[0]), jio.decode_grat(e[1]))
                for e in data["dlam"]]
        return SpectralFamily(b2, lift, du, dlam), "spectral"
    n, marked, apparent, accessory = jio.decode_config(data["config"])
    base = [complex(v["re"] if isinstance(v, dict) else v,
                    v.get("im", 0) if isinstance(v, dict) else 0)
            for v in data["base_solution"]] if "base_solution" in data \
        else None
    if base is None:
        from apparent.residue_system import (assemble_residue_system,
                                             solve_residue_system)
        sys_ = assemble_residue_system(n, marked, apparent, accessory)
        sols = solve_residue_system(sys_, seed=int(data.get("seed", 0)))
        base = [complex(x) for x in sols[int(data.get("branch", 0))].values]
    du = [(jio.decode_grat(e[0]), jio.decode_grat(e[1]))
          for e in data["du"]]
    dacc = {int(k): [(jio.decode_grat(a), jio.decode_grat(b)) for a, b in v]
            for k, v in data.get("daccessory", {}).items()}
    return (DerhamFamily(n, marked, apparent, base, du, accessory, dacc),
            "derham")


def cmd_pair(args) -> int:
    from apparent.pairings import lagrangian_report
    data = _load_input(args)
    family, which = _family_from_spec(data)
    h = Fraction(data.get("h", "1/10000"))
    rep = lagrangian_report(family, which, h)
    payload = {"report": rep.to_json()}
    if args.csv:
        rows = ["h,residual"]
        hh = h
        for _ in range(int(data.get("csv_points", 3))):
            r = lagrangian_report(family, which, hh, richardson=False)
            rows.append(f"{float(hh):.6e},{r.residual:.6e}")
            hh = hh / 2
        with open(args.csv, "w") as fh:
            fh.write("\n".join(rows) + "\n")
    ok = rep.residual < (1e-6 if which == "spectral" else 1e-5)
    _emit(payload, f"pair[{which}]: residual {rep.residual:.3e}, "
                   f"order {rep.order_estimate}")
    return EXIT_OK if ok else EXIT_VERIFICATION


def cmd_oracle(args) -> int:
    import apparent.oracles as oracles
    data = _load_input(args)
    if args.oracle_action == "from-basis":
        basis = [jio.decode_ratfun(f) for f in data["basis"]]
        op = oracles.operator_from_basis(basis)
        payload = {"op": jio.encode_operator(op)}
        _emit(payload, f"oracle from-basis: order {op.n} operator")
        return EXIT_OK
    if args.oracle_action == "resultant":
        from apparent.residue_system import assemble_residue_system
        n, marked, apparent, accessory = jio.decode_config(data)
        sys_ = assemble_residue_system(n, marked, apparent, accessory)
        sols = oracles.exact_resultant_solve(sys_)
        payload = {"solutions": [{
            "v": [jio.encode_value(x) for x in vals],
            "multiplicity": m} for vals, m in sols],
            "count": sum(m for _, m in sols)}
        _emit(payload, f"oracle resultant: {payload['count']} roots "
                       "with multiplicity")
        return EXIT_OK
    op = jio.decode_operator(data["op"])
    p = jio.decode_grat(data["point"])
    exps = oracles.indicial_exponents(op, p)
    payload = {"exponents": [jio.encode_value(e) for e in exps]}
    _emit(payload, f"oracle indicial: {len(exps)} exponents")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="apparent",
        description="Sections, apparent singularities, lifts, monodromy and "
                    "symplectic pairings on the marked sphere")
    ap.add_argument("--input", help="path to JSON input, or - for stdin")
    ap.add_argument("--json", help="inline JSON input")
    ap.add_argument("--tol", type=float, default=1e-10,
                    help="certificate tolerance")
    ap.add_argument("--mono-tol", type=float, default=1e-8,
                    help="monodromy tolerance")
    ap.add_argument("--prec", type=int, default=None,
                    help="override the certified-precision cap (bits)")
    ap.add_argument("--jobs", type=int, default=1,
                    help="worker count (results are worker-count invariant)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", help="write (h, residual) pairs to this file")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze").set_defaults(func=cmd_analyze)
    sp = sub.add_parser("solve")
    sp.add_argument("--mode", default="homotopy",
                    choices=["exact", "homotopy", "newton-refine"])
    sp.set_defaults(func=cmd_solve)
    sub.add_parser("monodromy").set_defaults(func=cmd_monodromy)
    hp = sub.add_parser("higgs")
    hp.add_argument("higgs_action", choices=["lift", "hecke"])
    hp.set_defaults(func=cmd_higgs)
    sub.add_parser("build").set_defaults(func=cmd_build)
    sub.add_parser("pair").set_defaults(func=cmd_pair)
    op = sub.add_parser("oracle")
    op.add_argument("oracle_action",
                    choices=["from-basis", "resultant", "indicial"])
    op.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.prec is not None:
        from apparent.exact import set_precision_cap
        set_precision_cap(args.prec)
    try:
        return args.func(args)
    except InputError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_BAD_INPUT
    except (KeyError, ValueError, TypeError) as exc:
        print(json.dumps({"error": f"bad input: {exc}"}), file=sys.stderr)
        return EXIT_BAD_INPUT
    except (RootIsolationError, ArithmeticError) as exc:
        print(json.dumps({"error": f"numerical failure: {exc}"}),
              file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
