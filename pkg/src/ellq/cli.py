"""Batch command surface with JSON I/O.

Every subcommand reads a JSON document, emits a JSON result together with a
machine-readable check report, and exits 0 only if all embedded checks
pass; schema problems exit 2 and domain errors 3.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import mpmath

from . import divisors as dv
from . import linsys as ls
from . import monodromy as mo
from . import numerics
from . import serialize as se
from . import transfer as tr
from .ellfun import EllFun, derive, mult_by_n, zeta_defect, eval_numeric
from .errors import CheckFailed, EllqError, SchemaError
from .integration import PrimitiveResult, elliptic_primitive, polar_divisor, \
    residual_points
from .lattice import make_exact_curve, named_lattice
from .sring import SElem, SFraction, eval_selem, s_membership_test
from .selftest import run_suite


DEFAULT_CURVE = {"g2": "4/1", "g3": "0/1", "q": 2}


def _load_doc(args):
    if args.input is None:
        return {}
    if args.input == "-":
        raw = sys.stdin.read()
    else:
        with open(args.input, "r", encoding="utf-8") as fh:
            raw = fh.read()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"input is not valid JSON: {exc}")


def _get_curve(args, doc):
    spec = doc.get("curve")
    if args.curve:
        try:
            spec = json.loads(args.curve)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"--curve is not valid JSON: {exc}")
    if spec is None:
        spec = DEFAULT_CURVE
    return se.curve_from_json(spec)


def _get_lattice(args, doc, required=False):
    spec = doc.get("lattice")
    if args.lattice:
        if args.lattice in ("lemniscatic", "equianharmonic", "square5"):
            return named_lattice(args.lattice, args.precision)
        try:
            spec = json.loads(args.lattice)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"--lattice is not valid JSON: {exc}")
    if spec is None:
        if required:
            raise SchemaError("this subcommand needs a lattice")
        return None
    if isinstance(spec, str):
        return named_lattice(spec, args.precision)
    return se.lattice_from_json(spec)


def _frac(doc, key, default=None):
    if key not in doc:
        if default is None:
            raise SchemaError(f"missing field {key!r}")
        return default
    return se.frac_from_str(doc[key])


def _check(name, passed, **extra):
    return {"name": name, "passed": bool(passed), **extra}


# -- handlers -----------------------------------------------------------------

def cmd_fzeta(args, doc):
    curve = _get_curve(args, doc)
    n = doc.get("n", curve.q)
    if not isinstance(n, int) or n < 1:
        raise SchemaError("n must be a positive integer")
    cn = zeta_defect(curve, n)
    x = EllFun.X(curve)
    ident = derive(cn) + mult_by_n(x, n).scale(Fraction(n)) \
        - x.scale(Fraction(n))
    checks = [_check("derivative-identity", ident.is_zero())]
    lat = _get_lattice(args, doc)
    if lat is not None:
        with mpmath.workdps(lat.precision + 10):
            z0 = mpmath.mpc("0.29", "0.13") * lat.omega2
            _, _, zt_n = numerics.wp_eval(lat, n * z0)
            _, _, zt_1 = numerics.wp_eval(lat, z0)
            res = abs(eval_numeric(cn, lat, z0) - (zt_n - n * zt_1))
            tol = mpmath.mpf(10) ** (5 - lat.precision)
            checks.append(_check("shadow", res < tol,
                                 residual=mpmath.nstr(res, 3)))
    return {"result": se.ellfun_to_json(cn)}, checks


def cmd_multn(args, doc):
    curve = _get_curve(args, doc)
    n = doc.get("n")
    if not isinstance(n, int) or n < 1:
        raise SchemaError("n must be a positive integer")
    f = se.ellfun_from_json(doc.get("f"), curve) if "f" in doc \
        else EllFun.X(curve)
    g = mult_by_n(f, n)
    chain = derive(g) - mult_by_n(derive(f), n).scale(Fraction(n))
    checks = [_check("chain-rule", chain.is_zero())]
    return {"result": se.ellfun_to_json(g)}, checks


def cmd_primitive(args, doc):
    curve = _get_curve(args, doc)
    if "h" not in doc:
        raise SchemaError("missing field 'h'")
    h = se.ellfun_from_json(doc["h"], curve)
    lat = _get_lattice(args, doc)
    res = elliptic_primitive(h, curve, lattice=lat)
    if isinstance(res, PrimitiveResult):
        out = {"kind": "Primitive",
               "u": se.ellfun_to_json(res.u),
               "r": se.frac_to_str(Fraction(res.r)),
               "s": se.frac_to_str(Fraction(res.s)),
               "provenance": res.provenance}
        checks = [_check("reconstruction", res.verify(h))]
    else:
        out = {"kind": "ResidueObstruction",
               "points": se.divisor_to_json(res.points)
               if res.points is not None else None}
        checks = [_check("obstruction-reported", True)]
    return {"result": out}, checks


def cmd_divsolve(args, doc):
    e = se.divisor_from_json(doc.get("e"))
    q = doc.get("q")
    if not isinstance(q, int) or q < 2:
        raise SchemaError("q must be an integer >= 2")
    res = dv.solve_phi_minus_one(e, q)
    if isinstance(res, dv.Solution):
        back = dv.phi_pullback(res.divisor, q) - res.divisor
        out = {"kind": "Solution",
               "divisor": se.divisor_to_json(res.divisor)}
        checks = [_check("re-substitution", back == e)]
    else:
        out = {"kind": "NoSolution", "reason": res.reason,
               "certificate": res.certificate}
        checks = [_check("certificate-present", bool(res.reason))]
    return {"result": out}, checks


def cmd_principal(args, doc):
    d = se.divisor_from_json(doc.get("d"))
    value = dv.is_principal(d)
    return ({"result": {"principal": value,
                        "degree": se.frac_to_str(dv.degree(d)),
                        "point_sum": se.torsion_to_json(dv.abel_jacobi(d))}},
            [_check("evaluated", True)])


def cmd_rank1(args, doc):
    diva = se.divisor_from_json(doc.get("div_a"))
    q = doc.get("q")
    if not isinstance(q, int) or q < 2:
        raise SchemaError("q must be an integer >= 2")
    verdict = ls.rank1_test(diva, q)
    if verdict.kind == "Algebraic":
        out = {"kind": "Algebraic",
               "witness": se.divisor_to_json(verdict.witness)}
        back = dv.phi_pullback(verdict.witness, q) - verdict.witness
        checks = [_check("witness", back == diva)]
    else:
        out = {"kind": "Transcendental", "certificate": verdict.certificate}
        checks = [_check("certificate-present", True)]
    return {"result": out}, checks


def cmd_consistency(args, doc):
    curve = _get_curve(args, doc)
    a = se.matrix_from_json(doc.get("a"), curve)
    b = se.matrix_from_json(doc.get("b"), curve)
    res = ls.consistency_residual(a, b)
    zero = res.is_zero()
    return ({"result": {"residual_zero": zero,
                        "residual": se.matrix_to_json(res)}},
            [_check("consistency", zero)])


def cmd_integrable(args, doc):
    curve = _get_curve(args, doc)
    mode = doc.get("mode", "partial")
    if mode not in ("partial", "delta"):
        raise SchemaError("mode must be 'partial' or 'delta'")
    a = se.matrix_from_json(doc.get("a"), curve)
    b = se.matrix_from_json(doc.get("b"), curve)
    res = ls.integrability_residual(mode, a, b)
    zero = res.is_zero()
    return ({"result": {"residual_zero": zero,
                        "residual": se.matrix_to_json(res)}},
            [_check("integrability", zero)])


def cmd_prolong(args, doc):
    curve = _get_curve(args, doc)
    a = se.matrix_from_json(doc.get("a"), curve)
    out = ls.prolongation(a)
    return ({"result": se.matrix_to_json(out)},
            [_check("dimensions", out.n == 2 * a.n)])


def cmd_companion(args, doc):
    curve = _get_curve(args, doc)
    coeffs = doc.get("coeffs")
    if not isinstance(coeffs, list) or not coeffs:
        raise SchemaError("coeffs must be a nonempty list")
    parsed = [se.sfraction_from_json(c, curve) for c in coeffs]
    out = ls.companion(parsed, len(parsed))
    ok = True
    try:
        out.inverse()
    except EllqError:
        ok = False
    return {"result": se.matrix_to_json(out)}, [_check("invertible", ok)]


def cmd_dual(args, doc):
    curve = _get_curve(args, doc)
    a = se.matrix_from_json(doc.get("a"), curve)
    b = se.matrix_from_json(doc.get("b"), curve)
    ad, bd = ls.dual_pair(a, b)
    checks = []
    if ls.consistency_residual(a, b).is_zero():
        checks.append(_check("dual-consistency",
                             ls.consistency_residual(ad, bd).is_zero()))
    return ({"result": {"a": se.matrix_to_json(ad),
                        "b": se.matrix_to_json(bd)}}, checks)


def _unipotent_pair(doc):
    m1 = doc.get("m1")
    m2 = doc.get("m2")
    if not (isinstance(m1, list) and isinstance(m2, list)):
        raise SchemaError("m1 and m2 must be rational matrices")
    to_f = lambda m: [[se.frac_from_str(x) if isinstance(x, str)
                       else Fraction(x) for x in row] for row in m]
    return mo.UnipotentPair(to_f(m1), to_f(m2))


def cmd_monodromy_realize(args, doc):
    lat = _get_lattice(args, doc, required=True)
    pair = _unipotent_pair(doc)
    z = mo.realize(pair, lat)
    res = mo.verify_monodromy(z, pair, lat, trials=doc.get("trials", 5),
                              seed=args.seed)
    tol = mpmath.mpf(10) ** (10 - lat.precision)
    return ({"result": se.realization_to_json(z),
             "residual": mpmath.nstr(res, 5)},
            [_check("monodromy", res < tol, residual=mpmath.nstr(res, 5))])


def cmd_monodromy_verify(args, doc):
    lat = _get_lattice(args, doc, required=True)
    pair = _unipotent_pair(doc)
    target = doc.get("check_m1"), doc.get("check_m2")
    check_pair = pair
    if target[0] is not None or target[1] is not None:
        check_pair = mo.UnipotentPair(
            [[se.frac_from_str(str(x)) for x in row]
             for row in (target[0] or doc["m1"])],
            [[se.frac_from_str(str(x)) for x in row]
             for row in (target[1] or doc["m2"])])
    z = mo.realize(pair, lat)
    res = mo.verify_monodromy(z, check_pair, lat,
                              trials=doc.get("trials", 5), seed=args.seed)
    tol = mpmath.mpf(10) ** (10 - lat.precision)
    return ({"result": {"residual": mpmath.nstr(res, 5)}},
            [_check("monodromy", res < tol, residual=mpmath.nstr(res, 5))])


def cmd_transfer_solve(args, doc):
    curve = _get_curve(args, doc)
    g = se.selem_from_json(doc.get("g"), curve)
    f = se.selem_from_json(doc.get("f"), curve)
    a = se.frac_from_str(doc.get("a", "1/1"))
    c = se.frac_from_str(doc.get("c", "0/1"))
    p = {int(k): se.frac_from_str(v) for k, v in doc.get("p", {}).items()}
    inst = tr.TransferInstance(g=g, f=f, a=a, c=c, p=p)
    sol = tr.solve_delta_relation(inst)
    from .sring import apply_phi
    recon = apply_phi(sol.u) - sol.u.scale(EllFun.const(a, curve))
    for i, v in sol.remainder.items():
        recon = recon + SElem.monomial(EllFun.const(v, curve), i, 0)
    return ({"result": {
        "u": se.selem_to_json(sol.u),
        "remainder": {str(i): se.frac_to_str(Fraction(v))
                      for i, v in sol.remainder.items()},
        "branches": sorted(sol.branches)}},
        [_check("identity", (g - recon).is_zero())])


def cmd_s_member(args, doc):
    curve = _get_curve(args, doc)
    num = se.selem_from_json(doc.get("num"), curve)
    den = se.selem_from_json(doc.get("den"), curve) if "den" in doc \
        else SElem.one(curve)
    bound = doc.get("bound", 4)
    if not isinstance(bound, int) or bound < 1:
        raise SchemaError("bound must be a positive integer")
    res = s_membership_test(SFraction(num, den), curve, bound)
    if res:
        out = {"kind": "InS", "order": res.order,
               "witness": [se.ellfun_to_json(w) for w in res.witness]}
    else:
        out = {"kind": "Inconclusive", "bound": res.bound}
    return {"result": out}, [_check("ran", True)]


def cmd_shadow(args, doc):
    from . import scalars
    curve = _get_curve(args, doc)
    lat = _get_lattice(args, doc, required=True)
    lhs = se.selem_from_json(doc.get("lhs"), curve)
    rhs = se.selem_from_json(doc.get("rhs"), curve)
    trials = doc.get("trials", 3)
    env = None
    with mpmath.workdps(lat.precision + 10):
        if curve.field is scalars.SYMBOLIC:
            env = (lat.g2n, lat.g3n)
        else:
            # the lattice must actually carry the curve's invariants
            g2d = abs(lat.g2n - curve.field.to_mp(curve.g2, mpmath, None))
            g3d = abs(lat.g3n - curve.field.to_mp(curve.g3, mpmath, None))
            tol0 = mpmath.mpf(10) ** (8 - lat.precision)
            if g2d > tol0 or g3d > tol0:
                raise CheckFailed("lattice invariants do not match the curve")
        res = numerics.shadow_check(
            lambda z: eval_selem(lhs, lat, z, env),
            lambda z: eval_selem(rhs, lat, z, env), lat, trials=trials,
            seed=args.seed)
        tol = mpmath.mpf(10) ** (5 - lat.precision)
    return ({"result": {"max_residual": mpmath.nstr(res, 5)}},
            [_check("shadow", res < tol, residual=mpmath.nstr(res, 5))])


def cmd_polar(args, doc):
    curve = _get_curve(args, doc)
    lat = _get_lattice(args, doc, required=True)
    h = se.ellfun_from_json(doc.get("h"), curve)
    ell = doc.get("ell", 1)
    if not isinstance(ell, int) or ell < 1:
        raise SchemaError("ell must be a positive integer")
    if ell == 1:
        d = residual_points(h, curve, lat)
    else:
        d = polar_divisor(h, ell, lat)
    return {"result": se.divisor_to_json(d)}, [_check("resolved", True)]


def cmd_selftest(args, doc):
    level = doc.get("level", args.level or "fast")
    if level not in ("fast", "full"):
        raise SchemaError("level must be 'fast' or 'full'")
    results = run_suite(level, stream=sys.stderr)
    out = {label: {"name": r.name, "passed": r.passed,
                   "seconds": round(r.seconds, 2), "details": {
                       k: str(v) for k, v in r.details.items()}}
           for label, r in results}
    checks = [_check(f"criterion-{label}", r.passed)
              for label, r in results]
    return {"result": out}, checks


HANDLERS = {
    "fzeta": cmd_fzeta,
    "multn": cmd_multn,
    "primitive": cmd_primitive,
    "divsolve": cmd_divsolve,
    "principal": cmd_principal,
    "rank1": cmd_rank1,
    "consistency": cmd_consistency,
    "integrable": cmd_integrable,
    "prolong": cmd_prolong,
    "companion": cmd_companion,
    "dual": cmd_dual,
    "monodromy-realize": cmd_monodromy_realize,
    "monodromy-verify": cmd_monodromy_verify,
    "transfer-solve": cmd_transfer_solve,
    "s-member": cmd_s_member,
    "shadow": cmd_shadow,
    "polar": cmd_polar,
    "selftest": cmd_selftest,
}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="ellq",
        description="exact elliptic dilation-operator algebra with a "
                    "numeric oracle")
    ap.add_argument("subcommand", choices=sorted(HANDLERS))
    ap.add_argument("--input", default=None,
                    help="JSON input path, or '-' for stdin")
    ap.add_argument("--output", default="-",
                    help="output path, default stdout")
    ap.add_argument("--precision", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--curve", default=None,
                    help="curve JSON, default the (4, 0) multiplier-2 curve")
    ap.add_argument("--lattice", default=None,
                    help="lattice JSON or a named lattice")
    ap.add_argument("--level", default=None, choices=("fast", "full"),
                    help="selftest level")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        doc = _load_doc(args)
        if not isinstance(doc, dict):
            raise SchemaError("the input document must be a JSON object")
        result, checks = HANDLERS[args.subcommand](args, doc)
    except SchemaError as exc:
        print(json.dumps({"error": "schema", "message": str(exc)}),
              file=sys.stderr)
        return 2
    except CheckFailed as exc:
        print(json.dumps({"error": "check", "message": str(exc)}),
              file=sys.stderr)
        return 1
    except EllqError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 3
    payload = dict(result)
    payload["checks"] = checks
    payload["ok"] = all(c["passed"] for c in checks)
    text = json.dumps(payload, indent=2)
    if args.output == "-":
        print(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0 if payload["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
