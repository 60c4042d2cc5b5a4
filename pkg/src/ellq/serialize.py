"""JSON codecs for the wire formats.

Exact rationals travel as "p/q" strings, complex numbers as ["re", "im"]
decimal-string pairs, field elements as ascending coefficient lists, ring
elements as monomial term lists, divisors as point/value entries.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

from . import scalars
from .divisors import PeriodicDivisor
from .ellfun import EllFun
from .errors import SchemaError
from .lattice import (ExactCurve, NumericLattice, TorsionPoint,
                      make_exact_curve, make_numeric_lattice)
from .polys import Poly, RatFun
from .sring import SElem, SFraction


def _expect(cond, msg):
    if not cond:
        raise SchemaError(msg)


def frac_to_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def frac_from_str(s) -> Fraction:
    _expect(isinstance(s, str), "rational values are 'p/q' strings")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational {s!r}: {exc}")


def scalar_to_json(x, field):
    return scalars.scalar_to_str(x, field)


def scalar_from_json(s, field):
    try:
        return scalars.scalar_from_str(s, field)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad scalar {s!r}: {exc}")


def complex_to_json(x, digits=30) -> list:
    with mpmath.workdps(digits):
        return [mpmath.nstr(mpmath.re(x), digits),
                mpmath.nstr(mpmath.im(x), digits)]


def complex_from_json(v, digits=30):
    _expect(isinstance(v, (list, tuple)) and len(v) == 2,
            "complex values are [re, im] string pairs")
    with mpmath.workdps(digits + 10):
        return mpmath.mpc(mpmath.mpf(str(v[0])), mpmath.mpf(str(v[1])))


# -- curves and lattices ------------------------------------------------------

def curve_to_json(curve: ExactCurve) -> dict:
    return {"g2": scalar_to_json(curve.g2, curve.field),
            "g3": scalar_to_json(curve.g3, curve.field),
            "q": curve.q,
            "mode": curve.field.name}


def curve_from_json(doc) -> ExactCurve:
    _expect(isinstance(doc, dict), "curve must be an object")
    _expect("g2" in doc and "g3" in doc and "q" in doc,
            "curve needs g2, g3, q")
    mode = scalars.MODES.get(doc.get("mode", "rational"))
    _expect(mode is not None and mode is not scalars.SYMBOLIC,
            "curve mode must be rational or gaussian")
    g2 = scalar_from_json(doc["g2"], mode)
    g3 = scalar_from_json(doc["g3"], mode)
    _expect(isinstance(doc["q"], int), "q must be an integer")
    return make_exact_curve(g2, g3, doc["q"], mode)


def lattice_to_json(lat: NumericLattice) -> dict:
    return {"omega1": complex_to_json(lat.omega1, lat.precision),
            "omega2": complex_to_json(lat.omega2, lat.precision),
            "precision": lat.precision}


def lattice_from_json(doc) -> NumericLattice:
    _expect(isinstance(doc, dict), "lattice must be an object")
    for key in ("omega1", "omega2", "precision"):
        _expect(key in doc, f"lattice needs {key}")
    prec = doc["precision"]
    _expect(isinstance(prec, int) and prec >= 15,
            "precision must be an integer >= 15")
    return make_numeric_lattice(complex_from_json(doc["omega1"], prec),
                                complex_from_json(doc["omega2"], prec),
                                prec)


def torsion_to_json(p: TorsionPoint) -> dict:
    return {"r1": frac_to_str(p.r1), "r2": frac_to_str(p.r2)}


def torsion_from_json(doc) -> TorsionPoint:
    _expect(isinstance(doc, dict) and "r1" in doc and "r2" in doc,
            "torsion point needs r1, r2")
    return TorsionPoint(frac_from_str(doc["r1"]), frac_from_str(doc["r2"]))


# -- field and ring elements ----------------------------------------------------

def _ratfun_to_json(rf: RatFun, field) -> dict:
    return {"num": [scalar_to_json(c, field) for c in rf.num.c],
            "den": [scalar_to_json(c, field) for c in rf.den.c]}


def _ratfun_from_json(doc, field) -> RatFun:
    _expect(isinstance(doc, dict) and "num" in doc and "den" in doc,
            "rational function needs num, den lists")
    num = Poly([scalar_from_json(s, field) for s in doc["num"]], field)
    den = Poly([scalar_from_json(s, field) for s in doc["den"]], field)
    _expect(not den.is_zero(), "zero denominator")
    return RatFun(num, den)


def ellfun_to_json(f: EllFun) -> dict:
    return {"a": _ratfun_to_json(f.a, f.curve.field),
            "b": _ratfun_to_json(f.b, f.curve.field)}


def ellfun_from_json(doc, curve) -> EllFun:
    _expect(isinstance(doc, dict) and "a" in doc and "b" in doc,
            "field element needs parts a, b")
    return EllFun(_ratfun_from_json(doc["a"], curve.field),
                  _ratfun_from_json(doc["b"], curve.field), curve)


def selem_to_json(f: SElem) -> dict:
    terms = [{"i": i, "j": j, "c": ellfun_to_json(c)}
             for (i, j), c in sorted(f.coeffs.items())]
    return {"s0": f.s0, "terms": terms}


def selem_from_json(doc, curve) -> SElem:
    _expect(isinstance(doc, dict) and "terms" in doc,
            "ring element needs a terms list")
    coeffs = {}
    for t in doc["terms"]:
        _expect(isinstance(t, dict) and {"i", "j", "c"} <= set(t),
                "term needs i, j, c")
        _expect(isinstance(t["i"], int) and isinstance(t["j"], int),
                "term powers must be integers")
        coeffs[(t["i"], t["j"])] = ellfun_from_json(t["c"], curve)
    return SElem(coeffs, curve, bool(doc.get("s0", False)))


def sfraction_to_json(fr: SFraction) -> dict:
    return {"num": selem_to_json(fr.num), "den": selem_to_json(fr.den)}


def sfraction_from_json(doc, curve) -> SFraction:
    _expect(isinstance(doc, dict) and "num" in doc and "den" in doc,
            "fraction needs num, den")
    return SFraction(selem_from_json(doc["num"], curve),
                     selem_from_json(doc["den"], curve))


def matrix_to_json(m) -> list:
    return [[sfraction_to_json(x) for x in row] for row in m.rows]


def matrix_from_json(doc, curve):
    from .linsys import MatrixOverE
    _expect(isinstance(doc, list) and doc
            and all(isinstance(r, list) and len(r) == len(doc) for r in doc),
            "matrix must be a square nested list")
    return MatrixOverE([[sfraction_from_json(x, curve) for x in row]
                        for row in doc], curve)


# -- divisors -------------------------------------------------------------------

def divisor_to_json(d: PeriodicDivisor) -> dict:
    entries = [{"p": torsion_to_json(p), "v": frac_to_str(v)}
               for p, v in sorted(d.entries.items(),
                                  key=lambda kv: (kv[0].r1, kv[0].r2))]
    return {"entries": entries, "integral": d.is_integral()}


def divisor_from_json(doc) -> PeriodicDivisor:
    _expect(isinstance(doc, dict) and "entries" in doc,
            "divisor needs an entries list")
    out = {}
    for e in doc["entries"]:
        _expect(isinstance(e, dict) and "p" in e and "v" in e,
                "divisor entry needs p, v")
        p = torsion_from_json(e["p"])
        out[p] = out.get(p, Fraction(0)) + frac_from_str(e["v"])
    return PeriodicDivisor(out)


# -- realization matrices ----------------------------------------------------------

def realization_to_json(z) -> dict:
    ents = []
    for i, row in enumerate(z.entries):
        for j, poly in enumerate(row):
            terms = [{"i": a, "j": b, "c": complex_to_json(v, z.precision)}
                     for (a, b), v in sorted(poly.items())]
            ents.append({"row": i, "col": j, "terms": terms})
    return {"n": z.n, "precision": z.precision, "entries": ents}
