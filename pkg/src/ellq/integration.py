"""Symbolic integration on the curve: primitives of the shape u + r*zeta + s*z.

Writing h dz with h = a(X) + b(X)Y and using dX = Y dz, the two parts
decouple:

* the odd part contributes b(X) dX, an ordinary rational integrand;
* the even part contributes a(X) dX/Y, reduced against exact differentials
  d(s(X) Y / v(X)^k).

Both reductions are exact over the scalar field.  What survives is
alpha*dX/Y + beta*X dX/Y (absorbed by the z and zeta terms of the
primitive) plus simple-pole remainders, which are exactly the residue
obstructions; no root isolation is ever needed to detect them, only to
place them on the torsion grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .ellfun import (EllFun, curve_cubic, ellfun_series_at_zero, eval_numeric,
                     multiplication_images)
from .errors import UnresolvedPoles
from .lattice import TorsionPoint, ZERO_POINT, torsion_to_complex
from .polys import (Poly, RatFun, hermite_reduce, integrate_poly, poly_exgcd,
                    poly_gcd, squarefree_decomposition)


@dataclass
class PrimitiveResult:
    """h = d/dz (u) - r*X + s, i.e. the primitive is u + r*zeta + s*z."""
    u: EllFun
    r: object
    s: object
    provenance: str = "exact"

    def verify(self, h: EllFun) -> bool:
        from .ellfun import derive
        curve = h.curve
        recon = (derive(self.u)
                 - EllFun.X(curve).scale(self.r)
                 + EllFun.const(self.s, curve))
        return recon == h


@dataclass
class ResidueObstruction:
    """Simple-pole remainders blocking a global primitive.

    ``even_part`` is (n0, d0) for the differential n0/d0 * dX/Y and
    ``odd_part`` is (n0, d0) for n0/d0 * dX; either may be None.  The
    torsion-resolved residue divisor is filled in when a lattice is
    available (see ``residual_points``).
    """
    even_part: object
    odd_part: object
    curve: object
    points: object = None


def _ratfun(p: Poly) -> RatFun:
    return RatFun.from_poly(p)


def _l_op(s: RatFun, curve) -> RatFun:
    """X-part of d(s(X) Y)/dz, namely s'C + s C'/2."""
    dom = curve.field
    c = _ratfun(curve_cubic(curve))
    cp = _ratfun(curve_cubic(curve).derivative())
    return s.derivative() * c + s * cp * RatFun.const(
        dom.one / dom.from_int(2), dom)


def _mod_inverse(p: Poly, v: Poly):
    g, sinv, _ = poly_exgcd(p % v, v)
    if g.degree != 0:
        return None
    return sinv


def _even_reduce(a: RatFun, curve):
    """Reduce a(X) dX/Y modulo exact differentials.

    Returns (s_acc, alpha, beta, n0, d0): a = L(s_acc) + alpha + beta*X +
    n0/d0 with d0 squarefree and coprime to the cubic; n0/d0 is the
    residue obstruction of the even part.
    """
    dom = curve.field
    cub = curve_cubic(curve)
    s_acc = RatFun.zero(dom)
    rem = a
    for _ in range(10000):
        den = rem.den
        if den.degree == 0:
            break
        sq = squarefree_decomposition(den)
        step = None
        for v, m in sq:
            vc = poly_gcd(v, cub)
            if vc.degree > 0:
                step = ("cubic", vc, m)
                break
        if step is None:
            for v, m in sq:
                if m >= 2:
                    step = ("plain", v, m)
                    break
        if step is None:
            break
        kind, v, m = step
        vm = Poly.const(dom.one, dom)
        for _ in range(m):
            vm = vm * v
        cof = den // vm
        n_target = rem.num % v
        cof_inv = _mod_inverse(cof, v)
        if kind == "cubic":
            # candidate s*Y/v^m; the v^-m coefficient is (1/2 - m) s v' C1
            c1 = cub // v
            half = dom.one / dom.from_int(2)
            coef = (v.derivative() * c1).scale(half - dom.from_int(m))
            power = m
        else:
            # candidate s*Y/v^(m-1); the v^-m coefficient is (1-m) s v' C
            coef = (v.derivative() * cub).scale(dom.from_int(1 - m))
            power = m - 1
        coef_inv = _mod_inverse(coef, v)
        if cof_inv is None or coef_inv is None:
            raise ArithmeticError("unexpected non-invertible factor")
        s = (n_target * cof_inv * coef_inv) % v
        vpow = Poly.const(dom.one, dom)
        for _ in range(power):
            vpow = vpow * v
        s_step = RatFun(s, vpow)
        s_acc = s_acc + s_step
        rem = rem - _l_op(s_step, curve)
    else:
        raise ArithmeticError("even reduction did not terminate")
    # polynomial part: knock degrees down to <= 1
    quo, frac_num = rem.num.divmod(rem.den)
    while quo.degree >= 2:
        k = quo.degree
        lead = quo.c[-1]
        s_step = RatFun.from_poly(
            Poly([dom.zero] * (k - 2) + [lead / dom.from_int(4 * k - 2)], dom))
        s_acc = s_acc + s_step
        quo = quo - _l_op(s_step, curve).num  # polynomial; den == 1
    alpha = quo.coeff(0)
    beta = quo.coeff(1)
    return s_acc, alpha, beta, frac_num, rem.den


def elliptic_primitive(h: EllFun, curve=None, lattice=None):
    """Primitive of h of the shape u + r*zeta + s*z, or the obstruction.

    The even part reduces to alpha dX/Y + beta X dX/Y modulo exact
    differentials, fixing s = alpha and r = -beta (the zeta term absorbs
    the X direction since d(zeta)/dz = -X); the odd part must integrate to
    a rational function outright.  Surviving simple-pole terms are returned
    as a ResidueObstruction value, torsion-resolved when a lattice is
    supplied.
    """
    curve = curve or h.curve
    dom = curve.field
    # odd part: p' = b exactly, Hermite reduction of the rational integral
    rat_part, log_num, log_den, poly_part = hermite_reduce(
        h.b.num, h.b.den)
    odd_obstruction = None if log_num.is_zero() else (log_num, log_den)
    p = rat_part + RatFun.from_poly(integrate_poly(poly_part))
    # even part
    s_acc, alpha, beta, n0, d0 = _even_reduce(h.a, curve)
    even_obstruction = None if n0.is_zero() else (n0, d0)
    if odd_obstruction or even_obstruction:
        obs = ResidueObstruction(even_obstruction, odd_obstruction, curve)
        if lattice is not None:
            obs.points = residual_points(h, curve, lattice)
        return obs
    u = EllFun.from_parts(p, s_acc, curve)
    result = PrimitiveResult(u=u, r=dom.zero - beta, s=alpha)
    assert result.verify(h), "primitive reconstruction failed"
    return result


# ---------------------------------------------------------------------------
# residues and polar divisors
# ---------------------------------------------------------------------------

def _rational_roots(p: Poly, curve):
    """Exact scalar roots of p (squarefree); the non-split cofactor remains.

    Roots are found numerically and certified by exact evaluation, so only
    roots lying in the scalar field are returned.
    """
    dom = curve.field
    roots = []
    work = p
    # numeric localisation
    coeffs = []
    for k in range(p.degree, -1, -1):
        coeffs.append(complex(dom.to_mp(p.coeff(k), mpmath, (0, 0))))
    if len(coeffs) <= 1:
        return [], work
    try:
        approx = mpmath.polyroots(coeffs, maxsteps=200, extraprec=80)
    except mpmath.libmp.NoConvergence:
        return [], work
    for root in approx:
        cand = _reconstruct_scalar(root, dom)
        if cand is None:
            continue
        lin = Poly([dom.zero - cand, dom.one], dom)
        q, r = work.divmod(lin)
        if r.is_zero():
            roots.append(cand)
            work = q
    return roots, work


def _reconstruct_scalar(x, dom):
    re = Fraction(mpmath.nstr(mpmath.re(x), 17)).limit_denominator(10 ** 7)
    im = Fraction(mpmath.nstr(mpmath.im(x), 17)).limit_denominator(10 ** 7)
    tol = 1e-10
    if abs(mpmath.im(x) - mpmath.mpf(im.numerator) / im.denominator) > tol:
        return None
    if abs(mpmath.re(x) - mpmath.mpf(re.numerator) / re.denominator) > tol:
        return None
    from . import scalars
    if dom is scalars.RATIONAL:
        return re if not im else None
    if dom is scalars.GAUSSIAN:
        return scalars.GaussianRational(re, im)
    return None


def _as_fraction(value, dom):
    f = dom.rational_part(value)
    if f is None:
        raise UnresolvedPoles(f"residue {value!r} is not rational")
    return f


def _torsion_table(lattice, max_denominator):
    """Cached (wp, wp') values on the 1/N torsion grid of the lattice."""
    from . import numerics
    key = ("torsion-table", max_denominator)
    table = lattice._memo.get(key)
    if table is not None:
        return table
    n = max_denominator
    table = []
    with mpmath.workdps(lattice.precision + 10):
        for i in range(n):
            for j in range(n):
                if i == 0 and j == 0:
                    continue
                pt = TorsionPoint(Fraction(i, n), Fraction(j, n))
                zc = torsion_to_complex(lattice, pt)
                p, pp, _ = numerics.wp_eval(lattice, zc)
                table.append((pt, p, pp))
    lattice._memo[key] = table
    return table


def identify_torsion(lattice, x0, y0=None, max_denominator=24):
    """Locate the curve point with wp = x0 (and, optionally, wp' = y0) on
    the torsion grid; None if no grid point matches at precision."""
    digits = lattice.precision
    with mpmath.workdps(digits + 10):
        x0 = mpmath.mpc(x0)
        tol = mpmath.mpf(10) ** (-(digits // 2))
        best = None
        for pt, p, pp in _torsion_table(lattice, max_denominator):
            if abs(p - x0) > tol * max(1, abs(x0)):
                continue
            if y0 is None:
                if best is None or pt.order_denominator() < \
                        best.order_denominator():
                    best = pt
                continue
            if abs(pp - mpmath.mpc(y0)) <= abs(pp + mpmath.mpc(y0)):
                return pt
        return best


def residual_points(h: EllFun, curve, lattice) -> "PeriodicDivisor":
    """Divisor of residues of h dz; exact values, torsion-located support.

    Residue values come from the exact reduction remainders; only the
    placement of the poles on the torsion grid uses the lattice, and each
    placement is verified numerically at the lattice precision.
    """
    from .divisors import PeriodicDivisor
    dom = curve.field
    _, _, _, n_even, d_even = _even_reduce(h.a, curve)
    _, n_odd, d_odd, _ = hermite_reduce(h.b.num, h.b.den)
    cub = curve_cubic(curve)
    entries = {}

    def add(point, value):
        entries[point] = entries.get(point, Fraction(0)) + value

    total = Fraction(0)
    # odd remainder: n/d dX; two sheet points share the residue value,
    # a cubic root doubles it at the single two-torsion point
    if not n_odd.is_zero():
        roots, cof = _rational_roots(d_odd, curve)
        if cof.degree > 0:
            raise UnresolvedPoles("pole x-locations outside the scalar field")
        dp = d_odd.derivative()
        for x0 in roots:
            val = _as_fraction(n_odd.eval(x0) / dp.eval(x0), dom)
            if cub.eval(x0) == dom.zero:
                pt = identify_torsion(lattice, dom.to_mp(x0, mpmath, None))
                if pt is None:
                    raise UnresolvedPoles(f"two-torsion pole at X={x0}")
                add(pt, 2 * val)
                total += 2 * val
            else:
                # both sheet points carry the same residue, so the pair
                # needs no branch disambiguation
                pt = identify_torsion(lattice, dom.to_mp(x0, mpmath, None))
                if pt is None:
                    raise UnresolvedPoles(f"pole at X={x0} not on the grid")
                add(pt, val)
                add(-pt, val)
                total += 2 * val
    # even remainder: n/d dX/Y; opposite residues on the two sheets
    if not n_even.is_zero():
        roots, cof = _rational_roots(d_even, curve)
        if cof.degree > 0:
            raise UnresolvedPoles("pole x-locations outside the scalar field")
        dp = d_even.derivative()
        for x0 in roots:
            y0 = _sqrt_in_field(cub.eval(x0), dom)
            if y0 is None:
                raise UnresolvedPoles(
                    f"pole at X={x0} has irrational residue")
            val = _as_fraction(n_even.eval(x0) / (dp.eval(x0) * y0), dom)
            pt = identify_torsion(lattice, dom.to_mp(x0, mpmath, None),
                                  dom.to_mp(y0, mpmath, None))
            if pt is None:
                raise UnresolvedPoles(f"pole at X={x0} not on the grid")
            add(pt, val)
            add(-pt, -val)
    # the origin picks up minus the sum (total residue of a differential
    # on the curve vanishes)
    if total:
        add(ZERO_POINT, -total)
    return PeriodicDivisor(entries)


def _sqrt_in_field(value, dom):
    """Exact square root in the scalar field, or None."""
    f = dom.rational_part(value)
    if f is None:
        return None
    if f < 0:
        from . import scalars
        if dom is scalars.GAUSSIAN:
            r = _fraction_sqrt(-f)
            return None if r is None else scalars.GaussianRational(0, r)
        return None
    r = _fraction_sqrt(f)
    if r is None:
        return None
    return dom.from_fraction(r)


def _fraction_sqrt(f: Fraction):
    from math import isqrt
    a, b = isqrt(f.numerator), isqrt(f.denominator)
    if a * a == f.numerator and b * b == f.denominator:
        return Fraction(a, b)
    return None


def polar_divisor(h: EllFun, ell: int, lattice, max_denominator=24):
    """Divisor of the degree -ell Laurent coefficients of h.

    The coefficient at the origin is exact (series arithmetic over the
    scalar field); order one elsewhere reuses the exact residue machinery;
    higher orders at finite points use verified quadrature plus rational
    reconstruction.
    """
    from .divisors import PeriodicDivisor
    from . import numerics
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if ell == 1:
        curve = h.curve
        return residual_points(h, curve, lattice)
    curve = h.curve
    dom = curve.field
    entries = {}
    series = ellfun_series_at_zero(h, 2)
    c0 = series.coeff(-ell)
    if c0:
        f0 = dom.rational_part(c0)
        if f0 is None:
            raise UnresolvedPoles("origin coefficient not rational")
        entries[ZERO_POINT] = f0
    # finite poles: union of denominator roots of both parts
    pole_dens = []
    for rf in (h.a, h.b):
        if rf.den.degree > 0:
            pole_dens.append(rf.den)
    xs = set()
    for d in pole_dens:
        roots, cof = _rational_roots(_squarefree_part(d), curve)
        if cof.degree > 0:
            raise UnresolvedPoles("pole x-locations outside the scalar field")
        xs.update(roots)
    digits = lattice.precision
    with mpmath.workdps(digits + 10):
        for x0 in xs:
            for sign in (1, -1):
                pt = identify_torsion(
                    lattice, dom.to_mp(x0, mpmath, None),
                    max_denominator=max_denominator)
                if pt is None:
                    raise UnresolvedPoles(f"pole at X={x0} not on the grid")
                pt = pt if sign == 1 else -pt
                zc = torsion_to_complex(lattice, pt)
                radius = min(abs(lattice.omega1), abs(lattice.omega2)) / 8

                def f(w):
                    return eval_numeric(h, lattice, w)

                coeff = numerics.laurent_coeffs(
                    f, zc, [-ell], radius, digits=min(digits, 25))[-ell]
                frac = Fraction(mpmath.nstr(mpmath.re(coeff), 15)
                                ).limit_denominator(10 ** 6)
                if abs(coeff - mpmath.mpf(frac.numerator) / frac.denominator
                       ) > mpmath.mpf(10) ** -8:
                    raise UnresolvedPoles(
                        f"coefficient at {pt} is not rational")
                if frac:
                    entries[pt] = entries.get(pt, Fraction(0)) + frac
                if pt == -pt:
                    break
    return PeriodicDivisor(entries)


def _squarefree_part(p: Poly):
    out = Poly.const(p.dom.one, p.dom)
    for v, _ in squarefree_decomposition(p):
        out = out * v
    return out
