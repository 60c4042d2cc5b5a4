"""Exact arithmetic in the elliptic function field of a curve.

Elements are a(X) + b(X)*Y with a, b rational functions over the curve's
scalar field, reduced modulo Y^2 = 4X^3 - g2*X - g3.  The dilation operator
acts by composition with the multiplication-by-n images (built from the
classical addition formulas and cross-validated against the numeric oracle),
and d/dz acts through dX = Y dz, dY = (6X^2 - g2/2) dz.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import DivisionByZero, NearPole, NotInPhiImage
from .lattice import ExactCurve
from .linalg import nullspace
from .polys import Poly, RatFun


@lru_cache(maxsize=None)
def curve_cubic(curve: ExactCurve) -> Poly:
    """4X^3 - g2*X - g3 over the curve's scalar field."""
    s = curve.field
    return Poly([-curve.g3, -curve.g2, s.zero, s.from_int(4)], s)


@lru_cache(maxsize=None)
def _cubic_rf(curve):
    return RatFun.from_poly(curve_cubic(curve))


class EllFun:
    """a(X) + b(X)*Y on a fixed curve; canonical via reduced fractions."""

    __slots__ = ("a", "b", "curve")

    def __init__(self, a: RatFun, b: RatFun, curve: ExactCurve):
        self.a = a
        self.b = b
        self.curve = curve

    # -- constructors ---------------------------------------------------

    @staticmethod
    def const(value, curve):
        s = curve.field
        if isinstance(value, (int, Fraction)) and not isinstance(s.zero, Fraction):
            value = s.from_fraction(Fraction(value))
        elif isinstance(value, int):
            value = s.from_int(value)
        return EllFun(RatFun.const(value, s), RatFun.zero(s), curve)

    @staticmethod
    def zero(curve):
        s = curve.field
        return EllFun(RatFun.zero(s), RatFun.zero(s), curve)

    @staticmethod
    def one(curve):
        return EllFun.const(1, curve)

    @staticmethod
    def X(curve):
        s = curve.field
        return EllFun(RatFun.gen(s), RatFun.zero(s), curve)

    @staticmethod
    def Y(curve):
        s = curve.field
        return EllFun(RatFun.zero(s), RatFun.const(s.one, s), curve)

    @staticmethod
    def from_parts(a: RatFun, b: RatFun, curve):
        return EllFun(a, b, curve)

    # -- structure --------------------------------------------------------

    def is_zero(self):
        return self.a.is_zero() and self.b.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_constant(self):
        return self.b.is_zero() and self.a.is_constant()

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.a.constant_value()

    def rational_constant(self):
        """The value as a Fraction if this is a rational constant, else None."""
        if not self.is_constant():
            return None
        return self.curve.field.rational_part(self.a.constant_value())

    def __eq__(self, other):
        if not isinstance(other, EllFun):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"EllFun(a={self.a!r}, b={self.b!r})"

    def size(self):
        """Crude complexity measure for pivot selection."""
        return (len(self.a.num.c) + len(self.a.den.c)
                + len(self.b.num.c) + len(self.b.den.c))

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, EllFun):
            return other
        return EllFun.const(other, self.curve)

    def __add__(self, other):
        other = self._coerce(other)
        return EllFun(self.a + other.a, self.b + other.b, self.curve)

    __radd__ = __add__

    def __neg__(self):
        return EllFun(-self.a, -self.b, self.curve)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        c = _cubic_rf(self.curve)
        return EllFun(self.a * other.a + self.b * other.b * c,
                      self.a * other.b + self.b * other.a,
                      self.curve)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of the zero function")
        c = _cubic_rf(self.curve)
        norm = self.a * self.a - self.b * self.b * c
        return EllFun(self.a / norm, -self.b / norm, self.curve)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def scale(self, s):
        return EllFun(self.a * RatFun.const(s, self.curve.field),
                      self.b * RatFun.const(s, self.curve.field), self.curve)


class EllFunDomain:
    """Domain adapter so generic Poly/RatFun code runs over the field."""

    __slots__ = ("curve", "zero", "one", "name")

    def __init__(self, curve):
        self.curve = curve
        self.zero = EllFun.zero(curve)
        self.one = EllFun.one(curve)
        self.name = "K_curve"

    def from_int(self, n):
        return EllFun.const(n, self.curve)


@lru_cache(maxsize=None)
def ellfun_domain(curve) -> EllFunDomain:
    return EllFunDomain(curve)


def arith(op: str, f: EllFun, g: EllFun) -> EllFun:
    """Named entry point for the four field operations."""
    if op == "+":
        return f + g
    if op == "-":
        return f - g
    if op == "*":
        return f * g
    if op == "/":
        return f / g
    raise ValueError(f"unknown operation {op!r}")


def derive(f: EllFun) -> EllFun:
    """d/dz: X -> Y, Y -> 6X^2 - g2/2, extended as a derivation."""
    s = f.curve.field
    cub = _cubic_rf(f.curve)
    half_cp = RatFun.from_poly(curve_cubic(f.curve).derivative()) * RatFun.const(
        s.one / s.from_int(2), s)
    x_part = f.b.derivative() * cub + f.b * half_cp
    y_part = f.a.derivative()
    return EllFun(x_part, y_part, f.curve)


@lru_cache(maxsize=None)
def multiplication_images(curve: ExactCurve, n: int):
    """(F_n, H_n) with wp(nz) = F_n(X) and wp'(nz) = H_n(X)*Y.

    Built by iterating the addition law; doubling comes from the duplication
    limit.  Both live in the scalar rational function field.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    s = curve.field
    x = RatFun.gen(s)
    one = RatFun.const(s.one, s)
    if n == 1:
        return x, one
    cub = _cubic_rf(curve)
    two = RatFun.const(s.from_int(2), s)

    def add_step(fu, hu, fv, hv):
        # slope of the chord through (wp(u), wp'(u)), (wp(v), wp'(v)) is
        # sigma(X)*Y with sigma = (hu - hv)/(fu - fv)
        sigma = (hu - hv) / (fu - fv)
        fx = sigma * sigma * cub * RatFun.const(
            s.one / s.from_int(4), s) - fu - fv
        hx = -(sigma * (fx - fu) + hu)
        return fx, hx

    def double_step(fu, hu):
        # tangent slope lambda = wp''(u)/(2 wp'(u)); in cofactor form
        wpp = (RatFun.const(s.from_int(6), s) * fu * fu
               - RatFun.const(curve.g2 / s.from_int(2), s))
        lam_cof = wpp / (two * hu * cub)  # lambda = lam_cof * Y... times hu
        # lambda = wpp / (2 hu Y) = [wpp/(2 hu C)] * Y
        fx = lam_cof * lam_cof * cub - two * fu
        # wp'(2u) = lambda*(6 wp(u) - 2 lambda^2) - wp'(u)
        hx = lam_cof * (RatFun.const(s.from_int(6), s) * fu
                        - two * lam_cof * lam_cof * cub) - hu
        return fx, hx

    fk, hk = double_step(x, one)
    k = 2
    while k < n:
        fk, hk = add_step(fk, hk, x, one)
        k += 1
    return fk, hk


def compose_ratfun(rf: RatFun, inner: RatFun) -> RatFun:
    """rf(inner) over the scalar field.

    Assembled as sums n_i P^i Q^(k-i) against a shared Q^k, so only one
    final reduction runs.
    """
    dom = rf.dom
    p, q = inner.num, inner.den
    k = max(rf.num.degree, rf.den.degree, 0)
    ppow = [Poly.const(dom.one, dom)]
    qpow = [Poly.const(dom.one, dom)]
    for _ in range(k):
        ppow.append(ppow[-1] * p)
        qpow.append(qpow[-1] * q)

    def assemble(poly):
        acc = Poly.zero(dom)
        for i in range(poly.degree + 1):
            c = poly.coeff(i)
            if c:
                acc = acc + (ppow[i] * qpow[k - i]).scale(c)
        return acc

    return RatFun(assemble(rf.num), assemble(rf.den))


def mult_by_n(f: EllFun, n: int) -> EllFun:
    """The image of f under z -> n*z, expressed back in the field."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return f
    fx, hx = multiplication_images(f.curve, n)
    a = compose_ratfun(f.a, fx)
    b = compose_ratfun(f.b, fx) * hx
    return EllFun(a, b, f.curve)


@lru_cache(maxsize=None)
def zeta_defect(curve: ExactCurve, n: int) -> EllFun:
    """zeta(nz) - n*zeta(z) as an element of the function field.

    Built from the zeta addition law; satisfies the exact identity
    derive(result) = n*X - n*mult_by_n(X, n).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    s = curve.field
    if n == 1:
        return EllFun.zero(curve)
    cub = _cubic_rf(curve)
    x = RatFun.gen(s)
    one = RatFun.const(s.one, s)
    two = RatFun.const(s.from_int(2), s)
    # c_2 = wp''/(2 wp') = [(6X^2 - g2/2)/(2C)] * Y
    wpp = RatFun.const(s.from_int(6), s) * x * x - RatFun.const(
        curve.g2 / s.from_int(2), s)
    acc_b = wpp / (two * cub)
    k = 2
    while k < n:
        fk, hk = multiplication_images(curve, k)
        sigma = (hk - one) / (fk - x)
        acc_b = acc_b + sigma / two
        k += 1
    return EllFun(RatFun.zero(s), acc_b, curve)


def phi_field(f: EllFun) -> EllFun:
    """The dilation operator on the function field: f(z) -> f(qz)."""
    return mult_by_n(f, f.curve.q)


def phi_field_inverse(g: EllFun) -> EllFun:
    """Preimage under phi_field; raises NotInPhiImage when none exists.

    Even and odd parts decouple: the even part must be a rational function
    of wp(qz) and the odd cofactor a rational function of wp(qz) as well,
    both found by an exact linear ansatz.
    """
    curve = g.curve
    fx, hx = multiplication_images(curve, curve.q)
    a = _decompose_rational(g.a, fx)
    if a is None:
        raise NotInPhiImage("even part is not a function of the image curve")
    b_target = g.b / hx if not g.b.is_zero() else g.b
    b = _decompose_rational(b_target, fx)
    if b is None:
        raise NotInPhiImage("odd part is not a function of the image curve")
    return EllFun(a, b, curve)


def _ratfun_map_degree(rf: RatFun) -> int:
    return max(rf.num.degree, rf.den.degree)


def _decompose_rational(target: RatFun, inner: RatFun):
    """Find r with r(inner) == target, or None.

    Linear ansatz on the coefficients of num(r), den(r); the composite
    degree deg(r)*deg(inner) pins the degree bound.
    """
    dom = target.dom
    if target.is_zero():
        return RatFun.zero(dom)
    dt = _ratfun_map_degree(target)
    di = _ratfun_map_degree(inner)
    if dt % di != 0:
        return None
    d = dt // di
    p, q = inner.num, inner.den
    # powers P^i Q^(d-i)
    pq = []
    for i in range(d + 1):
        term = Poly.const(dom.one, dom)
        for _ in range(i):
            term = term * p
        for _ in range(d - i):
            term = term * q
        pq.append(term)
    tn, td = target.num, target.den
    cols = []
    for i in range(d + 1):          # numerator coefficients of r
        cols.append(pq[i] * td)
    for j in range(d + 1):          # denominator coefficients of r
        cols.append(-(pq[j] * tn))
    width = len(cols)
    height = max(c.degree for c in cols) + 1
    rows = [[cols[c].coeff(r) for c in range(width)] for r in range(height)]
    basis = nullspace(rows, width, dom.zero, dom.one)
    for vec in basis:
        den = Poly(vec[d + 1:], dom)
        if den.is_zero():
            continue
        num = Poly(vec[:d + 1], dom)
        cand = RatFun(num, den)
        if compose_ratfun(cand, inner) == target:
            return cand
    return None


def eval_numeric(f: EllFun, lattice, z0, env=None):
    """Substitute numeric wp(z0), wp'(z0); NearPole below the precision floor.

    ``env`` overrides the invariant pair used for symbolic scalars; by
    default the lattice's computed invariants are used.
    """
    from . import numerics
    digits = lattice.precision
    p, pp, _ = numerics.wp_eval(lattice, z0)
    with mpmath.workdps(digits + 10):
        if env is None:
            env = (lattice.g2n, lattice.g3n)
        floor = mpmath.mpf(10) ** (-(digits // 2))
        s = f.curve.field

        def conv(c):
            return s.to_mp(c, mpmath, env)

        def rf_eval(rf, at):
            num = _poly_mp_eval(rf.num, at, conv)
            den = _poly_mp_eval(rf.den, at, conv)
            if abs(den) < floor:
                raise NearPole("denominator below the precision floor")
            return num / den

        return rf_eval(f.a, p) + rf_eval(f.b, p) * pp


def _poly_mp_eval(poly, at, conv):
    acc = mpmath.mpc(0)
    for k in range(poly.degree, -1, -1):
        acc = acc * at + conv(poly.coeff(k))
    return acc


# -- exact Laurent data at the origin ----------------------------------------

@lru_cache(maxsize=None)
def curve_series(curve: ExactCurve, count: int):
    """Exact expansion coefficients c_k of wp at 0 (index 2..count)."""
    s = curve.field
    c = {2: curve.g2 / s.from_int(20), 3: curve.g3 / s.from_int(28)}
    for k in range(4, count + 1):
        acc = s.zero
        for m in range(2, k - 1):
            acc = acc + c[m] * c[k - m]
        c[k] = s.from_int(3) * acc / s.from_int((2 * k + 1) * (k - 3))
    return c


class ZSeries:
    """Truncated Laurent series in z over the scalar field."""

    __slots__ = ("offset", "c", "field", "order")

    def __init__(self, offset, coeffs, field, order):
        # series = z^offset * sum(c[k] z^k), valid modulo z^order
        while coeffs and not coeffs[0]:
            coeffs = coeffs[1:]
            offset += 1
        self.offset = offset
        self.c = list(coeffs)
        self.field = field
        self.order = order

    def coeff(self, n):
        k = n - self.offset
        return self.c[k] if 0 <= k < len(self.c) else self.field.zero

    def __add__(self, other):
        off = min(self.offset, other.offset)
        order = min(self.order, other.order)
        out = [self.field.zero] * (order - off)
        for src in (self, other):
            for k, v in enumerate(src.c):
                n = src.offset + k
                if n < order:
                    out[n - off] = out[n - off] + v
        return ZSeries(off, out, self.field, order)

    def __neg__(self):
        return ZSeries(self.offset, [-v for v in self.c], self.field, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        off = self.offset + other.offset
        order = min(self.offset + other.order, other.offset + self.order)
        out = [self.field.zero] * max(0, order - off)
        for i, x in enumerate(self.c):
            if not x:
                continue
            for j, y in enumerate(other.c):
                n = off + i + j
                if n < order and y:
                    out[i + j] = out[i + j] + x * y
        return ZSeries(off, out, self.field, order)

    def inverse(self):
        if not self.c or not self.c[0]:
            raise DivisionByZero("inverting a series with unknown leading term")
        lead = self.c[0]
        n = self.order - self.offset
        inv = [self.field.one / lead]
        for k in range(1, n):
            acc = self.field.zero
            for j in range(1, k + 1):
                cj = self.c[j] if j < len(self.c) else self.field.zero
                acc = acc + cj * inv[k - j]
            inv.append(-acc / lead)
        return ZSeries(-self.offset, inv, self.field, self.order - 2 * self.offset)

    def scale(self, s):
        return ZSeries(self.offset, [v * s for v in self.c], self.field, self.order)


def _xy_series(curve, order):
    """Expansions of X and Y at the origin, exact, modulo z^order."""
    s = curve.field
    count = order // 2 + 4
    c = curve_series(curve, count)
    n = order + 2
    px = [s.zero] * n
    py = [s.zero] * n
    # X = z^-2 * (1 + sum c_k z^(2k)), offset -2
    px[0] = s.one
    for k in range(2, count + 1):
        if 2 * k < n:
            px[2 * k] = c[k]
    # Y = X' = z^-3 * (-2 + sum (2k-2) c_k z^(2k))
    py[0] = s.from_int(-2)
    for k in range(2, count + 1):
        if 2 * k < n:
            py[2 * k] = s.from_int(2 * k - 2) * c[k]
    return (ZSeries(-2, px, s, order), ZSeries(-3, py, s, order))


def ellfun_series_at_zero(f: EllFun, order: int) -> ZSeries:
    """Exact Laurent expansion of f at the origin, modulo z^order."""
    s = f.curve.field
    # generous truncation: rational operations lose terms at the poles
    depth = 2 * max(_ratfun_map_degree(f.a), _ratfun_map_degree(f.b)) + 3
    work = order + 2 * depth + 8
    xs, ys = _xy_series(f.curve, work)

    def rf_series(rf):
        num = _poly_series(rf.num, xs, s, work)
        den = _poly_series(rf.den, xs, s, work)
        return num * den.inverse()

    out = rf_series(f.a)
    if not f.b.is_zero():
        out = out + rf_series(f.b) * ys
    return ZSeries(out.offset, out.c, s, min(out.order, order))


def _poly_series(poly, xs, field, order):
    acc = ZSeries(0, [field.zero], field, order)
    one = ZSeries(0, [field.one], field, order)
    for k in range(poly.degree, -1, -1):
        acc = acc * xs + one.scale(poly.coeff(k))
    return acc
