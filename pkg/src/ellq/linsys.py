"""Matrix-level operations for dilation, derivation and mixed systems.

Matrices live over the fraction field of the z/zeta ring.  The module
provides gauge transforms for both system kinds, the consistency and
integrability residuals of a mixed pair, prolongation, companion and
iterated systems, the dual pair, and the rank-one decision procedure that
reduces hypertranscendence of a first-order dilation equation to the
divisor equation (phi - 1)(D) = div(a).
"""

from __future__ import annotations

from dataclasses import dataclass

from .divisors import (NoSolution, PeriodicDivisor, Solution, abel_jacobi,
                       degree, is_principal, solve_phi_minus_one)
from .errors import (NotADivisorOfAFunction, SingularA, SingularGauge,
                     ZeroTrailingCoefficient)
from .linalg import mat_det, mat_inverse, mat_mul
from .sring import SElem, SFraction


class MatrixOverE:
    """Dense matrix of ring fractions."""

    __slots__ = ("rows", "curve")

    def __init__(self, rows, curve=None):
        self.rows = [list(r) for r in rows]
        self.curve = curve or self.rows[0][0].curve

    # -- constructors -----------------------------------------------------

    @staticmethod
    def from_selems(rows, curve=None):
        return MatrixOverE([[SFraction.from_selem(x) for x in r]
                            for r in rows], curve)

    @staticmethod
    def identity(n, curve):
        one = SFraction.one(curve)
        zero = SFraction.zero(curve)
        return MatrixOverE([[one if i == j else zero for j in range(n)]
                            for i in range(n)], curve)

    @staticmethod
    def zero(n, curve):
        z = SFraction.zero(curve)
        return MatrixOverE([[z for _ in range(n)] for _ in range(n)], curve)

    @property
    def n(self):
        return len(self.rows)

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __eq__(self, other):
        if not isinstance(other, MatrixOverE):
            return NotImplemented
        return all(a == b for ra, rb in zip(self.rows, other.rows)
                   for a, b in zip(ra, rb))

    def is_zero(self):
        return all(x.is_zero() for r in self.rows for x in r)

    def __add__(self, other):
        return MatrixOverE([[a + b for a, b in zip(ra, rb)]
                            for ra, rb in zip(self.rows, other.rows)],
                           self.curve)

    def __sub__(self, other):
        return MatrixOverE([[a - b for a, b in zip(ra, rb)]
                            for ra, rb in zip(self.rows, other.rows)],
                           self.curve)

    def __mul__(self, other):
        if isinstance(other, MatrixOverE):
            return MatrixOverE(
                mat_mul(self.rows, other.rows, SFraction.zero(self.curve)),
                self.curve)
        return MatrixOverE([[x * other for x in r] for r in self.rows],
                           self.curve)

    def __neg__(self):
        return MatrixOverE([[-x for x in r] for r in self.rows], self.curve)

    def transpose(self):
        return MatrixOverE([[self.rows[j][i] for j in range(self.n)]
                            for i in range(self.n)], self.curve)

    def det(self):
        return mat_det(self.rows, SFraction.zero(self.curve),
                       SFraction.one(self.curve))

    def inverse(self):
        try:
            inv = mat_inverse(self.rows, SFraction.zero(self.curve),
                              SFraction.one(self.curve),
                              complexity=lambda x: x.size())
        except SingularGauge:
            raise
        return MatrixOverE(inv, self.curve)

    def map(self, fn):
        return MatrixOverE([[fn(x) for x in r] for r in self.rows],
                           self.curve)

    def phi(self):
        return self.map(lambda x: x.phi())

    def partial(self):
        return self.map(lambda x: x.partial())

    def delta(self):
        return self.map(lambda x: x.delta())


def gauge(mode: str, m: MatrixOverE, p: MatrixOverE) -> MatrixOverE:
    """Base change: dilation systems map by phi(P) M P^-1, derivation
    systems by P M P^-1 + dP/dz P^-1."""
    try:
        pinv = p.inverse()
    except SingularGauge:
        raise SingularGauge("gauge matrix is singular")
    if mode == "difference":
        return p.phi() * m * pinv
    if mode == "differential":
        return p * m * pinv + p.partial() * pinv
    raise ValueError(f"unknown gauge mode {mode!r}")


def gauge_pair(a: MatrixOverE, b: MatrixOverE, p: MatrixOverE):
    return gauge("difference", a, p), gauge("differential", b, p)


def consistency_residual(a: MatrixOverE, b: MatrixOverE) -> MatrixOverE:
    """q phi(B) - A B A^-1 - dA/dz A^-1; zero iff the pair is consistent."""
    try:
        ainv = a.inverse()
    except SingularGauge:
        raise SingularA("system matrix is singular")
    q = a.curve.q
    return b.phi() * q - a * b * ainv - a.partial() * ainv


def integrability_residual(mode: str, a: MatrixOverE,
                           b: MatrixOverE) -> MatrixOverE:
    """partial mode: dA/dz - q phi(B) A + A B;
    delta mode:   delta(A) - phi(B) A + A B."""
    if mode == "partial":
        q = a.curve.q
        return a.partial() - b.phi() * q * a + a * b
    if mode == "delta":
        return a.delta() - b.phi() * a + a * b
    raise ValueError(f"unknown integrability mode {mode!r}")


def prolongation(a: MatrixOverE) -> MatrixOverE:
    """The block system [[A, dA/dz], [0, A]] on pairs (y, y')."""
    n = a.n
    da = a.partial()
    zero = SFraction.zero(a.curve)
    rows = []
    for i in range(n):
        rows.append(list(a.rows[i]) + list(da.rows[i]))
    for i in range(n):
        rows.append([zero] * n + list(a.rows[i]))
    return MatrixOverE(rows, a.curve)


def prolongation_gauge_matrix(p: MatrixOverE) -> MatrixOverE:
    """[[P, dP/dz], [0, P]], the induced base change on prolonged systems."""
    return prolongation(p)


def phi_epsilon(m2n: MatrixOverE) -> MatrixOverE:
    """Entrywise dilation with the top-right block scaled by q.

    This is the dilation action on the dual-number model underlying the
    prolongation: the infinitesimal generator rescales by q under z -> qz,
    so functoriality of the prolongation holds with this twisted action.
    """
    n = m2n.n // 2
    q = m2n.curve.q
    out = m2n.phi()
    for i in range(n):
        for j in range(n, 2 * n):
            out.rows[i][j] = out.rows[i][j] * q
    return out


def companion(coeffs, n: int, curve=None) -> MatrixOverE:
    """Companion matrix of y_(n) + a_1 y_(n-1) + ... + a_n y = 0.

    ``coeffs`` is [a_1, ..., a_n] of ring fractions; a_n must be nonzero so
    the system matrix is invertible.
    """
    if len(coeffs) != n:
        raise ValueError("need exactly n coefficients")
    if coeffs[-1].is_zero():
        raise ZeroTrailingCoefficient("a_n must be nonzero")
    curve = curve or coeffs[0].curve
    zero = SFraction.zero(curve)
    one = SFraction.one(curve)
    rows = []
    for i in range(n - 1):
        rows.append([one if j == i + 1 else zero for j in range(n)])
    rows.append([-coeffs[n - 1 - j] for j in range(n)])
    return MatrixOverE(rows, curve)


def iterate_system(a: MatrixOverE, r: int) -> MatrixOverE:
    """phi^(r-1)(A) ... phi(A) A, the matrix of the r-fold dilated system."""
    if r < 1:
        raise ValueError("r must be >= 1")
    out = a
    power = a
    for _ in range(r - 1):
        power = power.phi()
        out = power * out
    return out


def dual_pair(a: MatrixOverE, b: MatrixOverE):
    """(transpose(A)^-1, -transpose(B)), the matrices of the dual module."""
    try:
        ainv = a.inverse()
    except SingularGauge:
        raise SingularA("system matrix is singular")
    return ainv.transpose(), -(b.transpose())


# -- rank-one decision procedure ----------------------------------------------

@dataclass
class Algebraic:
    """Solutions of the first-order dilation equation are differentially
    algebraic; ``witness`` is the divisor D with (phi - 1)(D) = div(a)."""
    witness: PeriodicDivisor
    power: object = None

    kind = "Algebraic"


@dataclass
class Transcendental:
    """Every nonzero series solution is differentially transcendental."""
    certificate: dict

    kind = "Transcendental"


def rank1_test(div_a: PeriodicDivisor, q: int):
    """Decide the rank-one dichotomy from the divisor of the coefficient.

    Requires a genuine function divisor (integral, degree zero, vanishing
    point sum).  A solution D of the divisor equation certifies the
    coefficient has the shape c * phi(b)/b up to constants, with b given by
    D over the index-q(q-1) sublattice (verified via the scaled point sum);
    otherwise the certificate of unsolvability is returned and every
    solution is differentially transcendental over the function field.
    """
    if not div_a.is_integral():
        raise NotADivisorOfAFunction("divisor must be integer valued")
    if degree(div_a) != 0:
        raise NotADivisorOfAFunction("divisor must have degree zero")
    if not abel_jacobi(div_a).is_zero():
        raise NotADivisorOfAFunction("point sum must vanish")
    res = solve_phi_minus_one(div_a, q)
    if isinstance(res, Solution):
        d = res.divisor
        scale = q * (q - 1)
        if not abel_jacobi(d, scale).is_zero():
            raise AssertionError(
                "witness fails principality over the scaled sublattice")
        return Algebraic(witness=d)
    assert isinstance(res, NoSolution)
    return Transcendental(certificate={"reason": res.reason,
                                       **res.certificate})
