"""Realizing prescribed commuting unipotent monodromy in the z/zeta ring.

Given commuting unipotent integer or rational matrices (M1, M2) attached to
an oriented period basis, the construction produces a matrix of polynomials
in z and zeta with arbitrary-precision complex coefficients satisfying
Z(z + omega_i) = Z(z) M_i: a combination ell = a z + b zeta realising the
periods (0, 1) exponentiates against the nilpotent logarithms.  The
coefficients are numeric because a and b involve the quasi-periods; exact
modules never consume the realization, only the verifier does.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath

from .errors import NotCommuting, NotNilpotent, NotUnipotent
from .lattice import NumericLattice


# -- exact rational matrix helpers ---------------------------------------------

def fmat(rows):
    return [[Fraction(x) for x in row] for row in rows]


def fmat_identity(n):
    return [[Fraction(i == j) for j in range(n)] for i in range(n)]


def fmat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def fmat_scale(a, s):
    return [[x * s for x in row] for row in a]


def fmat_mul(a, b):
    n, m, k = len(a), len(b[0]), len(b)
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def fmat_sub(a, b):
    return fmat_add(a, fmat_scale(b, Fraction(-1)))


def fmat_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def fmat_is_zero(a):
    return all(not x for row in a for x in row)


def is_unipotent(m):
    n = len(m)
    w = fmat_sub(m, fmat_identity(n))
    p = w
    for _ in range(n - 1):
        if fmat_is_zero(p):
            return True
        p = fmat_mul(p, w)
    return fmat_is_zero(p)


def nilpotent_log(m):
    """log of a unipotent matrix by the finite alternating sum."""
    n = len(m)
    if not is_unipotent(m):
        raise NotUnipotent("matrix is not unipotent")
    w = fmat_sub(m, fmat_identity(n))
    out = [[Fraction(0)] * n for _ in range(n)]
    p = fmat_identity(n)
    for k in range(1, n + 1):
        p = fmat_mul(p, w)
        out = fmat_add(out, fmat_scale(p, Fraction((-1) ** (k - 1), k)))
    return out


def nilpotent_exp(nmat):
    """exp of a nilpotent matrix; exact and finite."""
    n = len(nmat)
    # nilpotency check: N^n = 0
    power = fmat_identity(n)
    for _ in range(n):
        power = fmat_mul(power, nmat)
    if not fmat_is_zero(power):
        raise NotNilpotent("matrix is not nilpotent")
    out = fmat_identity(n)
    term = fmat_identity(n)
    fact = 1
    for k in range(1, n):
        term = fmat_mul(term, nmat)
        fact *= k
        out = fmat_add(out, fmat_scale(term, Fraction(1, fact)))
    return out


@dataclass
class UnipotentPair:
    """Commuting unipotent monodromy data; both conditions checked exactly."""
    m1: list
    m2: list

    def __post_init__(self):
        self.m1 = fmat(self.m1)
        self.m2 = fmat(self.m2)
        if not is_unipotent(self.m1) or not is_unipotent(self.m2):
            raise NotUnipotent("both matrices must be unipotent")
        if not fmat_eq(fmat_mul(self.m1, self.m2),
                       fmat_mul(self.m2, self.m1)):
            raise NotCommuting("monodromy matrices must commute")

    @property
    def n(self):
        return len(self.m1)


# -- numeric polynomial matrices -------------------------------------------------

def _pd_add(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v != 0}


def _pd_scale(a, s):
    return {k: v * s for k, v in a.items()}


def _pd_mul(a, b):
    out = {}
    for (i1, j1), v1 in a.items():
        for (i2, j2), v2 in b.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out.get(k, 0) + v1 * v2
    return out


def _pmat_mul(a, b):
    n = len(a)
    return [[_reduce_pd(
        _fold_add(_pd_mul(a[i][t], b[t][j]) for t in range(n)))
        for j in range(n)] for i in range(n)]


def _fold_add(dicts):
    out = {}
    for d in dicts:
        for k, v in d.items():
            out[k] = out.get(k, 0) + v
    return out


def _reduce_pd(d):
    return {k: v for k, v in d.items() if v != 0}


class RealizationMatrix:
    """Matrix of polynomials in (z, zeta) with mpc coefficients."""

    __slots__ = ("entries", "n", "precision")

    def __init__(self, entries, precision):
        self.entries = entries
        self.n = len(entries)
        self.precision = precision

    def evaluate(self, lattice: NumericLattice, z):
        from . import numerics
        with mpmath.workdps(self.precision + 10):
            z = mpmath.mpc(z)
            _, _, zt = numerics.wp_eval(lattice, z)
            out = []
            for row in self.entries:
                out.append([_pd_eval(e, z, zt) for e in row])
            return out

    def det_minus_one_coeffs(self):
        """Coefficients of det(Z) - 1 as a polynomial; all should vanish."""
        n = self.n
        import itertools
        acc = {}
        for perm in itertools.permutations(range(n)):
            sign = _perm_sign(perm)
            term = {(0, 0): mpmath.mpc(sign)}
            for i in range(n):
                term = _pd_mul(term, self.entries[i][perm[i]])
            acc = _pd_add(acc, term)
        acc = _pd_add(acc, {(0, 0): mpmath.mpc(-1)})
        return acc


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _pd_eval(d, z, zt):
    acc = mpmath.mpc(0)
    for (i, j), v in d.items():
        acc += v * z ** i * zt ** j
    return acc


def period_function(lattice: NumericLattice):
    """(a, b) with ell = a z + b zeta satisfying ell(z + omega2) = ell(z)
    and ell(z + omega1) = ell(z) + 1.

    The linear system pairs the periods with the quasi-periods; its
    determinant is the Legendre constant, hence never zero.
    """
    with mpmath.workdps(lattice.precision + 10):
        w1, w2 = lattice.omega1, lattice.omega2
        e1, e2 = lattice.eta1, lattice.eta2
        # solve [[w2, e2], [w1, e1]] (a, b)^T = (0, 1)^T by Cramer;
        # the determinant is minus the Legendre constant
        den = w2 * e1 - w1 * e2      # = -2 pi i
        a = -e2 / den
        b = w2 / den
        return a, b


def realize(pair: UnipotentPair, lattice: NumericLattice) -> RealizationMatrix:
    """Z(z) = exp(ell(z) log V) exp((z / omega2) N2) with
    V = M1 exp(-(omega1/omega2) N2) and N2 = log M2.

    Entries are polynomials in z and zeta of degree below the matrix size;
    the determinant is identically one (exponentials of nilpotents).
    """
    n = pair.n
    prec = lattice.precision
    with mpmath.workdps(prec + 15):
        n2 = nilpotent_log(pair.m2)
        tau = lattice.omega1 / lattice.omega2
        n2_mp = [[mpmath.mpc(x.numerator) / x.denominator for x in row]
                 for row in n2]
        m1_mp = [[mpmath.mpc(x.numerator) / x.denominator for x in row]
                 for row in pair.m1]
        v = _mp_mat_mul(m1_mp, _mp_nilpotent_exp(_mp_scale(n2_mp, -tau)))
        logv = _mp_nilpotent_log(v, n)
        a, b = period_function(lattice)
        ell = {(1, 0): a, (0, 1): b}
        ztilde = _poly_nilpotent_exp(ell, logv, n)
        zlin = {(1, 0): 1 / lattice.omega2}
        e2 = _poly_nilpotent_exp(zlin, n2_mp, n)
        z = _pmat_mul(ztilde, e2)
        return RealizationMatrix(z, prec)


def _mp_scale(m, s):
    return [[x * s for x in row] for row in m]


def _mp_mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)]


def _mp_nilpotent_exp(nm):
    n = len(nm)
    out = [[mpmath.mpc(1 if i == j else 0) for j in range(n)]
           for i in range(n)]
    term = [[mpmath.mpc(1 if i == j else 0) for j in range(n)]
            for i in range(n)]
    fact = 1
    for k in range(1, n):
        term = _mp_mat_mul(term, nm)
        fact *= k
        out = [[x + t / fact for x, t in zip(ro, rt)]
               for ro, rt in zip(out, term)]
    return out


def _mp_nilpotent_log(m, n):
    ident = [[mpmath.mpc(1 if i == j else 0) for j in range(n)]
             for i in range(n)]
    w = [[x - y for x, y in zip(rm, ri)] for rm, ri in zip(m, ident)]
    out = [[mpmath.mpc(0)] * n for _ in range(n)]
    term = ident
    for k in range(1, n + 1):
        term = _mp_mat_mul(term, w)
        out = [[x + t * ((-1) ** (k - 1)) / k for x, t in zip(ro, rt)]
               for ro, rt in zip(out, term)]
    return out


def _poly_nilpotent_exp(scalar_poly, nilmat, n):
    """exp(scalar_poly * nilmat) as a matrix of (z, zeta) polynomials."""
    out = [[{(0, 0): mpmath.mpc(1)} if i == j else {} for j in range(n)]
           for i in range(n)]
    mat_pow = [[mpmath.mpc(1 if i == j else 0) for j in range(n)]
               for i in range(n)]
    poly_pow = {(0, 0): mpmath.mpc(1)}
    fact = 1
    for k in range(1, n):
        mat_pow = _mp_mat_mul(mat_pow, nilmat)
        poly_pow = _pd_mul(poly_pow, scalar_poly)
        fact *= k
        for i in range(n):
            for j in range(n):
                if mat_pow[i][j] == 0:
                    continue
                out[i][j] = _pd_add(
                    out[i][j],
                    _pd_scale(poly_pow, mat_pow[i][j] / fact))
    return out


def verify_monodromy(zmat: RealizationMatrix, pair: UnipotentPair,
                     lattice: NumericLattice, trials: int = 5, seed: int = 0):
    """Max over random points of |Z(z + omega_i) - Z(z) M_i|."""
    import random
    rng = random.Random(seed)
    prec = lattice.precision
    worst = mpmath.mpf(0)
    with mpmath.workdps(prec + 10):
        mats = [[[mpmath.mpc(x.numerator) / x.denominator for x in row]
                 for row in m] for m in (pair.m1, pair.m2)]
        for _ in range(trials):
            u = rng.uniform(0.1, 0.9)
            v = rng.uniform(0.1, 0.9)
            z0 = u * lattice.omega1 + v * lattice.omega2
            base = zmat.evaluate(lattice, z0)
            for omega, m in zip((lattice.omega1, lattice.omega2), mats):
                shifted = zmat.evaluate(lattice, z0 + omega)
                prod = _mp_mat_mul(base, m)
                diff = max(abs(a - b) for ra, rb in zip(shifted, prod)
                           for a, b in zip(ra, rb))
                worst = max(worst, diff)
    return worst


# -- potential unipotence -----------------------------------------------------

def charpoly(m):
    """Characteristic polynomial coefficients (monic, descending) by the
    Faddeev-LeVerrier recursion over exact rationals."""
    n = len(m)
    coeffs = [Fraction(1)]
    am = m
    ident = fmat_identity(n)
    for k in range(1, n + 1):
        c = -sum(am[i][i] for i in range(n)) / k
        coeffs.append(c)
        if k < n:
            am = fmat_mul(m, fmat_add(am, fmat_scale(ident, c)))
    return coeffs


def cyclotomic(n):
    """Integer coefficients of the n-th cyclotomic polynomial, ascending."""
    # x^n - 1 divided by the product of lower cyclotomics
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _int_poly_div(poly, cyclotomic(d))
    return poly


def _int_poly_div(a, b):
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] // b[-1]
        out[k] = c
        for j, x in enumerate(b):
            a[k + j] -= c * x
    assert all(x == 0 for x in a[:len(b) - 1]), "non-exact division"
    return out


def _euler_phi(n):
    out = 1
    k = 2
    m = n
    while k * k <= m:
        if m % k == 0:
            p = 1
            while m % k == 0:
                m //= k
                p *= k
            out *= p - p // k
        k += 1
    if m > 1:
        out *= m - 1
    return out


def check_potential_unipotence(m, c, q: int, order_bound: int = 64):
    """Verify M = C M^q C^-1 exactly and that all eigenvalues of M are
    roots of unity, by dividing the characteristic polynomial by cyclotomic
    polynomials of admissible degree.

    Returns (relation_holds, all_roots_of_unity, orders).
    """
    m = fmat(m)
    c = fmat(c)
    n = len(m)
    mq = fmat_identity(n)
    for _ in range(q):
        mq = fmat_mul(mq, m)
    try:
        cinv = _fmat_inverse(c)
    except ZeroDivisionError:
        raise NotCommuting("conjugating matrix is singular")
    relation = fmat_eq(m, fmat_mul(fmat_mul(c, mq), cinv))
    # characteristic polynomial, ascending integer-scaled
    cp = charpoly(m)
    asc = list(reversed(cp))  # ascending, rational
    from math import lcm
    den = 1
    for x in asc:
        den = lcm(den, x.denominator)
    poly = [int(x * den) for x in asc]
    orders = []
    deg = len(poly) - 1
    k = 1
    while deg > 0 and k <= order_bound:
        if _euler_phi(k) <= deg:
            cyc = cyclotomic(k)
            q2, ok = _try_int_poly_div(poly, cyc)
            while ok:
                orders.append(k)
                poly = q2
                deg = len(poly) - 1
                if deg == 0:
                    break
                q2, ok = _try_int_poly_div(poly, cyc)
        k += 1
    all_unity = (len(poly) == 1)
    return relation, all_unity, sorted(set(orders))


def _try_int_poly_div(a, b):
    if len(a) < len(b):
        return a, False
    a2 = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        if a2[k + len(b) - 1] % b[-1] != 0:
            return a, False
        c = a2[k + len(b) - 1] // b[-1]
        out[k] = c
        for j, x in enumerate(b):
            a2[k + j] -= c * x
    if any(x != 0 for x in a2[:len(b) - 1]):
        return a, False
    return out, True


def _fmat_inverse(m):
    n = len(m)
    work = [list(row) + [Fraction(i == j) for j in range(n)]
            for i, row in enumerate(m)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if work[r][col]:
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        work[col], work[piv] = work[piv], work[col]
        pv = work[col][col]
        work[col] = [x / pv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return [row[n:] for row in work]
