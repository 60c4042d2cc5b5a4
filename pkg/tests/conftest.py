import random

import mpmath
import pytest

from ellq.lattice import make_exact_curve, make_numeric_lattice, named_lattice


@pytest.fixture(scope="session")
def lem_curve():
    return make_exact_curve(4, 0, 2)


@pytest.fixture(scope="session")
def lem_curve_q3():
    return make_exact_curve(4, 0, 3)


@pytest.fixture(scope="session")
def equi_curve():
    return make_exact_curve(0, 4, 2)


@pytest.fixture(scope="session")
def lem_lattice():
    return named_lattice("lemniscatic", 30)


@pytest.fixture(scope="session")
def lem_lattice_40():
    return named_lattice("lemniscatic", 40)


@pytest.fixture(scope="session")
def equi_lattice():
    return named_lattice("equianharmonic", 30)


@pytest.fixture
def rng():
    return random.Random(20240817)


def lattice_for_real_curve(g2, g3, digits=30):
    """Search a rectangular (or half-turned) lattice matching real (g2, g3).

    Bisection on the imaginary-axis shape parameter against the absolute
    invariant, then a scaling that is real or a quarter turn depending on
    the sign wanted for g3.  Test helper only: the package itself computes
    invariants from periods, never the reverse.
    """
    from fractions import Fraction
    g2 = Fraction(g2)
    g3 = Fraction(g3)
    with mpmath.workdps(digits + 15):
        g2 = mpmath.mpf(g2.numerator) / g2.denominator
        g3 = mpmath.mpf(g3.numerator) / g3.denominator
        disc = g2 ** 3 - 27 * g3 ** 2
        if not disc > 0:
            raise ValueError(
                "helper only covers rectangular lattices (disc > 0)")
        target = 1728 * g2 ** 3 / disc

        def jval(t):
            lat = make_numeric_lattice(mpmath.mpc(0, t), mpmath.mpf(1),
                                       digits + 10)
            num = lat.g2n ** 3
            return mpmath.re(1728 * num / (num - 27 * lat.g3n ** 2))

        lo, hi = mpmath.mpf(1), mpmath.mpf(1)
        while jval(hi) < target:
            hi *= 2
        for _ in range(int(3.4 * (digits + 12))):
            mid = (lo + hi) / 2
            if jval(mid) < target:
                lo = mid
            else:
                hi = mid
        t = (lo + hi) / 2
        base = make_numeric_lattice(mpmath.mpc(0, t), mpmath.mpf(1),
                                    digits + 10)
        if not g2:
            raise ValueError("helper needs g2 != 0")
        mu = (mpmath.re(base.g2n) / g2) ** mpmath.mpf("0.25")
        lam = mu if mpmath.re(base.g3n) * g3 >= 0 else mu * mpmath.mpc(0, 1)
        lat = make_numeric_lattice(base.omega1 * lam, base.omega2 * lam,
                                   digits)
        assert abs(lat.g2n - g2) < mpmath.mpf(10) ** (6 - digits)
        assert abs(lat.g3n - g3) < mpmath.mpf(10) ** (6 - digits)
        return lat
