from fractions import Fraction as F

import mpmath
import pytest

from ellq import monodromy as mo
from ellq import numerics
from ellq.errors import NotCommuting, NotNilpotent, NotUnipotent
from ellq.lattice import make_numeric_lattice
from ellq.sampling import sample_unipotent_pair


@pytest.fixture(scope="module")
def lat():
    return make_numeric_lattice(mpmath.mpc("0.21", "1.4"), mpmath.mpf(1), 40)


def test_log_exp_examples():
    ident = [[1, 0], [0, 1]]
    assert mo.fmat_is_zero(mo.nilpotent_log(ident))
    n = mo.nilpotent_log([[1, 1], [0, 1]])
    assert n == [[0, 1], [0, 0]]
    with pytest.raises(NotUnipotent):
        mo.nilpotent_log([[2, 0], [0, 1]])
    with pytest.raises(NotNilpotent):
        mo.nilpotent_exp([[1, 0], [0, 1]])


def test_log_exp_round_trip(rng):
    for _ in range(5):
        n = 4
        mat = mo.fmat_identity(n)
        for i in range(n):
            for j in range(i + 1, n):
                mat[i][j] = F(rng.randrange(-3, 4))
        logm = mo.nilpotent_log(mat)
        assert mo.fmat_eq(mo.nilpotent_exp(logm), mat)


def test_pair_validation():
    with pytest.raises(NotCommuting):
        mo.UnipotentPair([[1, 1, 0], [0, 1, 0], [0, 0, 1]],
                         [[1, 0, 0], [0, 1, 1], [0, 0, 1]])
    with pytest.raises(NotUnipotent):
        mo.UnipotentPair([[2, 0], [0, 1]], [[1, 0], [0, 1]])


def test_period_function(lat):
    a, b = mo.period_function(lat)
    with mpmath.workdps(50):
        # determinant of the period pairing is the circle constant
        det = lat.omega1 * lat.eta2 - lat.omega2 * lat.eta1
        assert abs(det - 2 * mpmath.pi * mpmath.mpc(0, 1)) < \
            mpmath.mpf(10) ** -35
        z0 = mpmath.mpc("0.27", "0.34")

        def ell(z):
            return a * z + b * numerics.wp_eval(lat, z)[2]

        assert abs(ell(z0 + lat.omega2) - ell(z0)) < mpmath.mpf(10) ** -25
        assert abs(ell(z0 + lat.omega1) - ell(z0) - 1) < \
            mpmath.mpf(10) ** -25


def test_realize_identity(lat):
    pair = mo.UnipotentPair([[1, 0], [0, 1]], [[1, 0], [0, 1]])
    z = mo.realize(pair, lat)
    assert z.entries[0][0] == {(0, 0): 1}
    assert z.entries[0][1] == {}
    assert mo.verify_monodromy(z, pair, lat, trials=2) == 0


def test_realize_shear_m1(lat):
    pair = mo.UnipotentPair([[1, 1], [0, 1]], [[1, 0], [0, 1]])
    z = mo.realize(pair, lat)
    # upper entry is exactly ell(z): one z monomial and one zeta monomial
    assert set(z.entries[0][1]) == {(1, 0), (0, 1)}
    res = mo.verify_monodromy(z, pair, lat, trials=4)
    assert res < mpmath.mpf(10) ** -30


def test_realize_shear_m2(lat):
    pair = mo.UnipotentPair([[1, 0], [0, 1]], [[1, 1], [0, 1]])
    z = mo.realize(pair, lat)
    res = mo.verify_monodromy(z, pair, lat, trials=4)
    assert res < mpmath.mpf(10) ** -30


def test_random_pairs(lat, rng):
    worst = mpmath.mpf(0)
    for k in range(8):
        n = rng.choice([2, 3, 4])
        pair = sample_unipotent_pair(rng, n)
        z = mo.realize(pair, lat)
        res = mo.verify_monodromy(z, pair, lat, trials=3, seed=k)
        worst = max(worst, res)
        det = z.det_minus_one_coeffs()
        dmax = max([abs(v) for v in det.values()] or [mpmath.mpf(0)])
        assert dmax < mpmath.mpf(10) ** (10 - lat.precision)
    assert worst < mpmath.mpf(10) ** (10 - lat.precision)


def test_wrong_matrix_detected(lat):
    pair = mo.UnipotentPair([[1, 1], [0, 1]], [[1, 0], [0, 1]])
    z = mo.realize(pair, lat)
    bad = mo.UnipotentPair([[1, 2], [0, 1]], [[1, 0], [0, 1]])
    assert mo.verify_monodromy(z, bad, lat, trials=3) > mpmath.mpf(10) ** -3


def test_potential_unipotence():
    rot = [[F(0), F(-1)], [F(1), F(0)]]       # eigenvalues +-i
    ident = [[F(1), F(0)], [F(0), F(1)]]
    rel, unity, orders = mo.check_potential_unipotence(rot, ident, 5)
    assert rel and unity and orders == [4]
    diag = [[F(2), F(0)], [F(0), F(1)]]
    rel, unity, _ = mo.check_potential_unipotence(diag, ident, 5)
    assert not rel and not unity
    # a genuinely conjugated example: the shear squares to twice itself in
    # the off-diagonal, undone by diag(1/2, 1)
    shear = [[F(1), F(1)], [F(0), F(1)]]
    conj = [[F(1, 2), F(0)], [F(0), F(1)]]
    rel, unity, orders = mo.check_potential_unipotence(shear, conj, 2)
    assert rel and unity and orders == [1]
