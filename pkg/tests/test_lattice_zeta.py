"""Epstein, monomial-weighted, quadrant and mixed lattice zeta functions."""

import math

import mpmath
import numpy as np
import pytest

from qheat.lattice_zeta import (
    epstein_laurent_at_pole,
    epstein_residue,
    epstein_zeta,
    lattice_monomial_zeta,
    mixed_su_zeta,
    quadrant_zeta,
    weighted_epstein_zeta,
)
from qheat.special_functions import PoleError
from qheat.zeta_traces import richardson_limit


def _z2_factorised(s):
    """Z_2(s) = 4 zeta(s/2) beta(s/2) evaluated independently with mpmath."""
    u = s / 2
    return complex(4 * mpmath.zeta(u) * mpmath.dirichlet(u, [0, 1, 0, -1]))


def _brute_z2(s, R=1500):
    """Disc sum |mu| <= R plus the continuum tail 2 pi R^{2-s}/(s-2)."""
    k = np.arange(-R, R + 1, dtype=float)
    n2 = k[:, None] ** 2 + k[None, :] ** 2
    mask = (n2 > 0) & (n2 <= R * R)
    return complex(np.sum(n2[mask] ** (-s / 2))) + 2 * math.pi * R ** (2 - s) / (s - 2)


def test_z2_at_three():
    v = epstein_zeta(2, 3)
    assert abs(v.value - _z2_factorised(3)) < 1e-10
    assert abs(v.value - 9.0336216831009503) < 1e-10  # frozen: 4 zeta(3/2) beta(3/2) at 30 digits
    assert abs(v.value - _brute_z2(3)) < 1e-5


def test_z1_is_twice_riemann_zeta():
    assert abs(epstein_zeta(1, 3).value - 2 * float(mpmath.zeta(3))) < 1e-12


def test_z2_trivial_zero():
    assert abs(epstein_zeta(2, -2).value) < 1e-10


@pytest.mark.parametrize("s", [2.5, 3.0, 4.0, 3 + 2j])
def test_epstein_matches_lattice_sum(s):
    v = epstein_zeta(2, s)
    assert abs(v.value - _z2_factorised(s)) < 1e-9
    assert abs(v.value - _brute_z2(s)) < 1e-4 * max(1.0, abs(v.value))


@pytest.mark.parametrize("s", [-1, -0.5, 0.5 + 1j, 3])
def test_factorisation_via_riemann_and_beta(s):
    assert abs(epstein_zeta(2, 2 * s).value - _z2_factorised(2 * s)) < 1e-9


@pytest.mark.parametrize("d,s", [(2, 0.3), (3, 1.1 + 0.5j), (4, -0.7)])
def test_completed_zeta_reflection(d, s):
    def lam(x):
        return complex(mpmath.pi ** (-x / 2) * mpmath.gamma(x / 2)) * epstein_zeta(d, x).value

    assert abs(lam(s) - lam(d - s)) < 1e-10 * max(1.0, abs(lam(s)))


@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_residue_by_numerical_limit(d):
    hs = [1e-2, 5e-3, 2.5e-3]
    vals = [h * epstein_zeta(d, d + h, near_pole=0).value for h in hs]
    limit, _ = richardson_limit(hs, vals)
    assert abs(limit - epstein_residue(d)) < 1e-6


def test_laurent_data_at_pole():
    assert abs(epstein_laurent_at_pole(2).residue - 2 * math.pi) < 1e-12
    assert abs(epstein_laurent_at_pole(1).residue - 2) < 1e-12
    assert abs(epstein_laurent_at_pole(3).residue - 4 * math.pi) < 1e-12
    # finite part of Z_1 = 2 zeta at 1 is twice Euler's constant
    assert abs(epstein_laurent_at_pole(1).finite_part - 2 * float(mpmath.euler)) < 1e-9


def test_pole_raises():
    with pytest.raises(PoleError):
        epstein_zeta(2, 2.0)


def test_weighted_examples():
    assert abs(weighted_epstein_zeta(1, (2,), 0).value) < 1e-9
    assert abs(weighted_epstein_zeta(2, (0, 0), 0).value + 1) < 1e-12
    assert abs(weighted_epstein_zeta(1, (2,), 5).value - 2 * float(mpmath.zeta(3))) < 1e-10


@pytest.mark.parametrize("d,a", [(1, (2,)), (1, (4,)), (2, (2, 0)), (2, (2, 2)), (2, (4, 2)), (3, (2, 0, 0)),
                                 (3, (2, 2, 4)), (3, (0, 4, 0))])
def test_weighted_zeta_vanishes_at_zero(d, a):
    assert abs(weighted_epstein_zeta(d, a, 0).value) < 1e-8


def test_weighted_against_brute_force():
    R = 60
    k = np.arange(-R, R + 1, dtype=float)
    X, Y = np.meshgrid(k, k, indexing="ij")
    n2 = X**2 + Y**2
    mask = n2 > 0
    s = 12.0
    brute = np.sum((X[mask] ** 2 * Y[mask] ** 4) * n2[mask] ** (-s / 2))
    assert abs(weighted_epstein_zeta(2, (2, 4), s).value - brute) < 1e-8


def test_quadrant_examples():
    z3 = float(mpmath.zeta(3))
    assert abs(quadrant_zeta(3).value - (epstein_zeta(2, 3).value / 4 + z3)) < 1e-12
    assert abs(quadrant_zeta(0).value + 0.75) < 1e-12
    assert abs(quadrant_zeta(4).value - (_z2_factorised(4) / 4 + float(mpmath.zeta(4)))) < 1e-10


@pytest.mark.parametrize("s", [3.0, 4.0, 3 + 2j])
def test_quadrant_against_direct_sum(s):
    R = 2000
    k = np.arange(0, R + 1, dtype=float)
    n2 = k[:, None] ** 2 + k[None, :] ** 2
    mask = (n2 > 0) & (n2 <= R * R)
    direct = complex(np.sum(n2[mask] ** (-s / 2))) + (math.pi / 2) * R ** (2 - s) / (s - 2) \
        + R ** (1 - s) / (s - 1)  # quarter-disc and the two axis half-lines beyond R
    assert abs(quadrant_zeta(s).value - direct) < 1e-5


def test_quadrant_poles():
    for s in (1.0, 2.0):
        with pytest.raises(PoleError):
            quadrant_zeta(s)


@pytest.mark.parametrize("sets,e,s", [(("Z", "N0", "N0"), (0, 1, 1), 9.0), (("N", "N"), (1, 0), 7.5),
                                      (("Z", "N0", "N0"), (2, 0, 0), 8.0)])
def test_monomial_zeta_against_brute_force(sets, e, s):
    R = 40
    ranges = [np.arange(-R, R + 1) if k == "Z" else np.arange(0 if k == "N0" else 1, R + 1) for k in sets]
    grids = np.meshgrid(*[r.astype(float) for r in ranges], indexing="ij")
    n2 = sum(g**2 for g in grids)
    w = np.prod([g**k for g, k in zip(grids, e)], axis=0)
    mask = n2 > 0
    brute = np.sum(w[mask] * n2[mask] ** (-s / 2))
    tail = 4 * math.pi * R ** (3 + sum(e) - s)  # crude bound on the omitted shell contributions
    assert abs(lattice_monomial_zeta(sets, e, s).value - brute) < tail


def test_mixed_su_zeta_against_direct_sum():
    R = 80
    k = np.arange(-R, R + 1, dtype=float)
    m = np.arange(0, R + 1, dtype=float)
    K, Mm, Nn = np.meshgrid(k, m, m, indexing="ij")
    n2 = K**2 + Mm**2 + Nn**2
    mask = n2 > 0
    s = 9.0
    brute = np.sum(n2[mask] ** (-s / 2))
    assert abs(mixed_su_zeta(s).value - brute) < 1e-6


@pytest.mark.parametrize("d,a", [(2, (2, 4)), (3, (2, 0, 0))])
def test_weighted_zero_is_approached_linearly(d, a):
    # the zero at s = 0 is a genuine simple zero: values at +-eps scale like eps
    v1 = weighted_epstein_zeta(d, a, 1e-6).value
    v2 = weighted_epstein_zeta(d, a, 2e-6).value
    assert v1 != 0 and abs(v2 / v1 - 2) < 1e-4
