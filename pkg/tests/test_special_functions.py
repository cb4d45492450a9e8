"""Special-function substrate: zeta/beta values, incomplete Gamma, Gaussian sums, theta."""

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qheat.special_functions import (
    BoundedValue,
    DomainError,
    PoleError,
    PrecisionConfig,
    bernoulli_number,
    dirichlet_beta,
    erf,
    gauss_sum,
    riemann_zeta,
    theta_full,
    upper_incomplete_gamma,
    zeta_at_nonpositive_integer,
)


def test_zeta_exact_values_at_nonpositive_integers():
    assert zeta_at_nonpositive_integer(0) == Fraction(-1, 2)
    assert zeta_at_nonpositive_integer(1) == Fraction(-1, 12)
    assert zeta_at_nonpositive_integer(2) == 0
    assert riemann_zeta(0).value == -0.5
    assert riemann_zeta(-1).value == -1 / 12
    assert riemann_zeta(-1).error_bound < 1e-16


def test_zeta_two():
    v = riemann_zeta(2)
    assert abs(v.value - math.pi**2 / 6) < 1e-12


def test_zeta_pole_at_one():
    with pytest.raises(PoleError) as info:
        riemann_zeta(1)
    assert info.value.residue == 1


@pytest.mark.parametrize("s", [0.5, 3.7, -0.5, -7.3, 0.25 + 3j, 2 - 10j, -3.5 + 1j])
def test_zeta_against_mpmath(s):
    v = riemann_zeta(s)
    ref = complex(mpmath.zeta(s))
    assert abs(v.value - ref) <= max(v.error_bound, 1e-13 * abs(ref)) + 1e-15


@pytest.mark.parametrize("s", [-0.5, 0.25 + 3j])
def test_zeta_functional_equation(s):
    chi = 2**s * math.pi ** (s - 1) * complex(mpmath.sin(math.pi * s / 2)) * complex(mpmath.gamma(1 - s))
    assert abs(riemann_zeta(s).value - chi * riemann_zeta(1 - s).value) < 1e-10


def test_bernoulli_numbers():
    assert bernoulli_number(1) == Fraction(-1, 2)
    assert bernoulli_number(2) == Fraction(1, 6)
    assert bernoulli_number(12) == Fraction(-691, 2730)


@pytest.mark.parametrize("s,expected", [(1, math.pi / 4), (0, 0.5), (-1, 0.0), (2, 0.915965594177219)])
def test_dirichlet_beta_values(s, expected):
    assert abs(complex(dirichlet_beta(s).value) - expected) < 1e-12


@pytest.mark.parametrize("s", [0.3, -2.5, 1.5 + 2j, 4.0])
def test_dirichlet_beta_against_mpmath(s):
    ref = complex(mpmath.dirichlet(s, [0, 1, 0, -1]))
    assert abs(dirichlet_beta(s).value - ref) < 1e-12


@pytest.mark.parametrize(
    "a,x,expected,tol",
    [
        (1, 2, math.exp(-2), 1e-14),
        (0.5, 1, math.sqrt(math.pi) * math.erfc(1), 1e-13),
        (3, 1e-4, 2.0, 1e-7),
    ],
)
def test_incomplete_gamma_examples(a, x, expected, tol):
    assert abs(upper_incomplete_gamma(a, x).value - expected) < tol


@pytest.mark.parametrize("a", [-4, -10, 6.5, 3 + 5j, -2.5, 0])
@pytest.mark.parametrize("x", [0.3, math.pi, 12.0])
def test_incomplete_gamma_against_mpmath(a, x):
    ref = complex(mpmath.gammainc(a, x))
    v = upper_incomplete_gamma(a, x)
    assert abs(v.value - ref) <= 1e-12 * max(1.0, abs(ref))


def test_erf_examples():
    assert erf(0.0) == 0.0
    assert abs(erf(6.0) - 1) < 1e-14
    assert abs(erf(1.0) - 0.8427007929497149) < 1e-14


@given(st.floats(-8, 8))
def test_erf_is_odd(x):
    assert erf(-x) == -erf(x)


def test_gauss_sum_examples():
    assert abs(gauss_sum(0, 1).value - 0.3863186) < 1e-7
    assert abs(gauss_sum(1, 1).value - 0.4048814) < 1e-7
    assert abs(gauss_sum(2, 1).value - 0.4422545) < 1e-6
    assert gauss_sum(0, 100).value < 2 * math.exp(-100)


def test_gauss_sum_rejects_nonpositive_t():
    with pytest.raises(DomainError):
        gauss_sum(0, 0.0)
    with pytest.raises(DomainError):
        theta_full(-1.0)


@pytest.mark.parametrize("j", [0, 1, 2])
@pytest.mark.parametrize("t", [1e-4, 0.01, 0.3, 1.0, 7.0])
def test_gauss_sum_against_brute_force(j, t):
    K = int(math.sqrt(60 / t)) + 2  # e^{-t K^2} < e^{-60}
    ref = mpmath.fsum(k**j * mpmath.exp(-t * k * k) for k in range(1, K))
    v = gauss_sum(j, t)
    assert abs(v.value - float(ref)) <= v.error_bound + 1e-14 * float(ref)


def test_theta_examples():
    assert abs(theta_full(0.01).value - 17.7245385090) < 1e-10
    assert abs(theta_full(1.0).value - 1.7726372) < 1e-6


@given(st.floats(1e-3, 30))
def test_theta_exceeds_one_and_matches_gauss_sum(t):
    th = theta_full(t)
    assert th.value > 1  # 2 e^{-30} is still representable above 1
    s0 = gauss_sum(0, t)
    assert abs(th.value - (1 + 2 * s0.value)) <= th.error_bound + 2 * s0.error_bound + 1e-15 * th.value


@pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 2.0, 10.0])
def test_theta_modularity(t):
    lhs = theta_full(t)
    rhs = theta_full(math.pi**2 / t)
    factor = math.sqrt(math.pi / t)
    assert abs(lhs.value - factor * rhs.value) <= lhs.error_bound + factor * rhs.error_bound + 1e-14 * lhs.value


@pytest.mark.parametrize("t", [0.5, 1.0, 3.0])
def test_s2_is_minus_derivative_of_s0(t):
    def err(h):
        fd = (gauss_sum(0, t - h).value - gauss_sum(0, t + h).value) / (2 * h)
        return abs(gauss_sum(2, t).value - fd)

    e1, e2 = err(1e-2), err(5e-3)
    assert e1 < 1e-3
    assert 3.0 < e1 / e2 < 5.0  # O(h^2)


@pytest.mark.parametrize("f,arg", [(riemann_zeta, -2.5), (riemann_zeta, 3 + 4j), (dirichlet_beta, 0.7),
                                   (gauss_sum, None), (theta_full, 0.2)])
def test_extended_precision_rerun_within_bounds(f, arg):
    hi = PrecisionConfig(bits=106)
    if f is gauss_sum:
        lo_v, hi_v = gauss_sum(1, 0.05), gauss_sum(1, 0.05, prec=hi)
    else:
        lo_v, hi_v = f(arg), f(arg, prec=hi)
    assert abs(complex(lo_v.value) - complex(hi_v.value)) <= lo_v.error_bound + hi_v.error_bound


def test_bounded_value_arithmetic():
    a = BoundedValue(1.0, 0.1)
    b = BoundedValue(2.0, 0.2)
    assert (a + b).value == 3.0 and abs((a + b).error_bound - 0.3) < 1e-12
    assert (a * b).value == 2.0 and (a * b).error_bound >= 0.4
    assert (a - b).value == -1.0
    assert a.scale(-3).error_bound == pytest.approx(0.3)
