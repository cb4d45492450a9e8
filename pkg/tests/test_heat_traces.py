"""Closed-form heat traces, their sign laws and the eigenvalue-enumeration oracle."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qheat import models as M
from qheat.heat_traces import (
    DivergenceError,
    enumeration_heat_trace,
    general_gaussian_trace,
    heat_trace_for,
    heisenberg_heat_trace,
    nc_torus_heat_trace,
    suq2_gauss_trace,
    toeplitz_heat_trace,
    toeplitz_prelimit_value,
    torus_heat_trace,
)
from qheat.oracle import suq2_continued_form, toeplitz_continued_form
from qheat.special_functions import DomainError, gauss_sum, theta_full

THETA1 = 1.7726372048266521  # 1 + 2 sum_k e^{-k^2}, summed independently below


def _theta_direct(t, K=60):
    k = np.arange(-K, K + 1, dtype=float)
    return float(math.fsum(np.exp(-t * k * k)))


def test_theta_reference_value():
    assert abs(_theta_direct(1.0) - THETA1) < 1e-15


def test_torus_examples():
    assert abs(torus_heat_trace(2, 1).value - 3.1422434) < 1e-5
    assert abs(torus_heat_trace(1, 0.01).value - 17.7245385) < 1e-7
    assert torus_heat_trace(0, 7).value == 1


def test_toeplitz_examples():
    assert abs(toeplitz_heat_trace(1).value - 0.4814372) < 1e-6
    assert abs(toeplitz_heat_trace(50).value - 0.5) < 1e-20
    assert abs(toeplitz_prelimit_value(1).value + 1.2912000) < 1e-6
    assert abs(toeplitz_prelimit_value(50).value + 0.5) < 1e-15


def test_toeplitz_small_t_against_direct_sum():
    t = 0.001
    k = np.arange(1, 2000, dtype=float)
    w = np.exp(-t * k * k)
    direct = 0.5 - math.fsum((k - 1) * w)
    v = toeplitz_heat_trace(t)
    assert abs(v.value - direct) <= v.error_bound + 1e-11
    assert abs(v.value - (-471.8917)) < 1e-3


@given(st.floats(0.01, 20))
def test_boundary_readdition_relation(t):
    pre, full, s0 = toeplitz_prelimit_value(t), toeplitz_heat_trace(t), gauss_sum(0, t)
    slack = 4 * 2.0**-52 * (1 + abs(full.value))  # rounding of the sum formed here
    assert abs(pre.value + 1 + 2 * s0.value - full.value) <= (pre.error_bound + full.error_bound
                                                                + 2 * s0.error_bound + slack)


def test_toeplitz_is_increasing_on_half_to_fifty():
    ts = np.linspace(0.5, 50, 20)
    vals = [toeplitz_heat_trace(t).value for t in ts]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    # the increments are ~ e^{-4t}; they stay above the resolution of 1/2 while e^{-4t} > 2^-53
    strict = [(a, b) for t, a, b in zip(ts[1:], vals, vals[1:]) if math.exp(-4 * t) > 2.0**-50]
    assert strict and all(b > a for a, b in strict)
    dense = [toeplitz_heat_trace(t).value for t in np.linspace(0.5, 8, 20)]
    assert all(b > a for a, b in zip(dense, dense[1:]))


def test_heisenberg_examples():
    assert abs(heisenberg_heat_trace(1, 1).value + THETA1**2) < 1e-14
    assert abs(heisenberg_heat_trace(1, 1, reduced=True).value - THETA1**2) < 1e-14
    for N in (1, 2, 3):
        assert heisenberg_heat_trace(N, 0.7, reduced=True).value == torus_heat_trace(2 * N, 0.7).value


@given(st.integers(1, 3), st.floats(0.01, 30))
def test_abstract_heisenberg_trace_is_negative(N, t):
    assert heisenberg_heat_trace(N, t).value < 0


def test_nc_torus_examples():
    assert abs(nc_torus_heat_trace(2, 1, 1).value + THETA1**2) < 1e-14
    assert abs(nc_torus_heat_trace(2, 2, 1).value - THETA1**2) < 1e-14
    for Tf in range(4):
        assert nc_torus_heat_trace(2, Tf, 0.4, complex_twists=True).value == torus_heat_trace(2, 0.4).value


@pytest.mark.parametrize("Tf", [0, 1, 2, 3])
def test_nc_torus_parity(Tf):
    v = nc_torus_heat_trace(1, Tf, 0.8).value
    assert math.copysign(1, v) == (-1) ** Tf


def test_suq2_examples():
    assert abs(suq2_gauss_trace(1, 1).value - 0.4982122) < 1e-6
    assert abs(suq2_gauss_trace(1, 60).value - 1 / 12) < 1e-20
    assert abs(suq2_gauss_trace(2, 0.5).value - suq2_gauss_trace(1, 1).value) < 1e-15


@given(st.floats(0.1, 5), st.floats(0.01, 5))
def test_suq2_depends_on_rt_only(r, t):
    a, b = suq2_gauss_trace(r, t), suq2_gauss_trace(1.0, r * t)
    assert abs(a.value - b.value) <= a.error_bound + b.error_bound + 1e-14 * abs(b.value)


def test_general_gaussian_examples():
    for t in (0.5, 1.0, 2.0):
        g = M.GaussianFunctional.driftless(2 * np.eye(2))
        assert abs(general_gaussian_trace(g, 1, t).value - _theta_direct(t) ** 2) < 1e-12
    g = M.GaussianFunctional.driftless(np.diag([2.0, 4.0]))
    assert abs(general_gaussian_trace(g, 1, 1).value - _theta_direct(1) * _theta_direct(2)) < 1e-12


def test_general_gaussian_divergence_and_drift():
    with pytest.raises(DivergenceError):
        general_gaussian_trace(M.GaussianFunctional.driftless(np.diag([1.0, 0.0])), 1, 1)
    drift = M.GaussianFunctional(np.ones(1), np.zeros(1), 0.0, np.eye(2))
    with pytest.raises((DivergenceError, DomainError, M.ModelError)):
        general_gaussian_trace(drift, 1, 1)


def test_correlated_gaussian_against_brute_force():
    cov = np.array([[2.0, 0.6], [0.6, 1.0]])
    t = 0.8
    k = np.arange(-40, 41, dtype=float)
    X, Y = np.meshgrid(k, k, indexing="ij")
    brute = np.sum(np.exp(-(t / 2) * (cov[0, 0] * X**2 + 2 * cov[0, 1] * X * Y + cov[1, 1] * Y**2)))
    v = general_gaussian_trace(M.GaussianFunctional.driftless(cov), 1, t)
    assert abs(v.value - brute) <= v.error_bound + 1e-12


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
@pytest.mark.parametrize(
    "model,closed",
    [
        (M.reduced_heisenberg(1), lambda t: heisenberg_heat_trace(1, t, reduced=True)),
        (M.reduced_heisenberg(2), lambda t: heisenberg_heat_trace(2, t, reduced=True)),
        (M.nc_torus_complex(2), lambda t: nc_torus_heat_trace(2, 0, t, complex_twists=True)),
        (M.nc_torus_complex(3), lambda t: torus_heat_trace(3, t)),
    ],
)
def test_enumeration_oracle(model, closed, t):
    direct, cf = enumeration_heat_trace(model, t), closed(t)
    assert abs(direct.value - cf.value) <= direct.error_bound + cf.error_bound + 1e-10


@pytest.mark.parametrize("model", [M.toeplitz(), M.heisenberg(1), M.nc_torus(1, 1), M.suq2(1)])
def test_enumeration_refuses_divergent_sums(model):
    with pytest.raises(DivergenceError):
        enumeration_heat_trace(model, 1.0)


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_consistency_with_oracle_module(t):
    assert abs(toeplitz_continued_form(0, t).value + 1 + 2 * gauss_sum(0, t).value
               - toeplitz_heat_trace(t).value) < 1e-12
    assert abs(suq2_continued_form(t, 1.0).value - suq2_gauss_trace(1.0, t).value) < 1e-12


def test_heat_trace_for_models():
    assert heat_trace_for(M.heisenberg(1)).theta_power == (-1, 2)
    assert heat_trace_for(M.nc_torus(2, 3)).theta_power == (-1, 2)
    assert heat_trace_for(M.toeplitz()).theta_power is None
    assert abs(heat_trace_for(M.suq2(1))(1.0).value - 0.4982121818601949) < 1e-15
    assert heat_trace_for(M.toeplitz(brownian=True))(2.0).value == toeplitz_heat_trace(1.0).value


def test_rejects_nonpositive_time():
    for f in (lambda: toeplitz_heat_trace(0), lambda: torus_heat_trace(1, -1), lambda: suq2_gauss_trace(0, 1)):
        with pytest.raises(DomainError):
            f()
    assert theta_full(1).value > 0
