"""Gauged zeta functions: evaluation, Laurent data, criticality, traces and poles."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qheat import models as M
from qheat.lattice_zeta import epstein_laurent_at_pole, epstein_zeta, quadrant_zeta
from qheat.special_functions import PoleError
from qheat.zeta_traces import (
    CriticalityError,
    ZetaFunction,
    criticality,
    detect_real_poles,
    laurent_at,
    richardson_limit,
    traciality_check,
    zeta_eval,
    zeta_reg_trace,
)

RADIAL = M.GaugeSpec.radial(1.0)


def test_toeplitz_radial_term_matches_quadrant_zeta():
    zf = ZetaFunction(M.toeplitz(), M.radial_symbol(-6), RADIAL)
    assert abs(zeta_eval(zf, 0).value - quadrant_zeta(6).value) < 1e-13


def test_heisenberg_identity_matches_z3_and_direct_sum():
    zf = ZetaFunction(M.heisenberg(1), M.radial_symbol(0), RADIAL)
    v = zeta_eval(zf, -6).value
    assert abs(v - epstein_zeta(3, 6).value) < 1e-13
    R = 60
    k = np.arange(-R, R + 1, dtype=float)
    n2 = k[:, None, None] ** 2 + k[None, :, None] ** 2 + k[None, None, :] ** 2
    direct = np.sum(n2[n2 > 0] ** -3.0)
    assert abs(v - direct) < 4 * math.pi / (3 * (R - 1) ** 3)  # continuum tail bound beyond the cube


def test_zero_operator_gives_zero():
    zero = M.PolyhomOperator((M.SymbolTerm((0.0,), 2),))
    assert zeta_eval(ZetaFunction(M.heisenberg(1), zero, RADIAL), 0.3).value == 0
    assert zeta_reg_trace(zero, M.toeplitz(), RADIAL) == 0


@pytest.mark.parametrize("delta", [1.0, 2.0])
def test_heisenberg_residue_scales_with_gauge(delta):
    zf = ZetaFunction(M.heisenberg(1), M.radial_symbol(2), M.GaugeSpec.radial(delta))
    ld = laurent_at(zf, -5 / delta)
    assert ld.order == 1
    assert abs(ld.residue + epstein_laurent_at_pole(3).residue / delta) < 1e-6


def test_residue_gauge_scaling_and_finite_part_invariance():
    op, model = M.radial_symbol(2), M.heisenberg(1)
    r1 = laurent_at(ZetaFunction(model, op, M.GaugeSpec.radial(1)), -5).residue
    r2 = laurent_at(ZetaFunction(model, op, M.GaugeSpec.radial(2)), -2.5).residue
    assert abs(r1 - 2 * r2) < 1e-8
    f1 = zeta_reg_trace(op, model, M.GaugeSpec.radial(1))
    f2 = zeta_reg_trace(op, model, M.GaugeSpec.radial(2))
    assert abs(f1 - f2) < 1e-8


def test_toeplitz_brownian_laplacian_is_regular_at_zero():
    model = M.toeplitz(brownian=True)
    ld = laurent_at(ZetaFunction(model, M.laplacian_operator(model), RADIAL), 0)
    assert ld.order == 0 and ld.residue == 0


def test_separable_toeplitz_laplacian_trace_is_one_over_72():
    model = M.toeplitz()
    op = M.laplacian_operator(model)
    sep = M.GaugeSpec.separable((1.0, 1.0))
    ld = laurent_at(ZetaFunction(model, op, sep), [0, 0])
    assert ld.order == 0 and abs(ld.finite_part - 1 / 72) < 1e-12
    assert abs(zeta_reg_trace(op, model, sep) - 1 / 72) < 1e-12


def test_radial_toeplitz_laplacian_trace():
    # two monomials n^2, m^2 and the cross term -2nm over N0^2 with a radial gauge;
    # the value follows from the quadrant zeta decomposition and is not zero
    model = M.toeplitz()
    v = zeta_reg_trace(M.laplacian_operator(model), model, RADIAL)
    assert abs(v - (-1 / 360)) < 1e-10


def test_heisenberg_differential_operator_trace_vanishes():
    assert abs(zeta_reg_trace(M.radial_symbol(2, -1.0), M.heisenberg(1), RADIAL)) < 1e-8


def test_criticality_examples():
    assert criticality(M.radial_symbol(-2), M.toeplitz()).critical
    assert criticality(M.radial_symbol(-3), M.heisenberg(1)).critical
    rep = criticality(M.laplacian_operator(M.toeplitz()), M.toeplitz())
    assert not rep.critical and rep.offending == ()


def test_critical_trace_raises():
    with pytest.raises(CriticalityError):
        zeta_reg_trace(M.radial_symbol(-3), M.heisenberg(1), RADIAL)


def test_near_pole_evaluation_refuses():
    zf = ZetaFunction(M.heisenberg(1), M.radial_symbol(2), RADIAL)
    with pytest.raises(PoleError):
        zeta_eval(zf, -5 + 1e-4)


def test_traciality_examples():
    model, sep = M.toeplitz(), M.GaugeSpec.separable((1.0, 1.0))
    assert traciality_check(M.laplacian_operator(model), M.radial_symbol(0), model, sep)
    zero = M.PolyhomOperator((M.SymbolTerm((0.0,), 0),))
    assert traciality_check(zero, M.laplacian_operator(model), model, sep)


@given(st.lists(st.sampled_from([0, 2, 4]), min_size=3, max_size=3),
       st.lists(st.sampled_from([0, 2]), min_size=3, max_size=3),
       st.floats(-2, 2), st.floats(-2, 2))
def test_traciality_for_monomial_operators_on_heisenberg(e1, e2, a, b):
    A = M.PolyhomOperator((M.SymbolTerm((a,), sum(e1), M.Monomial(tuple(e1))),))
    B = M.PolyhomOperator((M.SymbolTerm((b,), sum(e2), M.Monomial(tuple(e2))),))
    assert traciality_check(A, B, M.heisenberg(1), RADIAL)


@pytest.mark.parametrize("z", [-8.0, -9.5])
def test_convergent_region_matches_direct_toeplitz_sum(z):
    model = M.toeplitz()
    op = M.laplacian_operator(model)
    v = zeta_eval(ZetaFunction(model, op, RADIAL), z).value
    R = 3000
    n = np.arange(0, R + 1, dtype=float)
    N, Mm = np.meshgrid(n, n, indexing="ij")
    n2 = N**2 + Mm**2
    mask = n2 > 0
    direct = np.sum(-((N - Mm) ** 2)[mask] * n2[mask] ** (z / 2))
    assert abs(v - direct) < 10 * R ** (4 + z) + 1e-13


def test_detected_toeplitz_poles_include_axis_poles():
    model = M.toeplitz()
    zf = ZetaFunction(model, M.laplacian_operator(model), RADIAL)
    found = detect_real_poles(zf)
    locs = sorted(round(p.location.real, 6) for p in found)
    assert locs == [-4.0, -3.0, -2.0]
    assert all(p.order == 1 for p in found)
    assert set(locs) <= {w.real for w in zf.candidate_poles()}


def test_richardson_limit_on_polynomial():
    h = np.array([0.1, 0.05, 0.025, 0.0125])
    vals = 3.0 + 2 * h - 5 * h**2 + h**3
    lim, err = richardson_limit(h, vals)
    assert abs(lim - 3.0) < 1e-12
    assert abs(lim - 3.0) <= err < 1e-4  # gap to the lower-order estimate: conservative


def test_separable_product_matches_riemann_zeta():
    model = M.toeplitz()
    op = M.PolyhomOperator((M.SymbolTerm((1.0,), 3, M.Monomial((2, 1))),))
    zf = ZetaFunction(model, op, M.GaugeSpec.separable((2.0, 1.0)))
    z = (-3.0, -4.0)
    # sum_{n,m>=1} n^{2 - 6} m^{1 - 4} (axes vanish because both exponents are positive)
    expected = float(mpmath.zeta(4) * mpmath.zeta(3))
    assert abs(zeta_eval(zf, z).value - expected) < 1e-12
