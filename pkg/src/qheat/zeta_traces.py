"""Gauged zeta functions of polyhomogeneous operators and their Laurent data.

A :class:`ZetaFunction` bundles a model, an operator and a gauge.  Under a
radial gauge its value at ``z`` is

    sum_i alpha_i(z) sum_{mu != 0} sigma_{d_i}(mu) |mu|^{delta z},

which after expanding each shape into monomials ``mu^e |mu|^w`` is a finite
combination of lattice zeta functions at ``s = -(w + delta z)``.  Under a
separable gauge ``prod_i |mu_i|^{delta_i z_i}`` each monomial factorises into
Riemann zeta values, one per coordinate (points on coordinate hyperplanes
drop out).

Laurent data are extracted numerically: the residue is the limit of
``h * zeta(z0 + h)`` and the finite part that of ``zeta(z0 + h) - res/h``, both
by polynomial (Richardson/Neville) extrapolation along ``h = 0.1 * 2^-j``,
``j = 0..6``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .lattice_zeta import (
    LaurentData,
    epstein_zeta,
    lattice_monomial_zeta,
    mixed_su_zeta,
    quadrant_zeta,
)
from .models import (
    GaugeSpec,
    ModelError,
    PolyhomOperator,
    SpectralModel,
    axis_pole_set,
    model_dimension,
    predicted_pole_set,
)
from .special_functions import BoundedValue, PoleError, riemann_zeta

__all__ = [
    "ZetaFunction",
    "CriticalityReport",
    "CriticalityError",
    "LaurentError",
    "zeta_eval",
    "laurent_at",
    "zeta_reg_trace",
    "zeta_reg_trace_bounded",
    "criticality",
    "traciality_check",
    "detect_real_poles",
    "DetectedPole",
    "richardson_limit",
    "APPROACH_STEPS",
]

APPROACH_H0 = 0.1
APPROACH_STEPS = tuple(APPROACH_H0 * 2.0**-j for j in range(7))


class CriticalityError(ArithmeticError):
    """The operator has a degree equal to minus the lattice dimension."""

    def __init__(self, message: str, offending: Sequence[complex]):
        super().__init__(message)
        self.offending = list(offending)


class LaurentError(ArithmeticError):
    """Order of the singularity could not be established; carries raw samples."""

    def __init__(self, message: str, samples: Sequence[tuple[float, complex]]):
        super().__init__(message)
        self.samples = list(samples)


@dataclass(frozen=True)
class ZetaFunction:
    """Gauged zeta function of ``op`` on ``model``; backend follows the gauge kind."""

    model: SpectralModel
    op: PolyhomOperator
    gauge: GaugeSpec

    @property
    def backend(self) -> str:
        return self.gauge.kind

    def predicted_poles(self) -> list[complex]:
        if self.gauge.kind != "radial":
            return _separable_poles(self)
        return predicted_pole_set(self.op, self.model, self.gauge)

    def candidate_poles(self) -> list[complex]:
        """Predicted poles together with boundary-sublattice (axis) candidates."""
        if self.gauge.kind != "radial":
            return _separable_poles(self)
        return sorted(set(self.predicted_poles()) | set(axis_pole_set(self.op, self.model, self.gauge)),
                      key=lambda w: w.real)


@dataclass(frozen=True)
class CriticalityReport:
    critical: bool
    offending: tuple[complex, ...] = field(default_factory=tuple)


# --------------------------------------------------------------------------
# evaluation


def _lattice_sum(model: SpectralModel, e: tuple[int, ...], s: complex, near_pole: float) -> BoundedValue:
    """``sum_{mu != 0} mu^e |mu|^{-s}`` over the model's lattice."""
    fam = model.family
    sets = fam.coordinate_sets
    if all(k == "Z" for k in sets) and not any(e):
        return epstein_zeta(fam.dim, s, near_pole=near_pole)
    if fam.kind == "quadrant" and not any(e):
        return quadrant_zeta(s, near_pole=near_pole)
    if fam.kind == "mixed_su" and not any(e):
        return mixed_su_zeta(s, near_pole=near_pole)
    return lattice_monomial_zeta(sets, e, s, near_pole=near_pole)


def _radial_eval(zf: ZetaFunction, z: complex, near_pole: float) -> BoundedValue:
    delta = zf.gauge.delta[0]
    dim = zf.model.family.dim
    total = BoundedValue(0.0, 0.0, 0)
    for term in zf.op.terms:
        a = term.alpha_at(z)
        if a == 0:
            continue
        for c, e, w in term.monomials(dim):
            s = -(w + delta * z)
            try:
                v = _lattice_sum(zf.model, e, s, near_pole)
            except PoleError as exc:
                raise PoleError(f"zeta function has a pole near z = {z}",
                                location=-(w + exc.location) / delta,
                                residue=None if exc.residue is None else -a * c * exc.residue / delta) from exc
            total = total + v.scale(a * c)
    return total


def _coordinate_zeta(kind: str, e: int, u: complex) -> BoundedValue:
    """``sum_{k in set, k != 0} k^e |k|^u`` continued: zeta(-e-u) (doubled on Z)."""
    if kind == "Z":
        if e % 2:
            return BoundedValue(0.0, 0.0, 0)
        return riemann_zeta(-e - u).scale(2.0)
    return riemann_zeta(-e - u)


def _separable_eval(zf: ZetaFunction, z: Sequence[complex], near_pole: float) -> BoundedValue:
    zs = zf.gauge.z_vector(z)
    sets = zf.model.family.coordinate_sets
    if len(zs) != len(sets):
        raise ModelError("separable gauge needs one parameter per lattice coordinate")
    dim = len(sets)
    total = BoundedValue(0.0, 0.0, 0)
    for term in zf.op.terms:
        a = term.alpha_at(zs[0])
        if a == 0:
            continue
        for c, e, w in term.monomials(dim):
            if w != 0:
                raise ModelError("separable gauges need monomial (product-form) shapes")
            prod = BoundedValue(1.0, 0.0, 0)
            for kind, ei, dl, zi in zip(sets, e, zf.gauge.delta, zs):
                u = dl * zi
                if abs(-ei - u - 1) < near_pole:
                    raise PoleError("coordinate zeta factor at its pole", location=(-1 - ei) / dl)
                prod = prod * _coordinate_zeta(kind, ei, u)
            total = total + prod.scale(a * c)
    return total


def _separable_poles(zf: ZetaFunction) -> list[complex]:
    out = set()
    dim = zf.model.family.dim
    for term in zf.op.terms:
        for _, e, _ in term.monomials(dim):
            for ei, dl in zip(e, zf.gauge.delta):
                out.add(complex((-1 - ei) / dl))
    return sorted(out, key=lambda w: w.real)


def _eval(zf: ZetaFunction, z, near_pole: float) -> BoundedValue:
    if zf.gauge.kind == "radial":
        zz = complex(np.ravel([z])[0]) if np.ndim(z) else complex(z)
        return _radial_eval(zf, zz, near_pole)
    return _separable_eval(zf, z, near_pole)


def zeta_eval(zf: ZetaFunction, z, near_pole: float = 1e-3) -> BoundedValue:
    """Value of the continued gauged zeta function at ``z`` (scalar or vector).

    Raises :class:`PoleError` within ``near_pole`` of a pole.
    """
    if zf.gauge.kind == "radial":
        zz = complex(np.ravel([z])[0])
        for p in zf.predicted_poles():
            if abs(zz - p) < near_pole:
                raise PoleError(f"z = {zz} is within {near_pole} of the predicted pole {p}", location=p)
    return _eval(zf, z, near_pole)


# --------------------------------------------------------------------------
# Laurent data


def richardson_limit(h: Sequence[float], values: Sequence[complex]) -> tuple[complex, float]:
    """Neville extrapolation of ``values(h)`` to ``h = 0``.

    Returns the limit and an error estimate (difference of the two highest
    order estimates).
    """
    h = np.asarray(h, dtype=float)
    P = np.array(values, dtype=complex)
    n = len(h)
    best_prev = P[-1]
    for k in range(1, n):
        # P[i] <- interpolant through points i..i+k evaluated at 0
        P = (h[k:] * P[:-1] - h[: n - k] * P[1:]) / (h[k:] - h[: n - k])
        if len(P) == 2:
            best_prev = P[-1]
    limit = P[0]
    return complex(limit), float(abs(limit - best_prev))


def laurent_at(zf: ZetaFunction, z0, steps: Sequence[float] = APPROACH_STEPS) -> LaurentData:
    """Order (0 or 1), residue and finite part of the zeta function at ``z0``.

    Along ``z0 + h`` (all coordinates shifted for a separable gauge) the
    limit of ``h zeta`` gives the residue; a nonzero limit of ``h^2 zeta``
    would signal a higher-order pole and raises :class:`LaurentError`.
    """
    if zf.gauge.kind == "radial":
        base = complex(np.ravel([z0])[0])

        def at(h):
            return _eval(zf, base + h, 0.0).value
    else:
        base_vec = zf.gauge.z_vector(z0)
        base = base_vec[0]

        def at(h):
            return _eval(zf, [b + h for b in base_vec], 0.0).value

    hs = np.asarray(steps, dtype=float)
    f = np.array([at(h) for h in hs])
    samples = list(zip(hs.tolist(), f.tolist()))
    scale = max(1.0, float(np.max(np.abs(hs * f))))
    r2, _ = richardson_limit(hs, hs * hs * f)
    if abs(r2) > 1e-6 * scale:
        raise LaurentError("singularity of order >= 2 or non-isolated", samples)
    res, res_err = richardson_limit(hs, hs * f)
    if abs(res) <= max(1e-9 * scale, 100 * res_err):
        fin, fin_err = richardson_limit(hs, f)
        return LaurentData(base, 0, 0j, fin, fin_err)
    fin, fin_err = richardson_limit(hs, f - res / hs)
    return LaurentData(base, 1, res, fin, fin_err + res_err / hs[-1])


# --------------------------------------------------------------------------
# criticality, traces, traciality


def criticality(op: PolyhomOperator, model: SpectralModel, tol: float = 1e-12) -> CriticalityReport:
    """Critical iff some degree equals ``-D`` (D the lattice dimension)."""
    D = model_dimension(model)
    bad = tuple(d for d in op.degrees if abs(d + D) <= tol)
    return CriticalityReport(bool(bad), bad)


def zeta_reg_trace(op: PolyhomOperator, model: SpectralModel, gauge: GaugeSpec) -> complex:
    """Zeta-regularised trace: finite part at ``z = 0`` of the gauged zeta function."""
    rep = criticality(op, model)
    if rep.critical:
        raise CriticalityError(f"operator is critical (degrees {list(rep.offending)})", rep.offending)
    zf = ZetaFunction(model, op, gauge)
    zero = 0.0 if gauge.kind == "radial" else [0.0] * len(gauge.delta)
    try:
        return complex(_eval(zf, zero, 1e-3).value)
    except PoleError:
        # a boundary (axis) pole sits at 0: report the finite part
        return complex(laurent_at(zf, zero).finite_part)


def zeta_reg_trace_bounded(op: PolyhomOperator, model: SpectralModel, gauge: GaugeSpec) -> BoundedValue:
    """As :func:`zeta_reg_trace` but keeping the error bound (regular points only)."""
    rep = criticality(op, model)
    if rep.critical:
        raise CriticalityError(f"operator is critical (degrees {list(rep.offending)})", rep.offending)
    zf = ZetaFunction(model, op, gauge)
    zero = 0.0 if gauge.kind == "radial" else [0.0] * len(gauge.delta)
    return _eval(zf, zero, 1e-3)


def traciality_check(A: PolyhomOperator, B: PolyhomOperator, model: SpectralModel, gauge: GaugeSpec,
                     tol: float = 1e-10) -> bool:
    """``tr_zeta(AB) == tr_zeta(BA)`` within combined bounds plus ``tol``."""
    AB, BA = A * B, B * A
    for p in model.family.enumerate(2):
        if any(p):
            if abs(AB.symbol(p) - BA.symbol(p)) > 1e-12 * max(1.0, abs(AB.symbol(p))):
                return False
    if not AB.terms:
        return True
    v1 = zeta_reg_trace_bounded(AB, model, gauge)
    v2 = zeta_reg_trace_bounded(BA, model, gauge)
    return abs(v1.value - v2.value) <= v1.error_bound + v2.error_bound + tol


# --------------------------------------------------------------------------
# numerical pole detection


@dataclass(frozen=True)
class DetectedPole:
    location: float
    order: int
    residue: complex


def detect_real_poles(zf: ZetaFunction, lo: float = -8.0, hi: float = 1.0, step: float = 0.05,
                      offset: float = 0.0137) -> list[DetectedPole]:
    """Locate real poles of a radially gauged zeta function on ``[lo, hi]``.

    The function is sampled on a shifted grid; each sign change of its real
    part is refined by root-finding on ``1/zeta``.  A root at which
    ``|zeta|`` blows up is a pole; its order and residue then come from
    :func:`laurent_at`.  Sign changes through zeros are discarded.
    """
    if zf.gauge.kind != "radial":
        raise ModelError("pole detection is implemented for radial gauges")

    def f(z):
        try:
            return _eval(zf, z, 0.0).value.real
        except (ZeroDivisionError, PoleError):
            return math.inf  # landed exactly on a pole

    grid = np.arange(lo + offset, hi, step)
    vals = np.array([f(z) for z in grid])
    out = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0 or fb == 0 or np.sign(fa) == np.sign(fb):
            continue
        root = brentq(lambda z: 1.0 / f(z), a, b, xtol=1e-14, rtol=1e-14, maxiter=200)
        probe = max(abs(f(root - 1e-7)), abs(f(root + 1e-7)))
        if probe < 1e3 * max(1.0, abs(fa), abs(fb)):
            continue
        zr = _snap(root)
        ld = laurent_at(zf, zr)
        out.append(DetectedPole(zr, ld.order, ld.residue))
    return out


def _snap(x: float, tol: float = 1e-9) -> float:
    """Round a located root to a nearby simple rational (denominator <= 12)."""
    for q in range(1, 13):
        p = round(x * q)
        if abs(x - p / q) < tol:
            return p / q
    return x
