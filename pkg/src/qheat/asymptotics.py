"""Small-t asymptotics of heat traces.

A heat trace with an expansion

    tr T(t) ~ (4 pi t)^{-p} sum_k A_k t^{k/2}        (t -> 0)

is analysed on a geometric grid ``t_j = 0.1 * 2^-j``:

* the pole order ``p`` minimises the relative least-squares misfit of
  ``t^{-p} (c_0 + c_1 t^{1/2} + ...)`` (the subleading powers absorb the
  corrections that bias a bare log-log slope on moderate grids);
* the coefficients ``A_k`` come from Richardson (Neville) extrapolation in
  ``h = sqrt(t)`` of ``g(h) = (4 pi t)^p tr T(t)``, iterated on
  ``(g - A_0 - ... - A_{k-1} h^{k-1}) / h^k``;
* for traces that are pure theta powers, Poisson summation makes the
  expansion exact up to ``O(exp(-pi^2/t))``: ``A_0`` is read off at the
  smallest grid point and ``A_k = 0`` (k >= 1) is reported with that bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .heat_traces import HeatTrace, HeatTraceValue
from .zeta_traces import richardson_limit

__all__ = [
    "DEFAULT_GRID",
    "AsymptoticsError",
    "AsymptoticsResult",
    "HeatCoefficients",
    "detect_pole_order",
    "fit_pole_order",
    "leading_coefficient",
    "leading_coefficient_estimate",
    "heat_coefficients",
    "analyse",
    "poisson_remainder_bound",
]

#: default small-t grid ``0.1 * 2^-j``, j = 0..12
DEFAULT_GRID = tuple(0.1 * 2.0**-j for j in range(13))
RICHARDSON_ORDER = 4
FIT_THRESHOLD = 1e-4


class AsymptoticsError(ArithmeticError):
    """The small-t analysis is not reliable on the supplied grid."""


TraceLike = Callable[[float], "HeatTraceValue | float"]


def _value(trace: TraceLike, t: float) -> float:
    v = trace(t)
    return float(v.value) if isinstance(v, HeatTraceValue) else float(v)


def _check_grid(grid: Sequence[float], min_decades: float = 0.0) -> np.ndarray:
    g = np.asarray(sorted((float(t) for t in grid), reverse=True))
    if len(g) < 2 or np.any(g <= 0):
        raise AsymptoticsError("grid needs at least two positive points")
    if min_decades and math.log10(g[0] / g[-1]) < min_decades - 1e-9:
        raise AsymptoticsError(f"grid must span at least {min_decades} decades")
    return g


@dataclass(frozen=True)
class PoleOrderFit:
    pole_order: float
    residual: float
    coefficients: tuple[float, ...]


def _relative_residual(p: float, g: np.ndarray, vals: np.ndarray, degree: int) -> tuple[float, np.ndarray]:
    """RMS relative misfit of ``t^{-p} sum_{i<=degree} c_i t^{i/2}`` (c fitted linearly)."""
    X = np.stack([g ** (i / 2 - p) / vals for i in range(degree + 1)], axis=1)
    ones = np.ones_like(g)
    coef, *_ = np.linalg.lstsq(X, ones, rcond=None)
    return float(np.sqrt(np.mean((X @ coef - ones) ** 2))), coef


def fit_pole_order(trace: TraceLike, grid: Sequence[float] = DEFAULT_GRID,
                   p_range: tuple[float, float] = (0.0, 6.0)) -> PoleOrderFit:
    """Fit ``tr T(t) = t^{-p} (c_0 + c_1 t^{1/2} + ... + c_D t^{D/2})`` on the grid.

    For each trial ``p`` the coefficients are a linear least-squares fit of the
    relative misfit; ``p`` minimises that misfit (coarse scan, then a bounded
    scalar minimisation).  ``D = min(4, n - 3)`` for ``n`` grid points, so the
    fit always keeps at least one degree of freedom.  The leading log-log slope
    is the ``D = 0`` special case.
    """
    g = _check_grid(grid)
    vals = np.array([_value(trace, t) for t in g])
    if np.any(vals == 0) or not np.all(np.isfinite(vals)):
        raise AsymptoticsError("trace vanishes or is not finite on the grid; order undefined")
    if len(g) < 3:
        raise AsymptoticsError("need at least three grid points")
    degree = max(0, min(4, len(g) - 3))
    scan = np.arange(p_range[0], p_range[1] + 1e-12, 0.01)
    res = [(_relative_residual(p, g, vals, degree)[0], p) for p in scan]
    _, p0 = min(res)
    opt = minimize_scalar(lambda p: _relative_residual(p, g, vals, degree)[0],
                          bounds=(max(p_range[0], p0 - 0.02), min(p_range[1], p0 + 0.02)),
                          method="bounded", options={"xatol": 1e-10})
    resid, coef = _relative_residual(float(opt.x), g, vals, degree)
    return PoleOrderFit(float(opt.x), resid, tuple(float(c) for c in coef))


def detect_pole_order(trace: TraceLike, grid: Sequence[float] = DEFAULT_GRID,
                      threshold: float = FIT_THRESHOLD) -> float:
    """Pole order ``p`` of ``tr T(t) ~ C t^{-p}``; the grid must span two decades."""
    _check_grid(grid, min_decades=2.0)
    fit = fit_pole_order(trace, grid)
    if fit.residual > threshold:
        raise AsymptoticsError(f"fit residual {fit.residual:.3e} exceeds threshold {threshold:.1e}")
    return fit.pole_order


def _scaled(trace: TraceLike, p: float, g: np.ndarray) -> np.ndarray:
    return np.array([(4 * math.pi * t) ** p * _value(trace, t) for t in g])


def _extrapolate(h: np.ndarray, y: np.ndarray, order: int) -> tuple[float, float]:
    """Neville extrapolation to h = 0 through the ``order + 1`` smallest-h points."""
    n = order + 1
    if len(h) < n:
        raise AsymptoticsError(f"need at least {n} grid points for order {order}")
    value, err = richardson_limit(h[-n:], y[-n:])
    return value.real, err


def leading_coefficient_estimate(trace: TraceLike, p: float, grid: Sequence[float] = DEFAULT_GRID,
                                 order: int = RICHARDSON_ORDER) -> tuple[float, float]:
    """``lim_{t->0} (4 pi t)^p tr T(t)`` and an error estimate.

    The estimate is the larger of the gap between the order ``order`` and
    ``order - 1`` extrapolants and the change when the smallest grid point is
    dropped.  Raises if successive estimates do not settle.
    """
    g = _check_grid(grid)
    h = np.sqrt(g)
    y = _scaled(trace, p, g)
    value, err = _extrapolate(h, y, order)
    if len(g) > order + 1:
        prev, _ = _extrapolate(h[:-1], y[:-1], order)
        err = max(err, abs(value - prev))
    scale = max(1.0, abs(value))
    if not math.isfinite(value) or err > 1e-2 * scale:
        raise AsymptoticsError(f"Richardson extrapolation does not converge (estimate {value}, spread {err:.3e})")
    return value, err


def leading_coefficient(trace: TraceLike, p: float, grid: Sequence[float] = DEFAULT_GRID,
                        order: int = RICHARDSON_ORDER) -> float:
    """``A_0 = lim_{t->0} (4 pi t)^p tr T(t)`` by Richardson extrapolation in ``sqrt t``."""
    return leading_coefficient_estimate(trace, p, grid, order)[0]


def poisson_remainder_bound(n: int, t: float) -> float:
    """Bound on ``|(1 + 2 S_0(pi^2/t))^n - 1|``, the relative Poisson remainder of ``theta(t)^n``."""
    q = math.exp(-math.pi**2 / t)
    s0 = q / (1 - q) if q < 1 else math.inf  # S_0(x) <= sum_{k>=1} e^{-x k}
    return (1 + 2 * s0) ** n - 1


@dataclass(frozen=True)
class HeatCoefficients:
    """``A_0..A_K`` with per-coefficient error estimates."""

    coefficients: tuple[float, ...]
    errors: tuple[float, ...]
    pole_order: float
    method: str  # "poisson" or "richardson"


def heat_coefficients(trace: TraceLike, p: float, K: int, grid: Sequence[float] = DEFAULT_GRID,
                      order: int = RICHARDSON_ORDER) -> HeatCoefficients:
    """Heat coefficients ``A_0..A_K`` of ``(4 pi t)^{-p} sum_k A_k t^{k/2}``.

    Pure theta-power traces (``HeatTrace.theta_power`` set) are handled
    exactly: ``A_0 = (4 pi t)^p tr T(t)`` at the smallest grid point and
    ``A_k = 0`` for k >= 1, with bounds from the Poisson remainder and the
    observed deviation of ``(4 pi t)^p tr T(t)`` from ``A_0`` on the grid.
    Other traces use iterated Richardson extrapolation; an error estimate
    exceeding 1% of ``max(1, |A_k|)`` aborts at that k.
    """
    if K < 0:
        raise ValueError("K must be nonnegative")
    g = _check_grid(grid)
    h = np.sqrt(g)
    y = _scaled(trace, p, g)
    theta_power = getattr(trace, "theta_power", None)
    if theta_power is not None:
        sign, n = theta_power
        if abs(2 * p - n) > 1e-12:
            raise AsymptoticsError(f"theta power {n} has pole order {n / 2}, not {p}")
        A0 = float(y[-1])
        coeffs, errs = [A0], [abs(A0) * poisson_remainder_bound(n, g[-1]) + 4 * 2.0**-52 * abs(A0)]
        for k in range(1, K + 1):
            observed = max(abs(y[i] - A0) / h[i] ** k for i in range(len(g) - 3, len(g)))
            poisson = max(abs(A0) * poisson_remainder_bound(n, t) / t ** (k / 2) for t in g)
            coeffs.append(0.0)
            errs.append(float(observed + poisson))
        return HeatCoefficients(tuple(coeffs), tuple(errs), p, "poisson")

    coeffs, errs = [], []
    resid = y.copy()
    for k in range(K + 1):
        if k > 0:
            resid = (resid - coeffs[-1]) / h
        value, err = _extrapolate(h, resid, order)
        if not math.isfinite(value) or err > 1e-2 * max(1.0, abs(value)):
            raise AsymptoticsError(f"unstable extrapolation at k={k}: estimate {value}, spread {err:.3e}")
        coeffs.append(value)
        errs.append(err)
    return HeatCoefficients(tuple(coeffs), tuple(errs), p, "richardson")


@dataclass(frozen=True)
class AsymptoticsResult:
    """Pole order, leading coefficient and fit diagnostics for one heat trace."""

    pole_order: float
    leading_coefficient: float
    fit_residual: float
    grid: tuple[float, ...]
    leading_error: float = 0.0
    threshold: float = FIT_THRESHOLD
    name: str = ""
    coefficients: tuple[float, ...] = field(default_factory=tuple)

    @property
    def confident(self) -> bool:
        return self.fit_residual <= self.threshold


def analyse(trace: HeatTrace | TraceLike, grid: Sequence[float] = DEFAULT_GRID,
            p: float | None = None, K: int = 0) -> AsymptoticsResult:
    """Detect the pole order (rounded to the nearest half-integer when within 0.01)
    and extrapolate ``A_0`` (and optionally ``A_1..A_K``)."""
    fit = fit_pole_order(trace, grid)
    if p is None:
        p = fit.pole_order
        half = round(2 * p) / 2
        if abs(p - half) <= 0.01:
            p = half
    coeffs = heat_coefficients(trace, p, K, grid)
    if coeffs.method == "richardson":
        A0, err = leading_coefficient_estimate(trace, p, grid)
    else:
        A0, err = coeffs.coefficients[0], coeffs.errors[0]
    return AsymptoticsResult(fit.pole_order, A0, fit.residual, tuple(float(t) for t in grid), err,
                             name=getattr(trace, "name", ""), coefficients=coeffs.coefficients)
