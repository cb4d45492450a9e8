"""Zeta-regularized heat traces of the quantum-semigroup models.

All closed forms reduce to the one-dimensional Gaussian sums

    S_j(t) = sum_{k>=1} k^j exp(-t k^2),    theta(t) = 1 + 2 S_0(t),

evaluated with certified truncation bounds by :mod:`qheat.special_functions`:

* torus ``R^N / 2 pi Z^N``:          ``theta(t)^N``
* Toeplitz algebra:                    ``1/2 - (S_1(t) - S_0(t))``
* Heisenberg group algebra H_N:        ``-theta(t)^{2N}`` (abstract twist),
  ``+theta(t)^{2N}`` (reduced)
* noncommutative torus:                ``(-1)^Tf theta(t)^N`` (abstract twist),
  ``theta(t)^N`` (complex twists)
* SU_q(2), driftless Gaussian scale r: ``1/12 + 13/12 (S_0 + S_1) - S_2`` at ``rt``

The Toeplitz value is obtained from the iterated limit of the gauged trace
(:func:`toeplitz_prelimit_value`) by adding back the boundary terms that the
gauge removes, ``1 + 2 S_0(t)``; this bookkeeping lives only in
:func:`toeplitz_heat_trace`.

:func:`enumeration_heat_trace` is an independent oracle: it sums
``exp(t * eigenvalue(mu))`` over lattice points for the models where that sum
converges absolutely.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .models import (
    GeneralGaussian,
    GaussianFunctional,
    HeisenbergLaplacian,
    ModelError,
    NCTorusLaplacian,
    ReducedHeisenbergLaplacian,
    SpectralModel,
    SUq2Gauss,
    ToeplitzBM,
    ToeplitzLaplacian,
    eigenvalue,
)
from .special_functions import (
    BoundedValue,
    DomainError,
    PrecisionConfig,
    csum,
    gauss_sum,
    gauss_tail_bound,
    theta_full,
)

__all__ = [
    "HeatTraceValue",
    "HeatTrace",
    "DivergenceError",
    "torus_heat_trace",
    "toeplitz_heat_trace",
    "toeplitz_prelimit_value",
    "heisenberg_heat_trace",
    "nc_torus_heat_trace",
    "suq2_gauss_trace",
    "general_gaussian_trace",
    "enumeration_heat_trace",
    "heat_trace_for",
    "torus_trace",
]


class DivergenceError(ArithmeticError):
    """A lattice sum that does not converge absolutely."""


@dataclass(frozen=True)
class HeatTraceValue:
    """Heat trace at time ``t`` with a bound on its numerical error."""

    t: float
    value: float
    error_bound: float
    model: str

    def __post_init__(self):
        if not self.error_bound >= 0:
            raise ValueError("error_bound must be nonnegative")

    def as_bounded(self) -> BoundedValue:
        return BoundedValue(self.value, self.error_bound)


def _check_t(t: float) -> float:
    t = float(t)
    if not t > 0 or not math.isfinite(t):
        raise DomainError(f"heat traces need t > 0, got {t}")
    return t


def _htv(t: float, b: BoundedValue, tag: str, sign: float = 1.0) -> HeatTraceValue:
    return HeatTraceValue(t, sign * b.real, b.error_bound, tag)


def _theta_power(n: int, t: float, prec: PrecisionConfig | None) -> BoundedValue:
    if n < 0:
        raise DomainError("theta power must be nonnegative")
    if n == 0:
        return BoundedValue(1.0, 0.0)
    return theta_full(t, prec) ** n


def torus_heat_trace(N: int, t: float, prec: PrecisionConfig | None = None) -> HeatTraceValue:
    """``tr exp(t Delta)`` on the flat torus ``R^N / 2 pi Z^N``: ``theta(t)^N``."""
    t = _check_t(t)
    return _htv(t, _theta_power(int(N), t, prec), f"torus(N={N})")


def toeplitz_prelimit_value(t: float, prec: PrecisionConfig | None = None) -> HeatTraceValue:
    """Iterated limit of the gauged Toeplitz trace: ``-1/2 - S_1(t) - S_0(t)``.

    The gauge suppresses the boundary labels ``n = 0`` or ``m = 0``; their
    contribution ``1 + 2 S_0(t)`` is added back in :func:`toeplitz_heat_trace`.
    """
    t = _check_t(t)
    s0, s1 = gauss_sum(0, t, prec), gauss_sum(1, t, prec)
    b = -0.5 - s1 - s0
    return _htv(t, b, "toeplitz-prelimit")


def toeplitz_heat_trace(t: float, prec: PrecisionConfig | None = None) -> HeatTraceValue:
    """Regularized heat trace of the Toeplitz Laplacian: ``1/2 - (S_1(t) - S_0(t))``."""
    t = _check_t(t)
    s0, s1 = gauss_sum(0, t, prec), gauss_sum(1, t, prec)
    b = 0.5 - (s1 - s0)
    return _htv(t, b, "toeplitz")


def heisenberg_heat_trace(N: int, t: float, reduced: bool = False,
                          prec: PrecisionConfig | None = None) -> HeatTraceValue:
    """Heat trace on the discrete Heisenberg group algebra H_N.

    With the abstract twist the regularized trace is ``-theta(t)^{2N}``; on the
    reduced algebra (central coordinate removed) it is ``+theta(t)^{2N}``.
    """
    t = _check_t(t)
    if N < 1:
        raise DomainError("N must be positive")
    b = _theta_power(2 * N, t, prec)
    tag = f"heisenberg-r(N={N})" if reduced else f"heisenberg(N={N})"
    return _htv(t, b, tag, 1.0 if reduced else -1.0)


def nc_torus_heat_trace(N: int, Tf: int, t: float, complex_twists: bool = False,
                        prec: PrecisionConfig | None = None) -> HeatTraceValue:
    """Heat trace on the N-dimensional noncommutative torus.

    With ``Tf`` abstract twist generators the trace is ``(-1)^Tf theta(t)^N``;
    with complex twists it is the classical ``theta(t)^N``.
    """
    t = _check_t(t)
    if N < 1 or Tf < 0:
        raise DomainError("need N >= 1 and Tf >= 0")
    b = _theta_power(N, t, prec)
    if complex_twists:
        return _htv(t, b, f"nctorus-c(N={N})")
    return _htv(t, b, f"nctorus(N={N},Tf={Tf})", (-1.0) ** Tf)


def suq2_gauss_trace(r: float, t: float, prec: PrecisionConfig | None = None) -> HeatTraceValue:
    """Heat trace of the driftless Gaussian semigroup of scale ``r`` on SU_q(2).

    ``1/12 + (13/12)(S_0(rt) + S_1(rt)) - S_2(rt)``; depends on ``rt`` only.
    """
    t = _check_t(t)
    r = float(r)
    if not r > 0:
        raise DomainError("r must be positive")
    u = r * t
    s0, s1, s2 = (gauss_sum(j, u, prec) for j in (0, 1, 2))
    b = (1.0 / 12.0) + (s0 + s1).scale(13.0 / 12.0) - s2
    return _htv(t, b, f"suq2(r={r:g})")


def general_gaussian_trace(g: GaussianFunctional, N: int, t: float) -> HeatTraceValue:
    """``sum_{mu in Z^{2N}} exp(-(t/2) mu^T cov mu)`` for a driftless Gaussian.

    The box ``|mu|_inf <= R`` is summed directly; the remainder is bounded using
    the smallest covariance eigenvalue ``lambda``: every term is at most
    ``exp(-(t lambda / 2) |mu|^2)``, whose box complement is a theta expression.
    """
    t = _check_t(t)
    if g.N != N:
        raise ModelError(f"functional is defined on H_{g.N}, not H_{N}")
    if not g.is_driftless:
        raise ModelError("drifted Gaussians have oscillatory traces and are not supported")
    cov = g.cov_matrix
    lam = float(np.linalg.eigvalsh(cov).min())
    if not lam > 1e-12 * max(1.0, float(np.abs(cov).max())):
        raise DivergenceError("covariance is not strictly positive definite; the trace diverges")
    c = 0.5 * t * lam
    D = 2 * N
    R = int(math.ceil(math.sqrt(42.0 / c))) + 1
    axes = [np.arange(-R, R + 1, dtype=float)] * D
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, D)
    quad = np.einsum("ij,jk,ik->i", grid, cov, grid)
    value = math.fsum(np.exp(-0.5 * t * quad))
    tail = _box_tail(c, R, D)
    return HeatTraceValue(t, value, tail + 4 * 2.0**-52 * value, f"gaussian(N={N})")


def _box_tail(c: float, R: int, D: int) -> float:
    """Bound on ``sum_{|mu|_inf > R} exp(-c |mu|^2)`` over ``Z^D``."""
    th = 1.0 + math.sqrt(math.pi / c)  # theta(c) <= 1 + 2 int_0^inf exp(-c x^2) dx
    inner = th - 2.0 * gauss_tail_bound(0, c, R)
    return th**D - max(inner, 0.0) ** D


# --------------------------------------------------------------------------
# eigenvalue-enumeration oracle


def _quadratic_floor(model: SpectralModel) -> tuple[float, int]:
    """``(c, D)`` such that ``Re eigenvalue(mu) <= -c |mu|^2`` on the summed lattice."""
    rule = model.rule
    if isinstance(rule, ReducedHeisenbergLaplacian):
        return 1.0, model.family.dim
    if isinstance(rule, NCTorusLaplacian) and model.family.dim == rule.N:
        return 1.0, rule.N
    if isinstance(rule, GeneralGaussian):
        lam = float(np.linalg.eigvalsh(rule.g.cov_matrix).min())
        if lam <= 0:
            raise DivergenceError("covariance is not strictly positive definite")
        return 0.5 * lam, 2 * rule.g.N
    raise DivergenceError(
        f"the eigenvalue sum of {model.name or model.rule!r} does not converge absolutely"
    )


def enumeration_heat_trace(model: SpectralModel, t: float, radius: int | None = None) -> BoundedValue:
    """``sum_mu exp(t * eigenvalue(mu))`` by explicit lattice enumeration.

    Supported where the sum converges absolutely: reduced Heisenberg algebras,
    the commutative (complex-twist) NC torus ``Z^N`` and driftless general
    Gaussians (summed over the ``Z^{2N}`` slice of the central coordinate 0).
    Other models raise :class:`DivergenceError`.
    """
    t = _check_t(t)
    c, D = _quadratic_floor(model)
    if radius is None:
        radius = int(math.ceil(math.sqrt(42.0 / (c * t)))) + 1
    if isinstance(model.rule, GeneralGaussian):
        pts = [mu + (0,) for mu in _box(D, radius)]
    else:
        pts = model.family.enumerate(radius)
    terms = [np.exp(t * eigenvalue(model, mu)) for mu in pts]
    value = csum(terms)
    tail = _box_tail(c * t, radius, D)
    return BoundedValue(complex(value).real, tail + 4 * 2.0**-52 * abs(value), len(pts))


def _box(D: int, R: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(-R, R + 1), repeat=D))


# --------------------------------------------------------------------------
# trace descriptors consumed by the asymptotics module


@dataclass(frozen=True)
class HeatTrace:
    """A heat trace as a function of ``t`` plus structural metadata.

    ``theta_power = (sign, n)`` marks traces equal to ``sign * theta(t)^n``;
    their small-t expansion is exact up to ``O(exp(-pi^2/t))`` by Poisson
    summation.  ``dimension`` is the heat-trace dimension ``2p`` of the model.
    """

    name: str
    evaluate: Callable[[float], HeatTraceValue]
    dimension: float
    theta_power: tuple[int, int] | None = None

    def __call__(self, t: float) -> HeatTraceValue:
        return self.evaluate(t)


def torus_trace(N: int) -> HeatTrace:
    return HeatTrace(f"torus(N={N})", lambda t: torus_heat_trace(N, t), float(N), (1, N))


def heat_trace_for(model: SpectralModel) -> HeatTrace:
    """The regularized heat trace of a model's Laplacian-type semigroup."""
    rule = model.rule
    if isinstance(rule, ToeplitzLaplacian):
        return HeatTrace("toeplitz", toeplitz_heat_trace, 2.0)
    if isinstance(rule, ToeplitzBM):
        return HeatTrace("toeplitz-bm", lambda t: toeplitz_heat_trace(t / 2.0), 2.0)
    if isinstance(rule, HeisenbergLaplacian):
        N = rule.N
        return HeatTrace(f"heisenberg(N={N})", lambda t: heisenberg_heat_trace(N, t, False),
                         float(2 * N), (-1, 2 * N))
    if isinstance(rule, ReducedHeisenbergLaplacian):
        N = rule.N
        return HeatTrace(f"heisenberg-r(N={N})", lambda t: heisenberg_heat_trace(N, t, True),
                         float(2 * N), (1, 2 * N))
    if isinstance(rule, NCTorusLaplacian):
        N, Tf = rule.N, rule.Tf
        if model.family.dim == N and Tf == 0 and model.family.kind == "full":
            return HeatTrace(f"nctorus-c(N={N})", lambda t: nc_torus_heat_trace(N, 0, t, True),
                             float(N), (1, N))
        sign = -1 if Tf % 2 else 1
        return HeatTrace(f"nctorus(N={N},Tf={Tf})", lambda t: nc_torus_heat_trace(N, Tf, t, False),
                         float(N), (sign, N))
    if isinstance(rule, SUq2Gauss):
        r = rule.r
        return HeatTrace(f"suq2(r={r:g})", lambda t: suq2_gauss_trace(r, t), 3.0)
    if isinstance(rule, GeneralGaussian):
        g = rule.g
        return HeatTrace(f"gaussian(N={g.N})", lambda t: general_gaussian_trace(g, g.N, t), float(2 * g.N))
    raise ModelError(f"no heat trace available for {model!r}")
