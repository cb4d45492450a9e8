"""Brute-force oracles for the gauged multi-series behind the heat traces.

Two families of series are evaluated directly where they converge absolutely
and compared with the analytically continued expressions that lead to the
closed forms in :mod:`qheat.heat_traces`:

Toeplitz algebra (``u = t``)::

    F(z1, z2, t) = sum_{m>=1} sum_{n>=1} exp(-t (n-m)^2) n^{z1} m^{z2}
    G(z2, t)     = sum_{k>=0} exp(-t k^2) (zeta(-z2) - H_k(z2))
                   + zeta(-z2) sum_{k>=1} exp(-t k^2),
    H_k(z) = sum_{m=1}^k m^z,  and  F(0, z2, t) = G(z2, t).

SU_q(2) (``u = r t``), in the difference gauge ``|n - m|^{z3}`` (value 1 on
the diagonal) with the ``k = 0`` labels removed::

    D(z) = sum_{k != 0} sum_{m, n >= 1} exp(-u (k-m+n)^2) |k|^{z1} m^{z2} w(m-n)^{z3}
    Phi(z) = sum_{k != 0} |k|^{z1} [ sum_{l>=0} exp(-u (k-l)^2) w(l)^{z3} (zeta(-z2) - H_l(z2))
                                     + zeta(-z2) sum_{l>=1} exp(-u (k+l)^2) l^{z3} ]

Both sides are summed explicitly over a bulk region; the remaining power-law
tails are summed with Euler-Maclaurin expansions of ``sum_{x>L} x^s`` after
expanding the Gaussian-weighted shifts ``sum_j exp(-u j^2) (x+j)^e`` in
powers of ``1/x``.  Gaussian tails use the integral-comparison bounds of
:func:`qheat.special_functions.gauss_tail_bound`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .special_functions import (
    BoundedValue,
    DomainError,
    bernoulli_number,
    csum,
    gauss_sum,
    gauss_tail_bound,
    riemann_zeta,
)

__all__ = [
    "OracleComparison",
    "OracleRegionError",
    "power_tail",
    "toeplitz_partial_sum",
    "toeplitz_gauged_sum",
    "toeplitz_continued_form",
    "suq2_gauged_sum",
    "suq2_continued_expression",
    "suq2_reduction_identities",
    "suq2_continued_form",
    "compare_toeplitz",
    "compare_suq2",
    "TOEPLITZ_SAMPLES",
    "SUQ2_SAMPLES",
]

#: convergent-region sample grid: z2 values and times
SAMPLE_Z2 = (-1.5, -2.0, -3.0)
SAMPLE_T = (0.5, 1.0, 2.0)
TOEPLITZ_SAMPLES = tuple(((0.0, z2), t) for z2 in SAMPLE_Z2 for t in SAMPLE_T)
SUQ2_SAMPLES = tuple(((-1.0, z2, -1.0), t) for z2 in SAMPLE_Z2 for t in SAMPLE_T)

_GAUSS_CUT = 46.0  # exp(-46) ~ 1e-20: Gaussian weights beyond this are bounded, not summed
_EM_ORDER = 6
_BINOM_ORDER = 12


class OracleRegionError(DomainError):
    """Parameters outside the region of absolute convergence."""


@dataclass(frozen=True)
class OracleComparison:
    """Direct sum versus continued expression at one convergent sample point."""

    model: str
    z: tuple[complex, ...]
    t: float
    direct_value: BoundedValue
    closedform_value: BoundedValue
    tolerance: float

    @property
    def difference(self) -> float:
        return abs(complex(self.direct_value.value) - complex(self.closedform_value.value))

    @property
    def agree(self) -> bool:
        allowed = self.direct_value.error_bound + self.closedform_value.error_bound + self.tolerance
        return self.difference <= allowed


# --------------------------------------------------------------------------
# power tails and asymptotic series in 1/x

Series = list[tuple[complex, complex]]  # terms c * x^e


def _falling(s: complex, q: int) -> complex:
    out = 1.0 + 0j
    for i in range(q):
        out *= s - i
    return out


def _em_series(s: complex, order: int = _EM_ORDER) -> Series:
    """Asymptotic expansion of ``sum_{m>x} m^s`` (Re s < -1) as a series in x."""
    out: Series = [(-1.0 / (s + 1.0), s + 1.0), (-0.5, s)]
    for j in range(1, order + 1):
        b = float(bernoulli_number(2 * j))
        out.append((-b / math.factorial(2 * j) * _falling(s, 2 * j - 1), s - 2 * j + 1))
    return out


def power_tail(s: complex, M: int, order: int = _EM_ORDER) -> BoundedValue:
    """``sum_{m > M} m^s`` for ``Re s < -1`` by Euler-Maclaurin at ``x = M``.

    The error bound is twice the first omitted correction term, which is a
    valid bound once ``M`` exceeds ``|s|`` comfortably (the corrections then
    decay geometrically).
    """
    s = complex(s)
    if not s.real < -1:
        raise OracleRegionError(f"power tail needs Re(s) < -1, got {s}")
    if M < max(8.0, 2 * abs(s)):
        raise DomainError("power_tail needs M well above |s|")
    value = csum(c * M**e for c, e in _em_series(s, order))
    b = float(bernoulli_number(2 * order + 2))
    nxt = abs(b / math.factorial(2 * order + 2) * _falling(s, 2 * order + 1)) * M ** (s.real - 2 * order - 1)
    return BoundedValue(complex(value), 2 * nxt + 4 * 2.0**-52 * abs(value))


def _gauss_moments(u: float, J: int, order: int) -> list[float]:
    """``mu_i = sum_{|j|<=J} j^i exp(-u j^2)`` for i = 0..order (odd moments vanish)."""
    j = np.arange(-J, J + 1, dtype=float)
    w = np.exp(-u * j * j)
    return [math.fsum(w * j**i) if i % 2 == 0 else 0.0 for i in range(order + 1)]


def _shift(series: Series, moments: Sequence[float], sign: float = 1.0) -> Series:
    """``sum_j exp(-u j^2) f(x + sign*j)`` for ``f = sum c x^e``, expanded in 1/x."""
    out: Series = []
    for c, e in series:
        for i, mu in enumerate(moments):
            if mu == 0.0:
                continue
            out.append((c * _falling(e, i) / math.factorial(i) * mu * sign**i, e - i))
    return out


def _multiply(a: Series, b: Series) -> Series:
    return [(c1 * c2, e1 + e2) for c1, e1 in a for c2, e2 in b]


def _series_tail(series: Series, L: int) -> BoundedValue:
    """``sum_{x > L} sum c x^e`` term by term via :func:`power_tail`."""
    total = BoundedValue(0j, 0.0)
    for c, e in series:
        if c == 0:
            continue
        total = total + power_tail(e, L).scale(c)
    return total


def _tail_with_estimate(build, L: int) -> BoundedValue:
    """Sum an asymptotic tail at two expansion orders; their gap bounds truncation."""
    hi = _series_tail(build(_BINOM_ORDER, _EM_ORDER), L)
    lo = _series_tail(build(_BINOM_ORDER - 4, _EM_ORDER - 2), L)
    gap = abs(complex(hi.value) - complex(lo.value))
    return BoundedValue(hi.value, hi.error_bound + gap)


def _gauss_radius(u: float) -> int:
    return int(math.ceil(math.sqrt(_GAUSS_CUT / u))) + 1


def _zeta_direct(b: complex, M: int) -> BoundedValue:
    """``sum_{m>=1} m^b`` by explicit summation to M plus the power tail."""
    m = np.arange(1, M + 1, dtype=float)
    head = csum(m.astype(complex) ** b)
    return power_tail(b, M) + BoundedValue(complex(head), 4 * 2.0**-52 * M)


# --------------------------------------------------------------------------
# Toeplitz


def _toeplitz_exponents(z1, z2, delta) -> tuple[complex, complex]:
    a, b = complex(delta[0] * z1), complex(delta[1] * z2)
    if not (b.real < -1 and a.real <= 0):
        raise OracleRegionError("toeplitz_gauged_sum needs Re(delta2 z2) < -1 and Re(delta1 z1) <= 0")
    return a, b


def toeplitz_partial_sum(z1: complex, z2: complex, t: float, M: int,
                         delta: Sequence[float] = (1.0, 1.0)) -> complex:
    """``sum_{m<=M} sum_{n>=1} exp(-t (n-m)^2) n^{d1 z1} m^{d2 z2}`` (Gaussian-exhaustive in n)."""
    a, b = _toeplitz_exponents(z1, z2, delta)
    K = _gauss_radius(t)
    m = np.arange(1, M + 1, dtype=float)[:, None]
    k = np.arange(-K, K + 1, dtype=float)[None, :]
    n = m + k
    w = np.where(n >= 1, np.exp(-t * k * k), 0.0)
    terms = w * np.where(n >= 1, np.maximum(n, 1.0).astype(complex) ** a, 0.0) * m.astype(complex) ** b
    return complex(csum(terms.ravel()))


def toeplitz_gauged_sum(z1: complex, z2: complex, t: float, delta: Sequence[float] = (1.0, 1.0),
                        M: int = 400) -> BoundedValue:
    """``F = sum_{m,n>=1} exp(-t (n-m)^2) n^{d1 z1} m^{d2 z2}`` with certified tails.

    Bulk: ``m <= M`` and ``|n - m| <= K`` summed explicitly.  The m-tail
    ``m > M`` is summed by expanding ``sum_k exp(-t k^2) (m+k)^{a}`` in powers
    of 1/m and applying Euler-Maclaurin power tails; Gaussian tails beyond K
    are bounded by ``2 S_0``-type integrals times ``sum_m |m^b|``.
    """
    t = float(t)
    if not t > 0:
        raise DomainError("t must be positive")
    a, b = _toeplitz_exponents(z1, z2, delta)
    K = _gauss_radius(t)
    M = max(M, 8 * K, int(4 * abs(a) + 4 * abs(b)) + 16)
    bulk = toeplitz_partial_sum(z1, z2, t, M, delta)
    moments = _gauss_moments(t, K, _BINOM_ORDER)

    def build(bin_order, em_order):
        # m > M: m^b sum_k e^{-t k^2} (m+k)^a
        return _multiply(_shift([(1.0, a)], moments[: bin_order + 1], 1.0), [(1.0, b)])

    tail = _tail_with_estimate(build, M)
    abs_b = _zeta_direct(complex(b.real), M).real
    gauss_err = 2 * gauss_tail_bound(0, t, K) * abs_b
    out = tail + BoundedValue(bulk, gauss_err + 8 * 2.0**-52 * abs(bulk))
    return BoundedValue(out.value, out.error_bound, M * (2 * K + 1))


def toeplitz_continued_form(z2: complex, t: float) -> BoundedValue:
    """``G(z2, t)``: continuation of ``F(0, z2, t)`` through ``zeta(-z2)``.

    At ``z2 = 0`` it equals the iterated-limit value ``-1/2 - S_1(t) - S_0(t)``.
    Implemented for ``Re z2 <= 1`` (the partial sums are then at most ``k^2``).
    """
    t = float(t)
    z2 = complex(z2)
    if not t > 0:
        raise DomainError("t must be positive")
    if z2 == -1:
        raise DomainError("zeta(-z2) has its pole at z2 = -1")
    if z2.real > 1:
        raise DomainError("toeplitz_continued_form is implemented for Re(z2) <= 1")
    zeta = riemann_zeta(-z2)
    K = _gauss_radius(t)
    k = np.arange(0, K + 1)
    powers = np.concatenate([[0.0], np.arange(1, K + 1, dtype=float)]).astype(complex)
    powers[1:] = powers[1:] ** z2
    H = np.cumsum(powers)  # H_k for k = 0..K
    w = np.exp(-t * k.astype(float) ** 2)
    first = csum(w * (zeta.value - H))
    second = zeta.value * csum(w[1:])
    value = first + second
    s0 = float(np.sum(w[1:]))
    err = (zeta.error_bound * (1 + 2 * s0)
           + 2 * abs(zeta.value) * gauss_tail_bound(0, t, K) + gauss_tail_bound(2, t, K)
           + 8 * 2.0**-52 * (abs(value) + abs(zeta.value) * (1 + s0)))
    return BoundedValue(complex(value), err, K + 1)


# --------------------------------------------------------------------------
# SU_q(2)


def _suq2_exponents(z) -> tuple[complex, complex, complex]:
    a, b, c = (complex(x) for x in z)
    if not (b.real < -1 and a.real <= 0 and c.real <= 0 and a.real + c.real < -1):
        raise OracleRegionError(
            "suq2 sums converge absolutely only for Re z2 < -1, Re z1, Re z3 <= 0 and Re(z1 + z3) < -1")
    return a, b, c


def _w_power(l: np.ndarray, c: complex) -> np.ndarray:
    """``w(l)^c`` with ``w(l) = |l|`` for l != 0 and ``w(0) = 1``."""
    return np.where(l == 0, 1.0, np.abs(l).astype(float)).astype(complex) ** c


def _gauss_tail_weight(u: float, J: int, a: complex, c: complex) -> float:
    """Bound on the contribution of ``|j| > J`` per unit of ``sup |M(l)|``.

    ``sum_l |l+j|^{Re a} w(l)^{Re c}`` is at most ``4 + 4 zeta(-Re(a + c))`` by
    the rearrangement inequality, uniformly in j.
    """
    s = -(a.real + c.real)
    return 2 * gauss_tail_bound(0, u, J) * (4 + 4 * riemann_zeta(s).real)


def suq2_gauged_sum(z: Sequence[complex], r: float, t: float, L: int = 300) -> BoundedValue:
    """Direct triple sum ``D(z)`` at a point of absolute convergence.

    Organized by ``l = m - n`` and ``j = k - l``: the m-sums
    ``M(l) = sum_{m >= max(1, l+1)} m^{z2}`` are summed from their upper end
    (explicit terms to ``Mc`` plus the Euler-Maclaurin tail); ``|l| <= L``
    is summed explicitly and ``|l| > L`` through asymptotic expansions.
    """
    u = float(r) * float(t)
    if not (r > 0 and t > 0):
        raise DomainError("r and t must be positive")
    a, b, c = _suq2_exponents(z)
    J = _gauss_radius(u)
    L = max(L, 8 * J)
    Mc = 4 * L
    # M(l) for 0 <= l <= L, summed downward from Mc
    m = np.arange(1, Mc + 1, dtype=float).astype(complex) ** b
    tail_Mc = power_tail(b, Mc)
    rev = np.cumsum(m[::-1])[::-1]  # rev[i] = sum_{m=i+1}^{Mc} m^b
    M_nonneg = rev[: L + 1] + tail_Mc.value  # l = 0..L
    Z = M_nonneg[0]
    ls = np.arange(-L, L + 1)
    Ml = np.where(ls < 0, Z, M_nonneg[np.clip(ls, 0, None)])
    wl = _w_power(ls, c)
    js = np.arange(-J, J + 1)
    total = []
    for j in js:
        k = ls + j
        base = np.where(k == 0, 1.0, np.abs(k).astype(float)).astype(complex)
        ka = np.where(k == 0, 0.0, base**a)  # the k = 0 labels are removed
        total.append(math.exp(-u * j * j) * csum(ka * wl * Ml))
    bulk = complex(csum(total))
    moments = _gauss_moments(u, J, _BINOM_ORDER)

    def build_pos(bin_order, em_order):
        # l > L: sum_j e^{-u j^2} (l+j)^a * l^c * T(b, l)
        return _multiply(_multiply(_shift([(1.0, a)], moments[: bin_order + 1], 1.0), [(1.0, c)]),
                         _em_series(b, em_order))

    def build_neg(bin_order, em_order):
        # l = -p, p > L: sum_j e^{-u j^2} (p-j)^a * p^c * Z
        return _multiply(_shift([(1.0, a)], moments[: bin_order + 1], -1.0), [(Z, c)])

    tails = _tail_with_estimate(build_pos, L) + _tail_with_estimate(build_neg, L)
    sup_M = abs(_zeta_direct(complex(b.real), Mc).value)
    err = (_gauss_tail_weight(u, J, a, c) * sup_M
           + tail_Mc.error_bound * (4 + 4 * riemann_zeta(-(a.real + c.real)).real)
           + 16 * 2.0**-52 * (abs(bulk) + 1))
    out = tails + BoundedValue(bulk, err)
    return BoundedValue(out.value, out.error_bound, len(js) * len(ls))


def suq2_continued_expression(z: Sequence[complex], r: float, t: float, K: int = 300) -> BoundedValue:
    """``Phi(z)``: the m-sums replaced by ``zeta(-z2) - H_l(z2)`` (k outermost).

    Valid on the same region as :func:`suq2_gauged_sum`; by analytic
    continuation the two agree there, which is what the comparison certifies.
    """
    u = float(r) * float(t)
    if not (r > 0 and t > 0):
        raise DomainError("r and t must be positive")
    a, b, c = _suq2_exponents(z)
    J = _gauss_radius(u)
    K = max(K, 8 * J)
    zeta = riemann_zeta(-b)
    lmax = K + J
    powers = np.concatenate([[0.0], np.arange(1, lmax + 1, dtype=float)]).astype(complex)
    powers[1:] = powers[1:] ** b
    R = zeta.value - np.cumsum(powers)  # R[l] = zeta(-b) - H_l(b), l = 0..lmax
    wl = _w_power(np.arange(0, lmax + 1), c)
    rows = []
    for k in range(-K, K + 1):
        if k == 0:
            continue
        lo, hi = max(0, k - J), max(0, k + J)
        l = np.arange(lo, hi + 1)
        A = csum(np.exp(-u * (k - l).astype(float) ** 2) * wl[l] * R[l]) if hi >= lo else 0.0
        lo2, hi2 = max(1, -k - J), max(0, -k + J)
        l2 = np.arange(lo2, hi2 + 1)
        B = csum(np.exp(-u * (k + l2).astype(float) ** 2) * wl[l2]) if hi2 >= lo2 else 0.0
        rows.append(abs(k) ** a * (A + zeta.value * B))
    bulk = complex(csum(rows))
    moments = _gauss_moments(u, J, _BINOM_ORDER)

    def build_pos(bin_order, em_order):
        # k > K: k^a sum_j e^{-u j^2} f(k - j), f(x) = x^c (zeta - H_x) ~ x^c T(b, x)
        f = _multiply([(1.0, c)], _em_series(b, em_order))
        return _multiply([(1.0, a)], _shift(f, moments[: bin_order + 1], -1.0))

    def build_neg(bin_order, em_order):
        # k = -p, p > K: p^a zeta sum_j e^{-u j^2} (p + j)^c
        return _multiply([(zeta.value, a)], _shift([(1.0, c)], moments[: bin_order + 1], 1.0))

    tails = _tail_with_estimate(build_pos, K) + _tail_with_estimate(build_neg, K)
    rearr = 4 + 4 * riemann_zeta(-(a.real + c.real)).real
    err = (2 * gauss_tail_bound(0, u, J) * rearr * (abs(zeta.value) + 1)
           + zeta.error_bound * rearr * 2
           + 16 * 2.0**-52 * (abs(bulk) + abs(zeta.value) * rearr))
    out = tails + BoundedValue(bulk, err)
    return BoundedValue(out.value, out.error_bound, 2 * K * (2 * J + 1))


@dataclass(frozen=True)
class ReductionIdentities:
    """Both sides of the two series reductions at ``u = r t``."""

    u: float
    pair_sum: BoundedValue         # sum_{k,l>=1} exp(-u (k+l)^2)
    pair_sum_reduced: BoundedValue  # S_1 - S_0
    weighted_pair_sum: BoundedValue          # sum_{k,l>=1} l exp(-u (k+l)^2)
    weighted_pair_sum_reduced: BoundedValue  # (S_2 - S_1) / 2

    def residuals(self) -> tuple[float, float]:
        return (abs(self.pair_sum.value - self.pair_sum_reduced.value),
                abs(self.weighted_pair_sum.value - self.weighted_pair_sum_reduced.value))


def suq2_reduction_identities(r: float, t: float) -> ReductionIdentities:
    """Evaluate ``sum_{k,l} e^{-u(k+l)^2}`` and ``sum_{k,l} l e^{-u(k+l)^2}`` as double sums."""
    u = float(r) * float(t)
    if not u > 0:
        raise DomainError("r and t must be positive")
    R = _gauss_radius(u) + 1
    k = np.arange(1, R + 1, dtype=float)
    kk, ll = np.meshgrid(k, k, indexing="ij")
    w = np.exp(-u * (kk + ll) ** 2)
    # every omitted pair has s = k + l > R; there are s - 1 < s of them per s,
    # with total l-weight s (s - 1) / 2 < s^2 / 2
    tail0 = gauss_tail_bound(1, u, R)
    tail1 = 0.5 * gauss_tail_bound(2, u, R)
    lhs0 = BoundedValue(math.fsum(w.ravel()), tail0 + 4 * 2.0**-52)
    lhs1 = BoundedValue(math.fsum((w * ll).ravel()), tail1 + 4 * 2.0**-52)
    s0, s1, s2 = (gauss_sum(j, u) for j in (0, 1, 2))
    return ReductionIdentities(u, lhs0, s1 - s0, lhs1, (s2 - s1).scale(0.5))


def suq2_continued_form(t: float, r: float, check_tol: float = 1e-10) -> BoundedValue:
    """The SU_q(2) heat trace assembled from the last step of the reduction.

    Evaluates ``1/12 + S_0/12 + 19 S_1/12 - S_2/2 - P_1 - P_0`` with the double
    sums ``P_0 = sum e^{-u(k+l)^2}``, ``P_1 = sum l e^{-u(k+l)^2}`` summed
    directly, checks both reduction identities to ``check_tol``, and returns
    the value (which then equals ``1/12 + 13/12 (S_0 + S_1) - S_2``).
    """
    ids = suq2_reduction_identities(r, t)
    r0, r1 = ids.residuals()
    if r0 > check_tol or r1 > check_tol:
        raise ArithmeticError(f"series reduction identities fail: residuals {r0:.3e}, {r1:.3e}")
    u = ids.u
    s0, s1, s2 = (gauss_sum(j, u) for j in (0, 1, 2))
    value = (1.0 / 12.0 + s0.scale(1.0 / 12.0) + s1.scale(19.0 / 12.0) - s2.scale(0.5)
             - ids.weighted_pair_sum - ids.pair_sum)
    return BoundedValue(value.real, value.error_bound, value.terms_used)


# --------------------------------------------------------------------------
# comparisons


def compare_toeplitz(z2: float, t: float, tol: float = 1e-10) -> OracleComparison:
    direct = toeplitz_gauged_sum(0.0, z2, t)
    closed = toeplitz_continued_form(z2, t)
    return OracleComparison("toeplitz", (0.0, z2), t, direct, closed, tol)


def compare_suq2(z: Sequence[complex], r: float, t: float, tol: float = 1e-8) -> OracleComparison:
    direct = suq2_gauged_sum(z, r, t)
    closed = suq2_continued_expression(z, r, t)
    return OracleComparison("suq2", tuple(complex(x) for x in z), t, direct, closed, tol)
