"""Meromorphic continuation of lattice zeta functions.

Two independent engines live here.

*Riemann splitting* (:func:`epstein_zeta`) for the full-lattice Epstein zeta
``Z_d(s) = sum_{mu in Z^d, mu != 0} |mu|^{-s}``::

    Gamma(s/2) pi^{-s/2} Z_d(s) = -2/s + 2/(s-d)
        + sum_{mu != 0} [ (pi|mu|^2)^{-s/2} Gamma(s/2, pi|mu|^2)
                          + (pi|mu|^2)^{-(d-s)/2} Gamma((d-s)/2, pi|mu|^2) ].

Multiplying through by ``1/Gamma(s/2)`` (entire) gives a representation with
no cancellation at ``s = 0`` or the trivial zeros ``s = -2, -4, ...``.

*Mellin subtraction* (:func:`lattice_monomial_zeta`) for monomial-weighted
sums ``sum x^e |x|^{-s}`` over products of one-dimensional factor sets Z,
N = {1, 2, ...} and N0 = {0, 1, ...}.  With ``F(t) = sum_k k^e exp(-pi t k^2)``
for each factor,

    Gamma(s/2) pi^{-s/2} sum = int_0^inf t^{s/2-1} (prod_i F_i(t) - origin) dt.

Each ``F_i`` has a small-t expansion ``L t^{-(e+1)/2} + sum_j c_j t^j``; the
expansion part of ``(0, t_s)`` is integrated in closed form (this produces all
poles), the rest numerically by Gauss--Legendre on dyadic panels.  When all
exponents are even the remainders are exponentially small and are evaluated
exactly through Poisson summation (Hermite polynomials), with split point
``t_s = 1``; otherwise ``t_s = 1/16`` and the asymptotic expansion is carried
to 40 terms, beyond which the remainder is below double precision.

The quadrant and ``Z x N0^2`` sums are also available in decomposed form
through full-lattice pieces (:func:`quadrant_zeta`, :func:`mixed_su_zeta`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
import scipy.special as sc

from .special_functions import (
    BoundedValue,
    DomainError,
    PoleError,
    PrecisionConfig,
    csum,
    riemann_zeta,
    upper_incomplete_gamma,
    zeta_at_nonpositive_integer,
)

__all__ = [
    "LaurentData",
    "epstein_zeta",
    "epstein_laurent_at_pole",
    "epstein_residue",
    "weighted_epstein_zeta",
    "lattice_monomial_zeta",
    "monomial_zeta_poles",
    "quadrant_zeta",
    "mixed_su_zeta",
    "NEAR_POLE",
]

NEAR_POLE = 1e-3
_EPS = 2.0**-52


@dataclass(frozen=True)
class LaurentData:
    """Laurent data of a meromorphic function at a point.

    ``order`` is 0 at a regular point (then ``residue`` is 0 and
    ``finite_part`` is the value) and 1 at a simple pole.
    """

    location: complex
    order: int
    residue: complex
    finite_part: complex
    error_estimate: float = 0.0

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be nonnegative")
        if self.order == 0 and self.residue != 0:
            raise ValueError("a regular point has zero residue")


# --------------------------------------------------------------------------
# full-lattice Epstein zeta by Riemann splitting


@lru_cache(maxsize=None)
def _shell_counts(d: int, R: int) -> tuple[tuple[int, int], ...]:
    """``(n, #{mu in Z^d : |mu|^2 = n, |mu|_inf <= R})`` for n >= 1."""
    one = np.zeros(R * R + 1, dtype=np.int64)
    for k in range(-R, R + 1):
        one[k * k] += 1
    counts = np.array([1], dtype=np.int64)
    for _ in range(d):
        counts = np.convolve(counts, one)
    return tuple((n, int(c)) for n, c in enumerate(counts) if n >= 1 and c > 0)


def epstein_residue(d: int) -> float:
    """Residue of ``Z_d`` at its only pole ``s = d``: ``2 pi^{d/2} / Gamma(d/2)``."""
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


def _gamma_tail_bound(sigma: float, x: float) -> float:
    """Bound on ``x^{-sigma} |Gamma(a, x)|`` for Re a = sigma, x > max(sigma-1, 0) + 1."""
    if sigma <= 1:
        g = x ** (sigma - 1) * math.exp(-x)
    else:
        g = x ** (sigma - 1) * math.exp(-x) / (1 - (sigma - 1) / x)
    return x ** (-sigma) * g


def _splitting_sum(d: int, s: complex, prec: PrecisionConfig | None) -> tuple[complex, float, int]:
    """``sum_{mu != 0}`` of the two incomplete-gamma terms, with a tail bound."""
    a1, a2 = s / 2, (d - s) / 2
    sig = max(a1.real, a2.real)
    # radius: the shell |mu| = R already carries weight below 1e-20 of the first shell
    R = 2
    while True:
        x = math.pi * R * R
        if x > sig + 2 and ((2 * R + 3) ** d) * (_gamma_tail_bound(a1.real, x) + _gamma_tail_bound(a2.real, x)) * x < 1e-22:
            break
        R += 1
    terms = []
    for n, count in _shell_counts(d, R):
        if n > R * R:
            break  # shells beyond the inscribed ball are incomplete
        x = math.pi * n
        g1 = upper_incomplete_gamma(a1, x, prec)
        g2 = upper_incomplete_gamma(a2, x, prec)
        v = (x ** (-a1)) * g1.value + (x ** (-a2)) * g2.value
        terms.append(count * v)
    value = csum(terms)
    # tail: every omitted point has |mu| > R; bound shells k <= |mu| < k+1
    tail = 0.0
    for k in range(R, R + 60):
        x = math.pi * k * k
        tail += (2 * k + 3) ** d * (_gamma_tail_bound(a1.real, x) + _gamma_tail_bound(a2.real, x))
    round_err = 8 * _EPS * sum(abs(t) for t in terms)
    return complex(value), tail + round_err, len(terms)


def epstein_zeta(d: int, s: complex, prec: PrecisionConfig | None = None,
                 near_pole: float = NEAR_POLE) -> BoundedValue:
    """Epstein zeta ``Z_d(s)`` of the square lattice ``Z^d``.

    The only pole is ``s = d``; evaluation within ``near_pole`` of it raises
    :class:`PoleError` (use :func:`epstein_laurent_at_pole`).  ``s = 0`` is a
    regular point with ``Z_d(0) = -1``.
    """
    if d < 1:
        raise DomainError("d must be a positive integer")
    s = complex(s)
    if abs(s - d) < near_pole:
        raise PoleError(f"Z_{d} has a simple pole at s = {d}", location=d, residue=epstein_residue(d),
                        laurent=epstein_laurent_at_pole(d))
    G, err, n = _splitting_sum(d, s, prec)
    x = s / 2
    f = np.pi ** x * complex(sc.rgamma(x))
    value = -np.pi ** x * complex(sc.rgamma(1 + x)) + f * (2 / (s - d) + G)
    # rounding in the prefactors (a few ulps each) plus propagated sum error
    err_total = abs(f) * err + 16 * _EPS * (abs(value) + abs(f) * (abs(G) + abs(2 / (s - d))) + 1)
    return BoundedValue(complex(value), err_total, n)


def epstein_laurent_at_pole(d: int, prec: PrecisionConfig | None = None) -> LaurentData:
    """Residue and finite part of ``Z_d`` at ``s = d``.

    With ``f(s) = pi^{s/2}/Gamma(s/2)`` and the splitting sum ``G``, the
    expansion ``Z_d(s) = 2 f(d)/(s-d) + 2 f'(d) + f(d) G(d) - pi^{d/2}/Gamma(1+d/2)
    + O(s-d)`` gives the data, with ``f'/f = (log pi - psi(s/2))/2``.
    """
    if d < 1:
        raise DomainError("d must be a positive integer")
    G, err, _ = _splitting_sum(d, complex(d), prec)
    f = math.pi ** (d / 2) / math.gamma(d / 2)
    fprime = f * 0.5 * (math.log(math.pi) - float(sc.digamma(d / 2)))
    finite = 2 * fprime + f * G - math.pi ** (d / 2) / math.gamma(1 + d / 2)
    return LaurentData(location=complex(d), order=1, residue=complex(2 * f),
                       finite_part=complex(finite), error_estimate=f * err + 1e-14 * abs(finite))


# --------------------------------------------------------------------------
# Mellin subtraction engine for monomial-weighted sums

_FACTOR_SETS = ("Z", "N", "N0")
_J_TERMS = 40
_T_SPLIT_MIXED = 1.0 / 16
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


def _gl_panels(a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights of composite Gauss--Legendre on dyadic panels of [a, b]."""
    edges = [a]
    while edges[-1] * 2 < b:
        edges.append(edges[-1] * 2)
    edges.append(b)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(lo + half * (_GL_NODES + 1))
        weights.append(half * _GL_WEIGHTS)
    return np.concatenate(nodes), np.concatenate(weights)


def _leading_coefficient(kind: str, e: int) -> float:
    """Coefficient of ``t^{-(e+1)/2}`` in the small-t expansion of F."""
    c = math.gamma((e + 1) / 2) / math.pi ** ((e + 1) / 2)
    return c if kind == "Z" else 0.5 * c


def _expansion(kind: str, e: int, J: int) -> dict[Fraction, float]:
    """Small-t expansion of ``F(t) = sum_{k in set} k^e exp(-pi t k^2)``.

    Powers are keys (exact fractions), coefficients values.  The integer
    powers come from ``zeta(-e-2j) (-pi)^j / j!`` for the half-line sets
    (doubled and therefore zero on Z, except for the origin term).
    """
    out: dict[Fraction, float] = {Fraction(-(e + 1), 2): _leading_coefficient(kind, e)}
    if kind == "Z":
        return out  # even e: all zeta(-e-2j) vanish or cancel against the origin
    for j in range(J + 1):
        zv = zeta_at_nonpositive_integer(e + 2 * j)
        c = float(zv) * (-math.pi) ** j / math.factorial(j)
        if kind == "N0" and e == 0 and j == 0:
            c += 1.0
        if c != 0.0:
            out[Fraction(j)] = out.get(Fraction(j), 0.0) + c
    return out


def _direct_factor(kind: str, e: int, t: np.ndarray) -> np.ndarray:
    """``F(t)`` by direct summation (used for t >= t_s, never below 1/16)."""
    tmin = float(np.min(t))
    K = int(math.ceil(math.sqrt((45 + 2 * e) / (math.pi * tmin)))) + 2
    k = np.arange(1, K + 1, dtype=float)
    w = k**e * np.exp(-math.pi * np.outer(t, k * k))
    half = w.sum(axis=1)
    if kind == "Z":
        return 2 * half + (1.0 if e == 0 else 0.0)
    if kind == "N0" and e == 0:
        return half + 1.0
    return half


def _product_minus_origin(sets, exponents, t: np.ndarray, origin: float) -> np.ndarray:
    """``prod_i F_i(t) - origin`` without cancelling the unit origin term.

    Factors containing k = 0 with e = 0 are written ``1 + G_i``; the product
    minus one is accumulated as ``P <- P + G (1 + P)``.
    """
    if not origin:
        out = np.ones_like(t)
        for k, e in zip(sets, exponents):
            out = out * _direct_factor(k, e, t)
        return out
    P = np.zeros_like(t)
    for k, e in zip(sets, exponents):
        G = _direct_factor_nonorigin(k, t)
        P = P + G * (1 + P)
    return P


def _direct_factor_nonorigin(kind: str, t: np.ndarray) -> np.ndarray:
    """``F(t) - 1`` for e = 0 and a set containing 0 (Z or N0)."""
    half = _direct_factor("N", 0, t)
    return 2 * half if kind == "Z" else half


def _poisson_remainder(kind: str, e: int, t: np.ndarray) -> np.ndarray:
    """``F(t) - expansion`` for even e via Poisson summation (t <= 1)."""
    pref = (-1) ** (e // 2) * (2 * math.pi) ** (-e) * math.pi ** (e / 2)
    nu = np.arange(1, 12, dtype=float)
    u = np.outer(np.sqrt(math.pi / t), nu)
    h = sc.eval_hermite(e, u) * np.exp(-u * u)
    r = 2 * pref * t ** (-(e + 1) / 2) * h.sum(axis=1)
    return r if kind == "Z" else 0.5 * r


def _multiply_expansions(exps: Sequence[dict[Fraction, float]]) -> dict[Fraction, float]:
    out = {Fraction(0): 1.0}
    for ex in exps:
        new: dict[Fraction, float] = {}
        for p1, c1 in out.items():
            for p2, c2 in ex.items():
                new[p1 + p2] = new.get(p1 + p2, 0.0) + c1 * c2
        out = new
    return out


def _rgamma_over(x: complex, p: Fraction) -> complex:
    """``(1/Gamma(x)) / (x + p)``, finite at x = -p for integer p >= 0."""
    if p.denominator == 1 and p >= 0:
        poch = 1.0 + 0j
        for i in range(int(p)):
            poch *= x + i
        return poch * complex(sc.rgamma(x + int(p) + 1))
    return complex(sc.rgamma(x)) / (x + float(p))


def _validate(sets: Sequence[str], exponents: Sequence[int]) -> tuple[tuple[str, ...], tuple[int, ...]]:
    sets = tuple(sets)
    exponents = tuple(int(e) for e in exponents)
    if len(sets) != len(exponents) or not sets:
        raise DomainError("need one exponent per factor set")
    for k in sets:
        if k not in _FACTOR_SETS:
            raise DomainError(f"unknown factor set {k!r}")
    if any(e < 0 for e in exponents):
        raise DomainError("exponents must be nonnegative")
    return sets, exponents


def _origin(sets, exponents) -> float:
    return 1.0 if all(e == 0 for e in exponents) and all(k != "N" for k in sets) else 0.0


@lru_cache(maxsize=256)
def _structure(sets: tuple[str, ...], exponents: tuple[int, ...]):
    """s-independent data: factor expansions, their product (minus origin), J."""
    J = _J_TERMS if any(e % 2 for e in exponents) else 0
    exps = tuple(_expansion(k, e, J) for k, e in zip(sets, exponents))
    prod = _multiply_expansions(exps)
    origin = _origin(sets, exponents)
    if origin:
        prod[Fraction(0)] = prod.get(Fraction(0), 0.0) - origin
    items = tuple((p, c) for p, c in sorted(prod.items()) if c != 0.0)
    return exps, items, origin, J


def monomial_zeta_poles(sets: Sequence[str], exponents: Sequence[int]) -> dict[complex, complex]:
    """Poles ``{s: residue}`` of ``sum_{x != 0} x^e |x|^{-s}`` over the product set.

    For weights odd on a half-line the list is complete down to ``s = -2J``.
    """
    sets, exponents = _validate(sets, exponents)
    if any(k == "Z" and e % 2 for k, e in zip(sets, exponents)):
        return {}
    _, items, _, _ = _structure(sets, exponents)
    poles = {}
    for p, c in items:
        if not (p.denominator == 1 and p >= 0):
            # near s = -2p: pi^{s/2} c / (Gamma(s/2) (s/2 + p)) -> residue in s
            s0 = -2 * float(p)
            poles[complex(s0)] = complex(2 * c * math.pi ** (-float(p)) / math.gamma(-float(p)))
    return dict(sorted(poles.items(), key=lambda kv: kv[0].real, reverse=True))


def lattice_monomial_zeta(sets: Sequence[str], exponents: Sequence[int], s: complex,
                          near_pole: float = NEAR_POLE) -> BoundedValue:
    """Continuation of ``sum_{x in S_1 x ... x S_n, x != 0} x^e |x|^{-s}``.

    ``sets`` entries are ``"Z"``, ``"N"`` (k >= 1) or ``"N0"`` (k >= 0);
    ``0^0 = 1``.  Sums containing an odd power of a full-line coordinate
    vanish identically and are returned as exact zero.
    """
    sets, exponents = _validate(sets, exponents)
    s = complex(s)
    if any(k == "Z" and e % 2 for k, e in zip(sets, exponents)):
        return BoundedValue(0.0, 0.0, 0)
    poles = monomial_zeta_poles(sets, exponents)
    for s0, res in poles.items():
        if abs(s - s0) < near_pole:
            raise PoleError(f"pole at s = {s0.real:g}", location=s0, residue=res)
    if all(e % 2 == 0 for e in exponents):
        return _mellin_even(sets, exponents, s)
    return _mellin_mixed(sets, exponents, s)


def _mellin_even(sets, exponents, s: complex) -> BoundedValue:
    x = s / 2
    exps, items, origin, _ = _structure(sets, exponents)
    # closed-form integrals of the expansion over (0, 1)
    closed = [c * _rgamma_over(x, p) for p, c in items]
    # numerical part over (0, 1): products with at least one Poisson remainder
    tn, wn = _gl_panels(1.0 / 512, 1.0)
    E = [sum(c * tn ** float(p) for p, c in ex.items()) for ex in exps]
    r = [_poisson_remainder(k, e, tn) for k, e in zip(sets, exponents)]
    # subset expansion avoids cancelling the large expansion terms
    M = np.zeros_like(tn)
    n = len(sets)
    for mask in range(1, 1 << n):
        term = np.ones_like(tn)
        for i in range(n):
            term = term * (r[i] if mask >> i & 1 else E[i])
        M = M + term
    low = np.sum(wn * tn ** (x - 1) * M)
    # (1, inf): direct sums
    tm, wm = _gl_panels(1.0, 64.0)
    Fm = _product_minus_origin(sets, exponents, tm, origin)
    high = np.sum(wm * tm ** (x - 1) * Fm)
    rg = complex(sc.rgamma(x))
    value = np.pi ** x * (rg * (low + high) + csum(closed))
    scale = abs(np.pi ** x) * (abs(rg) * (np.sum(np.abs(wn * tn ** (x - 1) * M)) + np.sum(np.abs(wm * tm ** (x - 1) * Fm)))
                               + sum(abs(c) for c in closed))
    err = 64 * _EPS * scale + 1e-15 * abs(value)
    return BoundedValue(complex(value), float(err), len(tn) + len(tm))


def _mellin_mixed(sets, exponents, s: complex) -> BoundedValue:
    x = s / 2
    ts = _T_SPLIT_MIXED
    exps, items, origin, J = _structure(sets, exponents)
    powers = np.array([float(p) for p, _ in items])
    coeffs = np.array([c for _, c in items])
    # closed-form integrals of the expansion over (0, t_s); 1/Gamma(x)/(x+p)
    # is taken in its entire form for integer p >= 0
    weights = np.array([_rgamma_over(x, p) for p, _ in items])
    closed = coeffs * np.exp((x + powers) * math.log(ts)) * weights
    # numerical part over (t_s, inf)
    tm, wm = _gl_panels(ts, 64.0)
    Fm = _product_minus_origin(sets, exponents, tm, origin)
    high = np.sum(wm * tm ** (x - 1) * Fm)
    rg = complex(sc.rgamma(x))
    value = np.pi ** x * (rg * high + csum(list(closed)))
    # remainder of the truncated expansions on (0, t_s)
    q, cq = _remainder_terms(sets, exponents)
    expo = x.real + q
    rem = float("inf") if np.any(expo <= 0) else float(np.sum(cq * ts**expo / expo))
    scale = abs(np.pi ** x) * (abs(rg) * np.sum(np.abs(wm * tm ** (x - 1) * Fm)) + np.sum(np.abs(closed)))
    err = abs(np.pi ** x) * abs(rg) * rem + 64 * _EPS * scale
    return BoundedValue(complex(value), float(err), len(tm))


@lru_cache(maxsize=256)
def _remainder_terms(sets: tuple[str, ...], exponents: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    """Powers q and coefficients c with ``|prod F - prod E| <= sum c t^q`` on (0, t_s).

    Odd-exponent remainders are estimated by twice the first omitted term of
    the expansion; even-exponent remainders by their Poisson form, whose ratio
    to ``t^{J+1}`` is sampled on (0, t_s].
    """
    exps, _, _, J = _structure(sets, exponents)
    ts = _T_SPLIT_MIXED
    n = len(sets)
    R = []
    for k, e in zip(sets, exponents):
        if e % 2:
            zv = abs(float(zeta_at_nonpositive_integer(e + 2 * (J + 1))))
            R.append(2 * zv * math.pi ** (J + 1) / math.factorial(J + 1))
        else:
            tt = ts * 2.0 ** -np.arange(0, 12)
            r = np.abs(_poisson_remainder(k, e, tt)) / tt ** (J + 1)
            R.append(2 * float(np.max(r)))
    absE = [{p: abs(c) for p, c in ex.items()} for ex in exps]
    total: dict[Fraction, float] = {}
    for mask in range(1, 1 << n):
        terms = {Fraction(0): 1.0}
        for i in range(n):
            factor = {Fraction(J + 1): R[i]} if mask >> i & 1 else absE[i]
            terms = _multiply_expansions([terms, factor])
        for qq, c in terms.items():
            total[qq] = total.get(qq, 0.0) + c
    q = np.array([float(k) for k in total])
    c = np.array(list(total.values()))
    return q, c


# --------------------------------------------------------------------------
# public wrappers


def weighted_epstein_zeta(d: int, a: Sequence[int], s: complex, near_pole: float = NEAR_POLE) -> BoundedValue:
    """``sum_{mu in Z^d, mu != 0} mu^a |mu|^{-s}`` for an even exponent vector ``a``.

    Single simple pole at ``s = d + |a|``; vanishes at ``s = 0`` when
    ``|a| > 0``.  Odd exponents give exact zero by symmetry.
    """
    a = tuple(int(x) for x in a)
    if len(a) != d:
        raise DomainError("weight vector length must equal d")
    if any(x % 2 for x in a):
        return BoundedValue(0.0, 0.0, 0)
    return lattice_monomial_zeta(("Z",) * d, a, s, near_pole=near_pole)


def quadrant_zeta(s: complex, prec: PrecisionConfig | None = None, near_pole: float = NEAR_POLE) -> BoundedValue:
    """``sum_{(n, m) in N0^2, (n, m) != 0} (n^2 + m^2)^{-s/2} = Z_2(s)/4 + zeta(s)``.

    Z^2 minus the origin is four open quadrants plus four open half-axes, and
    N0^2 minus the origin is one open quadrant plus two half-axes.  Poles at
    s = 2 (from Z_2) and s = 1 (from the axes).
    """
    s = complex(s)
    for s0, res in ((2.0, math.pi / 2), (1.0, 1.0)):
        if abs(s - s0) < near_pole:
            raise PoleError(f"quadrant zeta has a simple pole at s = {s0:g}", location=s0, residue=res)
    return epstein_zeta(2, s, prec, near_pole=0.0).scale(0.25) + riemann_zeta(s, prec)


def mixed_su_zeta(s: complex, prec: PrecisionConfig | None = None, near_pole: float = NEAR_POLE) -> BoundedValue:
    """``sum over (k, m, n) in Z x N0 x N0 minus 0 of |.|^{-s} = Z_3/4 + Z_2/2 + zeta/2``.

    Split by which of m, n vanish: both nonzero gives a quarter of the
    corresponding part of ``Z_3``; one zero gives half-planes of ``Z^2``;
    both zero gives ``2 zeta``.  Poles at s = 3, 2, 1.
    """
    s = complex(s)
    for s0, res in ((3.0, math.pi), (2.0, math.pi), (1.0, 0.5)):
        if abs(s - s0) < near_pole:
            raise PoleError(f"Z x N0^2 zeta has a simple pole at s = {s0:g}", location=s0, residue=res)
    return (epstein_zeta(3, s, prec, near_pole=0.0).scale(0.25)
            + epstein_zeta(2, s, prec, near_pole=0.0).scale(0.5)
            + riemann_zeta(s, prec).scale(0.5))
