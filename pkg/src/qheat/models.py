"""Lattice index families, eigenvalue rules and gauges for the spectral models.

Every model is a pair of a :class:`LatticeFamily` (which lattice points label
the basis) and an eigenvalue rule (the value of the generator on each basis
element).  The five quantum-semigroup models are

=========================  =========================  ==================
model                      lattice                    eigenvalue
=========================  =========================  ==================
Toeplitz algebra           (n, m) in N0^2             -(n - m)^2
Heisenberg group H_N       (mu, p) in Z^{2N} x Z      -|mu|^2
reduced Heisenberg H_N^r   mu in Z^{2N}               -|mu|^2
NC torus (abstract twist)  (p, k) in Z^Tf x Z^N       -|k|^2
SU_q(2)                    (k, m, n) in Z x N0 x N0   -r (k - m + n)^2
=========================  =========================  ==================

Polyhomogeneous operators (:class:`PolyhomOperator`) are finite sums of
homogeneous symbols acting diagonally on the same basis, and gauges
(:class:`GaugeSpec`) deform their degrees holomorphically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

__all__ = [
    "LatticeFamily",
    "GaussianFunctional",
    "SUq2Functional",
    "ToeplitzBM",
    "ToeplitzLaplacian",
    "HeisenbergLaplacian",
    "ReducedHeisenbergLaplacian",
    "NCTorusLaplacian",
    "SUq2Gauss",
    "GeneralGaussian",
    "Custom",
    "SpectralModel",
    "Radial",
    "Monomial",
    "SignedQuadratic",
    "SymbolTerm",
    "PolyhomOperator",
    "GaugeSpec",
    "ModelError",
    "eigenvalue",
    "enumerate_points",
    "gaussian_eigenvalue",
    "predicted_pole_set",
    "axis_pole_set",
    "model_dimension",
    "toeplitz",
    "heisenberg",
    "reduced_heisenberg",
    "nc_torus",
    "nc_torus_complex",
    "suq2",
    "laplacian_operator",
    "radial_symbol",
]


class ModelError(ValueError):
    """Invalid model data or a point outside a model's lattice."""


# --------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class LatticeFamily:
    """A lattice of basis labels.

    ``kind`` is one of ``"quadrant"`` (N0^2), ``"full"`` (Z^d), ``"mixed_su"``
    (Z x N0 x N0) and ``"twisted_torus"`` (Z^Tf x Z^N).  Coordinates are
    either full integers (``"Z"``) or nonnegative integers (``"N0"``); see
    :attr:`coordinate_sets`.
    """

    kind: str
    d: int = 0
    N: int = 0
    Tf: int = 0

    def __post_init__(self):
        if self.kind == "full" and self.d < 1:
            raise ModelError("full lattice needs d >= 1")
        if self.kind == "twisted_torus" and (self.N < 1 or self.Tf < 0):
            raise ModelError("twisted torus needs N >= 1 and Tf >= 0")
        if self.kind not in ("quadrant", "full", "mixed_su", "twisted_torus"):
            raise ModelError(f"unknown lattice kind {self.kind!r}")

    @classmethod
    def quadrant(cls) -> "LatticeFamily":
        return cls("quadrant")

    @classmethod
    def full(cls, d: int) -> "LatticeFamily":
        return cls("full", d=d)

    @classmethod
    def mixed_su(cls) -> "LatticeFamily":
        return cls("mixed_su")

    @classmethod
    def twisted_torus(cls, N: int, Tf: int) -> "LatticeFamily":
        return cls("twisted_torus", N=N, Tf=Tf)

    @property
    def coordinate_sets(self) -> tuple[str, ...]:
        if self.kind == "quadrant":
            return ("N0", "N0")
        if self.kind == "full":
            return ("Z",) * self.d
        if self.kind == "mixed_su":
            return ("Z", "N0", "N0")
        return ("Z",) * (self.Tf + self.N)

    @property
    def dim(self) -> int:
        return len(self.coordinate_sets)

    def contains(self, mu: Sequence[int]) -> bool:
        mu = tuple(mu)
        if len(mu) != self.dim:
            return False
        for x, kind in zip(mu, self.coordinate_sets):
            if int(x) != x:
                return False
            if kind == "N0" and x < 0:
                return False
        return True

    def enumerate(self, radius: int) -> list[tuple[int, ...]]:
        """All points with sup-norm at most ``radius``, lexicographic order."""
        if radius < 0:
            return []
        ranges = [range(-radius, radius + 1) if kind == "Z" else range(0, radius + 1)
                  for kind in self.coordinate_sets]
        return [tuple(p) for p in itertools.product(*ranges)]


def enumerate_points(family: LatticeFamily, radius: int) -> list[tuple[int, ...]]:
    """Lattice points of ``family`` with ``|mu|_inf <= radius`` (lexicographic)."""
    return family.enumerate(radius)


# --------------------------------------------------------------------------
# generating functionals


@dataclass(frozen=True)
class GaussianFunctional:
    """Gaussian generating functional on the discrete Heisenberg group H_N.

    ``drift_p``, ``drift_q`` (length N) and ``drift_z`` are the drift
    parameters; ``cov`` is the symmetric positive semidefinite 2N x 2N
    covariance with blocks (eta_P, eta_PQ; eta_PQ^T, eta_Q).
    """

    drift_p: tuple[float, ...]
    drift_q: tuple[float, ...]
    drift_z: float
    cov: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        N = len(self.drift_p)
        if len(self.drift_q) != N:
            raise ModelError("drift_p and drift_q must have equal length")
        c = np.asarray(self.cov, dtype=float)
        if c.shape != (2 * N, 2 * N):
            raise ModelError(f"cov must be {2 * N}x{2 * N}")
        if not np.allclose(c, c.T, atol=1e-12):
            raise ModelError("cov must be symmetric")
        if np.linalg.eigvalsh(c).min() < -1e-12 * max(1.0, np.abs(c).max()):
            raise ModelError("cov must be positive semidefinite")

    @classmethod
    def driftless(cls, cov) -> "GaussianFunctional":
        c = np.asarray(cov, dtype=float)
        N = c.shape[0] // 2
        return cls((0.0,) * N, (0.0,) * N, 0.0, tuple(map(tuple, c.tolist())))

    @property
    def N(self) -> int:
        return len(self.drift_p)

    @property
    def cov_matrix(self) -> np.ndarray:
        return np.asarray(self.cov, dtype=float)

    @property
    def is_driftless(self) -> bool:
        return not any(self.drift_p) and not any(self.drift_q) and self.drift_z == 0


def gaussian_eigenvalue(g: GaussianFunctional, mu: Sequence[int], p: int) -> complex:
    """``i (drift . (mu, p)) - (1/2) mu^T cov mu`` for ``mu`` in Z^{2N}."""
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (2 * g.N,):
        raise ModelError(f"mu must have length {2 * g.N}")
    drift = np.concatenate([g.drift_p, g.drift_q])
    phase = float(drift @ mu) + g.drift_z * p
    quad = float(mu @ g.cov_matrix @ mu)
    return complex(-0.5 * quad, phase)


@dataclass(frozen=True)
class SUq2Functional:
    """Gaussian generating functional on SU_q(2): drift ``r_D`` and scale ``r``."""

    r_D: float
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise ModelError("r must be positive")


# --------------------------------------------------------------------------
# eigenvalue rules


@dataclass(frozen=True)
class ToeplitzBM:
    """Brownian motion on the Toeplitz algebra: -(n - m)^2 / 2."""


@dataclass(frozen=True)
class ToeplitzLaplacian:
    """Toeplitz Laplacian (twice the Brownian generator): -(n - m)^2."""


@dataclass(frozen=True)
class HeisenbergLaplacian:
    N: int


@dataclass(frozen=True)
class ReducedHeisenbergLaplacian:
    N: int


@dataclass(frozen=True)
class NCTorusLaplacian:
    N: int
    Tf: int = 0


@dataclass(frozen=True)
class SUq2Gauss:
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise ModelError("r must be positive")


@dataclass(frozen=True)
class GeneralGaussian:
    g: GaussianFunctional


@dataclass(frozen=True)
class Custom:
    op: "PolyhomOperator"


EigenvalueRule = Union[ToeplitzBM, ToeplitzLaplacian, HeisenbergLaplacian, ReducedHeisenbergLaplacian,
                       NCTorusLaplacian, SUq2Gauss, GeneralGaussian, Custom]


@dataclass(frozen=True)
class SpectralModel:
    """A lattice family together with an eigenvalue rule."""

    family: LatticeFamily
    rule: EigenvalueRule
    name: str = ""

    def __post_init__(self):
        expected = _expected_family(self.rule)
        if expected is not None and expected != self.family:
            raise ModelError(f"rule {self.rule!r} requires lattice {expected!r}")


def _expected_family(rule) -> LatticeFamily | None:
    if isinstance(rule, (ToeplitzBM, ToeplitzLaplacian)):
        return LatticeFamily.quadrant()
    if isinstance(rule, HeisenbergLaplacian):
        return LatticeFamily.full(2 * rule.N + 1)
    if isinstance(rule, ReducedHeisenbergLaplacian):
        return LatticeFamily.full(2 * rule.N)
    if isinstance(rule, NCTorusLaplacian):
        if rule.Tf == 0:
            return None  # Z^N, either as a full or a twisted-torus family
        return LatticeFamily.twisted_torus(rule.N, rule.Tf)
    if isinstance(rule, SUq2Gauss):
        return LatticeFamily.mixed_su()
    if isinstance(rule, GeneralGaussian):
        return LatticeFamily.full(2 * rule.g.N + 1)
    return None


def eigenvalue(model: SpectralModel, mu: Sequence[int]) -> complex:
    """Value of the generating functional on the basis element labelled ``mu``."""
    mu = tuple(int(x) for x in mu)
    if not model.family.contains(mu):
        raise ModelError(f"{mu} is not a point of {model.family}")
    rule = model.rule
    if isinstance(rule, ToeplitzBM):
        n, m = mu
        return complex(-0.5 * (n - m) ** 2)
    if isinstance(rule, ToeplitzLaplacian):
        n, m = mu
        return complex(-((n - m) ** 2))
    if isinstance(rule, HeisenbergLaplacian):
        return complex(-sum(x * x for x in mu[: 2 * rule.N]))
    if isinstance(rule, ReducedHeisenbergLaplacian):
        return complex(-sum(x * x for x in mu))
    if isinstance(rule, NCTorusLaplacian):
        return complex(-sum(x * x for x in mu[model.family.dim - rule.N:]))
    if isinstance(rule, SUq2Gauss):
        k, m, n = mu
        return complex(-rule.r * (k - m + n) ** 2)
    if isinstance(rule, GeneralGaussian):
        return gaussian_eigenvalue(rule.g, mu[:-1], mu[-1])
    if isinstance(rule, Custom):
        return rule.op.symbol(mu)
    raise ModelError(f"unknown rule {rule!r}")


# --------------------------------------------------------------------------
# polyhomogeneous operators and gauges


@dataclass(frozen=True)
class Radial:
    """``|mu|^d``."""


@dataclass(frozen=True)
class Monomial:
    """``mu^e |mu|^{d - |e|}`` (just ``mu^e`` when d equals ``|e|``)."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        if any(e < 0 for e in self.exponents):
            raise ModelError("monomial exponents must be nonnegative")


@dataclass(frozen=True)
class SignedQuadratic:
    """``(c . mu)^2 |mu|^{d - 2}``, e.g. ``(n - m)^2`` with ``c = (1, -1)``."""

    coefficients: tuple[int, ...]

    def monomials(self) -> list[tuple[int, tuple[int, ...]]]:
        """Expansion of ``(c . mu)^2`` into ``(coefficient, exponent)`` pairs."""
        c = self.coefficients
        out: dict[tuple[int, ...], int] = {}
        for i in range(len(c)):
            for j in range(len(c)):
                e = [0] * len(c)
                e[i] += 1
                e[j] += 1
                out[tuple(e)] = out.get(tuple(e), 0) + c[i] * c[j]
        return [(v, e) for e, v in sorted(out.items(), reverse=True) if v != 0]


Shape = Union[Radial, Monomial, SignedQuadratic]


@dataclass(frozen=True)
class SymbolTerm:
    """``alpha(z) * sigma_d(mu)`` with ``alpha`` a polynomial in the gauge variable.

    ``alpha`` holds the polynomial coefficients in ascending order.
    """

    alpha: tuple[complex, ...]
    degree: complex
    shape: Shape = Radial()

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(self.alpha))
        if len(self.alpha) == 0:
            raise ModelError("alpha needs at least one coefficient")

    def alpha_at(self, z: complex) -> complex:
        return complex(np.polyval(list(reversed(self.alpha)), z)) if len(self.alpha) > 1 else complex(self.alpha[0])

    @property
    def is_zero(self) -> bool:
        return all(a == 0 for a in self.alpha)

    def monomials(self, dim: int) -> list[tuple[complex, tuple[int, ...], complex]]:
        """Decompose the shape as ``sum c * mu^e * |mu|^w``: list of ``(c, e, w)``."""
        d = complex(self.degree)
        if isinstance(self.shape, Radial):
            return [(1.0, (0,) * dim, d)]
        if isinstance(self.shape, Monomial):
            e = tuple(self.shape.exponents)
            if len(e) != dim:
                raise ModelError("monomial exponent vector has wrong length")
            return [(1.0, e, d - sum(e))]
        if isinstance(self.shape, SignedQuadratic):
            if len(self.shape.coefficients) != dim:
                raise ModelError("quadratic coefficient vector has wrong length")
            return [(c, e, d - 2) for c, e in self.shape.monomials()]
        raise ModelError(f"unknown shape {self.shape!r}")

    def sigma(self, mu: Sequence[int]) -> complex:
        """Ungauged symbol value at ``mu`` (origin excluded for Re d < 0)."""
        total = 0j
        norm2 = float(sum(x * x for x in mu))
        for c, e, w in self.monomials(len(mu)):
            mono = float(np.prod([float(x) ** k for x, k in zip(mu, e)]))
            if mono == 0:
                continue
            total += c * mono * _norm_power(norm2, w)
        return total


def _norm_power(norm2: float, w: complex) -> complex:
    if norm2 == 0:
        if w == 0:
            return 1.0
        if complex(w).real > 0:
            return 0.0
        raise ModelError("radial symbol of nonpositive degree is undefined at the origin")
    return complex(norm2) ** (complex(w) / 2)


@dataclass(frozen=True)
class PolyhomOperator:
    """Finite sum of symbol terms acting diagonally on a lattice basis."""

    terms: tuple[SymbolTerm, ...] = ()
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def degrees(self) -> list[complex]:
        return [complex(t.degree) for t in self.terms if not t.is_zero]

    def symbol(self, mu: Sequence[int], z: complex = 0.0) -> complex:
        return sum((t.alpha_at(z) * t.sigma(mu) for t in self.terms), 0j)

    def gauged_symbol(self, mu: Sequence[int], z, gauge: "GaugeSpec") -> complex:
        """Gauged eigenvalue at ``mu`` (direct evaluation; origin returns 0)."""
        if all(x == 0 for x in mu):
            return 0j
        zs = gauge.z_vector(z)
        if gauge.kind == "radial":
            norm2 = float(sum(x * x for x in mu))
            factor = _norm_power(norm2, gauge.delta[0] * zs[0])
            return factor * self.symbol(mu, zs[0])
        factor = 1.0 + 0j
        for x, dl, zi in zip(mu, gauge.delta, zs):
            if x == 0:
                return 0j
            factor *= complex(abs(x)) ** (dl * zi)
        return factor * self.symbol(mu, zs[0])

    def __mul__(self, other: "PolyhomOperator") -> "PolyhomOperator":
        """Product of diagonal operators (term-wise; shapes must multiply in closed form)."""
        terms = []
        for a in self.terms:
            for b in other.terms:
                terms.extend(_multiply_terms(a, b))
        return PolyhomOperator(tuple(terms), label=f"({self.label})*({other.label})")

    def __add__(self, other: "PolyhomOperator") -> "PolyhomOperator":
        return PolyhomOperator(self.terms + other.terms, label=f"{self.label}+{other.label}")


def _multiply_terms(a: SymbolTerm, b: SymbolTerm) -> list[SymbolTerm]:
    """Product of two symbol terms as a list of terms (monomial expansion if needed)."""
    alpha = np.polymul(list(reversed(a.alpha)), list(reversed(b.alpha)))
    alpha = tuple(complex(x) for x in reversed(alpha))
    degree = complex(a.degree) + complex(b.degree)
    if isinstance(a.shape, Radial):
        return [SymbolTerm(alpha, degree, b.shape)]
    if isinstance(b.shape, Radial):
        return [SymbolTerm(alpha, degree, a.shape)]
    dim = len(_shape_vector(a.shape))
    out = []
    for c1, e1, _ in a.monomials(dim):
        for c2, e2, _ in b.monomials(dim):
            e = tuple(x + y for x, y in zip(e1, e2))
            out.append(SymbolTerm(tuple(c1 * c2 * x for x in alpha), degree, Monomial(e)))
    return out


def _shape_vector(shape) -> tuple[int, ...]:
    return shape.exponents if isinstance(shape, Monomial) else shape.coefficients


@dataclass(frozen=True)
class GaugeSpec:
    """Radial gauge ``|mu|^{delta z}`` or separable gauge ``prod |mu_i|^{delta_i z_i}``."""

    kind: str
    delta: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(float(x) for x in self.delta))
        if self.kind not in ("radial", "separable"):
            raise ModelError("gauge kind must be 'radial' or 'separable'")
        if not self.delta or any(not d > 0 for d in self.delta):
            raise ModelError("all gauge scalings delta must be positive")
        if self.kind == "radial" and len(self.delta) != 1:
            raise ModelError("a radial gauge has exactly one delta")

    @classmethod
    def radial(cls, delta: float = 1.0) -> "GaugeSpec":
        return cls("radial", (delta,))

    @classmethod
    def separable(cls, delta: Sequence[float]) -> "GaugeSpec":
        return cls("separable", tuple(delta))

    def z_vector(self, z) -> tuple[complex, ...]:
        if np.ndim(z) == 0:
            zs = (complex(z),) * len(self.delta)
        else:
            zs = tuple(complex(x) for x in z)
        if len(zs) != len(self.delta):
            raise ModelError(f"gauge expects {len(self.delta)} parameters, got {len(zs)}")
        return zs


# --------------------------------------------------------------------------
# constructors and pole predictions


def toeplitz(brownian: bool = False) -> SpectralModel:
    rule = ToeplitzBM() if brownian else ToeplitzLaplacian()
    return SpectralModel(LatticeFamily.quadrant(), rule, "toeplitz")


def heisenberg(N: int) -> SpectralModel:
    return SpectralModel(LatticeFamily.full(2 * N + 1), HeisenbergLaplacian(N), "heisenberg")


def reduced_heisenberg(N: int) -> SpectralModel:
    return SpectralModel(LatticeFamily.full(2 * N), ReducedHeisenbergLaplacian(N), "heisenberg-r")


def nc_torus(N: int, Tf: int) -> SpectralModel:
    """NC torus with abstract twist: lattice Z^Tf x Z^N."""
    return SpectralModel(LatticeFamily.twisted_torus(N, Tf), NCTorusLaplacian(N, Tf), "nctorus")


def nc_torus_complex(N: int) -> SpectralModel:
    """NC torus with complex twists: lattice Z^N."""
    return SpectralModel(LatticeFamily.full(N), NCTorusLaplacian(N, 0), "nctorus-c")


def suq2(r: float = 1.0) -> SpectralModel:
    return SpectralModel(LatticeFamily.mixed_su(), SUq2Gauss(r), "suq2")


def model_dimension(model: SpectralModel) -> int:
    """Lattice dimension D governing the leading pole ``(-D - d)/delta``."""
    return model.family.dim


def laplacian_operator(model: SpectralModel) -> PolyhomOperator:
    """The model's eigenvalue rule written as a polyhomogeneous operator."""
    rule = model.rule
    dim = model.family.dim
    if isinstance(rule, (ToeplitzBM, ToeplitzLaplacian)):
        a = -0.5 if isinstance(rule, ToeplitzBM) else -1.0
        return PolyhomOperator((SymbolTerm((a,), 2, SignedQuadratic((1, -1))),), "toeplitz-laplacian")
    if isinstance(rule, SUq2Gauss):
        return PolyhomOperator((SymbolTerm((-rule.r,), 2, SignedQuadratic((1, -1, 1))),), "suq2-laplacian")
    if isinstance(rule, (HeisenbergLaplacian, ReducedHeisenbergLaplacian, NCTorusLaplacian)):
        # Heisenberg: the central coordinate is last; NC torus: the twist coordinates come first
        active = range(2 * rule.N) if not isinstance(rule, NCTorusLaplacian) else range(dim - rule.N, dim)
        terms = []
        for i in active:
            e = [0] * dim
            e[i] = 2
            terms.append(SymbolTerm((-1.0,), 2, Monomial(tuple(e))))
        return PolyhomOperator(tuple(terms), "laplacian")
    if isinstance(rule, Custom):
        return rule.op
    raise ModelError(f"no polyhomogeneous form for {rule!r}")


def radial_symbol(degree: complex = 2, alpha: complex = 1.0) -> PolyhomOperator:
    """Single radial term ``alpha |mu|^degree`` (degree 2: the Laplacian symbol)."""
    return PolyhomOperator((SymbolTerm((alpha,), degree, Radial()),), f"radial{degree}")


def predicted_pole_set(op: PolyhomOperator, model: SpectralModel, gauge: GaugeSpec) -> list[complex]:
    """Candidate simple poles ``(-D - d_i)/delta`` of the radially gauged zeta function."""
    if gauge.kind != "radial":
        raise ModelError("pole sets are only predicted for radial gauges")
    D = model_dimension(model)
    delta = gauge.delta[0]
    poles = sorted({complex((-D - d) / delta) for d in op.degrees}, key=lambda w: (w.real, w.imag))
    return poles


def axis_pole_set(op: PolyhomOperator, model: SpectralModel, gauge: GaugeSpec) -> list[complex]:
    """Extra candidate poles from boundary sublattices of half-lattice coordinates.

    For N0 coordinates the lattice contains lower-dimensional faces (the axes
    of the quadrant, the Z x N0 faces of Z x N0^2) whose own Epstein-type
    sums have poles at ``(-D' - d)/delta`` for their dimensions ``D' < D``
    (``D' = 0`` arises for monomial weights, whose one-dimensional factors
    contribute constant terms ``zeta(-e)``).
    """
    if gauge.kind != "radial":
        raise ModelError("pole sets are only predicted for radial gauges")
    n_half = sum(1 for k in model.family.coordinate_sets if k == "N0")
    D = model_dimension(model)
    delta = gauge.delta[0]
    out = set()
    for Dp in range(max(D - n_half, 0), D):
        for d in op.degrees:
            out.add(complex((-Dp - d) / delta))
    return sorted(out, key=lambda w: (w.real, w.imag))
