"""qheat: zeta-regularized traces and heat traces of quantum-semigroup models.

Modules:

* :mod:`qheat.special_functions` -- zeta/beta values, incomplete Gamma, Gaussian sums;
* :mod:`qheat.models` -- lattice families, spectral models, polyhomogeneous symbols, gauges;
* :mod:`qheat.lattice_zeta` -- Epstein and monomial-weighted lattice zeta functions;
* :mod:`qheat.zeta_traces` -- gauged zeta functions, poles, regularized traces;
* :mod:`qheat.heat_traces` -- closed-form heat traces with error bounds;
* :mod:`qheat.oracle` -- direct-summation cross-checks of the continued forms;
* :mod:`qheat.asymptotics` -- small-t pole order and heat coefficients;
* :mod:`qheat.reproduce` / :mod:`qheat.cli` -- acceptance checks and command line.
"""

__version__ = "0.1.0"

from .special_functions import BoundedValue, DomainError, PoleError, PrecisionConfig  # noqa: E402

__all__ = ["__version__", "BoundedValue", "DomainError", "PoleError", "PrecisionConfig"]
