"""Exception taxonomy shared by the solvers, oracles, and the CLI.

The CLI maps these onto exit codes: configuration problems exit with 2,
unsupported physical regimes with 3, and numerical failures with 4.
"""


class DephaseLabError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(DephaseLabError):
    """Invalid run configuration (bad key, bad value, inconsistent grids)."""


class ResourceLimitError(ConfigError):
    """A requested computation exceeds a configured resource cap."""


class BasisMismatchError(ConfigError):
    """Two states expected in the same basis were given in different bases."""


class UnsupportedRegimeError(DephaseLabError):
    """Parameters outside the regime a solver is derived for."""


class NumericalError(DephaseLabError):
    """A numerical procedure failed to meet its accuracy or validity contract."""


class StateValidityError(NumericalError):
    """A 2x2 matrix violates the density-matrix invariants."""


class ApproximationBreakdownError(NumericalError):
    """A closed-form approximation produced an unphysical state.

    Raised instead of silently returning a matrix that is not positive
    semidefinite (or not even finite).  The weak-coupling coherence solution
    for the non-commuting measurement has a secularly growing imaginary
    sector once the bath correlation time is exceeded at strong measurement;
    see the package README for the validity discussion.
    """


class QuadratureError(NumericalError):
    """Adaptive quadrature failed to converge to the requested tolerance."""


class StepperError(NumericalError):
    """A time stepper failed to converge under step refinement."""
