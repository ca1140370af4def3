"""Finite-time measurement of a two-level system under Ohmic phase noise.

Closed-form solvers for measurements that commute (sigma_z) or do not
commute (sigma_x) with the phase-noise coupling, an exact influence-sum
propagator, and independent numerical oracles cross-validating every
formula.  Units: hbar = 1, omega_c = 1.
"""

from .config import SOLVERS, RunConfig
from .dephasing import coherence_z, coherence_z_product, evolve_z, measurement_only_z
from .errors import (
    ApproximationBreakdownError,
    BasisMismatchError,
    ConfigError,
    DephaseLabError,
    NumericalError,
    QuadratureError,
    ResourceLimitError,
    StateValidityError,
    StepperError,
    UnsupportedRegimeError,
)
from .protection import (
    GammaIntegrals,
    coherence_x_zero_T,
    evolve_x_zero_T,
    gamma_integrals,
    lindblad_x_propagate,
    measurement_only_x,
    population_x_zero_T,
    q_kernels,
)
from .runner import CompareResult, RunResult, SweepResult, compare, run, sweep
from .specfun import log_gamma, upper_gamma
from .splitting import (
    CoherencePair,
    SplittingPlan,
    influence_log_weights,
    population_x_from_pair,
    propagate_exact,
)
from .states import Basis, DensityMatrix2, ModelParams, change_basis, error_epsilon
from .timeseries import TimeSeries, read_csv
from .version import __version__

__all__ = [
    "__version__",
    "ApproximationBreakdownError",
    "Basis",
    "BasisMismatchError",
    "CoherencePair",
    "CompareResult",
    "ConfigError",
    "DensityMatrix2",
    "DephaseLabError",
    "GammaIntegrals",
    "ModelParams",
    "NumericalError",
    "QuadratureError",
    "ResourceLimitError",
    "RunConfig",
    "RunResult",
    "SOLVERS",
    "SplittingPlan",
    "StateValidityError",
    "StepperError",
    "SweepResult",
    "TimeSeries",
    "UnsupportedRegimeError",
    "change_basis",
    "coherence_x_zero_T",
    "coherence_z",
    "coherence_z_product",
    "compare",
    "error_epsilon",
    "evolve_x_zero_T",
    "evolve_z",
    "gamma_integrals",
    "influence_log_weights",
    "lindblad_x_propagate",
    "log_gamma",
    "measurement_only_x",
    "measurement_only_z",
    "population_x_from_pair",
    "population_x_zero_T",
    "propagate_exact",
    "q_kernels",
    "read_csv",
    "run",
    "sweep",
    "upper_gamma",
]
