"""Two-level density matrices, basis changes, and the measurement-error metric.

Unit conventions used throughout the package: hbar = 1 and the bath cutoff
frequency omega_c = 1, so every rate (lambda_sq, omega0, 1/beta) is expressed
in units of omega_c and every time in units of 1/omega_c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import BasisMismatchError, StateValidityError

TRACE_TOL = 1e-12
HERMITICITY_TOL = 1e-12
POSITIVITY_TOL = 1e-12

OMEGA_C = 1.0


class Basis(str, Enum):
    """Eigenbasis tag carried by every density matrix."""

    Z = "z"
    X = "x"


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of one run, all in units of omega_c (hbar = 1).

    ``lambda_sq`` is the measurement strength (the Lindblad operator is
    lambda times a Pauli matrix, so the rate constant is lambda squared),
    ``omega0`` the system frequency, ``eta`` the dimensionless bath coupling,
    and ``beta`` the inverse temperature; ``beta = math.inf`` selects the
    zero-temperature limit.
    """

    lambda_sq: float = 0.0
    omega0: float = 0.0
    eta: float = 0.0
    beta: float = math.inf
    omega_c: float = 1.0

    def __post_init__(self) -> None:
        if self.lambda_sq < 0.0:
            raise ValueError(f"lambda_sq must be >= 0, got {self.lambda_sq}")
        if self.omega0 < 0.0:
            raise ValueError(f"omega0 must be >= 0, got {self.omega0}")
        if self.eta < 0.0:
            raise ValueError(f"eta must be >= 0, got {self.eta}")
        if not (self.beta > 0.0):  # also rejects NaN
            raise ValueError(f"beta must be > 0 or infinite, got {self.beta}")
        if self.omega_c != 1.0:
            raise ValueError(
                "omega_c is the unit of frequency and must equal 1.0; "
                "rescale lambda_sq, omega0, beta, and times instead"
            )

    @property
    def zero_temperature(self) -> bool:
        return math.isinf(self.beta)


@dataclass(frozen=True)
class DensityMatrix2:
    """2x2 complex Hermitian unit-trace matrix with an explicit basis tag.

    Invariants enforced at construction: rho21 == conj(rho12) and real
    diagonal (within 1e-12), trace 1 (within 1e-12), and positive
    semidefiniteness (determinant >= -1e-12).  Solvers never project back;
    an invalid matrix raises ``StateValidityError``.
    """

    rho11: complex
    rho12: complex
    rho21: complex
    rho22: complex
    basis: Basis = Basis.Z

    def __post_init__(self) -> None:
        vals = (self.rho11, self.rho12, self.rho21, self.rho22)
        if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in map(complex, vals)):
            raise StateValidityError(f"non-finite matrix element in {vals}")
        if abs(complex(self.rho11).imag) > HERMITICITY_TOL or abs(complex(self.rho22).imag) > HERMITICITY_TOL:
            raise StateValidityError("diagonal entries must be real")
        if abs(complex(self.rho21) - complex(self.rho12).conjugate()) > HERMITICITY_TOL:
            raise StateValidityError("rho21 must equal conj(rho12)")
        tr = complex(self.rho11).real + complex(self.rho22).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise StateValidityError(f"trace must be 1, got {tr!r}")
        det = complex(self.rho11).real * complex(self.rho22).real - abs(complex(self.rho12)) ** 2
        if det < -POSITIVITY_TOL:
            raise StateValidityError(f"matrix is not positive semidefinite (det = {det!r})")
        if complex(self.rho11).real < -POSITIVITY_TOL or complex(self.rho22).real < -POSITIVITY_TOL:
            raise StateValidityError("negative population")

    @classmethod
    def from_parts(cls, rho11: float, rho12: complex, basis: Basis = Basis.Z) -> "DensityMatrix2":
        """Build the Hermitian completion from a population and a coherence."""
        rho11 = complex(rho11)
        rho12 = complex(rho12)
        return cls(rho11, rho12, rho12.conjugate(), 1.0 - rho11, basis)

    @classmethod
    def from_matrix(cls, m: np.ndarray, basis: Basis = Basis.Z) -> "DensityMatrix2":
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise StateValidityError(f"expected a 2x2 matrix, got shape {m.shape}")
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1], basis)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.rho11, self.rho12], [self.rho21, self.rho22]], dtype=complex)

    def validity_margins(self) -> dict:
        """Distance of each invariant from its bound (useful in diagnostics)."""
        return {
            "trace_error": abs(complex(self.rho11).real + complex(self.rho22).real - 1.0),
            "hermiticity_error": abs(complex(self.rho21) - complex(self.rho12).conjugate()),
            "determinant": complex(self.rho11).real * complex(self.rho22).real
            - abs(complex(self.rho12)) ** 2,
        }


def change_basis(rho: DensityMatrix2, target: Basis) -> DensityMatrix2:
    """Rotate between the Z and X eigenbases with M = (1/sqrt2)[[1,1],[1,-1]].

    M is its own inverse, so the transformation is rho -> M rho M and the
    operation is an involution.  Returns ``rho`` unchanged when it is
    already in ``target``.
    """
    if rho.basis == target:
        return rho
    r11, r12, r21, r22 = map(complex, (rho.rho11, rho.rho12, rho.rho21, rho.rho22))
    out11 = (r11 + r12 + r21 + r22) / 2.0
    out12 = (r11 - r12 + r21 - r22) / 2.0
    out21 = (r11 + r12 - r21 - r22) / 2.0
    out22 = (r11 - r12 - r21 + r22) / 2.0
    return DensityMatrix2(out11, out12, out21, out22, target)


def error_epsilon(rho_t0: DensityMatrix2, rho_tf: DensityMatrix2) -> float:
    """Measurement error |rho11(tf) - rho11(t0)|.

    Both states must carry the same basis tag; the populations of a
    finite-time measurement are read in the meter eigenbasis.
    """
    if rho_t0.basis != rho_tf.basis:
        raise BasisMismatchError(
            f"cannot compare populations across bases ({rho_t0.basis.value} vs {rho_tf.basis.value})"
        )
    return abs(complex(rho_tf.rho11).real - complex(rho_t0.rho11).real)
