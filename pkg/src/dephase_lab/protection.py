"""Closed-form evolution when the measured observable fights the noise.

Measuring sigma_x on a sigma_z-coupled bath mixes populations and
coherences.  This module provides the measurement-only propagator (the
exponential of the Lindblad generator, valid for any omega0 through a
complex Omega = sqrt(lambda_sq**2 - 4 omega0**2)), the Q kernels of the
memory integrand, and the zero-temperature weak-coupling coherence solution
built from upper incomplete gamma functions.

The weak-coupling solution decouples into a slowly drifting real sector
(the protected one, visible in the X-basis population) and an imaginary
sector whose correction exponent grows like exp(2 lambda_sq t) once
omega_c t > 1.  Past that point the printed solution stops being a density
matrix; `evolve_x_zero_T` raises ``ApproximationBreakdownError`` rather
than returning an unphysical state.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dephasing import evolve_z
from .errors import (
    ApproximationBreakdownError,
    BasisMismatchError,
    StateValidityError,
    UnsupportedRegimeError,
)
from .specfun import upper_gamma
from .states import Basis, DensityMatrix2, ModelParams, change_basis

# exp() overflow threshold for float64 exponents.
_MAX_EXPONENT = 709.0

# |Omega * t| below which the removable singularity of sinh(Omega t)/Omega
# is handled by its Taylor series.
_OMEGA_SERIES_CUTOFF = 1e-4


def omega_complex(lambda_sq: float, omega0: float) -> complex:
    """Omega = sqrt(lambda_sq**2 - 4 omega0**2) as a complex number.

    Complex arithmetic keeps one code path for the overdamped
    (lambda_sq**2 > 4 omega0**2) and oscillatory regimes; every quantity
    built from Omega below is even in Omega, so the branch does not matter.
    """
    return cmath.sqrt(complex(lambda_sq * lambda_sq - 4.0 * omega0 * omega0, 0.0))


def _cosh_and_sinhc(omega: complex, t: float) -> tuple[float, float]:
    """(cosh(Omega t), sinh(Omega t)/Omega): both real since Omega**2 is real."""
    w = omega * t
    if abs(w) < _OMEGA_SERIES_CUTOFF:
        w2 = (w * w).real
        cosh = 1.0 + w2 / 2.0 + w2 * w2 / 24.0
        sinhc = t * (1.0 + w2 / 6.0 + w2 * w2 / 120.0)
        return cosh, sinhc
    cosh = cmath.cosh(w).real
    sinhc = (cmath.sinh(w) / omega).real
    return cosh, sinhc


def lindblad_x_propagate(
    x: np.ndarray, lambda_sq: float, omega0: float, t: float
) -> np.ndarray:
    """Apply the sigma_x-measurement Lindblad propagator to a 2x2 matrix.

    Diagonal part: the difference contracts by exp(-2 lambda_sq t) around
    the preserved trace.  Off-diagonal part mixes x12 and x21 through
    cosh(Omega t) and sinh(Omega t)/Omega.  Negative ``t`` gives the inverse
    propagator (used to undo the measurement factor in the memory-kernel
    derivation); the same formulas apply verbatim.
    """
    x = np.asarray(x, dtype=complex)
    if x.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {x.shape}")
    omega = omega_complex(lambda_sq, omega0)
    cosh, sinhc = _cosh_and_sinhc(omega, t)
    decay2 = math.exp(-2.0 * lambda_sq * t)
    decay1 = math.exp(-lambda_sq * t)
    half_sum = (x[0, 0] + x[1, 1]) / 2.0
    half_diff = (x[0, 0] - x[1, 1]) / 2.0
    s11 = half_diff * decay2 + half_sum
    s22 = -half_diff * decay2 + half_sum
    s12 = decay1 * (cosh * x[0, 1] - 1j * 2.0 * omega0 * sinhc * x[0, 1] + lambda_sq * sinhc * x[1, 0])
    s21 = decay1 * (cosh * x[1, 0] + 1j * 2.0 * omega0 * sinhc * x[1, 0] + lambda_sq * sinhc * x[0, 1])
    return np.array([[s11, s12], [s21, s22]], dtype=complex)


def measurement_only_x(
    rho0: DensityMatrix2,
    lambda_sq: float,
    omega0: float,
    t: float,
    basis: Basis = Basis.Z,
) -> DensityMatrix2:
    """Evolve under the sigma_x measurement alone and report in ``basis``.

    ``basis=Basis.Z`` evaluates the Z-basis solution directly;
    ``basis=Basis.X`` evaluates the meter-basis expressions, which agree
    with rotating the Z-basis result by construction (the right-hand sides
    are functions of the initial state).
    """
    if rho0.basis is not Basis.Z:
        raise BasisMismatchError("measurement_only_x expects a Z-basis initial state")
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    omega = omega_complex(lambda_sq, omega0)
    cosh, sinhc = _cosh_and_sinhc(omega, t)
    decay2 = math.exp(-2.0 * lambda_sq * t)
    decay1 = math.exp(-lambda_sq * t)
    p0 = complex(rho0.rho11).real
    c0 = complex(rho0.rho12)
    if basis is Basis.Z:
        rho11 = 0.5 + (2.0 * p0 - 1.0) / 2.0 * decay2
        rho12 = decay1 * (cosh * c0 - 1j * 2.0 * omega0 * sinhc * c0 + lambda_sq * sinhc * c0.conjugate())
        return DensityMatrix2.from_parts(rho11, rho12, Basis.Z)
    rho11_x = 0.5 + decay1 * (
        cosh * c0.real + 2.0 * omega0 * sinhc * c0.imag + lambda_sq * sinhc * c0.real
    )
    rho12_x = (2.0 * p0 - 1.0) / 2.0 * decay2 - 1j * decay1 * (
        cosh * c0.imag - 2.0 * omega0 * sinhc * c0.real - lambda_sq * sinhc * c0.imag
    )
    return DensityMatrix2.from_parts(rho11_x, rho12_x, Basis.X)


def q_kernels(
    lambda_sq: float, omega0: float, t: float, t_prime: float
) -> tuple[complex, complex]:
    """Memory-integrand kernels Q1(t, t') and Q2(t, t').

    Built from K1(u) = Omega cosh(Omega u) + i 2 omega0 sinh(Omega u) and
    K2(u) = lambda_sq sinh(Omega u).  The kernels are cubic in the K's, so
    they scale like Omega**3; callers divide by Omega**3.
    """
    if not (0.0 <= t_prime <= t):
        raise ValueError(f"require 0 <= t_prime <= t, got t={t}, t_prime={t_prime}")
    omega = omega_complex(lambda_sq, omega0)

    def k1(u: float) -> complex:
        return omega * cmath.cosh(omega * u) + 1j * 2.0 * omega0 * cmath.sinh(omega * u)

    def k2(u: float) -> complex:
        return lambda_sq * cmath.sinh(omega * u)

    k1_t, k2_t = k1(t), k2(t)
    k1_d, k2_d = k1(t - t_prime), k2(t - t_prime)
    k1_p, k2_p = k1(t_prime), k2(t_prime)
    q1 = k1_t * (k1_d.conjugate() * k1_p.conjugate() - k2_d * k2_p) + k2_t * (
        k2_d * k1_p.conjugate() - k1_d * k2_p
    )
    q2 = k1_t * (k1_d.conjugate() * k2_p - k2_d * k1_p) + k2_t * (k2_d * k2_p - k1_d * k1_p)
    return q1, q2


@dataclass(frozen=True)
class GammaIntegrals:
    """Snapshot of the incomplete-gamma building blocks at one time.

    ``a_plus``/``a_minus`` are the integrals of exp(+-2 lambda_sq t') g1(t')
    from 0 to t, ``b_plus``/``b_minus`` the same for g2; the constants
    c1..c4 zero the antiderivatives at t = 0.
    """

    lambda_sq: float
    t: float
    g0: float
    g1: float
    g2: float
    a_plus: float
    a_minus: float
    b_plus: float
    b_minus: float
    c1: complex
    c2: complex
    c3: complex
    c4: complex


@lru_cache(maxsize=256)
def _gamma_constants(lambda_sq: float) -> tuple[float, complex, complex, complex, complex]:
    alpha = 2.0 * lambda_sq  # 2 lambda_sq / omega_c
    g0 = (cmath.exp(1j * alpha) * upper_gamma(0, 1j * alpha)).real
    c1 = -(1.0 / (2.0 * lambda_sq)) * (
        1j * alpha * upper_gamma(0, -1j * alpha) + upper_gamma(1, -1j * alpha)
    )
    c2 = -(1.0 / (2.0 * lambda_sq)) * (
        1j * alpha * upper_gamma(-1, -1j * alpha) + upper_gamma(0, -1j * alpha)
    )
    c3 = -(1.0 / (4.0 * lambda_sq)) * (
        upper_gamma(0, 1j * alpha) - cmath.exp(-2j * alpha) * upper_gamma(0, -1j * alpha)
    )
    c4 = -(1.0 / (4.0 * lambda_sq)) * (
        upper_gamma(-1, 1j * alpha) + cmath.exp(-2j * alpha) * upper_gamma(-1, -1j * alpha)
    )
    return g0, c1, c2, c3, c4


def gamma_integrals(lambda_sq: float, t: float) -> GammaIntegrals:
    """Evaluate g0, g1, g2, A+-, B+-, c1..c4 at time ``t``.

    ``lambda_sq`` must be positive: at lambda = 0 the argument of g0 is
    singular and the protective solution is vacuous (callers fall back to
    pure dephasing).
    """
    if lambda_sq <= 0.0:
        raise UnsupportedRegimeError(
            "gamma_integrals requires lambda_sq > 0 (g0 has a singular argument at "
            "lambda = 0; use the pure-dephasing limit instead)"
        )
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    alpha = 2.0 * lambda_sq
    g0, c1, c2, c3, c4 = _gamma_constants(lambda_sq)
    z = complex(2.0 * lambda_sq * t, alpha)
    zm = -z
    ep = cmath.exp(1j * alpha)
    em = cmath.exp(-1j * alpha)
    g0z, g0zm = upper_gamma(0, z), upper_gamma(0, zm)
    g1z, g1zm = upper_gamma(1, z), upper_gamma(1, zm)
    gm1z, gm1zm = upper_gamma(-1, z), upper_gamma(-1, zm)

    g1_val = (cmath.exp(z) * g0z + cmath.exp(-z) * g0zm).real
    g2_val = (cmath.exp(z) * gm1z - cmath.exp(-z) * gm1zm).real

    e4p = math.exp(4.0 * lambda_sq * t)
    e4m = math.exp(-4.0 * lambda_sq * t)
    a_plus = (
        (1.0 / (4.0 * lambda_sq)) * (ep * (e4p * g0z - cmath.exp(-2j * alpha) * g0zm)).real
        + (1.0 / (2.0 * lambda_sq)) * (em * (1j * alpha * g0zm + g1zm)).real
        + t * (em * g0zm).real
        + (em * c1 + ep * c3).real
    )
    a_minus = (
        -(1.0 / (4.0 * lambda_sq)) * (em * (e4m * g0zm - cmath.exp(2j * alpha) * g0z)).real
        + (1.0 / (2.0 * lambda_sq)) * (ep * (1j * alpha * g0z - g1z)).real
        + t * (ep * g0z).real
        - (ep * c1.conjugate() + em * c3.conjugate()).real
    )
    b_plus = (
        (1.0 / (4.0 * lambda_sq)) * (ep * (e4p * gm1z + cmath.exp(-2j * alpha) * gm1zm)).real
        - (1.0 / (2.0 * lambda_sq)) * (em * (1j * alpha * gm1zm + g0zm)).real
        - t * (em * gm1zm).real
        - (em * c2 - ep * c4).real
    )
    b_minus = (
        (1.0 / (4.0 * lambda_sq)) * (em * (e4m * gm1zm + cmath.exp(2j * alpha) * gm1z)).real
        + (1.0 / (2.0 * lambda_sq)) * (ep * (1j * alpha * gm1z - g0z)).real
        + t * (ep * gm1z).real
        - (ep * c2.conjugate() - em * c4.conjugate()).real
    )
    return GammaIntegrals(
        lambda_sq, t, g0, g1_val, g2_val, a_plus, a_minus, b_plus, b_minus, c1, c2, c3, c4
    )


def _require_protective_regime(params: ModelParams) -> None:
    if not params.zero_temperature:
        raise UnsupportedRegimeError(
            "the sigma_x coherence solution exists only at zero temperature "
            "(use the integro-differential oracle for finite beta)"
        )
    if params.omega0 != 0.0:
        raise UnsupportedRegimeError(
            "the sigma_x coherence solution is derived for omega0 = 0"
        )


def _zero_t_exponents(params: ModelParams, t: float) -> tuple[float, float]:
    """(real-sector exponent, imaginary-sector exponent) at time t."""
    gi = gamma_integrals(params.lambda_sq, t)
    e = params.eta
    l2 = params.lambda_sq
    re_exp = -8.0 * e * l2 * gi.g0 * t + 4.0 * e * l2 * (gi.a_minus - gi.b_minus)
    im_exp = (
        -2.0 * l2 * t + 8.0 * e * l2 * gi.g0 * t - 4.0 * e * l2 * (gi.a_plus + gi.b_plus)
    )
    return re_exp, im_exp


def coherence_x_zero_T(rho12_0: complex, params: ModelParams, t: float) -> complex:
    """Z-basis coherence under sigma_x measurement at T = 0, omega0 = 0.

    The real and imaginary parts of rho12 evolve independently:
    Re rho12(t) = Re rho12(0) exp(-8 eta lambda_sq g0 t + 4 eta lambda_sq (A- - B-)),
    Im rho12(t) = Im rho12(0) exp(-2 lambda_sq t + 8 eta lambda_sq g0 t
                                  - 4 eta lambda_sq (A+ + B+)).

    An exponent past the float64 range means the weak-coupling solution has
    left its validity window; that raises ``ApproximationBreakdownError``.
    """
    _require_protective_regime(params)
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    rho12_0 = complex(rho12_0)
    if params.lambda_sq == 0.0:
        # Pure dephasing limit at omega0 = 0, T = 0.
        return rho12_0 * (1.0 + t * t) ** (-2.0 * params.eta)
    re_exp, im_exp = _zero_t_exponents(params, t)
    if max(re_exp, im_exp) > _MAX_EXPONENT:
        raise ApproximationBreakdownError(
            f"coherence exponent {max(re_exp, im_exp):.1f} exceeds the float64 range at "
            f"t = {t} (lambda_sq = {params.lambda_sq}, eta = {params.eta}); the "
            "weak-coupling solution is outside its validity window"
        )
    return complex(rho12_0.real * math.exp(re_exp), rho12_0.imag * math.exp(im_exp))


def population_x_zero_T(rho0: DensityMatrix2, params: ModelParams, t: float) -> float:
    """X-basis population rho11 under sigma_x measurement at T = 0, omega0 = 0.

    Only the protected real sector enters:
    rho11_x(t) = 1/2 + Re rho12(0) exp(-8 eta lambda_sq g0 t
                                       + 4 eta lambda_sq (A- - B-)).
    """
    if rho0.basis is not Basis.Z:
        raise BasisMismatchError("population_x_zero_T expects a Z-basis initial state")
    _require_protective_regime(params)
    re0 = complex(rho0.rho12).real
    if params.lambda_sq == 0.0:
        return 0.5 + re0 * (1.0 + t * t) ** (-2.0 * params.eta)
    re_exp, _ = _zero_t_exponents(params, t)
    return 0.5 + re0 * math.exp(re_exp)


def evolve_x_zero_T(rho0: DensityMatrix2, params: ModelParams, t: float) -> DensityMatrix2:
    """Full X-basis state under sigma_x measurement at T = 0, omega0 = 0.

    rho11_x from the protected real sector; rho12_x combines the population
    relaxation of the Z basis with the imaginary coherence sector.  Raises
    ``ApproximationBreakdownError`` when the printed solution stops being a
    density matrix (strong measurement past the bath correlation time).
    """
    if rho0.basis is not Basis.Z:
        raise BasisMismatchError("evolve_x_zero_T expects a Z-basis initial state")
    _require_protective_regime(params)
    if params.lambda_sq == 0.0:
        return change_basis(evolve_z(rho0, params, t), Basis.X)
    rho12_t = coherence_x_zero_T(rho0.rho12, params, t)
    p0 = complex(rho0.rho11).real
    decay2 = math.exp(-2.0 * params.lambda_sq * t)
    # Rotation of the Z-basis solution: rho12_x = (rho11_z - rho22_z)/2 - i Im rho12_z(t),
    # and the imaginary sector of rho12_z(t) already carries its measurement decay.
    rho11_x = 0.5 + rho12_t.real
    rho12_x = (2.0 * p0 - 1.0) / 2.0 * decay2 - 1j * rho12_t.imag
    try:
        return DensityMatrix2.from_parts(rho11_x, rho12_x, Basis.X)
    except StateValidityError as exc:
        raise ApproximationBreakdownError(
            f"weak-coupling sigma_x solution is unphysical at t = {t} "
            f"(lambda_sq = {params.lambda_sq}, eta = {params.eta}): {exc}"
        ) from exc
