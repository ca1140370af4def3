"""Closed-form evolution when the measured observable commutes with the noise.

Measuring sigma_z on a sigma_z-coupled bath leaves the populations frozen
and multiplies the coherence by three factors: the measurement decay
exp(-2 lambda_sq t), a phase, and a bath factor F(t)**(2 eta).  At finite
temperature F is a ratio of gamma functions evaluated through log-gamma
sums; at zero temperature it reduces to 1 / (1 + (omega_c t)**2).

Phase conventions follow the source formulas verbatim: the measurement-only
propagator carries exp(-i 2 omega0 t) while the full finite-temperature
solution carries exp(+i 2 omega0 t).  The two agree whenever omega0 = 0,
which is the regime every cross-solver comparison in this package uses.
"""

from __future__ import annotations

import cmath
import math

from .errors import BasisMismatchError
from .specfun import log_gamma
from .states import Basis, DensityMatrix2, ModelParams


def _require_nonnegative_time(t: float) -> None:
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")


def measurement_only_z(
    rho0: DensityMatrix2, lambda_sq: float, omega0: float, t: float
) -> DensityMatrix2:
    """Evolve under the sigma_z measurement alone (no environment).

    Populations are conserved; rho12(t) = rho12(0) exp(-2 lambda_sq t)
    exp(-i 2 omega0 t).
    """
    if rho0.basis is not Basis.Z:
        raise BasisMismatchError("measurement_only_z expects a Z-basis state")
    _require_nonnegative_time(t)
    phase = cmath.exp(complex(-2.0 * lambda_sq * t, -2.0 * omega0 * t))
    return DensityMatrix2(
        rho0.rho11, rho0.rho12 * phase, rho0.rho21 * phase.conjugate(), rho0.rho22, Basis.Z
    )


def log_bath_factor(params: ModelParams, t: float) -> float:
    """ln F(t) for the thermal dephasing factor F(t)**(2 eta).

    Finite beta: F is the product of two gamma ratios
    |Gamma(a + i x)|^2 / Gamma(a)^2 * |Gamma(a+1 + i x)|^2 / Gamma(a+1)^2
    with a = 1/(omega_c beta) and x = t/beta, evaluated as exp of log-gamma
    sums.  Zero temperature is the analytic limit F = 1/(1 + (omega_c t)**2),
    not a large-beta numeric.
    """
    _require_nonnegative_time(t)
    if params.zero_temperature:
        return -math.log1p(t * t)
    a = 1.0 / params.beta
    x = t / params.beta
    total = 0.0 + 0.0j
    for base in (a, a + 1.0):
        total += (
            log_gamma(complex(base, x))
            + log_gamma(complex(base, -x))
            - 2.0 * log_gamma(complex(base, 0.0))
        )
    # The imaginary parts cancel by Schwarz reflection; keep the real part.
    return total.real


def coherence_z(params: ModelParams, rho12_0: complex, t: float) -> complex:
    """Coherence rho12(t) under continuous sigma_z measurement in the bath.

    rho12(t) = rho12(0) F(t)**(2 eta) exp(-2 lambda_sq t) exp(+i 2 omega0 t).
    """
    _require_nonnegative_time(t)
    decay = math.exp(2.0 * params.eta * log_bath_factor(params, t) - 2.0 * params.lambda_sq * t)
    return complex(rho12_0) * decay * cmath.exp(complex(0.0, 2.0 * params.omega0 * t))


def coherence_z_product(
    params: ModelParams,
    rho12_0: complex,
    t: float,
    tol: float = 1e-10,
    max_factors: int = 10**6,
) -> tuple[complex, float]:
    """Cross-check path for `coherence_z` via the infinite-product form.

    Uses the product representation of the gamma ratio,
    |Gamma(a + i x)|^2 / Gamma(a)^2 = prod_{n>=0} [1 + x^2/(a+n)^2]^(-1),
    which gives F(t) = [1/(1 + (omega_c t)^2)] *
    prod_{n>=1} [(1 + n omega_c beta)^2 / ((1 + n omega_c beta)^2 +
    (omega_c t)^2)]^2.  Truncates at the first factor within ``tol`` of 1
    (capped at ``max_factors``).

    Returns ``(value, tail_bound)`` where ``tail_bound`` bounds the relative
    truncation error of the returned coherence; the product converges only
    like 1/n, so the bound is the honest comparison tolerance.
    """
    _require_nonnegative_time(t)
    x2 = t * t
    log_f = -math.log1p(x2)
    n_stop = max_factors
    if not params.zero_temperature:
        beta = params.beta
        for n in range(1, max_factors + 1):
            s = 1.0 + n * beta
            ratio = x2 / (s * s)
            log_f -= 2.0 * math.log1p(ratio)
            if ratio < tol:
                n_stop = n
                break
    # Remaining factors: sum_{n > N} 2 x^2/(n beta)^2 ~ 2 x^2 / (beta^2 N).
    if params.zero_temperature:
        tail = 0.0
    else:
        tail = 2.0 * params.eta * 2.0 * x2 / (params.beta**2 * n_stop)
    decay = math.exp(2.0 * params.eta * log_f - 2.0 * params.lambda_sq * t)
    value = complex(rho12_0) * decay * cmath.exp(complex(0.0, 2.0 * params.omega0 * t))
    return value, tail


def evolve_z(rho0: DensityMatrix2, params: ModelParams, t: float) -> DensityMatrix2:
    """Full sigma_z-measurement evolution: frozen populations, decaying coherence."""
    if rho0.basis is not Basis.Z:
        raise BasisMismatchError("evolve_z expects a Z-basis state")
    rho12_t = coherence_z(params, rho0.rho12, t)
    return DensityMatrix2(rho0.rho11, rho12_t, rho12_t.conjugate(), rho0.rho22, Basis.Z)
