"""Complex special functions needed by the closed-form solvers.

Two primitives are exposed: the principal-branch log-gamma for Re(z) > 0
(Lanczos rational approximation) and the principal-branch upper incomplete
gamma Gamma(s, z) for integer s in {-1, 0, 1} at complex z off the negative
real axis.  Gamma(0, z) is the exponential integral E1(z), computed by power
series for |z| < 4 and by a modified Lentz continued fraction for |z| >= 4;
the two paths are cross-tested in the overlap band [3.5, 4.5].  Gamma(1, z)
is exp(-z) and Gamma(-1, z) follows from one step of the downward recurrence
Gamma(s+1, z) = s Gamma(s, z) + z**s exp(-z).
"""

from __future__ import annotations

import cmath
import math

EULER_GAMMA = 0.5772156649015328606065120900824024

# Lanczos approximation, g = 607/128, 15 coefficients.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEFFS = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)

_HALF_LOG_TWO_PI = 0.91893853320467274178032973640562

# Series / continued-fraction crossover for E1; both paths stay accurate in
# the overlap band around it.
_E1_SERIES_RADIUS = 4.0
_E1_MAX_ITER = 100000
_TINY = 1e-300


def log_gamma(z: complex) -> complex:
    """Principal-branch log Gamma(z) for Re(z) > 0.

    The right half-plane is the only region the solvers need (every argument
    has the form a + i*x with a > 0), so no reflection formula is provided;
    Re(z) <= 0 raises ``ValueError``.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite argument {z!r}")
    if z.real <= 0.0:
        raise ValueError(f"log_gamma requires Re(z) > 0, got {z!r}")
    acc = complex(_LANCZOS_COEFFS[0])
    for k in range(1, len(_LANCZOS_COEFFS)):
        acc += _LANCZOS_COEFFS[k] / (z + (k - 1))
    t = z + _LANCZOS_G - 0.5
    return _HALF_LOG_TWO_PI + (z - 0.5) * cmath.log(t) - t + cmath.log(acc)


def _check_gamma_domain(s: int, z: complex) -> complex:
    if s not in (-1, 0, 1):
        raise ValueError(f"order s must be in {{-1, 0, 1}}, got {s!r}")
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite argument {z!r}")
    if z == 0:
        if s <= 0:
            raise ValueError(f"Gamma({s}, 0) is singular")
        raise ValueError("argument must be nonzero")
    if z.imag == 0.0 and z.real < 0.0:
        raise ValueError(f"argument {z!r} lies on the branch cut (negative real axis)")
    return z


def _e1_series(z: complex) -> complex:
    # E1(z) = -gamma - log z - sum_{k>=1} (-z)^k / (k k!)
    total = -EULER_GAMMA - cmath.log(z)
    term = complex(1.0)  # (-z)^k / k!
    for k in range(1, _E1_MAX_ITER):
        term *= -z / k
        contrib = term / k
        total -= contrib
        if abs(contrib) < 1e-17 * max(abs(total), _TINY):
            return total
    raise ValueError(f"E1 power series did not converge at z = {z!r}")


def _e1_continued_fraction(z: complex) -> complex:
    # Modified Lentz evaluation of Gamma(0, z) = exp(-z) / (z + 1 - 1/(z + 3 - 4/(...)))
    b = z + 1.0
    c = complex(1.0 / _TINY)
    d = 1.0 / b
    h = d
    for i in range(1, _E1_MAX_ITER):
        an = -complex(i * i)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = complex(_TINY)
        c = b + an / c
        if abs(c) < _TINY:
            c = complex(_TINY)
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return cmath.exp(-z) * h
    raise ValueError(f"E1 continued fraction did not converge at z = {z!r}")


def _e1(z: complex) -> complex:
    if abs(z) < _E1_SERIES_RADIUS:
        return _e1_series(z)
    return _e1_continued_fraction(z)


def upper_gamma(s: int, z: complex) -> complex:
    """Principal-branch upper incomplete gamma Gamma(s, z), s in {-1, 0, 1}.

    The argument must be nonzero and off the closed negative real axis.
    Satisfies Gamma(s+1, z) = s Gamma(s, z) + z**s exp(-z) and the Schwarz
    reflection Gamma(s, conj z) = conj Gamma(s, z).
    """
    z = _check_gamma_domain(s, z)
    if s == 1:
        return cmath.exp(-z)
    if s == 0:
        return _e1(z)
    return cmath.exp(-z) / z - _e1(z)
