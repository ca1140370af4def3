"""Exact propagator: superoperator splitting with a closed-form bath trace.

The coherence pair (rho12, rho21) after N measurement steps of length dt is
an influence-weighted sum over all spin configurations q in {-1,+1}^N:

    pair(N dt) = exp(-lambda_sq N dt) * sum_q W(q) P(q) M(q) pair(0)

where W(q) = exp(-eta * sum_{m,n} q_m q_n L[|m-n|]) with the log influence
table L, P(q) is the product of N-1 bond factors b_{q_n q_{n+1}} built from
b_+ = cosh(lambda_sq dt) and b_- = sinh(lambda_sq dt), and M(q) routes the
term to the rho12 or rho21 row.

Engineering: the sum is invariant under q -> -q up to swapping the two
rows, so only the half-space q_1 = +1 (2**(N-1) terms) is enumerated, in
binary-reflected Gray-code order.  The quadratic form is carried as the
integer coefficient vector c_d = sum_{|m-n|=d} q_m q_n, updated in O(N) per
spin flip (the bond count in O(1)), and contracted against L in a fixed
order; keeping the state integral makes the incremental path and the naive
recompute-per-term path bit-identical.  Per-term magnitudes are accumulated
in the log domain and summed with compensated (Kahan) accumulation inside
fixed contiguous segments whose partial sums merge in segment order, so the
result is independent of the worker count.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numba
import numpy as np
from numba import njit, prange

from .errors import ConfigError, NumericalError, ResourceLimitError
from .states import Basis, DensityMatrix2, change_basis

DEFAULT_HARD_CAP = 26
THREADS_ENV_VAR = "DEPHASE_LAB_THREADS"

# Segments are fixed by N alone (never by the worker count) so that the
# merge order, and therefore the result bytes, do not depend on threading.
_SEGMENT_LOG2 = 8


@dataclass(frozen=True)
class SplittingPlan:
    """Discretization of one exact run: N steps of length dt."""

    n_steps: int
    dt: float
    eta: float = 0.0
    lambda_sq: float = 0.0
    hard_cap: int = DEFAULT_HARD_CAP

    def __post_init__(self) -> None:
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {self.n_steps}")
        if not (self.dt > 0.0):
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.eta < 0.0 or self.lambda_sq < 0.0:
            raise ValueError("eta and lambda_sq must be >= 0")
        if self.n_steps > self.hard_cap:
            raise ResourceLimitError(
                f"n_steps = {self.n_steps} exceeds the hard cap {self.hard_cap} "
                f"(2**N terms); run refinement studies at smaller N instead"
            )

    @property
    def total_time(self) -> float:
        return self.n_steps * self.dt


@dataclass(frozen=True)
class CoherencePair:
    """Pseudo-spinor of the two coherences evolved by the exact algorithm."""

    rho12: complex
    rho21: complex

    @classmethod
    def from_density_matrix(cls, rho: DensityMatrix2) -> "CoherencePair":
        if rho.basis is not Basis.Z:
            raise ValueError("the exact propagator works on Z-basis coherences")
        return cls(complex(rho.rho12), complex(rho.rho21))


def influence_log_weights(dt: float, n_steps: int) -> np.ndarray:
    """Log influence table L[d], d = 0 .. N-1 (stored without the -eta factor).

    L[d] = log(1 + (2 a + 1 - 2 d^2) / (a + d^2)^2) with a = (omega_c dt)^-2;
    the total weight of a configuration is exp(-eta sum_{m,n} q_m q_n L[|m-n|]).
    """
    if not (dt > 0.0):
        raise ValueError(f"dt must be > 0, got {dt}")
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    a = 1.0 / (dt * dt)
    d = np.arange(n_steps, dtype=float)
    return np.log1p((2.0 * a + 1.0 - 2.0 * d * d) / (a + d * d) ** 2)


@njit(cache=True)
def _seed_state(n, i0, q, c):
    code = i0 ^ (i0 >> 1)
    q[0] = 1
    for j in range(1, n):
        q[j] = -1 if (code >> (j - 1)) & 1 else 1
    c[0] = n
    for d in range(1, n):
        s = 0
        for m in range(n - d):
            s += q[m] * q[m + d]
        c[d] = 2 * s
    km = 0
    for j in range(n - 1):
        if q[j] != q[j + 1]:
            km += 1
    return km


@njit(cache=True)
def _term_weight(n, c, L, eta, km, ln_bp, ln_bm, log_pref):
    quad = 0.0
    for d in range(n):
        quad += c[d] * L[d]
    lp = (n - 1 - km) * ln_bp
    if km > 0:
        lp += km * ln_bm
    return math.exp(log_pref - eta * quad + lp)


@njit(cache=True)
def _sum_range_gray(n, L, eta, ln_bp, ln_bm, log_pref, i0, i1):
    q = np.empty(n, dtype=np.int64)
    c = np.empty(n, dtype=np.int64)
    km = _seed_state(n, i0, q, c)
    sp = 0.0
    cp = 0.0
    sm = 0.0
    cm = 0.0
    for i in range(i0, i1):
        w = _term_weight(n, c, L, eta, km, ln_bp, ln_bm, log_pref)
        if q[n - 1] == 1:
            y = w - cp
            t = sp + y
            cp = (t - sp) - y
            sp = t
        else:
            y = w - cm
            t = sm + y
            cm = (t - sm) - y
            sm = t
        nxt = i + 1
        if nxt < i1:
            m = nxt
            b = 0
            while m & 1 == 0:
                m >>= 1
                b += 1
            j = b + 1  # spin 0 is pinned to +1; Gray bit k drives spin k+1
            qj = q[j]
            for mm in range(n):
                if mm != j:
                    c[abs(mm - j)] -= 4 * q[mm] * qj
            if j - 1 >= 0:
                km += 1 if q[j - 1] == qj else -1
            if j + 1 < n:
                km += 1 if q[j + 1] == qj else -1
            q[j] = -qj
    return sp, sm


@njit(cache=True)
def _sum_range_naive(n, L, eta, ln_bp, ln_bm, log_pref, i0, i1):
    q = np.empty(n, dtype=np.int64)
    c = np.empty(n, dtype=np.int64)
    sp = 0.0
    cp = 0.0
    sm = 0.0
    cm = 0.0
    for i in range(i0, i1):
        km = _seed_state(n, i, q, c)
        w = _term_weight(n, c, L, eta, km, ln_bp, ln_bm, log_pref)
        if q[n - 1] == 1:
            y = w - cp
            t = sp + y
            cp = (t - sp) - y
            sp = t
        else:
            y = w - cm
            t = sm + y
            cm = (t - sm) - y
            sm = t
    return sp, sm


@njit(parallel=True, cache=True)
def _sum_segments(n, L, eta, ln_bp, ln_bm, log_pref, bounds, use_gray):
    n_seg = bounds.shape[0] - 1
    out = np.empty((n_seg, 2))
    for s in prange(n_seg):
        if use_gray:
            sp, sm = _sum_range_gray(n, L, eta, ln_bp, ln_bm, log_pref, bounds[s], bounds[s + 1])
        else:
            sp, sm = _sum_range_naive(n, L, eta, ln_bp, ln_bm, log_pref, bounds[s], bounds[s + 1])
        out[s, 0] = sp
        out[s, 1] = sm
    return out


def _kahan_merge(values: np.ndarray) -> float:
    total = 0.0
    comp = 0.0
    for v in values:
        y = float(v) - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def _apply_thread_cap() -> None:
    raw = os.environ.get(THREADS_ENV_VAR, "").strip()
    if not raw:
        return
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from exc
    if cap < 0:
        raise ConfigError(f"{THREADS_ENV_VAR} must be >= 0, got {cap}")
    if cap == 0:
        return  # auto: leave numba's default
    numba.set_num_threads(min(cap, numba.config.NUMBA_NUM_THREADS))


def propagate_exact(
    pair0: CoherencePair, plan: SplittingPlan, method: str = "gray"
) -> CoherencePair:
    """Propagate the coherence pair through the full 2^N influence sum.

    ``method="gray"`` walks the half-space in Gray-code order with O(N)
    incremental updates; ``method="naive"`` recomputes every term from
    scratch in the same order (cross-check path, bit-identical by design).
    """
    if method not in ("gray", "naive"):
        raise ValueError(f"unknown method {method!r}")
    n = plan.n_steps
    L = influence_log_weights(plan.dt, n)
    x = plan.lambda_sq * plan.dt
    b_p = math.cosh(x)
    b_m = math.sinh(x)
    ln_bp = math.log(b_p)
    ln_bm = math.log(b_m) if b_m > 0.0 else -math.inf
    log_pref = -plan.lambda_sq * n * plan.dt

    n_terms = 1 << (n - 1)
    n_seg = 1 << min(_SEGMENT_LOG2, n - 1)
    bounds = np.arange(n_seg + 1, dtype=np.int64) * (n_terms // n_seg)
    _apply_thread_cap()
    partials = _sum_segments(
        np.int64(n), L, float(plan.eta), ln_bp, ln_bm, log_pref, bounds, method == "gray"
    )
    s_plus = _kahan_merge(partials[:, 0])
    s_minus = _kahan_merge(partials[:, 1])
    if not (math.isfinite(s_plus) and math.isfinite(s_minus)):
        raise NumericalError(
            f"influence sum overflowed (s_plus={s_plus}, s_minus={s_minus}); "
            "this violates the magnitude-management invariant"
        )

    r12, r21 = pair0.rho12, pair0.rho21
    out12 = s_plus * (b_p * r12 + b_m * r21) + s_minus * (b_m * r12 + b_p * r21)
    out21 = s_plus * (b_m * r12 + b_p * r21) + s_minus * (b_p * r12 + b_m * r21)
    return CoherencePair(out12, out21)


def population_x_from_pair(
    pair: CoherencePair, rho11_z_0: float, lambda_sq: float, t: float
) -> DensityMatrix2:
    """Assemble the full X-basis state from exact coherences at time ``t``.

    The Z-basis populations follow the exact law
    rho11_z(t) = 1/2 + (2 rho11_z(0) - 1)/2 exp(-2 lambda_sq t); combined
    with the numeric coherence pair and rotated to the meter basis.
    """
    rho11_z = 0.5 + (2.0 * rho11_z_0 - 1.0) / 2.0 * math.exp(-2.0 * lambda_sq * t)
    rho_z = DensityMatrix2(rho11_z, pair.rho12, pair.rho21, 1.0 - rho11_z, Basis.Z)
    return change_basis(rho_z, Basis.X)
