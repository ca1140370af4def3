"""Dispatch configured runs to solvers and assemble reports.

Solver output bases follow the physics: the sigma_z solvers report in the
Z eigenbasis, the sigma_x solvers and the exact propagator in the meter
(X) eigenbasis.  The exact solver evaluates every requested sample time
with the configured number of steps (dt = t / n_steps per sample), so any
shared time grid can be compared across solvers point by point.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import dephasing, oracles, protection
from .config import RunConfig
from .errors import ConfigError
from .splitting import CoherencePair, SplittingPlan, population_x_from_pair, propagate_exact
from .states import Basis, DensityMatrix2, change_basis, error_epsilon
from .timeseries import TimeSeries

SOLVER_OUTPUT_BASIS = {
    "measurement-only-z": Basis.Z,
    "analytic-z": Basis.Z,
    "ode-oracle-z": Basis.Z,
    "measurement-only-x": Basis.X,
    "analytic-x": Basis.X,
    "exact": Basis.X,
    "ide-oracle-x": Basis.X,
}


@dataclass
class RunResult:
    config: RunConfig
    series: TimeSeries
    wall_time_s: float

    @property
    def epsilon(self) -> float:
        """Measurement error between the first and last sample."""
        return error_epsilon(self.series.state_at(0), self.series.state_at(-1))

    @property
    def final_coherence_abs(self) -> float:
        return abs(complex(self.series.rho12_re[-1], self.series.rho12_im[-1]))


def _solve_states(config: RunConfig) -> list[DensityMatrix2]:
    rho0 = config.initial_state_z()
    params = config.params
    grid = config.time_grid()
    solver = config.solver
    if solver == "measurement-only-z":
        return [
            dephasing.measurement_only_z(rho0, params.lambda_sq, params.omega0, float(t))
            for t in grid
        ]
    if solver == "analytic-z":
        return [dephasing.evolve_z(rho0, params, float(t)) for t in grid]
    if solver == "measurement-only-x":
        return [
            protection.measurement_only_x(
                rho0, params.lambda_sq, params.omega0, float(t), Basis.X
            )
            for t in grid
        ]
    if solver == "analytic-x":
        return [protection.evolve_x_zero_T(rho0, params, float(t)) for t in grid]
    if solver == "exact":
        pair0 = CoherencePair.from_density_matrix(rho0)
        p0 = complex(rho0.rho11).real
        states = [change_basis(rho0, Basis.X)]
        for t in grid[1:]:
            plan = SplittingPlan(
                n_steps=config.n_steps,
                dt=float(t) / config.n_steps,
                eta=params.eta,
                lambda_sq=params.lambda_sq,
            )
            pair = propagate_exact(pair0, plan)
            states.append(population_x_from_pair(pair, p0, params.lambda_sq, float(t)))
        return states
    if solver == "ode-oracle-z":
        factors = oracles.ode_coherence_z(params, grid)
        rho12_traj = complex(rho0.rho12) * factors
        p0 = complex(rho0.rho11).real
        return [DensityMatrix2.from_parts(p0, c, Basis.Z) for c in rho12_traj]
    if solver == "ide-oracle-x":
        rho12_traj = oracles.ide_coherence_x(params, grid, complex(rho0.rho12))
        p0 = complex(rho0.rho11).real
        states = []
        for t, c in zip(grid, rho12_traj):
            rho11_z = 0.5 + (2.0 * p0 - 1.0) / 2.0 * math.exp(-2.0 * params.lambda_sq * float(t))
            states.append(
                change_basis(DensityMatrix2.from_parts(rho11_z, c, Basis.Z), Basis.X)
            )
        return states
    raise ConfigError(f"unknown solver {solver!r}")


def run(config: RunConfig) -> RunResult:
    """Execute one configured run; deterministic for identical config."""
    start = time.perf_counter()
    states = _solve_states(config)
    wall = time.perf_counter() - start
    series = TimeSeries.from_states(config.time_grid(), states, config.metadata())
    return RunResult(config, series, wall)


@dataclass
class CompareResult:
    run_a: RunResult
    run_b: RunResult
    diffs: dict[str, np.ndarray] = field(default_factory=dict)
    summary: dict = field(default_factory=dict)


def compare(
    config_a: RunConfig, config_b: RunConfig, tolerance: float | None = None
) -> CompareResult:
    """Run two configs on the same grid and report per-row differences."""
    grid_a, grid_b = config_a.time_grid(), config_b.time_grid()
    if grid_a.shape != grid_b.shape or not np.array_equal(grid_a, grid_b):
        raise ConfigError("compare requires identical time grids")
    init_a, init_b = config_a.initial_state(), config_b.initial_state()
    if init_a.basis != init_b.basis or not np.allclose(
        init_a.matrix, init_b.matrix, rtol=0.0, atol=0.0
    ):
        raise ConfigError("compare requires identical initial states")
    basis_a = SOLVER_OUTPUT_BASIS[config_a.solver]
    basis_b = SOLVER_OUTPUT_BASIS[config_b.solver]
    if basis_a != basis_b:
        raise ConfigError(
            f"solvers report in different bases ({basis_a.value} vs {basis_b.value})"
        )
    res_a = run(config_a)
    res_b = run(config_b)
    diffs = {
        name: np.abs(getattr(res_a.series, name) - getattr(res_b.series, name))
        for name in ("rho11", "rho22", "rho12_re", "rho12_im")
    }
    max_per_column = {f"max_abs_diff_{k}": float(v.max()) for k, v in diffs.items()}
    max_abs = max(max_per_column.values())
    summary = {
        "solver_a": config_a.solver,
        "solver_b": config_b.solver,
        "basis": basis_a.value,
        "max_abs_diff": max_abs,
        **max_per_column,
        "epsilon_a": res_a.epsilon,
        "epsilon_b": res_b.epsilon,
        "tolerance": tolerance,
        "pass": (max_abs <= tolerance) if tolerance is not None else None,
        "wall_time_a_s": res_a.wall_time_s,
        "wall_time_b_s": res_b.wall_time_s,
    }
    return CompareResult(res_a, res_b, diffs, summary)


@dataclass
class SweepResult:
    axis: str
    values: list
    runs: list[RunResult]
    summary_rows: list[dict]


def sweep(base: RunConfig, axis: str, values: list) -> SweepResult:
    """Run the base config once per axis value, ordered by value."""
    if axis not in ("eta", "lambda_sq", "n_steps"):
        raise ConfigError(f"unsupported sweep axis {axis!r}")
    if not values:
        raise ConfigError("sweep needs at least one value")
    ordered = sorted(values)
    runs = []
    rows = []
    for value in ordered:
        cfg = base.with_values(**{axis: value})
        result = run(cfg)
        runs.append(result)
        rows.append(
            {
                "axis": axis,
                "value": value,
                "epsilon_final": result.epsilon,
                "abs_rho12_final": result.final_coherence_abs,
                "wall_time_s": result.wall_time_s,
            }
        )
    return SweepResult(axis, ordered, runs, rows)
