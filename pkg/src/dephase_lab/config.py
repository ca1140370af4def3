"""Run configuration: a flat key=value file plus command-line overrides.

About fifteen keys describe a run, so the format is a plain text file of
`key = value` lines (`#` comments allowed); `--set key=value` flags win
over the file.  `beta = inf` selects zero temperature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError, StateValidityError
from .states import Basis, DensityMatrix2, ModelParams, change_basis
from .timeseries import fmt17
from .version import __version__

SOLVERS = (
    "measurement-only-z",
    "measurement-only-x",
    "analytic-z",
    "analytic-x",
    "exact",
    "ode-oracle-z",
    "ide-oracle-x",
)

# Keys interpreted by a single run.
RUN_KEYS = (
    "solver",
    "lambda_sq",
    "omega0",
    "eta",
    "beta",
    "rho11",
    "rho12_re",
    "rho12_im",
    "basis",
    "t_max",
    "samples",
    "n_steps",
)

# Keys interpreted by the compare / sweep front ends.
EXTRA_KEYS = ("solver_a", "solver_b", "sweep_axis", "sweep_values", "tolerance")

SWEEP_AXES = ("eta", "lambda_sq", "n_steps")


@dataclass(frozen=True)
class RunConfig:
    """One solver run: physics parameters, initial state, and time grid."""

    solver: str
    params: ModelParams
    rho11: float = 1.0
    rho12_re: float = 0.0
    rho12_im: float = 0.0
    basis: Basis = Basis.Z
    t_max: float = 1.0
    samples: int = 101
    n_steps: int = 16

    def __post_init__(self) -> None:
        if self.solver not in SOLVERS:
            raise ConfigError(f"unknown solver {self.solver!r}; choose from {SOLVERS}")
        if not (self.t_max > 0.0):
            raise ConfigError(f"t_max must be > 0, got {self.t_max}")
        if self.samples < 2:
            raise ConfigError(f"samples must be >= 2, got {self.samples}")
        if self.n_steps < 1:
            raise ConfigError(f"n_steps must be >= 1, got {self.n_steps}")
        try:
            self.initial_state()
        except StateValidityError as exc:
            raise ConfigError(f"initial state is not a density matrix: {exc}") from exc

    def initial_state(self) -> DensityMatrix2:
        return DensityMatrix2.from_parts(
            self.rho11, complex(self.rho12_re, self.rho12_im), self.basis
        )

    def initial_state_z(self) -> DensityMatrix2:
        return change_basis(self.initial_state(), Basis.Z)

    def time_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.samples)

    def metadata(self) -> dict:
        return {
            "tool_version": __version__,
            "solver": self.solver,
            "lambda_sq": fmt17(self.params.lambda_sq),
            "omega0": fmt17(self.params.omega0),
            "eta": fmt17(self.params.eta),
            "beta": "inf" if math.isinf(self.params.beta) else fmt17(self.params.beta),
            "rho11": fmt17(self.rho11),
            "rho12_re": fmt17(self.rho12_re),
            "rho12_im": fmt17(self.rho12_im),
            "basis": self.basis.value,
            "t_max": fmt17(self.t_max),
            "samples": str(self.samples),
            "n_steps": str(self.n_steps),
        }

    def with_values(self, **kwargs) -> "RunConfig":
        """Functional update, accepting params fields transparently."""
        param_fields = {"lambda_sq", "omega0", "eta", "beta"}
        param_updates = {k: v for k, v in kwargs.items() if k in param_fields}
        rest = {k: v for k, v in kwargs.items() if k not in param_fields}
        if param_updates:
            rest["params"] = replace(self.params, **param_updates)
        return replace(self, **rest)


def parse_kv_file(path: str | Path) -> dict[str, str]:
    """Read a `key = value` file, ignoring blank lines and `#` comments."""
    mapping: dict[str, str] = {}
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        mapping[key.strip()] = value.strip()
    return mapping


def apply_overrides(mapping: dict[str, str], overrides: list[str]) -> dict[str, str]:
    merged = dict(mapping)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        merged[key.strip()] = value.strip()
    return merged


def split_extras(mapping: dict[str, str]) -> tuple[dict[str, str], dict[str, str]]:
    """Separate run keys from compare/sweep keys; reject unknown keys."""
    run_map: dict[str, str] = {}
    extras: dict[str, str] = {}
    for key, value in mapping.items():
        if key in RUN_KEYS:
            run_map[key] = value
        elif key in EXTRA_KEYS:
            extras[key] = value
        else:
            raise ConfigError(f"unknown config key {key!r}")
    return run_map, extras


def _parse_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected a number, got {value!r}") from exc


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected an integer, got {value!r}") from exc


def build_run_config(mapping: dict[str, str]) -> RunConfig:
    """Materialize a RunConfig from string key/values (defaults applied)."""
    unknown = set(mapping) - set(RUN_KEYS)
    if unknown:
        raise ConfigError(f"unknown run config keys: {sorted(unknown)}")
    if "solver" not in mapping:
        raise ConfigError("missing required key 'solver'")
    try:
        params = ModelParams(
            lambda_sq=_parse_float("lambda_sq", mapping.get("lambda_sq", "0")),
            omega0=_parse_float("omega0", mapping.get("omega0", "0")),
            eta=_parse_float("eta", mapping.get("eta", "0")),
            beta=_parse_float("beta", mapping.get("beta", "inf")),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    basis_raw = mapping.get("basis", "z").lower()
    try:
        basis = Basis(basis_raw)
    except ValueError as exc:
        raise ConfigError(f"basis must be 'z' or 'x', got {basis_raw!r}") from exc
    return RunConfig(
        solver=mapping["solver"],
        params=params,
        rho11=_parse_float("rho11", mapping.get("rho11", "1")),
        rho12_re=_parse_float("rho12_re", mapping.get("rho12_re", "0")),
        rho12_im=_parse_float("rho12_im", mapping.get("rho12_im", "0")),
        basis=basis,
        t_max=_parse_float("t_max", mapping.get("t_max", "1")),
        samples=_parse_int("samples", mapping.get("samples", "101")),
        n_steps=_parse_int("n_steps", mapping.get("n_steps", "16")),
    )


def parse_sweep_values(axis: str, raw: str) -> list[float] | list[int]:
    if axis not in SWEEP_AXES:
        raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")
    items = [v for v in (token.strip() for token in raw.split(",")) if v]
    if not items:
        raise ConfigError("sweep_values must contain at least one value")
    if axis == "n_steps":
        return [_parse_int("sweep_values", v) for v in items]
    return [_parse_float("sweep_values", v) for v in items]
