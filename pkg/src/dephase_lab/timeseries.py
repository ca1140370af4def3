"""Time-series container and the deterministic CSV dialect.

CSV layout: `#`-prefixed metadata lines (the full run configuration echo,
so a run is reproducible from its own output file), a header row, then one
row per sample with every float rendered at 17 significant digits
(round-trip exact for 64-bit floats).  Identical configuration and build
produce byte-identical files; anything that varies between runs (wall
time) belongs in the JSON summaries, never in the CSV.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .states import Basis, DensityMatrix2
from .version import __version__

_COLUMNS = ("t", "rho11", "rho22", "rho12_re", "rho12_im", "basis")


def fmt17(x: float) -> str:
    """Render a float with 17 significant digits (bit round-trip exact)."""
    return format(float(x), ".17g")


@dataclass
class TimeSeries:
    """Sampled state trajectory in a fixed basis plus its metadata echo."""

    t: np.ndarray
    rho11: np.ndarray
    rho22: np.ndarray
    rho12_re: np.ndarray
    rho12_im: np.ndarray
    basis: Basis
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.t = np.asarray(self.t, dtype=float)
        for name in ("rho11", "rho22", "rho12_re", "rho12_im"):
            arr = np.asarray(getattr(self, name), dtype=float)
            setattr(self, name, arr)
            if arr.shape != self.t.shape:
                raise ValueError(f"column {name} does not match the time grid shape")
        if self.t.size < 2:
            raise ValueError("a time series needs at least two samples")
        if np.any(np.diff(self.t) <= 0.0):
            raise ValueError("t must be strictly increasing")

    @classmethod
    def from_states(
        cls, t_values: np.ndarray, states: list[DensityMatrix2], metadata: dict
    ) -> "TimeSeries":
        bases = {s.basis for s in states}
        if len(bases) != 1:
            raise ValueError("all states in a series must share one basis")
        return cls(
            t=np.asarray(t_values, dtype=float),
            rho11=np.array([complex(s.rho11).real for s in states]),
            rho22=np.array([complex(s.rho22).real for s in states]),
            rho12_re=np.array([complex(s.rho12).real for s in states]),
            rho12_im=np.array([complex(s.rho12).imag for s in states]),
            basis=bases.pop(),
            metadata=dict(metadata),
        )

    def state_at(self, i: int) -> DensityMatrix2:
        return DensityMatrix2.from_parts(
            self.rho11[i], complex(self.rho12_re[i], self.rho12_im[i]), self.basis
        )

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = [f"# dephase-lab {__version__}"]
        for key, value in self.metadata.items():
            lines.append(f"# {key} = {value}")
        lines.append(",".join(_COLUMNS))
        for i in range(self.t.size):
            row = [
                fmt17(self.t[i]),
                fmt17(self.rho11[i]),
                fmt17(self.rho22[i]),
                fmt17(self.rho12_re[i]),
                fmt17(self.rho12_im[i]),
                self.basis.value,
            ]
            lines.append(",".join(row))
        path.write_text("\n".join(lines) + "\n", encoding="ascii")
        return path


def read_csv(path: str | Path) -> TimeSeries:
    """Parse a series file written by `TimeSeries.write_csv`."""
    path = Path(path)
    metadata: dict[str, str] = {}
    rows: list[list[str]] = []
    header_seen = False
    for line in path.read_text(encoding="ascii").splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                metadata[key.strip()] = value.strip()
            continue
        if not header_seen:
            if tuple(line.split(",")) != _COLUMNS:
                raise ConfigError(f"unexpected CSV header in {path}: {line!r}")
            header_seen = True
            continue
        rows.append(line.split(","))
    if not rows:
        raise ConfigError(f"no data rows in {path}")
    bases = {row[5] for row in rows}
    if len(bases) != 1:
        raise ConfigError(f"mixed basis tags in {path}")
    data = np.array([[float(v) for v in row[:5]] for row in rows])
    return TimeSeries(
        t=data[:, 0],
        rho11=data[:, 1],
        rho22=data[:, 2],
        rho12_re=data[:, 3],
        rho12_im=data[:, 4],
        basis=Basis(bases.pop()),
        metadata=metadata,
    )


def write_json(payload: dict, path: str | Path) -> Path:
    """Write a JSON summary with a stable key order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="ascii")
    return path
