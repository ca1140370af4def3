"""Matplotlib rendering for the report paths (compare and sweep).

Figures are written next to the delimited output; the CSV/JSON files stay
the authoritative record and their bytes do not depend on plotting.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .runner import CompareResult, RunResult, SweepResult
from .states import Basis


def _series_observable(series) -> tuple[np.ndarray, str]:
    if series.basis is Basis.X:
        return series.rho11, r"$\rho_{11}^{(x)}(t)$"
    coh = np.hypot(series.rho12_re, series.rho12_im)
    return coh, r"$|\rho_{12}^{(z)}(t)|$"


def plot_series(result: RunResult, path: str | Path) -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    y, label = _series_observable(result.series)
    ax.plot(result.series.t, y, "-", lw=1.5)
    ax.set_xlabel(r"$\omega_c t$")
    ax.set_ylabel(label)
    ax.set_title(f"{result.config.solver}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_compare(result: CompareResult, path: str | Path) -> Path:
    path = Path(path)
    fig, (ax, ax_diff) = plt.subplots(
        2, 1, figsize=(6.4, 6.0), sharex=True, height_ratios=[3, 1]
    )
    y_a, label = _series_observable(result.run_a.series)
    y_b, _ = _series_observable(result.run_b.series)
    t = result.run_a.series.t
    ax.plot(t, y_a, "x", ms=5, label=result.run_a.config.solver)
    ax.plot(t, y_b, ".", ms=5, label=result.run_b.config.solver)
    ax.set_ylabel(label)
    ax.legend(frameon=False)
    ax_diff.semilogy(t[1:], np.abs(y_a - y_b)[1:], "-", lw=1.0)
    ax_diff.set_xlabel(r"$\omega_c t$")
    ax_diff.set_ylabel("|difference|")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_sweep(result: SweepResult, path: str | Path) -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    label = ""
    for value, run_result in zip(result.values, result.runs):
        y, label = _series_observable(run_result.series)
        ax.plot(run_result.series.t, y, "-", lw=1.2, label=f"{result.axis} = {value:g}")
    ax.set_xlabel(r"$\omega_c t$")
    ax.set_ylabel(label)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
