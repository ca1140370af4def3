import cmath
import math

import numpy as np
import pytest

from dephase_lab.states import Basis, DensityMatrix2

# Canonical superposition (|1> + e^{i pi/4} |2>)/sqrt(2) with the
# rho12 = <1|rho|2> sign convention, i.e. rho12(0) = e^{-i pi/4}/2.
RHO12_FIG1 = cmath.exp(-1j * math.pi / 4) / 2.0


@pytest.fixture(scope="session")
def fig1_state() -> DensityMatrix2:
    return DensityMatrix2.from_parts(0.5, RHO12_FIG1, Basis.Z)


@pytest.fixture(scope="session")
def time_grid_two() -> np.ndarray:
    return np.linspace(0.0, 2.0, 41)


def assert_valid_state(rho: DensityMatrix2, tol: float = 1e-10) -> None:
    m = rho.validity_margins()
    assert m["trace_error"] <= tol
    assert m["hermiticity_error"] <= tol
    assert m["determinant"] >= -tol
