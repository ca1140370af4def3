import math

import numpy as np
import pytest

from dephase_lab.errors import BasisMismatchError, StateValidityError
from dephase_lab.states import Basis, DensityMatrix2, ModelParams, change_basis, error_epsilon

from conftest import RHO12_FIG1


def test_change_basis_pure_zero_state():
    rho = DensityMatrix2.from_parts(1.0, 0.0, Basis.Z)
    out = change_basis(rho, Basis.X)
    assert out.basis is Basis.X
    np.testing.assert_allclose(out.matrix, np.full((2, 2), 0.5), atol=1e-15)


def test_change_basis_identity_fixed_point():
    rho = DensityMatrix2.from_parts(0.5, 0.0, Basis.Z)
    out = change_basis(rho, Basis.X)
    np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-15)


def test_change_basis_fig1_population(fig1_state):
    out = change_basis(fig1_state, Basis.X)
    assert complex(out.rho11).real == pytest.approx(0.5 + math.sqrt(2) / 4, abs=1e-15)


def test_change_basis_same_target_is_noop(fig1_state):
    assert change_basis(fig1_state, Basis.Z) is fig1_state


@pytest.mark.parametrize("rho11,rho12", [(0.5, RHO12_FIG1), (0.8, 0.1 + 0.2j), (1.0, 0.0)])
def test_change_basis_involution(rho11, rho12):
    rho = DensityMatrix2.from_parts(rho11, rho12, Basis.Z)
    back = change_basis(change_basis(rho, Basis.X), Basis.Z)
    assert np.max(np.abs(back.matrix - rho.matrix)) < 1e-15


@pytest.mark.parametrize("rho11,rho12", [(0.5, RHO12_FIG1), (0.7, 0.2 - 0.3j)])
def test_change_basis_preserves_trace_and_eigenvalues(rho11, rho12):
    rho = DensityMatrix2.from_parts(rho11, rho12, Basis.Z)
    out = change_basis(rho, Basis.X)
    assert (complex(out.rho11) + complex(out.rho22)).real == pytest.approx(1.0, abs=1e-14)
    ev_in = np.sort(np.linalg.eigvalsh(rho.matrix))
    ev_out = np.sort(np.linalg.eigvalsh(out.matrix))
    np.testing.assert_allclose(ev_out, ev_in, atol=1e-14)


def test_error_epsilon_examples():
    a = DensityMatrix2.from_parts(1.0, 0.0, Basis.Z)
    b = DensityMatrix2.from_parts(0.0, 0.0, Basis.Z)
    assert error_epsilon(a, a) == 0.0
    assert error_epsilon(a, b) == pytest.approx(1.0)
    c = DensityMatrix2.from_parts(0.85355, 0.0, Basis.Z)
    d = DensityMatrix2.from_parts(0.80000, 0.0, Basis.Z)
    assert error_epsilon(c, d) == pytest.approx(0.05355, abs=1e-12)
    assert error_epsilon(d, c) == error_epsilon(c, d)


def test_error_epsilon_basis_mismatch():
    a = DensityMatrix2.from_parts(0.5, 0.0, Basis.Z)
    b = DensityMatrix2.from_parts(0.5, 0.0, Basis.X)
    with pytest.raises(BasisMismatchError):
        error_epsilon(a, b)


def test_density_matrix_validation():
    with pytest.raises(StateValidityError):
        DensityMatrix2(0.6, 0.0, 0.0, 0.6, Basis.Z)  # trace 1.2
    with pytest.raises(StateValidityError):
        DensityMatrix2(0.5, 0.2 + 0.1j, 0.2 + 0.1j, 0.5, Basis.Z)  # not hermitian
    with pytest.raises(StateValidityError):
        DensityMatrix2.from_parts(0.5, 0.9, Basis.Z)  # det < 0
    with pytest.raises(StateValidityError):
        DensityMatrix2.from_parts(float("nan"), 0.0, Basis.Z)
    with pytest.raises(StateValidityError):
        DensityMatrix2.from_parts(-0.2, 0.0, Basis.Z)


def test_from_matrix_shape_check():
    with pytest.raises(StateValidityError):
        DensityMatrix2.from_matrix(np.eye(3))


def test_model_params_validation():
    ModelParams(lambda_sq=4.0, omega0=1.0, eta=0.05, beta=10.0)
    ModelParams()  # defaults are valid
    with pytest.raises(ValueError):
        ModelParams(lambda_sq=-1.0)
    with pytest.raises(ValueError):
        ModelParams(eta=-0.1)
    with pytest.raises(ValueError):
        ModelParams(beta=0.0)
    with pytest.raises(ValueError):
        ModelParams(beta=float("nan"))
    with pytest.raises(ValueError):
        ModelParams(omega_c=2.0)
    assert ModelParams().zero_temperature
    assert not ModelParams(beta=3.0).zero_temperature
