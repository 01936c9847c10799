import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcorr.ensembles import DensityOperator, Ensemble, density_from_ensemble, eigen_ensemble, mixing_matrix, support_residuals
from qcorr.errors import DensityError, DimensionError, RealizationError, SupportError
from qcorr.randomized import random_density, random_realization, random_state
from qcorr.states import DOWN_Z, UP_Z, tilted_ensemble, x_ensemble, z_ensemble

from conftest import max_abs


def test_z_ensemble_is_maximally_mixed():
    assert max_abs(density_from_ensemble(z_ensemble()).matrix, np.eye(2) / 2) < 1e-15


def test_x_ensemble_equals_z_ensemble():
    wz = density_from_ensemble(z_ensemble()).matrix
    wx = density_from_ensemble(x_ensemble()).matrix
    assert max_abs(wx, np.eye(2) / 2) < 1e-15
    assert max_abs(wx, wz) < 1e-15


def test_tilted_ensemble_is_diagonal():
    assert max_abs(density_from_ensemble(tilted_ensemble(0.75)).matrix, np.diag([0.75, 0.25])) < 1e-15


def test_mixed_dims_rejected():
    with pytest.raises(DimensionError):
        Ensemble.from_members([(0.5, [1, 0]), (0.5, [1, 0, 0])])


def test_zero_weight_rejected():
    with pytest.raises(ValueError):
        Ensemble([1.0, 0.0], [UP_Z, DOWN_Z])


def test_density_invariants_enforced():
    with pytest.raises(DensityError):
        DensityOperator(np.diag([0.5, 0.6]))
    with pytest.raises(DensityError):
        DensityOperator(np.diag([1.5, -0.5]))


def test_eigen_ensemble_nondegenerate():
    e = eigen_ensemble(DensityOperator(np.diag([0.75, 0.25])))
    assert np.allclose(e.weights, [0.75, 0.25], atol=1e-15)
    assert max_abs(e.states, np.eye(2)) < 1e-15


def test_eigen_ensemble_pure(rng):
    phi = random_state(4, rng)
    e = eigen_ensemble(DensityOperator.pure(phi))
    assert len(e) == 1
    assert abs(abs(np.vdot(e.states[0], phi)) - 1) < 1e-12


def test_eigen_ensemble_roundtrip_rank2(rng):
    w = random_density(4, rank=2, seed=rng)
    e = eigen_ensemble(w)
    assert len(e) == 2
    assert abs(np.vdot(e.states[0], e.states[1])) < 1e-12
    assert max_abs(density_from_ensemble(e).matrix, w.matrix) < 1e-10


def test_mixing_matrix_of_eigen_ensemble_is_identity(rng):
    w = random_density(3, seed=rng)
    assert max_abs(mixing_matrix(w, eigen_ensemble(w)), np.eye(3)) < 1e-10


def test_mixing_matrix_x_basis_is_hadamard_like():
    w = DensityOperator(np.eye(2) / 2)
    m = mixing_matrix(w, x_ensemble())
    # solve sqrt(q) psi = sum_i M sqrt(p_i) phi_i by least squares, independently
    eig = eigen_ensemble(w)
    basis = (np.sqrt(eig.weights)[:, None] * eig.states).T
    direct = np.array([np.linalg.lstsq(basis, np.sqrt(q) * s, rcond=None)[0] for q, s in x_ensemble()])
    assert max_abs(m, direct) < 1e-12
    assert max_abs(np.abs(m), 1 / np.sqrt(2)) < 1e-12


def test_mixing_matrix_tilted_ensemble():
    w = DensityOperator(np.diag([0.75, 0.25]))
    m = mixing_matrix(w, tilted_ensemble(0.75))
    expected = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert max_abs(m, expected) < 1e-12


def test_mixing_matrix_rejects_wrong_ensemble():
    w = DensityOperator(np.diag([0.75, 0.25]))
    with pytest.raises(RealizationError):
        mixing_matrix(w, x_ensemble())


def test_mixing_matrix_support_error():
    w = DensityOperator(np.diag([1.0, 0.0]))
    with pytest.raises(SupportError, match="member 1"):
        mixing_matrix(w, Ensemble([0.5, 0.5], [UP_Z, (UP_Z + DOWN_Z) / np.sqrt(2)]))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.data())
def test_mixing_matrix_laws(d, data):
    seed = data.draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    rank = data.draw(st.integers(1, d))
    size = data.draw(st.integers(rank, 8))
    w = random_density(d, rank, seed=rng)
    e = random_realization(w, size, seed=rng)
    m = mixing_matrix(w, e)
    assert max_abs(m.conj().T @ m, np.eye(m.shape[1])) < 1e-10
    eig = eigen_ensemble(w)
    # eigenvalues, not the renormalized weights, enter the expansion
    p = np.linalg.eigvalsh(w.matrix)[::-1][: m.shape[1]]
    rebuilt = m @ (np.sqrt(p)[:, None] * eig.states)
    assert max_abs(rebuilt, np.sqrt(e.weights)[:, None] * e.states) < 1e-10
    assert np.max(support_residuals(w, e)) < 1e-8


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_any_ensemble_mixes_to_valid_density(dim, size, seed):
    rng = np.random.default_rng(seed)
    q = rng.random(size) + 0.01
    states = [random_state(dim, rng) for _ in range(size)]
    w = density_from_ensemble(Ensemble(q / q.sum(), states))
    assert abs(np.trace(w.matrix) - 1) < 1e-12
    assert np.linalg.eigvalsh(w.matrix)[0] > -1e-10
