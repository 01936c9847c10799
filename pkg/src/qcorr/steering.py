"""Remote preparation of ensembles by measuring an ancilla.

A density operator ``W`` is purified on ``system (x) ancilla``.  For any
ensemble realizing ``W``, the mixing matrix is completed to a unitary whose
conjugated rows define an orthonormal ancilla basis; measuring in that basis
leaves the system in member ``mu`` with probability ``q_mu``.

All vectors on the composite space use system-major ordering: index
``s * D + a`` for system index ``s`` and ancilla index ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import TOL
from .ensembles import DensityOperator, Ensemble, density_from_ensemble, eigen_ensemble, mixing_matrix
from .errors import AncillaTooSmallError, DimensionError, RealizationError
from .linalg import as_state, extend_to_unitary, partial_trace


@dataclass(frozen=True, eq=False)
class Purification:
    state: np.ndarray
    system_dim: int
    ancilla_dim: int

    @property
    def amplitudes(self) -> np.ndarray:
        """The state as a ``system_dim x ancilla_dim`` coefficient matrix."""
        return self.state.reshape(self.system_dim, self.ancilla_dim)

    @property
    def ancilla_reference_basis(self) -> np.ndarray:
        return np.eye(self.ancilla_dim, dtype=complex)

    def reduced_system(self) -> np.ndarray:
        rho = np.outer(self.state, self.state.conj())
        return partial_trace(rho, [self.system_dim, self.ancilla_dim], keep=[0])


@dataclass(frozen=True, eq=False)
class SteeringBasis:
    """Ancilla measurement basis; ``states[:, mu]`` is ``|beta_mu>``."""

    states: np.ndarray
    target: Ensemble

    @property
    def ancilla_dim(self) -> int:
        return self.states.shape[0]

    def observable(self) -> np.ndarray:
        """Observable diagonal in this basis with eigenvalue ``mu`` on ``|beta_mu>``."""
        labels = np.arange(self.ancilla_dim, dtype=float)
        return (self.states * labels) @ self.states.conj().T


@dataclass(frozen=True)
class SteeringOutcome:
    index: int
    probability: float
    conditional_state: np.ndarray | None  # None when the outcome has (numerically) zero probability

    @property
    def defined(self) -> bool:
        return self.conditional_state is not None


def purify(w: DensityOperator, ancilla_dim: int | None = None) -> Purification:
    """``|Phi> = sum_i sqrt(p_i) |phi_i> (x) |i>`` over the eigen-ensemble of ``w``."""
    eig = eigen_ensemble(w)
    r = len(eig)
    D = r if ancilla_dim is None else int(ancilla_dim)
    if D < r:
        raise AncillaTooSmallError(f"ancilla dimension {D} is below rank(W) = {r}")
    amps = np.zeros((w.dim, D), dtype=complex)
    amps[:, :r] = (np.sqrt(eig.weights)[:, None] * eig.states).T
    return Purification(amps.reshape(-1), w.dim, D)


def steering_basis(w: DensityOperator, target: Ensemble, ancilla_dim: int | None = None) -> SteeringBasis:
    """Ancilla basis that steers the purification of ``w`` onto ``target``.

    With ``ancilla_dim`` larger than ``len(target)`` the mixing matrix is
    padded with zero rows; the extra basis vectors then carry zero
    probability.
    """
    m = mixing_matrix(w, target)
    D = len(target) if ancilla_dim is None else int(ancilla_dim)
    if D < len(target):
        raise AncillaTooSmallError(f"ancilla dimension {D} is below the ensemble size {len(target)}")
    padded = np.zeros((D, m.shape[1]), dtype=complex)
    padded[: m.shape[0]] = m
    u = extend_to_unitary(padded)
    # |beta_mu> = sum_nu conj(U[mu, nu]) |alpha_nu>
    return SteeringBasis(u.conj().T, target)


def project_ancilla(phi: Purification, ancilla_state, index: int = 0) -> SteeringOutcome:
    """Born-rule projection of the ancilla onto ``ancilla_state``."""
    beta = np.asarray(ancilla_state, dtype=complex).reshape(-1)
    if beta.size != phi.ancilla_dim:
        raise DimensionError(f"ancilla state has dimension {beta.size}, expected {phi.ancilla_dim}")
    beta = as_state(beta)
    v = phi.amplitudes @ beta.conj()
    prob = float(np.vdot(v, v).real)
    if prob < TOL.zero_prob:
        return SteeringOutcome(index, prob, None)
    return SteeringOutcome(index, prob, v / np.sqrt(prob))


def measure(phi: Purification, basis: SteeringBasis) -> list[SteeringOutcome]:
    return [project_ancilla(phi, basis.states[:, mu], mu) for mu in range(basis.ancilla_dim)]


def steer(w: DensityOperator, target: Ensemble) -> list[SteeringOutcome]:
    """Purify ``w`` and measure the ancilla in the basis prepared for ``target``."""
    phi = purify(w, len(target))
    return measure(phi, steering_basis(w, target))


@dataclass(frozen=True, eq=False)
class Witness:
    purification: Purification
    bases: list[SteeringBasis]

    def outcomes(self) -> list[list[SteeringOutcome]]:
        return [measure(self.purification, b) for b in self.bases]


def theorem1_witness(w: DensityOperator, targets: Sequence[Ensemble]) -> Witness:
    """One purification plus one ancilla basis per target ensemble."""
    targets = list(targets)
    if not targets:
        raise ValueError("need at least one target ensemble")
    D = max(len(t) for t in targets)
    phi = purify(w, D)
    bases = []
    for n, t in enumerate(targets):
        try:
            bases.append(steering_basis(w, t, D))
        except RealizationError as exc:
            raise type(exc)(f"target {n}: {exc}") from exc
    return Witness(phi, bases)


def fidelity(a, b) -> float:
    """``|<a|b>|^2`` for normalized vectors; 0 if either is undefined."""
    if a is None or b is None:
        return 0.0
    return float(abs(np.vdot(a, b)) ** 2)


def remix(outcomes: Sequence[SteeringOutcome]) -> DensityOperator:
    """Density operator of the ensemble produced by a steering measurement."""
    defined = [o for o in outcomes if o.defined]
    q = np.array([o.probability for o in defined])
    return density_from_ensemble(Ensemble(q / q.sum(), np.array([o.conditional_state for o in defined])))
