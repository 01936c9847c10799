"""Density operators, their pure-state ensembles, and the mixing matrix
that relates any ensemble to the eigen-ensemble."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import TOL
from .errors import DensityError, DimensionError, NormalizationError, RealizationError, SupportError
from .linalg import as_hermitian, dagger, hermitian_eig


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix.

    ``psd_tol`` and ``trace_tol`` default to the global tolerances; callers
    checking reconstructed (noisy) data may relax them.
    """

    matrix: np.ndarray
    psd_tol: float | None = field(default=None, repr=False)
    trace_tol: float | None = field(default=None, repr=False)

    def __post_init__(self):
        m = as_hermitian(self.matrix)
        m = 0.5 * (m + dagger(m))
        tr = np.trace(m).real
        trace_tol = TOL.trace if self.trace_tol is None else self.trace_tol
        if abs(tr - 1.0) > trace_tol:
            raise DensityError(f"trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh(m)[0]
        psd_tol = TOL.psd if self.psd_tol is None else self.psd_tol
        if lo < -psd_tol:
            raise DensityError(f"matrix is not positive semidefinite (min eigenvalue {lo:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return int(np.sum(np.linalg.eigvalsh(self.matrix) > TOL.rank))

    @classmethod
    def pure(cls, state) -> "DensityOperator":
        v = np.asarray(state, dtype=complex).reshape(-1)
        return cls(np.outer(v, v.conj()))

    def expectation(self, op) -> complex:
        return complex(np.trace(self.matrix @ np.asarray(op, dtype=complex)))


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Weighted pure states ``{(q_mu, |psi_mu>)}``; ``states`` holds one state per row."""

    weights: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        s = np.asarray(self.states, dtype=complex)
        if s.ndim == 1:
            s = s.reshape(1, -1)
        if s.ndim != 2 or s.shape[0] != w.size:
            raise DimensionError(f"{w.size} weights but states have shape {s.shape}")
        if w.size == 0:
            raise ValueError("ensemble has no members")
        if np.any(w <= 0) or np.any(w > 1 + 1e-12) or not np.all(np.isfinite(w)):
            raise ValueError("ensemble weights must lie in (0, 1]")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"ensemble weights sum to {w.sum()!r}, expected 1")
        norms = np.linalg.norm(s, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1.0) > TOL.norm)
        if bad.size:
            raise NormalizationError(f"ensemble member {int(bad[0])} has norm {norms[bad[0]]!r}")
        w.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", s)

    @classmethod
    def from_members(cls, members) -> "Ensemble":
        members = list(members)
        dims = {np.asarray(v).size for _, v in members}
        if len(dims) > 1:
            raise DimensionError(f"ensemble members have mixed dimensions {sorted(dims)}")
        return cls([w for w, _ in members], np.array([np.asarray(v, dtype=complex).reshape(-1) for _, v in members]))

    def __len__(self) -> int:
        return self.weights.size

    def __iter__(self):
        return iter(zip(self.weights, self.states))

    @property
    def dim(self) -> int:
        return self.states.shape[1]


def density_from_ensemble(e: Ensemble) -> DensityOperator:
    """``W = sum_mu q_mu |psi_mu><psi_mu|``."""
    s = e.states
    return DensityOperator(np.einsum("m,mi,mj->ij", e.weights, s, s.conj()))


def _eigen_support(w: DensityOperator) -> tuple[np.ndarray, np.ndarray]:
    vals, vecs = hermitian_eig(w.matrix)
    keep = vals > TOL.rank
    return vals[keep], vecs[:, keep]


def eigen_ensemble(w: DensityOperator) -> Ensemble:
    """The orthogonal ensemble of eigenvectors with nonzero eigenvalue.

    Weights are renormalized to absorb the discarded sub-threshold
    eigenvalues, so the result is always a valid :class:`Ensemble`.
    """
    p, phi = _eigen_support(w)
    return Ensemble(p / p.sum(), phi.T)


def support_residuals(w: DensityOperator, e: Ensemble) -> np.ndarray:
    """Norm of each member state's component outside the range of ``w``."""
    _, phi = _eigen_support(w)
    s = e.states
    inside = (s @ phi.conj()) @ phi.T
    return np.linalg.norm(s - inside, axis=1)


def mixing_matrix(w: DensityOperator, e: Ensemble) -> np.ndarray:
    """Matrix ``M`` (members x rank) with ``sqrt(q_mu)|psi_mu> = sum_i M[mu, i] sqrt(p_i)|phi_i>``.

    ``|phi_i>``, ``p_i`` are the eigenvectors/eigenvalues of ``w`` above
    ``TOL.rank``, in :func:`eigen_ensemble` order.  The columns of ``M`` are
    orthonormal whenever ``e`` realizes ``w``.

    Raises
    ------
    DimensionError
        If the ensemble lives in a different dimension.
    SupportError
        If a member state has a component outside the range of ``w``.
    RealizationError
        If the ensemble mixes to a different density operator.
    """
    if e.dim != w.dim:
        raise DimensionError(f"ensemble dimension {e.dim} != density dimension {w.dim}")
    res = support_residuals(w, e)
    bad = np.flatnonzero(res > TOL.support)
    if bad.size:
        mu = int(bad[0])
        raise SupportError(f"member {mu} lies outside the range of W (residual {res[mu]:.3e})")
    mixed = np.einsum("m,mi,mj->ij", e.weights, e.states, e.states.conj())
    dev = float(np.max(np.abs(mixed - w.matrix)))
    if dev > TOL.realization:
        raise RealizationError(f"ensemble mixes to a different density matrix (max deviation {dev:.3e})")
    p, phi = _eigen_support(w)
    overlaps = e.states @ phi.conj()  # <phi_i|psi_mu>
    return np.sqrt(e.weights)[:, None] * overlaps / np.sqrt(p)[None, :]
