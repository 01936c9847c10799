"""Random instances for property tests and demos."""

from __future__ import annotations

import numpy as np

from .ensembles import DensityOperator, Ensemble, eigen_ensemble


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_state(dim: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar-random unitary (QR of a complex Ginibre matrix with phase fix)."""
    rng = _rng(seed)
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(dim: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (a + a.conj().T)


def random_density(dim: int, rank: int | None = None, seed=None) -> DensityOperator:
    rng = _rng(seed)
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityOperator(m / np.trace(m).real)


def random_realization(w: DensityOperator, size: int, seed=None) -> Ensemble:
    """A random ``size``-member ensemble mixing to ``w``.

    Rows of a random unitary act as the mixing matrix on the eigen-ensemble.
    """
    rng = _rng(seed)
    eig = eigen_ensemble(w)
    r = len(eig)
    if size < r:
        raise ValueError(f"need at least rank(W) = {r} members, got {size}")
    u = random_unitary(size, rng)[:, :r]
    amps = u @ (np.sqrt(eig.weights)[:, None] * eig.states)
    q = np.sum(np.abs(amps) ** 2, axis=1)
    states = amps / np.sqrt(q)[:, None]
    return Ensemble(q / q.sum(), states)
