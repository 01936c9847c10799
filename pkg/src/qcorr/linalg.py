"""Dense complex matrix kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The helpers
here validate the structural invariants (Hermitian, unitary, normalized)
and implement the tensor-product bookkeeping used everywhere else:
Kronecker products, partial traces and subsystem permutations.
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .config import TOL
from .errors import (
    DimensionError,
    HermiticityError,
    NormalizationError,
    OrthonormalityError,
)

_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def as_matrix(m, *, square: bool = False) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    if a.size == 0:
        raise DimensionError("matrix has no entries")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def as_state(v, dim: int | None = None) -> np.ndarray:
    """Validate a normalized state vector and return it as a complex array."""
    a = np.asarray(v, dtype=complex).reshape(-1)
    if a.size == 0 or not np.all(np.isfinite(a)):
        raise NormalizationError("state vector is empty or non-finite")
    if dim is not None and a.size != dim:
        raise DimensionError(f"state has dimension {a.size}, expected {dim}")
    norm = np.linalg.norm(a)
    if abs(norm - 1.0) > TOL.norm:
        raise NormalizationError(f"state norm is {norm!r}, expected 1")
    return a


def normalize(v) -> np.ndarray:
    a = np.asarray(v, dtype=complex).reshape(-1)
    return a / np.linalg.norm(a)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def projector(v) -> np.ndarray:
    """Return ``|v><v|``."""
    a = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(a, a.conj())


def hermiticity_residual(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - dagger(m))))


def is_hermitian(m, tol: float | None = None) -> bool:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return hermiticity_residual(a) <= (TOL.herm if tol is None else tol)


def as_hermitian(m) -> np.ndarray:
    a = as_matrix(m, square=True)
    res = hermiticity_residual(a)
    if res > TOL.herm:
        raise HermiticityError(f"matrix is not Hermitian (max |A - A^dagger| = {res:.3e})")
    return a


def unitarity_residual(m: np.ndarray) -> float:
    a = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(dagger(a) @ a - np.eye(a.shape[1]))))


def is_unitary(m, tol: float | None = None) -> bool:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return unitarity_residual(a) <= (TOL.unit if tol is None else tol)


def kron(*factors) -> np.ndarray:
    """Kronecker product of one or more matrices (or vectors), left to right."""
    if not factors:
        raise ValueError("kron needs at least one factor")
    return reduce(np.kron, (np.asarray(f, dtype=complex) for f in factors))


def _check_dims(m: np.ndarray, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise DimensionError(f"invalid subsystem dimensions {dims}")
    total = int(np.prod(dims))
    if m.ndim != 2 or m.shape != (total, total):
        raise DimensionError(f"matrix of shape {m.shape} does not match subsystem dims {dims}")
    return dims


def partial_trace(m, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    The kept factors stay in their original order.

    >>> import numpy as np
    >>> partial_trace(np.eye(4), [2, 2], keep=[0]).real
    array([[2., 0.],
           [0., 2.]])
    """
    m = np.asarray(m, dtype=complex)
    dims = _check_dims(m, dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise DimensionError(f"keep={keep} is not a nonempty subset of range({n})")
    if 2 * n > len(_LETTERS):
        raise DimensionError("too many subsystems")
    rows = list(_LETTERS[:n])
    cols = [rows[k] if k not in keep else _LETTERS[n + k] for k in range(n)]
    out = "".join(rows[k] for k in keep) + "".join(cols[k] for k in keep)
    sub = "".join(rows) + "".join(cols) + "->" + out
    kept = int(np.prod([dims[k] for k in keep]))
    return np.einsum(sub, m.reshape(dims + dims)).reshape(kept, kept)


def permute_subsystems(m, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of an operator: new factor ``j`` is old factor ``order[j]``."""
    m = np.asarray(m, dtype=complex)
    dims = _check_dims(m, dims)
    n = len(dims)
    order = [int(o) for o in order]
    if sorted(order) != list(range(n)):
        raise DimensionError(f"{order} is not a permutation of range({n})")
    t = m.reshape(dims + dims).transpose(order + [n + o for o in order])
    return t.reshape(m.shape)


def hermitian_eig(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with real eigenvalues in
    descending order and eigenvectors as the columns of a unitary matrix.
    Each eigenvector's first component with magnitude above 1e-12 is made
    real and positive, so output is deterministic up to the choice of basis
    inside degenerate eigenspaces.

    Raises
    ------
    HermiticityError
        If ``h`` is not Hermitian within ``TOL.herm``.
    """
    h = as_hermitian(h)
    vals, vecs = np.linalg.eigh(0.5 * (h + dagger(h)))
    order = np.argsort(-vals, kind="stable")  # ties keep eigh's order
    vals = vals[order]
    vecs = vecs[:, order]
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        lead = np.flatnonzero(np.abs(col) > 1e-12)[0]
        vecs[:, k] = col * (abs(col[lead]) / col[lead])
    return vals, vecs


def extend_to_unitary(m) -> np.ndarray:
    """Complete ``d`` orthonormal columns in ``D`` dimensions to a ``D x D`` unitary.

    The input columns are kept verbatim as the leading columns.  New columns
    come from modified Gram-Schmidt over the canonical basis vectors, with a
    second orthogonalization pass; candidates whose residual norm falls
    below ``TOL.completion`` are skipped.
    """
    m = as_matrix(m)
    dim, d = m.shape
    if d > dim:
        raise OrthonormalityError(f"{d} columns cannot be orthonormal in {dim} dimensions")
    res = unitarity_residual(m)
    if res > TOL.unit:
        raise OrthonormalityError(f"input columns are not orthonormal (residual {res:.3e})")
    cols = [m[:, k] for k in range(d)]
    for k in range(dim):
        if len(cols) == dim:
            break
        v = np.zeros(dim, dtype=complex)
        v[k] = 1.0
        for _ in range(2):
            for q in cols:
                v = v - np.vdot(q, v) * q
        norm = np.linalg.norm(v)
        if norm < TOL.completion:
            continue
        cols.append(v / norm)
    u = np.column_stack(cols)
    u[:, :d] = m
    return u
