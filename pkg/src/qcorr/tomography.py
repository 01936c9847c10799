"""Reconstruction of a composite density matrix from local correlations.

Given a partition of the system into tensor factors and a Hermitian
operator basis on each factor, the records ``tr(W B_{i1} (x) ... (x) B_{in})``
determine ``W``.  Reconstruction follows the constructive route: every
projector ``|phi><phi|`` is expanded in the product basis, which gives
diagonal elements ``<phi|W|phi>`` as linear combinations of records, and
off-diagonal elements follow from diagonal ones by polarization.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .config import TOL
from .ensembles import DensityOperator
from .errors import BasisError, DensityError, DimensionError, HermiticityError, IncompleteDataError, PhysicalityError, RangeError
from .linalg import hermiticity_residual, projector
from .states import I2, SIGMA_X, SIGMA_Y, SIGMA_Z

GRAM_COND_MAX = 1e12
_LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class Partition:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise DimensionError(f"invalid partition {self.dims}")
        if len(dims) > 8:
            raise DimensionError("at most 8 subsystems are supported")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse ``"2x2x2"`` style descriptors."""
        try:
            return cls(tuple(int(t) for t in text.lower().replace("*", "x").split("x")))
        except ValueError:
            raise DimensionError(f"cannot parse partition {text!r}") from None

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    def __len__(self) -> int:
        return len(self.dims)

    def __str__(self) -> str:
        return "x".join(str(d) for d in self.dims)


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    """``d**2`` linearly independent Hermitian ``d x d`` operators."""

    elements: np.ndarray
    name: str = "custom"
    gram: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        el = np.asarray(self.elements, dtype=complex)
        if el.ndim != 3 or el.shape[1] != el.shape[2]:
            raise BasisError(f"basis elements must be square matrices, got shape {el.shape}")
        d = el.shape[1]
        if el.shape[0] != d * d:
            raise BasisError(f"a basis on dimension {d} needs {d * d} elements, got {el.shape[0]}")
        for k, e in enumerate(el):
            if hermiticity_residual(e) > TOL.herm:
                raise BasisError(f"basis element {k} is not Hermitian")
        gram = np.einsum("aij,bji->ab", el, el).real
        if np.linalg.cond(gram) > GRAM_COND_MAX:
            raise BasisError("basis elements are linearly dependent (singular Gram matrix)")
        el.setflags(write=False)
        gram.setflags(write=False)
        object.__setattr__(self, "elements", el)
        object.__setattr__(self, "gram", gram)

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    def __len__(self) -> int:
        return self.elements.shape[0]

    def __getitem__(self, i):
        return self.elements[i]


def hermitian_basis(d: int) -> OperatorBasis:
    """Diagonal projectors, then symmetric ``|m><n| + |n><m|``, then ``i(|m><n| - |n><m|)`` for ``m < n``."""
    if d < 1:
        raise DimensionError(f"dimension must be positive, got {d}")
    eye = np.eye(d, dtype=complex)
    diag = [np.outer(eye[m], eye[m]) for m in range(d)]
    pairs = list(itertools.combinations(range(d), 2))
    sym = [np.outer(eye[m], eye[n]) + np.outer(eye[n], eye[m]) for m, n in pairs]
    anti = [1j * (np.outer(eye[m], eye[n]) - np.outer(eye[n], eye[m])) for m, n in pairs]
    return OperatorBasis(np.array(diag + sym + anti), name="hermitian")


def pauli_basis() -> OperatorBasis:
    """``(1, sigma_x, sigma_y, sigma_z)`` on a qubit."""
    return OperatorBasis(np.array([I2, SIGMA_X, SIGMA_Y, SIGMA_Z]), name="pauli")


def product_basis(*bases: OperatorBasis) -> OperatorBasis:
    """Kronecker products of basis elements, first factor's index slowest."""
    els = bases[0].elements
    for b in bases[1:]:
        els = np.einsum("aij,bkl->abikjl", els, b.elements)
        n = els.shape[0] * els.shape[1]
        d = els.shape[2] * els.shape[3]
        els = els.reshape(n, d, d)
    return OperatorBasis(els, name="product(" + ",".join(b.name for b in bases) + ")")


def default_bases(partition: Partition) -> tuple[OperatorBasis, ...]:
    return tuple(hermitian_basis(d) for d in partition.dims)


def _check_bases(partition: Partition, bases) -> tuple[OperatorBasis, ...]:
    bases = default_bases(partition) if bases is None else tuple(bases)
    if len(bases) != len(partition):
        raise DimensionError(f"{len(bases)} bases for a {len(partition)}-factor partition")
    for k, (b, d) in enumerate(zip(bases, partition.dims)):
        if b.dim != d:
            raise DimensionError(f"basis {k} acts on dimension {b.dim}, factor {k} has dimension {d}")
    return bases


class CorrelationRecord(NamedTuple):
    indices: tuple[int, ...]
    value: float


@dataclass(frozen=True, eq=False)
class RecordSet(Sequence):
    """Correlation records together with the partition and bases they refer to."""

    partition: Partition
    bases: tuple[OperatorBasis, ...]
    records: tuple[CorrelationRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "bases", _check_bases(self.partition, self.bases))
        object.__setattr__(self, "records", tuple(CorrelationRecord(tuple(int(i) for i in r[0]), float(r[1])) for r in self.records))

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, i):
        return self.records[i]

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.bases)

    def tensor(self) -> np.ndarray:
        """Records as a dense real array indexed by basis indices.

        Raises :class:`IncompleteDataError` naming every absent index tuple.
        """
        shape = self.shape
        out = np.full(shape, np.nan)
        for idx, value in self.records:
            if len(idx) != len(shape) or any(not 0 <= i < n for i, n in zip(idx, shape)):
                raise DimensionError(f"record indices {idx} out of range for shape {shape}")
            out[idx] = value
        missing = np.argwhere(np.isnan(out))
        if missing.size:
            raise IncompleteDataError([tuple(m) for m in missing])
        return out

    def with_values(self, values) -> "RecordSet":
        values = np.asarray(values, dtype=float).reshape(self.shape)
        recs = tuple(CorrelationRecord(idx, float(values[idx])) for idx in np.ndindex(*self.shape))
        return RecordSet(self.partition, self.bases, recs)


def _as_record_set(records, partition=None, bases=None) -> RecordSet:
    if isinstance(records, RecordSet):
        return records
    if partition is None:
        raise ValueError("a partition is required for a bare list of records")
    partition = partition if isinstance(partition, Partition) else Partition(tuple(partition))
    return RecordSet(partition, _check_bases(partition, bases), tuple(records))


def _product_expectations(op: np.ndarray, partition: Partition, bases) -> np.ndarray:
    """``T[i1..in] = tr(op . B1[i1] (x) ... (x) Bn[in])`` (complex)."""
    n = len(partition)
    rows, cols, idx = _LETTERS[:n], _LETTERS[n : 2 * n], _LETTERS[2 * n : 3 * n]
    terms = [f"{idx[k]}{cols[k]}{rows[k]}" for k in range(n)]
    sub = rows + cols + "," + ",".join(terms) + "->" + idx
    t = op.reshape(partition.dims + partition.dims)
    return np.einsum(sub, t, *(b.elements for b in bases), optimize=True)


def _probe_expectations(probes: np.ndarray, partition: Partition, bases) -> np.ndarray:
    """``rhs[s, i1..in] = <phi_s| B1[i1] (x) ... (x) Bn[in] |phi_s>`` for each probe row."""
    n = len(partition)
    rows, cols, idx = _LETTERS[:n], _LETTERS[n : 2 * n], _LETTERS[2 * n : 3 * n]
    terms = [f"{idx[k]}{rows[k]}{cols[k]}" for k in range(n)]
    sub = "z" + rows + "," + ",".join(terms) + ",z" + cols + "->z" + idx
    t = probes.reshape((probes.shape[0],) + partition.dims)
    return np.einsum(sub, t.conj(), *(b.elements for b in bases), t, optimize=True).real


def _solve_gram(rhs: np.ndarray, bases, lead: int = 0) -> np.ndarray:
    """Apply the inverse of the product Gram matrix factor by factor."""
    c = rhs
    for k, b in enumerate(bases):
        c = np.moveaxis(np.tensordot(c, np.linalg.inv(b.gram), axes=([lead + k], [0])), -1, lead + k)
    return c


def correlations(w, partition: Partition, bases=None) -> RecordSet:
    """All records ``tr(W B_{i1} (x) ... (x) B_{in})`` in row-major index order."""
    m = w.matrix if isinstance(w, DensityOperator) else np.asarray(w, dtype=complex)
    partition = partition if isinstance(partition, Partition) else Partition(tuple(partition))
    bases = _check_bases(partition, bases)
    if m.shape != (partition.total, partition.total):
        raise DimensionError(f"matrix of shape {m.shape} does not match partition {partition}")
    t = _product_expectations(m, partition, bases)
    if np.max(np.abs(t.imag), initial=0.0) > 1e-9:
        raise HermiticityError("correlations have imaginary parts; matrix or basis is not Hermitian")
    vals = t.real
    recs = tuple(CorrelationRecord(idx, float(vals[idx])) for idx in np.ndindex(*vals.shape))
    return RecordSet(partition, bases, recs)


def expansion_coeffs(phi, partition: Partition, bases=None) -> np.ndarray:
    """Real coefficients ``c`` with ``|phi><phi| = sum c[i1..in] B1[i1] (x) ... (x) Bn[in]``."""
    partition = partition if isinstance(partition, Partition) else Partition(tuple(partition))
    bases = _check_bases(partition, bases)
    v = np.asarray(phi, dtype=complex).reshape(-1)
    if v.size != partition.total:
        raise DimensionError(f"state has dimension {v.size}, partition total is {partition.total}")
    rhs = _probe_expectations(v[None, :], partition, bases)[0]
    return _solve_gram(rhs, bases)


def _diagonal_values(probes: np.ndarray, rs: RecordSet) -> np.ndarray:
    r = rs.tensor()
    rhs = _probe_expectations(probes, rs.partition, rs.bases)
    c = _solve_gram(rhs, rs.bases, lead=1)
    return np.tensordot(c, r, axes=len(rs.bases))


def diagonal_element(phi, records, partition=None, bases=None) -> float:
    """``<phi|W|phi>`` as the coefficient-weighted sum of records."""
    rs = _as_record_set(records, partition, bases)
    v = np.asarray(phi, dtype=complex).reshape(1, -1)
    if v.shape[1] != rs.partition.total:
        raise DimensionError(f"state has dimension {v.shape[1]}, partition total is {rs.partition.total}")
    return float(_diagonal_values(v, rs)[0])


def _scaled_diagonal(v: np.ndarray, rs: RecordSet) -> float:
    norm2 = float(np.vdot(v, v).real)
    if norm2 == 0.0:
        return 0.0
    return norm2 * diagonal_element(v / np.sqrt(norm2), rs)


def offdiagonal_element(alpha, beta, records, partition=None, bases=None) -> complex:
    """``<beta|W|alpha>`` from four diagonal elements by polarization."""
    rs = _as_record_set(records, partition, bases)
    a = np.asarray(alpha, dtype=complex).reshape(-1)
    b = np.asarray(beta, dtype=complex).reshape(-1)
    s = _scaled_diagonal(a + b, rs)
    t = _scaled_diagonal(a + 1j * b, rs)
    return 0.5 * s + 0.5j * t - 0.5 * (1 + 1j) * (_scaled_diagonal(a, rs) + _scaled_diagonal(b, rs))


def reconstruct_matrix(records, partition=None, bases=None) -> np.ndarray:
    """Raw Hermitian estimate of ``W`` in the canonical product basis, unchecked."""
    rs = _as_record_set(records, partition, bases)
    n = rs.partition.total
    eye = np.eye(n, dtype=complex)
    pairs = [(j, k) for j in range(n) for k in range(n) if j != k]
    probes = [eye]
    if pairs:
        js, ks = np.array(pairs).T
        probes.append((eye[js] + eye[ks]) / np.sqrt(2))
        probes.append((eye[js] + 1j * eye[ks]) / np.sqrt(2))
    values = _diagonal_values(np.concatenate(probes), rs)
    diag = values[:n]
    w = np.diag(diag).astype(complex)
    if pairs:
        m = len(pairs)
        plus, plus_i = values[n : n + m], values[n + m :]
        # <k|W|j> with alpha = e_j, beta = e_k; the probes carry norm^2 = 2
        w[ks, js] = plus + 1j * plus_i - 0.5 * (1 + 1j) * (diag[js] + diag[ks])
    return 0.5 * (w + w.conj().T)


def reconstruct(records, partition=None, bases=None, *, tol: float = 1e-8) -> DensityOperator:
    """Density operator determined by a complete record set.

    Raises
    ------
    IncompleteDataError
        If any index tuple is missing.
    PhysicalityError
        If the estimate's trace or positivity is off by more than ``tol``.
    """
    w = reconstruct_matrix(records, partition, bases)
    try:
        return DensityOperator(w, psd_tol=tol, trace_tol=tol)
    except DensityError as exc:
        raise PhysicalityError(f"reconstructed matrix is not a density operator: {exc}") from exc


def project_physical(m) -> np.ndarray:
    """Nearest-PSD unit-trace matrix by eigenvalue clipping and renormalization."""
    m = np.asarray(m, dtype=complex)
    m = 0.5 * (m + m.conj().T)
    vals, vecs = np.linalg.eigh(m)
    vals = np.clip(vals, 0.0, None)
    if vals.sum() <= 0:
        raise PhysicalityError("no positive spectrum left after clipping")
    vals = vals / vals.sum()
    out = (vecs * vals) @ vecs.conj().T
    return 0.5 * (out + out.conj().T)


@dataclass
class ConsistencyReport:
    partitions: list[Partition]
    reconstructions: list[np.ndarray]
    max_deviation: float
    tolerance: float

    @property
    def consistent(self) -> bool:
        return self.max_deviation <= self.tolerance


def resolution_consistency(w: DensityOperator, partitions, tolerance: float = 1e-9) -> ConsistencyReport:
    """Reconstruct ``w`` through several resolutions into factors and compare.

    Coarse resolutions are expressed by grouping adjacent factors into one,
    e.g. ``2x4`` for ``(1|23)`` of a three-qubit system.
    """
    parts = [p if isinstance(p, Partition) else Partition.parse(p) if isinstance(p, str) else Partition(tuple(p)) for p in partitions]
    recs = [reconstruct(correlations(w, p)).matrix for p in parts]
    dev = 0.0
    for a, b in itertools.combinations(recs, 2):
        dev = max(dev, float(np.max(np.abs(a - b))))
    return ConsistencyReport(parts, recs, dev, tolerance)


def singlet_witness(values, tolerance: float = 1e-9) -> tuple[bool, float]:
    """Test ``tr(W sigma_mu (x) sigma_mu) = -1`` for ``mu = x, y, z``.

    Returns ``(is_singlet, fidelity)`` where ``fidelity = (1 - sum(values))/4``
    is the overlap of ``W`` with the singlet.
    """
    v = np.asarray(values, dtype=float).reshape(-1)
    if v.size != 3:
        raise ValueError(f"expected three correlation values, got {v.size}")
    if np.any(np.abs(v) > 1 + 1e-9):
        raise RangeError(f"correlation values must lie in [-1, 1], got {v.tolist()}")
    fid = (1.0 - float(v.sum())) / 4.0
    return bool(np.all(np.abs(v + 1) <= tolerance)), fid
