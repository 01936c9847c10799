"""Finite-shot simulation of local measurements.

Each record (index tuple) is measured with its own random stream derived
from the master seed and the record's position, so results do not depend
on evaluation order.  Outcomes are drawn by inverse-CDF lookup over the
exact joint eigenprojector probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ensembles import DensityOperator
from .errors import CommutationError, DimensionError
from .linalg import hermitian_eig, kron, partial_trace, permute_subsystems
from .tomography import (
    CorrelationRecord,
    Partition,
    RecordSet,
    _check_bases,
    project_physical,
    reconstruct_matrix,
)

GENERATOR = f"numpy.random.PCG64 via SeedSequence (numpy {np.__version__})"


@dataclass(frozen=True)
class ShotPlan:
    shots: int
    seed: int = 0
    targets: tuple = ()  # optional subset of index tuples; empty means all records

    def __post_init__(self):
        if int(self.shots) < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "shots", int(self.shots))
        object.__setattr__(self, "seed", int(self.seed))

    def generator(self, stream: int = 0) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=(int(stream),))))


@dataclass(frozen=True)
class OutcomeCounts:
    eigenvalues: list[np.ndarray]  # one array per observable, in eigenvector order
    probabilities: np.ndarray  # exact joint distribution, shape (k1, k2, ...)
    counts: np.ndarray  # same shape, sums to shots

    def values(self) -> np.ndarray:
        """Product of eigenvalues for each joint outcome."""
        return kron(*[np.asarray(e, dtype=float) for e in self.eigenvalues]).real.reshape(self.counts.shape)


def joint_distribution(w, observables: Sequence[tuple[Sequence[int], np.ndarray]], dims: Sequence[int]):
    """Exact joint outcome distribution of commuting local observables.

    ``observables`` lists ``(factors, matrix)`` pairs; the factor sets must be
    disjoint.  Factors not covered by any observable are traced out.
    Returns ``(eigenvalues, probabilities)``.
    """
    dims = tuple(int(d) for d in dims)
    m = w.matrix if isinstance(w, DensityOperator) else np.asarray(w, dtype=complex)
    if m.ndim == 1:
        m = np.outer(m, m.conj())
    used: list[int] = []
    for factors, _ in observables:
        for f in factors:
            if f in used:
                raise CommutationError(f"subsystem {f} is acted on by more than one observable")
            if not 0 <= f < len(dims):
                raise DimensionError(f"no subsystem {f} in a {len(dims)}-factor system")
            used.append(int(f))
    covered = sorted(used)
    reduced = partial_trace(m, dims, covered)
    sub_dims = [dims[f] for f in covered]
    reduced = permute_subsystems(reduced, sub_dims, [covered.index(f) for f in used])
    vals, vecs = [], []
    for factors, op in observables:
        d = int(np.prod([dims[f] for f in factors]))
        op = np.asarray(op, dtype=complex)
        if op.shape != (d, d):
            raise DimensionError(f"observable of shape {op.shape} does not act on factors {tuple(factors)}")
        lam, v = hermitian_eig(op)
        vals.append(lam)
        vecs.append(v)
    v = kron(*vecs)
    probs = np.einsum("ij,ik,kj->j", v.conj(), reduced, v).real
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    return vals, probs.reshape([len(l) for l in vals])


def sample_outcomes(w, observables, dims, plan: ShotPlan, stream: int = 0) -> OutcomeCounts:
    """Draw ``plan.shots`` joint outcomes; deterministic for a fixed ``(seed, stream)``."""
    vals, probs = joint_distribution(w, observables, dims)
    cdf = np.cumsum(probs.reshape(-1))
    cdf[-1] = 1.0
    u = plan.generator(stream).random(plan.shots)
    draws = np.searchsorted(cdf, u, side="right")
    counts = np.bincount(draws, minlength=cdf.size).reshape(probs.shape)
    return OutcomeCounts(vals, probs, counts)


@dataclass(frozen=True)
class EmpiricalRecord:
    indices: tuple[int, ...]
    estimate: float
    shots: int
    standard_error: float  # inf for a single shot


def _estimate(oc: OutcomeCounts) -> tuple[float, float]:
    vals = oc.values().reshape(-1)
    counts = oc.counts.reshape(-1)
    n = int(counts.sum())
    mean = float(counts @ vals) / n
    if n < 2:
        return mean, float("inf")
    var = float(counts @ (vals - mean) ** 2) / (n - 1)
    return mean, float(np.sqrt(var / n))


@dataclass(frozen=True, eq=False)
class EmpiricalRecordSet:
    partition: Partition
    bases: tuple
    records: tuple[EmpiricalRecord, ...]
    seed: int
    shots: int
    generator: str = GENERATOR

    def as_record_set(self) -> RecordSet:
        return RecordSet(self.partition, self.bases, tuple(CorrelationRecord(r.indices, r.estimate) for r in self.records))


def empirical_correlations(w, partition: Partition, bases=None, plan: ShotPlan | None = None) -> EmpiricalRecordSet:
    """Shot-mean estimates of every product-observable correlation.

    Record ``k`` (row-major over index tuples) uses random stream ``k``.
    """
    if plan is None:
        raise ValueError("a ShotPlan is required")
    partition = partition if isinstance(partition, Partition) else Partition(tuple(partition))
    bases = _check_bases(partition, bases)
    m = w.matrix if isinstance(w, DensityOperator) else np.asarray(w, dtype=complex)
    n = len(partition)
    shape = tuple(len(b) for b in bases)
    wanted = {tuple(t) for t in plan.targets} if plan.targets else None
    records = []
    for k, idx in enumerate(np.ndindex(*shape)):
        if wanted is not None and idx not in wanted:
            continue
        obs = [((f,), bases[f][i]) for f, i in zip(range(n), idx)]
        oc = sample_outcomes(m, obs, partition.dims, plan, stream=k)
        est, se = _estimate(oc)
        records.append(EmpiricalRecord(tuple(int(i) for i in idx), est, plan.shots, se))
    return EmpiricalRecordSet(partition, bases, tuple(records), plan.seed, plan.shots)


@dataclass
class EmpiricalReconstruction:
    raw: np.ndarray
    physical: np.ndarray
    raw_error: float | None = None
    physical_error: float | None = None
    min_raw_eigenvalue: float = field(default=0.0)


def reconstruct_empirical(records, reference=None) -> EmpiricalReconstruction:
    """Reconstruct from noisy estimates, then project onto density operators.

    ``records`` is an :class:`EmpiricalRecordSet` or a plain :class:`RecordSet`.
    With a ``reference`` density matrix the max-element errors are reported.
    """
    rs = records.as_record_set() if isinstance(records, EmpiricalRecordSet) else records
    raw = reconstruct_matrix(rs)
    phys = project_physical(raw)
    out = EmpiricalReconstruction(raw, phys, min_raw_eigenvalue=float(np.linalg.eigvalsh(raw)[0]))
    if reference is not None:
        ref = reference.matrix if isinstance(reference, DensityOperator) else np.asarray(reference, dtype=complex)
        out.raw_error = float(np.max(np.abs(raw - ref)))
        out.physical_error = float(np.max(np.abs(phys - ref)))
    return out
