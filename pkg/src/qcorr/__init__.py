"""Ensemble steering, correlation tomography and Hardy-state probabilities."""

from .ensembles import DensityOperator, Ensemble, density_from_ensemble, eigen_ensemble, mixing_matrix
from .linalg import extend_to_unitary, hermitian_eig, kron, partial_trace
from .steering import project_ancilla, purify, steer, steering_basis, theorem1_witness
from .tomography import (
    OperatorBasis,
    Partition,
    RecordSet,
    correlations,
    diagonal_element,
    expansion_coeffs,
    hermitian_basis,
    offdiagonal_element,
    reconstruct,
    resolution_consistency,
    singlet_witness,
)

__version__ = "0.1.0"
