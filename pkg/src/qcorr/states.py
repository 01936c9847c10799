"""Standard single- and two-qubit states and operators."""

import numpy as np

from .ensembles import Ensemble

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}

UP_Z = np.array([1, 0], dtype=complex)
DOWN_Z = np.array([0, 1], dtype=complex)
UP_X = (UP_Z + DOWN_Z) / np.sqrt(2)
DOWN_X = (UP_Z - DOWN_Z) / np.sqrt(2)

# (|up,down> - |down,up>)/sqrt(2)
SINGLET = (np.kron(UP_Z, DOWN_Z) - np.kron(DOWN_Z, UP_Z)) / np.sqrt(2)


def singlet_projector() -> np.ndarray:
    """``(1 - sigma.sigma)/4``, built from the Pauli matrices."""
    ss = sum(np.kron(s, s) for s in PAULI.values())
    return (np.eye(4) - ss) / 4


def z_ensemble() -> Ensemble:
    return Ensemble([0.5, 0.5], [UP_Z, DOWN_Z])


def x_ensemble() -> Ensemble:
    return Ensemble([0.5, 0.5], [UP_X, DOWN_X])


def tilted_pair(p: float) -> tuple[np.ndarray, np.ndarray]:
    """``|R> = sqrt(p)|up> + sqrt(q)|down>`` and ``|L> = sqrt(p)|up> - sqrt(q)|down>``."""
    a, b = np.sqrt(p), np.sqrt(1 - p)
    return a * UP_Z + b * DOWN_Z, a * UP_Z - b * DOWN_Z


def tilted_ensemble(p: float) -> Ensemble:
    r, l = tilted_pair(p)
    return Ensemble([0.5, 0.5], [r, l])
