"""Numerical tolerances shared by all modules.

The defaults are read at call time, so :func:`override` (or assigning to
``TOL`` fields) changes behaviour globally.
"""

from __future__ import annotations

import contextlib
import dataclasses
from dataclasses import dataclass


@dataclass
class Tolerances:
    norm: float = 1e-12  # state vector normalization
    herm: float = 1e-12  # max |A - A^dagger|
    unit: float = 1e-10  # max |U^dagger U - I|
    eig: float = 1e-10  # eigendecomposition residual
    rank: float = 1e-10  # eigenvalues above this count toward the rank
    trace: float = 1e-12  # density operator trace
    psd: float = 1e-10  # most negative eigenvalue allowed in a density operator
    realization: float = 1e-8  # ensemble must mix to W within this
    support: float = 1e-8  # projection residual outside range(W)
    zero_prob: float = 1e-14  # below this an outcome has no conditional state
    completion: float = 1e-8  # Gram-Schmidt candidate rejection threshold


TOL = Tolerances()


@contextlib.contextmanager
def override(**changes: float):
    """Temporarily replace tolerance values, e.g. ``with override(psd=1e-8): ...``."""
    saved = dataclasses.replace(TOL)
    for key, value in changes.items():
        if not hasattr(TOL, key):
            raise AttributeError(f"unknown tolerance {key!r}")
        setattr(TOL, key, float(value))
    try:
        yield TOL
    finally:
        for field in dataclasses.fields(TOL):
            setattr(TOL, field.name, getattr(saved, field.name))
