"""Exception hierarchy.

Every error raised on bad input derives from :class:`QcorrError`, which
itself derives from :class:`ValueError` so callers that only care about
"invalid input" can catch that.
"""


class QcorrError(ValueError):
    """Base class for all library errors."""


class DimensionError(QcorrError):
    pass


class HermiticityError(QcorrError):
    pass


class OrthonormalityError(QcorrError):
    pass


class NormalizationError(QcorrError):
    pass


class DensityError(QcorrError):
    """Matrix is not a valid density operator (trace or positivity)."""


class RealizationError(QcorrError):
    """Ensemble does not mix to the given density operator."""


class SupportError(RealizationError):
    """An ensemble member has weight outside the range of the density operator."""


class AncillaTooSmallError(QcorrError):
    pass


class BasisError(QcorrError):
    """Operator set is not a Hermitian basis (wrong size, not Hermitian, or singular Gram matrix)."""


class IncompleteDataError(QcorrError):
    def __init__(self, missing):
        self.missing = sorted(tuple(int(i) for i in m) for m in missing)
        shown = ", ".join(str(m) for m in self.missing[:20])
        more = "" if len(self.missing) <= 20 else f" ... ({len(self.missing)} total)"
        super().__init__(f"missing correlation records for indices: {shown}{more}")


class PhysicalityError(QcorrError):
    """Reconstructed matrix violates trace or positivity beyond tolerance."""


class RangeError(QcorrError):
    pass


class DomainError(QcorrError):
    pass


class CommutationError(QcorrError):
    """Observables share a tensor factor, so a joint measurement is not defined."""
