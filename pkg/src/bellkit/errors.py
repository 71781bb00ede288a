"""Exception hierarchy.

Every error raised on bad input derives from :class:`BellkitError`, itself a
``ValueError``, so callers can catch either.
"""


class BellkitError(ValueError):
    """Base class for all input/validation errors raised by bellkit."""


class DimensionMismatch(BellkitError):
    pass


class NotHermitian(BellkitError):
    pass


class TraceNotOne(BellkitError):
    pass


class NotPsd(BellkitError):
    pass


class InvalidRepresentation(BellkitError):
    pass


class SymmetrizedRepUnsupported(BellkitError):
    pass


class NotSymmetrizedRep(BellkitError):
    pass


class IncompatibleReps(BellkitError):
    pass


class DifferentStates(BellkitError):
    pass


class NotBipartiteSquare(BellkitError):
    pass


class InvalidOutcomeSet(BellkitError):
    pass


class NotPsdEffect(BellkitError):
    def __init__(self, index: int, min_eigenvalue: float):
        self.index = index
        self.min_eigenvalue = min_eigenvalue
        super().__init__(
            f"NotPsdEffect: effect {index} has eigenvalue {min_eigenvalue:.3e} < 0"
        )


class Incomplete(BellkitError):
    def __init__(self, defect: float):
        self.defect = defect
        super().__init__(f"Incomplete: effects sum to identity only up to {defect:.3e}")


class UnknownOutcome(BellkitError):
    pass


class ImaginaryTrace(BellkitError):
    """A trace that should be real carries a significant imaginary part."""


class OutOfRange(BellkitError):
    pass


class NonpositiveBound(BellkitError):
    pass


class ZeroGammas(BellkitError):
    pass


class InvalidGammaConstraint(BellkitError):
    def __init__(self, residual_ad: float, residual_cb: float):
        self.residual_ad = residual_ad
        self.residual_cb = residual_cb
        super().__init__(
            "InvalidGammaConstraint: |g1*g4 + g2*g3| = "
            f"{residual_ad:.6g} and |g1*g2 + g3*g4| = {residual_cb:.6g}; one must vanish"
        )


class BoundMismatch(BellkitError):
    pass


class BoundNotUnit(BellkitError):
    pass


class UnknownProperty(BellkitError):
    pass


class InvalidDistribution(BellkitError):
    pass


class InvalidModel(BellkitError):
    pass


class WrongDimension(BellkitError):
    pass


class InvalidConfig(BellkitError):
    pass
