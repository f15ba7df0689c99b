"""Exception types shared across the package."""


class KleinianError(Exception):
    """Base class for all domain errors raised by this package."""


class ZeroVectorError(KleinianError):
    """A homogeneous coordinate vector was (numerically) zero."""


class ZeroMatrixError(KleinianError):
    """A matrix handed to a projective construction was (numerically) zero."""


class NotInvertibleError(KleinianError):
    """A group element lift had determinant too close to zero."""


class CoincidentPointsError(KleinianError):
    """Two points meant to span a line coincide projectively."""


class CoincidentLinesError(KleinianError):
    """Two lines meant to intersect in a point coincide projectively."""


class AmbiguousClassification(KleinianError):
    """Spectral data fell inside the dead band around a case boundary.

    Callers should re-run with a different tolerance rather than trust a
    guess.
    """


class NotEllipticError(KleinianError):
    """An order probe was requested for a non-elliptic element."""


class NonDiscreteWitness(KleinianError):
    """Evidence that the group is not discrete.

    Carries the witnessing word (a tuple of signed generator indices) and a
    short reason string.
    """

    def __init__(self, word, reason):
        self.word = tuple(word)
        self.reason = str(reason)
        super().__init__(f"non-discreteness witness {self.word}: {self.reason}")


class UnsupportedShapeError(KleinianError):
    """Closed-form powers were requested for a matrix shape without one."""


class InKernelError(KleinianError):
    """A pseudo-projective map was evaluated at a point of its kernel."""


class EmptySequenceError(KleinianError):
    """A sequence operation received a generator that yielded nothing."""


class ImagePointOnLineError(KleinianError):
    """The probe line passes through the image point, so no collapse occurs."""


class FullRankMemberError(KleinianError):
    """A rank-3 map has empty kernel and contributes nothing to the complement."""


class BallTooLargeError(KleinianError):
    """Word-ball enumeration exceeded the frontier cap."""


class LineNotInAccumulationError(KleinianError):
    """The probed line does not belong to the accumulation set."""


class EllipticInputError(KleinianError):
    """An attracting-line probe was requested for an elliptic element."""
