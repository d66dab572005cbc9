"""Exception types raised by the certified linking computations."""


class CertilinkError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateDirection(CertilinkError):
    """A plane direction collapsed to (0, 0).

    Raised when an angle operation is asked to classify or build a triple
    whose direction vector is the origin.  During accumulation this can only
    happen when rounding destroyed a nearly-opposite pair of angles; the
    running error bound is no longer trustworthy at that point, so this is a
    hard error rather than a silent repair.
    """


class DegenerateSegments(CertilinkError):
    """A segment pair shares an endpoint or contains a zero-length segment."""


class IntersectionDetected(CertilinkError):
    """The segment-pair angle construction certified that segments intersect.

    A vanishing intermediate direction is impossible for disjoint segments,
    so hitting one means the segments touch (or rounding destroyed the
    configuration, which the caller must treat the same way).
    """


class CurveTooSmall(CertilinkError):
    """A closed polygonal curve needs at least three vertices."""


class NotClosed(CertilinkError):
    """A chain with nonzero boundary was passed where a closed loop is required."""


class NonGenericDirection(CertilinkError):
    """No generic projection direction was found within the retry budget."""


class ExponentRange(CertilinkError):
    """Power-of-two renormalization left the representable exponent range."""
