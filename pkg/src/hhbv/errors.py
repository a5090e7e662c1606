"""Exception types shared across the package."""


class HHBVError(Exception):
    """Base class for all errors raised by hhbv."""


class CompositionNonZero(HHBVError):
    """Two consecutive differentials do not compose to zero."""


class NotAChainMap(HHBVError):
    """An operator does not descend to homology."""


class WindowTooSmall(HHBVError):
    """A requested degree is not certified by the truncation window."""

    def __init__(self, degrees, message=None):
        self.degrees = sorted(degrees)
        super().__init__(message or f"degrees not certified by the window: {self.degrees}")


class UnsupportedRing(HHBVError):
    """The operation is only defined over a restricted set of rings."""


class NotDualizing(HHBVError):
    """A functional does not induce a perfect pairing."""


class TruncationEscape(HHBVError):
    """A product or operator value lies outside the truncation window."""


class NotFinitelyGenerated(HHBVError):
    """The declared generators do not generate the table in its window."""


class WindowNonConclusive(HHBVError):
    """A negative answer cannot be certified inside the window."""


class SchemaError(HHBVError):
    """A JSON document does not follow the expected schema."""
