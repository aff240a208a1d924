class RReachError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(RReachError, ValueError):
    pass


class ResourceCapError(RReachError):
    """A requested computation exceeds a configured size cap."""


class DegeneracyError(RReachError, ArithmeticError):
    pass


class UnsupportedParameters(RReachError, ValueError):
    pass
