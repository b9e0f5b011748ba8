"""Exception hierarchy shared by every module of the package."""


class NCPError(Exception):
    """Base class for all package errors."""


class DimensionError(NCPError, ValueError):
    """Matrix shapes are incompatible with the model or algebra."""


class MixedAlgebraError(NCPError, ValueError):
    """Operands were built over different coefficient algebras."""


class SpanError(NCPError, ValueError):
    """A coefficient does not lie in the coefficient algebra."""


class CapExceededError(NCPError, ValueError):
    """A degree, term, dimension or expansion cap was exceeded."""


class RadiusError(NCPError, ValueError):
    """The functional-calculus radius condition ``||X|| < R`` is violated."""
