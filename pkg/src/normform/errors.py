"""Exception types shared across the package."""


class NormformError(Exception):
    """Base class for every error raised by normform."""


class InvalidInput(NormformError, ValueError):
    pass


class InvalidDiscriminant(InvalidInput):
    pass


class InvalidParameter(InvalidInput):
    pass


class InvalidConfig(InvalidInput):
    pass


class InvalidResidue(InvalidInput):
    pass


class NotApplicable(InvalidInput):
    """Raised when an arithmetic statement is only claimed for other inputs."""


class PreconditionViolated(NormformError, ValueError):
    pass


class OutOfRange(NormformError, IndexError):
    pass


class EmptyAverage(NormformError, ZeroDivisionError):
    pass


class ResourceLimit(NormformError, MemoryError):
    """The request would exceed a configured enumeration or sieving cap."""


class CacheIntegrityError(NormformError, OSError):
    pass


class NumericalFailure(NormformError, ArithmeticError):
    pass


class ArithmeticOverflow(NormformError, OverflowError):
    pass
