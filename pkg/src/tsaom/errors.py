"""Exception hierarchy shared across tsaom."""


class TsaomError(Exception):
    """Base class for all errors raised by tsaom."""


class DimensionMismatchError(TsaomError, ValueError):
    """Raised when vectors or matrices of different dimensions are combined."""


class SingularMatrixError(TsaomError, ValueError):
    """Raised when a matrix over GF(2) has no inverse."""


class SequenceLengthError(TsaomError, ValueError):
    """Raised when a transvection sequence length is out of range for its class."""


class ClassViolationError(TsaomError):
    """Raised when an oracle answers in a way its assumed function class forbids."""


class BudgetExceededError(TsaomError):
    """Raised when an evaluation budget or cap would be exceeded."""


class NotFoundError(TsaomError):
    """Raised when a search terminates without a verified optimum."""


class SpectrumSizeError(TsaomError, ValueError):
    """Raised when a brute-force transform is requested for too large a dimension."""


class InvalidSpecError(TsaomError, ValueError):
    """Raised when an experiment specification is inconsistent."""
