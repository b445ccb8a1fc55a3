from typing import Optional


class BicliqueError(Exception):
    """Base class for every error raised by this package."""


class StructureError(BicliqueError, ValueError):
    def __init__(self, message: str, index: Optional[int] = None):
        if index is not None:
            message = f"biclique {index}: {message}"
        super().__init__(message)
        self.index = index


class ParseError(BicliqueError, ValueError):
    def __init__(self, message: str, line_no: Optional[int] = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class DomainError(BicliqueError, ValueError):
    pass


class UsageError(BicliqueError, ValueError):
    pass


class PreconditionError(BicliqueError, ValueError):
    pass


class SizeMismatchError(BicliqueError, ValueError):
    pass


class IncompleteColoringError(BicliqueError, ValueError):
    pass


class InconsistentTraceError(BicliqueError, ValueError):
    pass


class ValidationFailed(BicliqueError, ValueError):
    """Input rejected by the partition or cover gate; carries the report."""

    def __init__(self, report):
        super().__init__(report.describe())
        self.report = report


class InvariantViolation(BicliqueError, RuntimeError):
    pass


class ResourceError(BicliqueError, RuntimeError):
    pass


class GuardExceeded(ResourceError):
    pass


class BudgetExceeded(ResourceError):
    pass


class GenerationCapacityError(ResourceError):
    pass
