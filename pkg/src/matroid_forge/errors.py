"""Exception hierarchy.  Each class maps to one CLI exit code."""


class MatroidError(Exception):
    exit_code = 1


class DomainError(MatroidError, ValueError):
    """A subset mentions elements outside the ground set."""


class ArgumentError(MatroidError, ValueError):
    """Structurally incompatible arguments (overlaps, ground mismatch)."""


class InvalidMatroidError(MatroidError, ValueError):
    """A set family fails the independence axioms."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InvalidInputError(MatroidError, ValueError):
    """A set that should be commonly independent is not."""


class ConditionViolatedError(MatroidError):
    """Raised when the no-N-independent-base condition fails."""

    def __init__(self, violating_w: int, base_b: int):
        from .bits import fmt

        super().__init__(f"condition violated by W={fmt(violating_w)} with base {fmt(base_b)}")
        self.violating_w = violating_w
        self.base_b = base_b


class CapacityError(MatroidError):
    """Exhaustive work requested above a configured threshold."""

    exit_code = 3


class InstanceError(MatroidError, ValueError):
    """Malformed instance document; ``path`` locates the offending node."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
