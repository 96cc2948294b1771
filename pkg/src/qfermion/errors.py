"""Exception hierarchy.

The CLI maps these onto exit codes: domain/configuration problems exit 2,
verification failures 3, invariant violations 4.
"""


class QFermionError(Exception):
    pass


class DomainError(QFermionError, ValueError):
    """Input outside the documented domain of an operation."""


class ConfigurationError(DomainError):
    """Unsupported Lie type/rank or inconsistent instance data."""


class InadmissibleWeight(QFermionError):
    """C^{-1}(n - l) is not a vector of non-negative integers."""


class InvariantViolation(QFermionError, RuntimeError):
    """An internal identity that must hold exactly did not."""


class NotDivisible(InvariantViolation):
    """Exact division left a nonzero remainder."""


class VerificationFailure(QFermionError):
    """A checked identity failed; ``payload`` holds the diff."""

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload or {}
