"""Exception types raised across the package."""


class SpinformError(Exception):
    """Base class for all package errors."""


class RepresentationError(SpinformError, ValueError):
    """A matrix is not of the form v . sigma (Hermitian, traceless)."""


class DomainError(SpinformError, ValueError):
    """An argument lies outside the domain of an operation."""


class PurityError(SpinformError, ValueError):
    """A pure state was required but a mixed one was supplied."""


class DegenerateBranchError(SpinformError, ValueError):
    """The co-quantum and electron polar angles coincide (no collapse branch)."""


class FieldRangeError(SpinformError, ValueError):
    """A tabulated field was evaluated outside its time grid."""


class IntegrationError(SpinformError, RuntimeError):
    """A trajectory produced a non-finite state.

    ``snapshot`` holds the step index, time and the last finite state.
    """

    def __init__(self, message, snapshot=None):
        super().__init__(message)
        self.snapshot = snapshot or {}


class ConfigError(SpinformError, ValueError):
    """A run configuration is malformed."""
