"""Exception hierarchy shared by the simulator, analytics and CLI."""


class ElectionError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ElectionError, ValueError):
    """An argument lies outside the domain of an operation."""


class BoundaryError(DomainError):
    """The requested point sits on or beyond a divergence boundary."""


class ModelViolationError(DomainError):
    """A slot action is not permitted by the channel model."""


class EnumerationCapError(DomainError):
    """An exact computation would exceed the configured enumeration cap."""


class EmptyTrialSetError(DomainError):
    """A statistical estimate was requested over zero trials."""


class InsufficientSampleError(DomainError):
    """Too few samples for the requested statistical check."""


class IntegrityError(ElectionError, AssertionError):
    """A protocol safety property was violated (e.g. two leaders)."""
