"""Exception types shared across the engine."""


class EnvelopeError(Exception):
    """Base class for all envlab-specific errors."""


class UnknownDensityError(EnvelopeError, KeyError):
    """Density name not present in the catalog."""


class InvalidParameterError(EnvelopeError, ValueError):
    """Density parameters fail validation."""


class ImproperDensityError(EnvelopeError, ValueError):
    """Sampling requested from an improper (analytic-only) density."""


class NonpositiveAmountError(EnvelopeError, ValueError):
    """An envelope amount or observation that must be positive is not."""


class EventProcessMismatchError(EnvelopeError, ValueError):
    """Host event contradicts the coin values fixed by the process."""


class InvalidIntervalError(EnvelopeError, ValueError):
    """Root search interval or grid specification is malformed."""


class OutOfBoundsError(EnvelopeError, ValueError):
    """Observed amount lies outside the declared content bounds."""


class NoConditionedSamplesError(EnvelopeError, RuntimeError):
    """No Monte-Carlo play landed inside the conditioning window."""
