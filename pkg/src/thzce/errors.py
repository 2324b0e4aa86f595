"""Exception types shared across the package."""


class ThzceError(Exception):
    """Base class for all package errors."""


class ConfigurationError(ThzceError, ValueError):
    """A scenario/model configuration is invalid or geometrically degenerate."""


class EstimationError(ThzceError):
    """An estimator could not produce a result (e.g. rank-deficient pilots)."""


class FormatError(ThzceError):
    """A serialized file does not follow the expected layout."""


class ChecksumError(ThzceError):
    """A serialized file is truncated or fails its integrity check."""


class TrainingDivergedError(ThzceError):
    """Training loss blew up past the divergence guard."""


class NumericalError(ThzceError):
    """A non-finite value appeared where a finite one is required."""
