"""Exception types shared across the toolkit."""


class MarketGuardError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(MarketGuardError, ValueError):
    """Malformed arguments: dimension mismatches, out-of-range values, empty corpora."""


class TrainingError(MarketGuardError):
    """Base class for classifier training failures."""


class DegenerateLabelsError(TrainingError):
    """Training set contains a single class."""


class ConvergenceError(TrainingError):
    """Optimizer exhausted its pass budget before meeting its tolerance."""

    def __init__(self, message, *, passes=None, kkt_violation=None):
        super().__init__(message)
        self.passes = passes
        self.kkt_violation = kkt_violation


class UnsupportedOperationError(MarketGuardError):
    """Operation is undefined for this model (e.g. primal weights of an RBF model)."""


class DegenerateModelError(MarketGuardError):
    """Model has no usable geometry (zero weight norm)."""


class SizeLimitError(MarketGuardError):
    """Problem exceeds the size the brute-force reference solver accepts."""


class OracleError(MarketGuardError):
    """Reference solver failed to reach its internal tolerance."""


class DatasetFormatError(MarketGuardError, ValueError):
    """A dataset line could not be parsed; the message names the offending line."""


class DatasetValidationError(MarketGuardError, ValueError):
    """Dataset parsed but violates cross-record constraints (e.g. duplicate seller ids)."""


class ConfigurationError(MarketGuardError):
    """Invalid ruleset, policy, or pipeline configuration."""


class ManifestMismatchError(ConfigurationError):
    """Model was built against a different feature manifest than this code uses."""


class NotFoundError(MarketGuardError, KeyError):
    """Referenced entity does not exist."""
