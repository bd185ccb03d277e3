"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid or incomplete system configuration."""


class MissingKeyError(ConfigError):
    """A required configuration key is absent."""


class OutOfRangeError(ConfigError):
    """A configuration value violates its documented bound."""


class GuardViolationError(ConfigError):
    """The low altitude would reach or exceed the high altitude."""


class GeometryError(ValueError):
    """A slant distance is shorter than the altitude below it."""


class InvalidAltitudePairError(ValueError):
    """Both UAVs high is not a schedulable altitude pair."""


class NonPositiveRateError(ValueError):
    """Mean activity rates must be strictly positive."""


class RateExceedsPopulationError(ValueError):
    """Per-user activation probability would exceed one."""
