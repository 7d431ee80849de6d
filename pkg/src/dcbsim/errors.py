"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Unsupported or inconsistent configuration value."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class StateError(RuntimeError):
    """Channel bookkeeping or event-engine invariant violated."""


class InsufficientDataError(RuntimeError):
    """Too few post-warmup events to estimate a statistic."""
