"""Shared exception types."""


class ConfigurationError(ValueError):
    """Bad configuration: unknown property, malformed objective, etc."""


class UsageError(ValueError):
    """Caller misuse: mismatched parameters, missing inputs."""
