"""Exception types raised across the package."""


class InputError(ValueError):
    """Malformed or inconsistent input (dimension mismatch, non-finite data, ...)."""


class ConfigError(ValueError):
    """Invalid configuration value or unknown configuration key."""


class CapacityError(RuntimeError):
    """An enumeration would exceed its configured size cap."""


class NumericalError(ArithmeticError):
    """A linear solve or factorization failed."""
