"""Exception hierarchy.  Each class carries the CLI exit code it maps to."""


class StellarError(Exception):
    exit_code = 1


class ConfigurationError(StellarError, ValueError):
    """Invalid root-system type, rank, index or input format."""

    exit_code = 1


class CapExceeded(StellarError):
    """A group, ideal or enumeration exceeds the configured size budget."""

    exit_code = 2


class NotAnInversionSet(StellarError, ValueError):
    exit_code = 1


class SelfCheckError(StellarError):
    """An internal consistency check failed.  Should never happen."""

    exit_code = 3
