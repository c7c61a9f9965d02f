"""Exception hierarchy shared by all engine modules."""


class QrwrError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(QrwrError, ValueError):
    """An argument is outside the physically meaningful domain."""


class InfeasibleError(QrwrError):
    """The requested quantity is unbounded (e.g. zero signal or efficiency)."""


class ConfigError(QrwrError, ValueError):
    """A scenario configuration is malformed or inconsistent."""
