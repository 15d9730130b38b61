"""Exception hierarchy shared by all modules."""


class SimmaError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SimmaError, ValueError):
    """A parameter lies outside the mathematical domain of an operation."""


class ConfigError(SimmaError, ValueError):
    """Malformed or incomplete instance configuration."""


class NonIntegrable(DomainError):
    pass


class NotAbsolutelyContinuous(DomainError):
    pass


class UnnormalizableMarks(DomainError):
    pass


class CenteringNotImplemented(SimmaError, NotImplementedError):
    pass


class InsufficientPaths(SimmaError, ValueError):
    pass


class WellDefinednessViolation(DomainError):
    pass


class NonDeterministic(DomainError):
    """The random measure has neither Gaussian nor jump part."""


class ExponentsUnknown(DomainError):
    """A finiteness question needs power-law exponents that were not declared."""
