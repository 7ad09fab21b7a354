"""Exception types raised across the package."""


class InvalidArgumentError(ValueError):
    """An argument is outside the documented domain."""


class HypothesisViolationError(ValueError):
    """The function vanishes at an endpoint of the counting interval."""


class NumericalFailureError(RuntimeError):
    """A numerical routine could not reach a trustworthy answer."""


class InsufficientDataError(ValueError):
    """Too few usable observations for the requested fit."""
