"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A parameter violates its documented domain."""


class ConfigError(ParameterError):
    """An experiment configuration file or override is malformed."""


class DepthError(ParameterError):
    """A generation index exceeds the constructed depth."""


class BudgetError(RuntimeError):
    """A resource budget (atom count, grid size) would be exceeded."""


class SingularityError(ArithmeticError):
    """A kernel was evaluated at zero separation without truncation or exclusion."""
