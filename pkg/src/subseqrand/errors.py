"""Exception types shared across the package."""


class RejectedInputError(ValueError):
    """Caller passed arguments that violate an operation's precondition."""


class UndefinedInformationError(ValueError):
    """A string has zero probability under the measure in use.

    ``position`` is the 1-based index of the first offending symbol.
    """

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class TruncatedCodeError(ValueError):
    """The code ran out before the requested number of symbols was determined."""

    def __init__(self, message: str, recovered: int):
        super().__init__(message)
        self.recovered = recovered


class ConfigError(ValueError):
    """An experiment configuration is malformed or violates a scenario precondition."""
