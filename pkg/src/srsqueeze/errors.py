"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class ConfigError(ValueError):
    """Malformed or inconsistent configuration."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class ConvergenceError(RuntimeError):
    """A numerical procedure failed to reach its tolerance."""


class SteadyStateError(ConvergenceError):
    """The Liouville steady-state system could not be solved."""


class DopplerConvergenceError(ConvergenceError):
    def __init__(self, message, suggested_order=None):
        self.suggested_order = suggested_order
        super().__init__(message)


class RegimeWarning(UserWarning):
    """A formula was evaluated outside the regime where it is accurate."""


class UsageError(ValueError):
    """An operation was called with an argument of the wrong kind."""
