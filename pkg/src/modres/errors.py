"""Exception types shared across the package.

The CLI maps these onto exit codes: 2 for input-domain errors, 3 for
capacity errors.
"""


class InputDomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class CapacityError(RuntimeError):
    """The request exceeds an enumeration guard."""


class GraphFormatError(InputDomainError):
    """Malformed graph text."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
