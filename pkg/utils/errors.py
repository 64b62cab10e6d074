"""Exception hierarchy shared by the engines, operators and the CLI."""


class FHTError(Exception):
    """Base class for every error raised by the toolkit."""


class DomainError(FHTError, ValueError):
    """A point or parameter lies outside the domain of an operation."""


class RejectedInputError(FHTError, ValueError):
    """An input function produced a non-finite value where one is required."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class SingularPointError(FHTError, ValueError):
    """Evaluation requested exactly at a jump of the input."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class ConvergenceError(FHTError, ArithmeticError):
    """Adaptive integration exhausted its panel budget."""

    def __init__(self, message, value=None, est_error=None, subdivisions=None):
        super().__init__(message)
        self.value = value
        self.est_error = est_error
        self.subdivisions = subdivisions


class RangeError(FHTError):
    """The right-hand side of T(f) = g is not in the range of T on L-infinity."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ExpressionError(FHTError, ValueError):
    """A function expression could not be parsed."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
