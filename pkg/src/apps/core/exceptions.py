"""Exception hierarchy shared by all apps."""


class RjdError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(RjdError, ValueError):
    """An operation was called with arguments outside its contract."""


class ConfigValidationError(PreconditionError):
    """
    Raised by `RunConfig.clean()`.

    Attributes:
        errors (dict): Mapping of field name to a human readable message.
    """

    def __init__(self, errors):
        self.errors = dict(errors)
        message = "; ".join(f"{field}: {msg}" for field, msg in self.errors.items())
        super().__init__(message)


class LikelihoodError(RjdError):
    """A likelihood returned NaN or +inf."""


class SamplingError(RjdError):
    """
    Failure while advancing the nested sampling run.

    Attributes:
        iteration (int | None): Engine iteration at which the failure happened,
            attached by the engine when the error crosses the main loop.
    """

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration

    def with_iteration(self, iteration):
        self.iteration = iteration
        return self

    def __str__(self):
        message = super().__str__()
        if self.iteration is None:
            return message
        return f"{message} (iteration {self.iteration})"


class StuckWalkError(SamplingError):
    """The slice interval shrank below the resolvable width."""


class DegenerateGeometryError(SamplingError):
    """
    The live point covariance stayed singular after regularisation.

    Attributes:
        direction (numpy.ndarray | None): Unit-cube direction with the smallest
            variance (eigenvector of the smallest eigenvalue).
    """

    def __init__(self, message, direction=None, iteration=None):
        super().__init__(message, iteration=iteration)
        self.direction = direction


class UnknownProblemError(RjdError, KeyError):
    """The requested benchmark problem is not in the catalog."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown problem"


class TraceFormatError(RjdError):
    """
    A trace file could not be parsed.

    Attributes:
        line_number (int): 1-based line of the offending input.
    """

    def __init__(self, message, line_number):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class TraceWriteError(RjdError):
    """
    Writing a trace failed part way.

    Attributes:
        written (int): Records written before the failure.
    """

    def __init__(self, message, written):
        super().__init__(f"{message} (after {written} records)")
        self.written = written


class ReportError(RjdError):
    """Runs cannot be combined into the requested report."""
