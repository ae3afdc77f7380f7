"""Exception hierarchy."""


class EpimatchError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(EpimatchError, ValueError):
    """An economy violates one of its defining inequalities."""


class SolverError(EpimatchError):
    """Raised when equilibrium computation cannot produce a trustworthy answer."""


class InvalidTolerance(SolverError, ValueError):
    pass


class BracketExhausted(SolverError):
    """More validated roots than the model permits: a numerical defect."""


class DegenerateRoot(SolverError):
    """The fixed point is tangent (w' == 1); stability is not classified."""


class TrackingLost(SolverError):
    """A tracked equilibrium vanished inside the finite-difference stencil."""


class InvalidStep(SolverError, ValueError):
    pass


class PathInvalid(SolverError, ValueError):
    pass


class InvalidIntervention(EpimatchError, ValueError):
    pass


class MaxIterExceeded(SolverError):
    pass


class ConfigError(EpimatchError, ValueError):
    """Malformed scenario configuration. Carries the offending key and line."""

    def __init__(self, message, key=None, line=None):
        self.key = key
        self.line = line
        where = []
        if key is not None:
            where.append(f"key {key!r}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
