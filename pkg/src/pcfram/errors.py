"""Exception types.  Each carries a short machine-readable ``code`` for the CLI."""


class PcframError(Exception):
    code = "error"
    exit_status = 2

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


class InvalidInput(PcframError, ValueError):
    code = "invalid-input"


class DegenerateMap(InvalidInput):
    code = "degenerate-map"


class DegreeTooSmall(InvalidInput):
    code = "degree-too-small"


class InseparableMap(PcframError):
    code = "inseparable-map"


class BudgetExceeded(PcframError):
    code = "budget"
    exit_status = 3


class PostcriticalAlpha(PcframError):
    """The base point is a critical value of an iterate, so the preimage polynomial is not squarefree."""

    code = "alpha-postcritical"


class ExceptionalPoint(PcframError):
    code = "alpha-exceptional"


class PreperiodicPoint(PcframError):
    code = "preperiodic"


class NonInvariantLine(PcframError):
    code = "line-not-invariant"
