"""
Exception hierarchy shared by the services and the command layer.
Each error carries the process exit code the CLI reports for it.
"""


class SignBoundError(Exception):
    """Base error with an exit code and a human readable detail."""

    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InputError(SignBoundError):
    """Malformed tokens, arity or dimension mismatch, invalid files."""

    exit_code = 2


class SchemeError(InputError):
    """A proof scheme that fails to parse or is structurally invalid."""


class OptimalityError(InputError):
    """Infeasible or non-optimal input handed to the SQP or dual routines."""


class SolverError(SignBoundError):
    """Internal search failure: no exactly validated optimum was found."""

    exit_code = 3
