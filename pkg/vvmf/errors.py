"""
Exception hierarchy for vvmf.

Every error carries a human-readable ``detail`` and a structured ``context``;
``exit_code`` is the process status the CLI reports for it.
"""

from typing import Any


class VVMFError(Exception):
    exit_code = 3

    def __init__(self, detail: str, **context: Any):
        super().__init__(detail)
        self.detail = detail
        self.context = context

    def to_dict(self) -> dict:
        return {
            "error": type(self).__name__,
            "detail": self.detail,
            "context": {key: str(value) for key, value in self.context.items()},
        }


class InputError(VVMFError):
    """Unparsable, incomplete or out-of-range job input."""

    exit_code = 2


class DimensionMismatchError(VVMFError):
    pass


class SingularMatrixError(VVMFError):
    def __init__(self, detail: str, determinant: Any = 0, **context: Any):
        super().__init__(detail, determinant=determinant, **context)
        self.determinant = determinant


class GaloisError(VVMFError):
    pass


class NotRealError(VVMFError):
    pass


class SeriesError(VVMFError):
    pass


class PrecisionError(SeriesError):
    pass


class ResonanceError(VVMFError):
    def __init__(self, n: int, xi: int, eta: int, rhs: Any):
        super().__init__(
            f"resonance at order {n} for entry ({xi}, {eta}) with nonzero right-hand side",
            n=n,
            xi=xi,
            eta=eta,
            rhs=rhs,
        )
        self.n = n
        self.xi = xi
        self.eta = eta


class InconsistencyError(VVMFError):
    pass


class LambdaResonanceError(VVMFError):
    def __init__(self, xi: int, eta: int):
        super().__init__(
            f"1 + Lambda[{xi}] - Lambda[{eta}] vanishes; apply a lambda shift first",
            xi=xi,
            eta=eta,
        )
        self.xi = xi
        self.eta = eta


class ShiftError(VVMFError):
    pass


class ReductionError(VVMFError):
    pass


class DivisionByZeroError(VVMFError, ZeroDivisionError):
    """Division by an exact zero scalar."""


class InternalError(VVMFError):
    """Unexpected failure inside a computation; reported instead of a traceback."""

    exit_code = 4
