"""Exception hierarchy shared across the package.

Callers can rely on three categories: bad inputs (ContractViolation),
iterative routines that failed to converge (ConvergenceError), and tensors
whose spectrum is more negative than floating-point noise permits
(PsdViolationError).  The command line maps these onto distinct exit codes.
"""


class ContractViolation(ValueError):
    """An argument breaks a documented precondition."""


class ConvergenceError(RuntimeError):
    """A numerical routine did not reach its target accuracy."""

    def __init__(self, message: str, residual: float | None = None):
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual


class PsdViolationError(RuntimeError):
    """A matrix expected to be positive semidefinite has a genuinely
    negative eigenvalue, beyond the tolerated rounding band."""

    def __init__(self, message: str, eigenvalue: float, floor: float):
        super().__init__(f"{message}: eigenvalue {eigenvalue:.6e} below floor {floor:.6e}")
        self.eigenvalue = eigenvalue
        self.floor = floor
