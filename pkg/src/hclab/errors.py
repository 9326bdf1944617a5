"""Exception types shared across the workbench."""

from __future__ import annotations


class GuardError(ValueError):
    """A computation was refused because its size estimate exceeds a hard guard.

    ``estimate`` is the offending size and ``limit`` the guard it broke.
    """

    def __init__(self, what: str, estimate: int, limit: int):
        self.what = what
        self.estimate = int(estimate)
        self.limit = int(limit)
        super().__init__(f"{what}: size estimate {self.estimate} exceeds guard {self.limit}")


class SingularMatrixError(ArithmeticError):
    """Raised by :func:`hclab.exactlin.invert` when the matrix has deficient rank."""

    def __init__(self, rank: int, size: int):
        self.rank = rank
        self.size = size
        super().__init__(f"matrix is singular: rank {rank} < {size}")
