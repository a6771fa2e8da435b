"""Exception hierarchy shared by every layer of the package.

Library code raises these; orchestration layers (`src.main`, `src.bench.runner`)
catch them, log them and translate them into exit codes or manifest entries.
Each class also derives from the closest builtin so callers that only know
about `ValueError` / `ArithmeticError` keep working.
"""

from typing import Optional, Sequence, Tuple


class AsvrgError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(AsvrgError, ValueError):
    """Two operands have incompatible shapes."""

    def __init__(self, what: str, expected: int, actual: int):
        self.what = what
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what}: expected dimension {expected}, got {actual}")


class ConvergenceError(AsvrgError, ArithmeticError):
    """An iterative kernel ran out of iterations."""

    def __init__(self, message: str, last_values: Tuple[float, float]):
        self.last_values = last_values
        super().__init__(f"{message} (last two estimates: {last_values[0]!r}, {last_values[1]!r})")


class FactorizationError(AsvrgError, ArithmeticError):
    """Cholesky factorization broke down on a non-positive pivot."""

    def __init__(self, pivot: int):
        self.pivot = pivot
        super().__init__(f"matrix is not positive definite: factorization failed at pivot {pivot}")


class UnsupportedSizeError(AsvrgError, ValueError):
    """The dense factorization would exceed the configured dimension limit."""

    def __init__(self, dim: int, limit: int):
        self.dim = dim
        self.limit = limit
        super().__init__(
            f"dimension {dim} exceeds the dense factorization limit {limit}; "
            "configure the solver with chi=1 (linearized x-update)"
        )


class UnsupportedProblemError(AsvrgError, ValueError):
    """The problem structure is outside what a closed-form update supports."""


class ParseError(AsvrgError, ValueError):
    """A dataset file is malformed."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(f"{message}{where}")


class ScheduleError(AsvrgError, ValueError):
    """Weight or penalty parameters violate their admissible ranges."""


class DivergenceError(AsvrgError, ArithmeticError):
    """A solver produced a non-finite iterate or an exploding objective."""

    def __init__(self, message: str, outer: int, inner: int, values: Sequence[float] = ()):
        self.outer = outer
        self.inner = inner
        self.values = tuple(values)
        super().__init__(f"{message} at outer iteration s={outer}, inner step t={inner}")
