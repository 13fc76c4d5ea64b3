"""Exception types shared across the package.

Domain violations, overflow, and numerical-budget exhaustion are kept as
distinct types so callers (and the verification harness) can tell a genuine
tolerance failure apart from an evaluation that never produced a number.
"""


class ResokitError(Exception):
    """Base class for all package errors."""


class DomainError(ResokitError):
    """Argument outside the mathematical domain of a function or expression."""


class EvalOverflowError(ResokitError):
    """Result exceeds double range; distinct from a domain violation."""


class PoleError(DomainError):
    """Evaluation at a pole (e.g. gamma at a nonpositive integer)."""


class SeriesError(ResokitError):
    """A series failed its tail bound within the term budget."""


class QuadratureError(ResokitError):
    """Adaptive quadrature exhausted its subdivision budget."""


class ParseError(ResokitError):
    """Expression text does not conform to the grammar."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class ExprError(ResokitError):
    """Invalid expression construction or unsupported operation on one."""


class JetError(ResokitError):
    """Invalid jet arithmetic (mismatched bases/orders, singular reciprocal)."""
