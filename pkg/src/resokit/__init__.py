"""resokit: resonant and repeated-root ODE solutions as eigenvalue derivatives.

The package builds closed-form particular solutions for linear ODEs forced by
their own homogeneous solutions (and the matching repeated-root families) by
differentiating a parametrized homogeneous solution with respect to the
operator eigenvalue, and verifies every closed form by exact symbolic operator
application, jet/finite-difference cross-checks, and quadrature oracles.
"""

from . import jets, specfun, symexpr  # noqa: F401
from .errors import (  # noqa: F401
    DomainError,
    EvalOverflowError,
    ExprError,
    JetError,
    ParseError,
    PoleError,
    QuadratureError,
    ResokitError,
    SeriesError,
)

__version__ = "0.1.0"
