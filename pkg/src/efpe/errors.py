"""Exception hierarchy shared across the solver pipeline.

The CLI maps these onto exit codes: game/result format problems exit 2,
solver failures exit 3, verification failures exit 4.
"""


class EfpeError(Exception):
    """Base class for all errors raised by this package."""


class GameFormatError(EfpeError):
    """Game or result document is syntactically or semantically invalid."""


class SolverError(EfpeError):
    """A pipeline stage failed to produce a solution."""


class SingularMatrixError(SolverError):
    """A matrix that must be invertible has an identically zero determinant."""


class RayTerminationError(SolverError):
    """Complementary pivoting escaped along a secondary ray.

    The instances built by this package satisfy structural conditions that
    rule this out, so seeing it indicates a bug or a hand-built instance
    outside those conditions.
    """


class PivotBudgetError(SolverError):
    """The pivot budget was exhausted before reaching a solution."""


class EpsilonRangeError(SolverError):
    """A requested perturbation is outside the feasible range (0, 1/nu]."""


class EpsilonBitsCapError(SolverError):
    """The exact perturbation threshold needs more bits than the configured cap."""


class UnboundedLimitError(SolverError):
    """A basic solution component diverges as the perturbation vanishes.

    Cannot happen for a basis certified on an interval (0, eps*]; signals a
    bug upstream.
    """


class VerificationError(EfpeError):
    """A computed result failed an independent equilibrium check."""
