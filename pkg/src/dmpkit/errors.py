"""Exception hierarchy shared by all dmpkit modules.

Two branches matter to callers (and to the CLI exit-code mapping):
``ValidationError`` for malformed inputs or contract violations, and
``NumericalError`` for failures that arise from the numbers themselves.
"""


class DmpKitError(Exception):
    """Base class for all dmpkit errors."""


class ValidationError(DmpKitError, ValueError):
    """Invalid argument, malformed file, or violated precondition."""


class NumericalError(DmpKitError, ArithmeticError):
    """Numerically degenerate input or failed numerical operation."""


class ZeroScaleError(NumericalError):
    """Goal equals start in some component, so the per-component forcing
    scale of the original formulation vanishes."""


class DegenerateCoverageError(NumericalError):
    """The basis-function sum vanishes somewhere on the phase range,
    typically because the overlap parameter is too small."""


class FullSupportError(ValidationError):
    """Partial weight update requested for a basis family whose supports
    cover the whole phase range; all weights would need recomputing."""


class NullTransformError(NumericalError):
    """Start and goal coincide, so the chord-to-chord transformation
    matrix would be null."""


class ConditioningError(NumericalError):
    """Linear system is singular to working precision."""

    def __init__(self, message: str, cond: float = float("inf")):
        super().__init__(message)
        self.cond = cond


class DivergenceError(NumericalError):
    """State became non-finite during integration."""


class AlignmentError(ValidationError):
    """A demonstration cannot be aligned (coincident endpoints)."""
