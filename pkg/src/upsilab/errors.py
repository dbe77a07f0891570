"""Exception hierarchy for upsilab.

Every error raised by the library derives from UpsilabError so callers
(and the CLI) can distinguish operational failures from property
violations, which are reported through return values instead.
"""


class UpsilabError(Exception):
    """Base class for all upsilab errors."""


class BadParams(UpsilabError):
    """Arguments violate a documented precondition."""


class OutOfRange(UpsilabError):
    """Input lies outside the interval where the operation is defined."""


class AmbiguousBall(UpsilabError):
    """A ball straddles a decision boundary (e.g. a half-integer).

    Signals that the caller must refine precision before retrying.
    """


class NotRefinable(UpsilabError):
    """The value's backend cannot reach the requested precision."""


class PrecisionExhausted(UpsilabError):
    """Working precision is insufficient to continue rigorously."""


class BoundaryUndefined(UpsilabError):
    """A continued-fraction residue hit a point where the sign symbol
    is undefined (residue exactly -1/2)."""


class InvalidSymbol(UpsilabError):
    """A continued-fraction symbol violates the validity rules
    (entry < 2, or the excluded pair (2, -))."""


class TerminatedInput(UpsilabError):
    """The expansion of a rational input terminated before the
    requested computation could proceed."""


class RationalRotation(UpsilabError):
    """A linearization divisor vanished exactly: the rotation number is
    rational and the fixed point is parabolic."""


class DegenerateSeries(UpsilabError):
    """A power-series coefficient needed by an estimator is zero."""


class PoleAtLattice(UpsilabError):
    """The covering map was evaluated on its pole lattice."""


class Undecided(UpsilabError):
    """Two expansions agree on every symbol computed up to the allowed
    depth, so their splitting generation is unknown."""


class EqualInputs(UpsilabError):
    """The two inputs are exactly equal where distinct values are
    required."""


class InsufficientPrecision(UpsilabError):
    """Every data point of a scan was excluded by its error bars."""
