"""Exception hierarchy shared across the toolkit.

The split that matters downstream is CertificationError (and subclasses)
versus everything else: a certification failure means "this scenario could
not be verified", never "the identity is false".  Reporting code maps the
former to INCONCLUSIVE outcomes.
"""


class CollarIndexError(Exception):
    """Base class for all toolkit errors."""


class ExprError(CollarIndexError):
    """Base class for expression language errors."""


class ParseError(ExprError):
    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class EvalDomainError(ExprError):
    """Division by zero, sqrt of a negative number, overflow, non-finite result."""


class DimensionMismatchError(ExprError):
    """Input point dimension does not match the expression arity."""


class GeometryError(CollarIndexError):
    """Invalid domain/region parameters."""


class OutOfCollarError(GeometryError):
    """A point fell outside the collared model; the map escaped the collar."""


class AmbiguousPointError(GeometryError):
    """A float point sits inside the classification tolerance band."""


class CertificationError(CollarIndexError):
    """A numerical certificate (nonvanishing bound, sign margin, ...) could
    not be established.  Treat the computation as inconclusive."""


class BudgetExhaustedError(CertificationError):
    """Refinement budget ran out before certification succeeded."""


class DegenerateFixedSetError(CertificationError):
    """The fixed point (or zero) set does not look isolated; the index exists
    but cannot be certified at desk scale."""


class InternalConsistencyError(CollarIndexError):
    """Two routes that must agree did not.  Always a bug, never an input error."""


class InvalidComplexError(CollarIndexError):
    """A simplicial complex violates closure or the boundary-squared-zero law."""


class ScenarioError(CollarIndexError):
    """A scenario file failed to parse or validate."""
