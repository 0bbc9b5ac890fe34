"""Certified fixed-point-index computations on compact domains with collars.

The package computes Brouwer degrees, fixed point indices, simplicial
Lefschetz numbers and boundary exit sets for concrete maps on a catalog of
desk-scale domains, and verifies the index identities relating them with
exact integer arithmetic.
"""

from .errors import (
    AmbiguousPointError,
    BudgetExhaustedError,
    CertificationError,
    CollarIndexError,
    DegenerateFixedSetError,
    DimensionMismatchError,
    EvalDomainError,
    GeometryError,
    InternalConsistencyError,
    InvalidComplexError,
    OutOfCollarError,
    ParseError,
    ScenarioError,
)
from .expr import MapExpr, parse

__version__ = "0.1.0"

__all__ = [
    "AmbiguousPointError",
    "BudgetExhaustedError",
    "CertificationError",
    "CollarIndexError",
    "DegenerateFixedSetError",
    "DimensionMismatchError",
    "EvalDomainError",
    "GeometryError",
    "InternalConsistencyError",
    "InvalidComplexError",
    "MapExpr",
    "OutOfCollarError",
    "ParseError",
    "ScenarioError",
    "parse",
    "__version__",
]
