"""Exact SL(n)-invariant valuations on convex polytopes."""

from .exactnum import (
    CauchySolution,
    FieldMismatchError,
    Linear,
    RationalPart,
    Scalar,
    ScalarParseError,
    cauchy_eval,
)

__version__ = "0.1.0"

__all__ = [
    "CauchySolution",
    "FieldMismatchError",
    "Linear",
    "RationalPart",
    "Scalar",
    "ScalarParseError",
    "cauchy_eval",
    "__version__",
]
