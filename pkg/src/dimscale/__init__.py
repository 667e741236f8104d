"""Finite partial commutative monoids, continuous dimension scales and espaliers."""

from dimscale.errors import (
    DecompositionError,
    DimScaleError,
    NoExtremumError,
    ParseError,
    PreconditionError,
    SizeGuardError,
)
from dimscale.kernels import BACKEND
from dimscale.monoid import (
    FormalSum,
    MonoidTable,
    RefinementMatrix,
    adjoin_infinity,
    alg_leq,
    check_refinement,
    find_refinement,
    lower_submonoid,
    ref_eq,
    validate_pcm,
    verify_lower_embedding,
)
from dimscale.values import Ordinal, Value, ValueMonoid

__all__ = [
    "BACKEND",
    "DecompositionError",
    "DimScaleError",
    "FormalSum",
    "MonoidTable",
    "NoExtremumError",
    "Ordinal",
    "ParseError",
    "PreconditionError",
    "RefinementMatrix",
    "SizeGuardError",
    "Value",
    "ValueMonoid",
    "adjoin_infinity",
    "alg_leq",
    "check_refinement",
    "find_refinement",
    "lower_submonoid",
    "ref_eq",
    "validate_pcm",
    "verify_lower_embedding",
]
