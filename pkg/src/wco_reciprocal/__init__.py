"""Reciprocals of weighted composition operators on finite discrete measure spaces."""

from .measure_space import (
    DiscreteMeasureSpace,
    ValidationError,
    WeightedSymbol,
    build_space,
    build_symbol,
    inner_product,
)
from .operator_core import (
    conditional_expectation,
    expectation_pushforward,
    kernel_projector,
    matrix_of,
    radon_nikodym,
)
from .reciprocal import (
    ReciprocalPair,
    adjoint_reciprocal,
    barcelona_reciprocal,
    composition_reciprocal,
    derived_symbol_hat,
    multiplication_reciprocal,
    reciprocal_pair,
    unitary_part,
    wco_reciprocal,
)
from .report import Check, VerificationReport

__version__ = "0.1.0"
