"""Search, verify and transform exact-repair minimum-storage regenerating codes
over small finite fields."""

from .conditions import (
    check_general_position,
    check_independence,
    check_independence_symmetric,
    check_recovery,
    check_recovery_symmetric,
    derive_b_vectors,
    enumerate_y_subspaces,
    verify,
)
from .galois import FieldElement, FieldSpec, field_of_order, make_field
from .linalg import FieldMatrix
from .model import (
    CodeParameters,
    RegeneratingCode,
    SymmetricSeed,
    column_transform,
    expand,
    rates,
    rotation_matrix,
    row_transform,
    to_systematic,
)
from .search import SearchConfig, SearchReport, merge_reports, run_search, shard

__version__ = "0.1.0"

__all__ = [
    "CodeParameters",
    "FieldElement",
    "FieldMatrix",
    "FieldSpec",
    "RegeneratingCode",
    "SearchConfig",
    "SearchReport",
    "SymmetricSeed",
    "check_general_position",
    "check_independence",
    "check_independence_symmetric",
    "check_recovery",
    "check_recovery_symmetric",
    "column_transform",
    "derive_b_vectors",
    "enumerate_y_subspaces",
    "expand",
    "field_of_order",
    "make_field",
    "merge_reports",
    "rates",
    "rotation_matrix",
    "row_transform",
    "run_search",
    "shard",
    "to_systematic",
    "verify",
]
