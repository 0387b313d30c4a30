"""Exact Coxeter groups, Soergel modules and Lefschetz-package verification."""

from .bsmod import (
    GradedModule,
    bs_module,
    coinvariant_module,
    decompose,
    intersection_form,
    isomorphic,
    soergel_module,
)
from .coxeter import (
    CoxeterSystem,
    build_system,
    descriptor_to_matrix,
    enumerate_group,
    shared_system,
)
from .errors import (
    CoxHodgeError,
    GroupInfiniteError,
    InternalInvariantError,
    InvalidInputError,
    NonLinearError,
    NotReducedError,
)
from .hodge import AmpleWeight, LefschetzReport, run_check
from .polyring import Polynomial, parse_polynomial, ring_of, schubert_calculus
from .scalars import FieldContext, FieldElement, cos_fraction, field_context, qnum, sign

__all__ = [
    "AmpleWeight",
    "CoxHodgeError",
    "CoxeterSystem",
    "FieldContext",
    "FieldElement",
    "GradedModule",
    "GroupInfiniteError",
    "InternalInvariantError",
    "InvalidInputError",
    "LefschetzReport",
    "NonLinearError",
    "NotReducedError",
    "Polynomial",
    "bs_module",
    "build_system",
    "coinvariant_module",
    "cos_fraction",
    "decompose",
    "descriptor_to_matrix",
    "enumerate_group",
    "field_context",
    "intersection_form",
    "isomorphic",
    "parse_polynomial",
    "qnum",
    "ring_of",
    "run_check",
    "schubert_calculus",
    "shared_system",
    "sign",
    "soergel_module",
]
