"""Codes of points and subspaces of PG(n, q), blocking sets and their dual codewords."""

__version__ = "0.1.0"

from .errors import BudgetExceeded, PGCodeError, PreconditionError, TheoremViolation
from .gf import GF, Field, FieldElement, field_arithmetic, subfield_embed, trace_to_prime
from .geometry import ProjectiveSpace, Subspace, projective_space, theta
from .codes import LinearCode, code_from_incidence, dual, enumerate_weights, minimum_distance
from .blocking import PointSet, essential_points, is_k_blocking_set, minimal_reduce

__all__ = [
    "BudgetExceeded",
    "Field",
    "FieldElement",
    "GF",
    "LinearCode",
    "PGCodeError",
    "PointSet",
    "PreconditionError",
    "ProjectiveSpace",
    "Subspace",
    "TheoremViolation",
    "code_from_incidence",
    "dual",
    "enumerate_weights",
    "essential_points",
    "field_arithmetic",
    "is_k_blocking_set",
    "minimal_reduce",
    "minimum_distance",
    "projective_space",
    "subfield_embed",
    "theta",
    "trace_to_prime",
]
