"""Field reduction, Desarguesian spreads, linear sets and blocking sets in PG(n, q^t)."""

from .errors import AmbientMismatch, BoundExceeded, PreconditionError
from .gf import FieldTower, FieldElement, make_tower, tower_for_order, arith
from .pg import (
    PG, ProjPoint, Subspace, space, gaussian_coeff, enumerate_points, enumerate_subspaces,
    span, meet, incident, subspaces_through,
)
from .reduction import (
    PointSet, DesarguesianSpread, field_reduce, linear_set, is_scattered,
    classify_line_linear_set, enumerate_sublines, enumerate_baer_sublines, certify_linear,
)
from .blocking import (
    BlockingContext, is_k_blocking, tangent_space_exists, is_minimal, is_small,
    minimality_criterion, spectrum, mod_profile, classify_space, secant_census,
    span_closure_check,
)
from .verify import (
    moment_counts, gap_evaluate, scan_subline_intersections, scan_baer_intersections,
    construct_linear_blocking, audit_linearity,
)

__version__ = "0.1.0"

__all__ = [
    "AmbientMismatch",
    "BoundExceeded",
    "PreconditionError",
    "FieldTower",
    "FieldElement",
    "make_tower",
    "tower_for_order",
    "arith",
    "PG",
    "ProjPoint",
    "Subspace",
    "space",
    "gaussian_coeff",
    "enumerate_points",
    "enumerate_subspaces",
    "span",
    "meet",
    "incident",
    "subspaces_through",
    "PointSet",
    "DesarguesianSpread",
    "field_reduce",
    "linear_set",
    "is_scattered",
    "classify_line_linear_set",
    "enumerate_sublines",
    "enumerate_baer_sublines",
    "certify_linear",
    "BlockingContext",
    "is_k_blocking",
    "tangent_space_exists",
    "is_minimal",
    "is_small",
    "minimality_criterion",
    "spectrum",
    "mod_profile",
    "classify_space",
    "secant_census",
    "span_closure_check",
    "moment_counts",
    "gap_evaluate",
    "scan_subline_intersections",
    "scan_baer_intersections",
    "construct_linear_blocking",
    "audit_linearity",
]
