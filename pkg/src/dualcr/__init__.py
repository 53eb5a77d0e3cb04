"""Numerical laboratory for the projective-dual CR geometry of circular
strongly convex hypersurfaces in C^2: dual frames, third-order tangential
operators, duality pairings, and constructive decompositions of sums of
CR functions from competing tangential structures.
"""

from .config import Settings, load_config
from .errors import (
    DomainError,
    DualCRError,
    NearZeroDenominator,
    NotConvex,
    NotDecomposable,
    NotInKernel,
    NotSphere,
    OrderMismatch,
    PathDependence,
    PointNotOnSurface,
    SingularSystem,
    VanishingScale,
)
from .jets import Jet
from .surfaces import CircularSurface, make_surface, random_surface_points, sample_grid
from .expressions import parse, to_string
from .dualframe import dual_map, frame_point, get_frame, frame_constants
from .operators import apply_word, apply_word_jet, bracket, parse_word
from .calculus import pairing, weighted_integral
from .characterize import (
    MembershipReport,
    decompose,
    is_cr,
    is_dual_cr,
    is_plh_boundary,
    is_sum_cr_dualcr,
    kernel_coefficients,
    nirenberg_polynomial,
)
from .certify import run_certification

__version__ = "0.1.0"

__all__ = [
    "CircularSurface",
    "DomainError",
    "DualCRError",
    "Jet",
    "MembershipReport",
    "NearZeroDenominator",
    "NotConvex",
    "NotDecomposable",
    "NotInKernel",
    "NotSphere",
    "OrderMismatch",
    "PathDependence",
    "PointNotOnSurface",
    "Settings",
    "SingularSystem",
    "VanishingScale",
    "apply_word",
    "apply_word_jet",
    "bracket",
    "decompose",
    "dual_map",
    "frame_constants",
    "frame_point",
    "get_frame",
    "is_cr",
    "is_dual_cr",
    "is_plh_boundary",
    "is_sum_cr_dualcr",
    "kernel_coefficients",
    "load_config",
    "make_surface",
    "nirenberg_polynomial",
    "pairing",
    "parse",
    "parse_word",
    "random_surface_points",
    "run_certification",
    "sample_grid",
    "to_string",
    "weighted_integral",
    "__version__",
]
