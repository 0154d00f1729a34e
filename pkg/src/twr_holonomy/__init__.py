"""Thomas-Wigner rotations computed two ways: by composing Lorentz boosts, and as
holonomies of parallel transport on the mass-shell hyperboloid."""

__version__ = "0.1.0"

from .errors import ConsistencyError, DomainError, SingularChartError
from .lorentz import (
    AngleAxis,
    pure_boost,
    rotation_to_angle_axis,
    su2_from_angle_axis,
    su2_to_angle_axis,
    su2_to_so3,
    successive_boosts,
    twr_of_two_boosts,
    velocity_add_collinear,
    velocity_add_general,
    wigner_rotation,
)
from .paths import CircleArc, GeodesicSegment, PathSpec, SampledCurve, circle_path, geodesic_between, triangle_path
from .shell import ShellPoint, chart_from_momentum, embed, ricci_scalar_at
from .transport import (
    HolonomyResult,
    holonomy_ambient,
    holonomy_disk_circle,
    holonomy_path_ordered,
    thomas_precession_angle,
    transport_spinor,
    transport_vector_ambient,
    transport_vector_intrinsic,
    triangle_holonomy,
)
from .crosscheck import ComparisonReport, campaign, compare_precession, compare_triangle

__all__ = [
    "AngleAxis",
    "CircleArc",
    "ComparisonReport",
    "ConsistencyError",
    "DomainError",
    "GeodesicSegment",
    "HolonomyResult",
    "PathSpec",
    "SampledCurve",
    "ShellPoint",
    "SingularChartError",
    "campaign",
    "chart_from_momentum",
    "circle_path",
    "compare_precession",
    "compare_triangle",
    "embed",
    "geodesic_between",
    "holonomy_ambient",
    "holonomy_disk_circle",
    "holonomy_path_ordered",
    "pure_boost",
    "ricci_scalar_at",
    "rotation_to_angle_axis",
    "su2_from_angle_axis",
    "su2_to_angle_axis",
    "su2_to_so3",
    "successive_boosts",
    "thomas_precession_angle",
    "transport_spinor",
    "transport_vector_ambient",
    "transport_vector_intrinsic",
    "triangle_holonomy",
    "triangle_path",
    "twr_of_two_boosts",
    "velocity_add_collinear",
    "velocity_add_general",
    "wigner_rotation",
]
