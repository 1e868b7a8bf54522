"""Certified sparse vertex selection for polytopes containing the unit ball."""
from .centers import centroid, steinitz_center, verify_center
from .errors import CertificateError, GeometryError
from .oracle import best_subset_radius
from .polytope import (HPolytope, Radius, VPolytope, extreme_points, inscribed_radius_origin,
                       polar_h_to_v, polar_v_to_h, vertex_enum)
from .sparse import sparse_approximate
from .steinitz import (certify, check_contains_unit_ball, finite_subset_cover, select_from_points,
                       select_vertices, steinitz_bound)
from .upperbound import UnitVectorSystem, no_ball_certificate, witness

__all__ = [
    "CertificateError", "GeometryError", "HPolytope", "Radius", "UnitVectorSystem", "VPolytope",
    "best_subset_radius", "centroid", "certify", "check_contains_unit_ball", "extreme_points",
    "finite_subset_cover", "inscribed_radius_origin", "no_ball_certificate", "polar_h_to_v",
    "polar_v_to_h", "select_from_points", "select_vertices", "sparse_approximate",
    "steinitz_bound", "steinitz_center", "verify_center", "vertex_enum", "witness",
]
