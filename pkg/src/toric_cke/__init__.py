"""Exact toric Kähler–Einstein and coupled Kähler–Einstein checks for smooth toric Fano fans."""

from .cke import CkeReport, analyze_fan, build_problem, kahler_check, solve
from .fan import Fan, bundle_fan, demazure_roots, divisor_classes, reductivity_verdict
from .parametric import certify_chamber, family_polynomials
from .polytope import HPolytope, enumerate_vertices, ke_verdict, moments

__all__ = [
    "CkeReport",
    "Fan",
    "HPolytope",
    "analyze_fan",
    "build_problem",
    "bundle_fan",
    "certify_chamber",
    "demazure_roots",
    "divisor_classes",
    "enumerate_vertices",
    "family_polynomials",
    "kahler_check",
    "ke_verdict",
    "moments",
    "reductivity_verdict",
    "solve",
]

__version__ = "0.1.0"
