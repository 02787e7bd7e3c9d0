"""Integral points on generalised affine Chatelet surfaces N_K(x, y) = P(t)."""

__version__ = "0.1.0"

from .errors import ChateletError
from .pipeline import SolveReport, find_integral_point, verify_point
from .quadfield import make_field, narrow_class_group, solve_norm_equation
from .surface import SurfaceSpec, load_spec, parse_spec, validate_spec

__all__ = [
    "ChateletError", "SolveReport", "SurfaceSpec", "find_integral_point", "load_spec",
    "make_field", "narrow_class_group", "parse_spec", "solve_norm_equation", "validate_spec",
    "verify_point",
]
