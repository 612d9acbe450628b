"""Coefficients, recurrences and operator identities for quadratic harnesses."""
from .params import FamilyTag, ParamSet, classify, preset, time_invert, validate
from .regression import TimeTriple, extract_params, form_coeffs, harness_coeffs

__version__ = "0.1.0"

__all__ = [
    "FamilyTag", "ParamSet", "TimeTriple", "classify", "extract_params", "form_coeffs",
    "harness_coeffs", "preset", "time_invert", "validate",
]
