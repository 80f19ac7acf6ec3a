"""Numerical verification of the closed-form constants and identities
attached to the nonlocal exponential equation (-Delta)^s u = e^u."""

from .constants import (
    A_ns,
    ConstantsBundle,
    Lambda_ns,
    Params,
    c_ns,
    constants_bundle,
    d_ns,
    kappa_s,
    lambda_ns,
    log_gamma,
    riesz_c,
    sphere_area,
)
from .errors import AccuracyError, DomainError, FracGelfandError, SingularityError, StructureError
from .quadrature import QuadSpec
from .stability import classify, phase_diagram, stability_boundary, stability_margin

__all__ = [
    "A_ns",
    "AccuracyError",
    "ConstantsBundle",
    "DomainError",
    "FracGelfandError",
    "Lambda_ns",
    "Params",
    "QuadSpec",
    "SingularityError",
    "StructureError",
    "c_ns",
    "classify",
    "constants_bundle",
    "d_ns",
    "kappa_s",
    "lambda_ns",
    "log_gamma",
    "phase_diagram",
    "riesz_c",
    "sphere_area",
    "stability_boundary",
    "stability_margin",
]
