"""Riesz-potential representation of the singular solution.

The potential

    v(x) = c(n,s) int (|x - y|^{2s-n} - (1 + |y|)^{2s-n}) e^{u_ns(y)} dy

solves (-Delta)^s v = e^{u_ns}; the renormalizing subtraction makes the
integral converge.  Since both v and u_ns grow like -2s ln|x|, their
difference must be a constant.  For radial data the angular part reduces
to :func:`riesz_angular`, leaving one radial integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .constants import Params, lambda_ns, riesz_c, sphere_area
from .errors import DomainError, FracGelfandError
from .fraclap import singular_profile
from .quadrature import DEFAULT_SPEC, QuadSpec, integrate_adaptive, riesz_angular

__all__ = ["RADIUS_BAND", "RepresentationReport", "riesz_potential_v", "representation_check"]

RADIUS_BAND = (1e-2, 1e2)


def riesz_potential_v(
    p: Params, radius: float, spec: QuadSpec = DEFAULT_SPEC, constant_scale: float = 1.0
) -> float:
    """v at |x| = radius for the datum e^{u_ns} = lambda_ns |y|^{-2s}.

    ``constant_scale`` multiplies c(n,s); values other than 1 exist only to
    run negative controls.
    """
    R = float(radius)
    lo, hi = RADIUS_BAND
    if not lo <= R <= hi:
        raise DomainError(f"radius {R} outside the supported band {RADIUS_BAND}")
    n, s = p.n, p.s
    area = sphere_area(n)
    e = 2 * s - n

    def f(rho):
        # the difference is kept inside one integrand: split, both halves diverge
        return (riesz_angular(p, R, rho, spec) - area * (1 + rho) ** e) * rho ** (n - 1 - 2 * s)

    inner = integrate_adaptive(f, 0.0, R, spec)
    outer = integrate_adaptive(f, R, math.inf, spec)
    return constant_scale * riesz_c(p) * lambda_ns(p) * (inner + outer)


@dataclass
class RepresentationReport:
    params: Params
    radii: list[float]
    differences: list[float]
    spread: float
    tol: float
    passed: bool
    failures: dict[float, str] = field(default_factory=dict)

    @property
    def constant(self) -> float:
        """Mean of u_ns - v over the radii that succeeded."""
        vals = [d for d in self.differences if math.isfinite(d)]
        return sum(vals) / len(vals) if vals else math.nan


def representation_check(
    p: Params,
    radii: Sequence[float] = (0.5, 1.0, 2.0, 4.0),
    tol: float = 1e-3,
    spec: QuadSpec = DEFAULT_SPEC,
    constant_scale: float = 1.0,
) -> RepresentationReport:
    """Measure how far u_ns - v is from constant over ``radii``.

    A quadrature failure at one radius is recorded in ``failures`` (its
    difference reported as NaN) and marks the report failed, without
    aborting the remaining radii.
    """
    radii = [float(r) for r in radii]
    if not radii:
        raise DomainError("need at least one radius")
    lo, hi = RADIUS_BAND
    for r in radii:
        if not lo <= r <= hi:
            raise DomainError(f"radius {r} outside the supported band {RADIUS_BAND}")
    u = singular_profile(p)
    diffs, failures = [], {}
    for r in radii:
        try:
            diffs.append(u(r) - riesz_potential_v(p, r, spec, constant_scale))
        except FracGelfandError as exc:
            failures[r] = str(exc)
            diffs.append(math.nan)
    good = [d for d in diffs if math.isfinite(d)]
    spread = max(good) - min(good) if good else math.nan
    passed = not failures and spread <= tol
    return RepresentationReport(p, radii, diffs, spread, tol, passed, failures)
