"""Quadrature of the monotonicity energy on upper half-balls centered at 0.

For a field ubar(rho, t) and radius lam,

    E = lam^{2s-n} (D - P) + S,

    D = 1/2 int_{B_lam^+} t^{1-2s} |grad ubar|^2 dX,
    P = kappa_s int_{B_lam} e^{ubar(x, 0)} dx,
    S = 2s lam^{2s-n-1} int_{dB_lam^+} t^{1-2s} (ubar + 2s ln r) d sigma.

Points of the half-ball are X = r (sqrt(1 - tau^2) omega, tau) with
tau = t/r in [0, 1], so that d sigma = (1 - tau^2)^{(n-2)/2} d tau d omega on
the unit hemisphere.  The weight t^{1-2s} = (r tau)^{1-2s} never gets
sampled: the radial rule is Gauss-Jacobi in r with weight r^{n-1-2s}, and
the rule in tau is a composite rule graded geometrically towards tau = 0
whose first panel is Gauss-Jacobi with the endpoint exponent built in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .constants import Params, kappa_s, lambda_ns, sphere_area
from .errors import AccuracyError, DomainError
from .extension import FD_STEP, HalfSpaceField, singular_field
from .quadrature import DEFAULT_SPEC, QuadSpec, jacobi_rule

__all__ = [
    "EnergyBreakdown",
    "energy",
    "energy_scaling_identity",
    "energy_derivative_surface",
    "energy_constancy_scan",
    "hemisphere_rule",
]

GRADING = 0.25
LEVELS = 14
SCAN_RANGE = (0.25, 8.0)


@dataclass(frozen=True)
class EnergyBreakdown:
    lam: float
    dirichlet: float
    boundary_potential: float
    sphere_linear: float
    total: float


@lru_cache(maxsize=64)
def _hemisphere_rule(n: int, s: float, m: int) -> tuple[np.ndarray, np.ndarray]:
    e0 = -abs(1.0 - 2.0 * s)
    a = (n - 2) / 2.0
    edges = [GRADING**k for k in range(LEVELS, 0, -1)]  # sigma^L < ... < sigma
    nodes, weights = [], []

    # [0, sigma^L]: weight tau^{e0} built into a Jacobi rule
    h0 = edges[0]
    x, w = jacobi_rule(m, 0.0, e0)
    tau = 0.5 * h0 * (1 + x)
    nodes.append(tau)
    weights.append(w * (0.5 * h0) ** (e0 + 1) * tau ** (1 - 2 * s - e0) * (1 - tau**2) ** a)

    # geometric middle panels: plain Gauss-Legendre
    xg, wg = leggauss(m)
    for lo, hi in zip(edges[:-1], edges[1:]):
        tau = lo + 0.5 * (hi - lo) * (1 + xg)
        nodes.append(tau)
        weights.append(wg * 0.5 * (hi - lo) * tau ** (1 - 2 * s) * (1 - tau**2) ** a)

    # [sigma, 1]: weight (1 - tau)^a built into a Jacobi rule
    lo = edges[-1]
    x, w = jacobi_rule(m, a, 0.0)
    tau = lo + 0.5 * (1 - lo) * (1 + x)
    nodes.append(tau)
    weights.append(w * (0.5 * (1 - lo)) ** (a + 1) * tau ** (1 - 2 * s) * (1 + tau) ** a)

    tau = np.concatenate(nodes)
    wt = np.concatenate(weights)
    tau.setflags(write=False)
    wt.setflags(write=False)
    return tau, wt


def hemisphere_rule(p: Params, spec: QuadSpec = DEFAULT_SPEC) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for int_0^1 tau^{1-2s} (1-tau^2)^{(n-2)/2} F(tau) d tau."""
    return _hemisphere_rule(p.n, p.s, max(8, spec.jacobi_nodes // 4))


def _radial_rule(beta: float, lam: float, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for int_0^lam r^beta F(r) dr."""
    x, w = jacobi_rule(m, 0.0, beta)
    return 0.5 * lam * (1 + x), w * (0.5 * lam) ** (beta + 1)


def _gradient_sq(field: HalfSpaceField, rho: np.ndarray, t: np.ndarray) -> np.ndarray:
    d_rho, d_t = field.gradient(rho, t)
    return d_rho**2 + d_t**2


def _radial_derivative(field: HalfSpaceField, rho: np.ndarray, t: np.ndarray) -> np.ndarray:
    R = np.hypot(rho, t)
    if field.gradient_fn is not None:
        d_rho, d_t = field.gradient(rho, t)
        return (rho * d_rho + t * d_t) / R
    h = FD_STEP
    return (field(rho * (1 + h), t * (1 + h)) - field(rho * (1 - h), t * (1 - h))) / (2 * h * R)


def _check_lam(lam: float) -> float:
    lam = float(lam)
    if not lam > 0 or not math.isfinite(lam):
        raise DomainError(f"radius must be positive and finite, got {lam}")
    return lam


def energy(field: HalfSpaceField, p: Params, lam: float, spec: QuadSpec = DEFAULT_SPEC) -> EnergyBreakdown:
    """Every term of the monotonicity energy of ``field`` on the half-ball of radius lam."""
    lam = _check_lam(lam)
    n, s = p.n, p.s
    area = sphere_area(n)
    beta = n - 1 - 2 * s
    m_r = max(8, spec.jacobi_nodes // 2)
    tau, wt = hemisphere_rule(p, spec)
    r, wr = _radial_rule(beta, lam, m_r)

    rr = r[:, None]
    rho = rr * np.sqrt(1 - tau**2)[None, :]
    t = rr * tau[None, :]
    # t^{1-2s} r^n dr dsigma = r^{n-1-2s} dr * tau^{1-2s} dsigma * r^2
    integrand = rr**2 * _gradient_sq(field, rho, t)
    if not np.all(np.isfinite(integrand)):
        raise AccuracyError("Dirichlet integrand is not finite on the quadrature grid")
    dirichlet = 0.5 * area * float(wr @ (integrand @ wt))

    kap = kappa_s(s)
    if field.singular_trace:
        boundary = kap * lambda_ns(p) * area * lam ** (n - 2 * s) / (n - 2 * s)
    else:
        # e^{u} rho^{n-1} = rho^{n-1-2s} * (e^{u} rho^{2s})
        rb, wb = _radial_rule(beta, lam, m_r)
        vals = np.exp(field.trace(rb)) * rb ** (2 * s)
        if not np.all(np.isfinite(vals)):
            raise AccuracyError("boundary integrand is not finite")
        boundary = kap * area * float(wb @ vals)

    on_sphere = field(lam * np.sqrt(1 - tau**2), lam * tau) + 2 * s * math.log(lam)
    sphere_lin = 2 * s * area * float(wt @ on_sphere)

    total = lam ** (2 * s - n) * (dirichlet - boundary) + sphere_lin
    return EnergyBreakdown(lam, dirichlet, boundary, sphere_lin, total)


def energy_scaling_identity(
    field: HalfSpaceField, p: Params, lam: float, spec: QuadSpec = DEFAULT_SPEC
) -> tuple[float, float, float]:
    """(lhs, rhs, |lhs - rhs|) for E(ubar, lam) against E(ubar^lam, 1).

    The right side runs on a different node budget so the two values come
    from genuinely different quadratures.
    """
    lam = _check_lam(lam)
    lhs = energy(field, p, lam, spec).total
    other = replace(spec, jacobi_nodes=spec.jacobi_nodes + 16)
    rhs = energy(field.rescaled(lam), p, 1.0, other).total
    return lhs, rhs, abs(lhs - rhs)


def energy_derivative_surface(
    field: HalfSpaceField, p: Params, lam: float, spec: QuadSpec = DEFAULT_SPEC
) -> float:
    """lam^{2s-n} int_{dB_lam^+} t^{1-2s} (d_r ubar + 2s/r)^2 d sigma (nonnegative)."""
    lam = _check_lam(lam)
    n, s = p.n, p.s
    tau, wt = hemisphere_rule(p, spec)
    rho = lam * np.sqrt(1 - tau**2)
    t = lam * tau
    deficit = _radial_derivative(field, rho, t) + 2 * s / lam
    # lam^{2s-n} * lam^{1-2s} * lam^n = lam
    return lam * sphere_area(n) * float(wt @ deficit**2)


def energy_constancy_scan(
    p: Params, lams: Sequence[float] = (0.5, 1.0, 2.0, 4.0), spec: QuadSpec = DEFAULT_SPEC
) -> tuple[float, list[float]]:
    """Largest pairwise gap of E over ``lams`` for the singular field, with the values."""
    lo, hi = SCAN_RANGE
    lams = [float(x) for x in lams]
    if not lams:
        raise DomainError("need at least one radius")
    if any(not lo <= x <= hi for x in lams):
        raise DomainError(f"radii must lie in [{lo}, {hi}]")
    field = singular_field(p)
    values = [energy(field, p, x, spec).total for x in lams]
    return max(values) - min(values), values
