"""(-Delta)^s on radial logarithmic profiles and the Hardy-quotient experiment.

For a radial u, writing y = R t omega turns the singular integral at |x| = R
into

    (-Delta)^s u (R) = c_ns R^{-2s} P.V. int_0^inf (u(R) - u(Rt)) Psi(t) t^{n-1} dt,

with Psi the angular kernel.  Folding (0, 1) onto (1, inf) with the
reflection Psi(1/t) = t^{n+2s} Psi(t) gives absolutely convergent integrals
whose integrands vanish like |t-1|^{1-2s} at t = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy.integrate import quad

from .constants import Params, Lambda_ns, c_ns, lambda_ns, sphere_area
from .errors import DomainError
from .quadrature import DEFAULT_SPEC, QuadSpec, angular_kernel, integrate_adaptive, pv_symmetrized

__all__ = [
    "RadialLogProfile",
    "singular_profile",
    "bump",
    "CutoffFamily",
    "fraclap_log_identity",
    "hardy_constant_integral",
    "fraclap_radial",
    "f_eps",
    "hardy_quotient",
    "hardy_remainder",
    "volume_growth",
    "volume_growth_closed_form",
]

RADIUS_BAND = (1e-3, 1e3)


@dataclass(frozen=True)
class RadialLogProfile:
    """u(r) = log_coeff * ln r + offset + smooth_part(r).

    ``smooth_part`` must vanish outside ``support`` = (r_lo, r_hi) with
    0 < r_lo < r_hi < inf.
    """

    log_coeff: float
    offset: float = 0.0
    smooth_part: Callable[[float], float] | None = None
    support: tuple[float, float] | None = None

    def __post_init__(self):
        if self.smooth_part is not None:
            if self.support is None:
                raise DomainError("a smooth part needs a declared compact support")
            lo, hi = self.support
            if not 0.0 < lo < hi < math.inf:
                raise DomainError("support must satisfy 0 < r_lo < r_hi < inf")

    def __call__(self, r: float) -> float:
        v = self.log_coeff * math.log(r) + self.offset
        if self.smooth_part is not None:
            lo, hi = self.support
            if lo < r < hi:
                v += self.smooth_part(r)
        return v

    def smooth(self, r: float) -> float:
        if self.smooth_part is None:
            return 0.0
        lo, hi = self.support
        return self.smooth_part(r) if lo < r < hi else 0.0

    def shifted(self, c: float) -> "RadialLogProfile":
        return RadialLogProfile(self.log_coeff, self.offset + c, self.smooth_part, self.support)


def singular_profile(p: Params) -> RadialLogProfile:
    """u_ns(r) = -2s ln r + ln lambda_ns."""
    return RadialLogProfile(-2.0 * p.s, math.log(lambda_ns(p)))


def _g(x: float) -> float:
    return math.exp(-1.0 / x) if x > 0.0 else 0.0


def bump(r: float) -> float:
    """C-infinity cutoff: 1 on r <= 1, 0 on r >= 2, smooth partition in between."""
    if r <= 1.0:
        return 1.0
    if r >= 2.0:
        return 0.0
    a = _g(2.0 - r)
    b = _g(r - 1.0)
    return a / (a + b)


@dataclass(frozen=True)
class CutoffFamily:
    """eta_eps(r) = (1 - bump(2r/eps)) bump(eps r): 1 on (eps, 1/eps), 0 off (eps/2, 2/eps)."""

    eps: float

    def __post_init__(self):
        if not 0.0 < self.eps < 0.25:
            raise DomainError(f"eps must lie in (0, 1/4), got {self.eps}")

    def __call__(self, r: float) -> float:
        if r <= 0.0:
            return 0.0
        return (1.0 - bump(2.0 * r / self.eps)) * bump(self.eps * r)

    def log_breakpoints(self) -> list[float]:
        e = self.eps
        return [math.log(e / 2), math.log(e), -math.log(e), math.log(2 / e)]

    def log_norm(self) -> float:
        """int_0^inf eta_eps(r)^2 dr / r."""
        pts = self.log_breakpoints()
        return _piecewise(lambda x: self(math.exp(x)) ** 2, pts)


def _piecewise(f, pts, epsabs=1e-14, epsrel=1e-12):
    total = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        if hi > lo:
            total += quad(f, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=200)[0]
    return total


def _log_integral(p: Params, spec: QuadSpec) -> float:
    """P.V. int_0^inf Psi(t) ln t t^{n-1} dt, folded onto (1, inf)."""
    n, s = p.n, p.s

    def folded(t):
        lt = math.log(t)
        # t^{n-1} - t^{2s-1} written without cancellation
        return angular_kernel(p, t, spec) * lt * t ** (2 * s - 1) * math.expm1((n - 2 * s) * lt)

    return pv_symmetrized(None, spec, folded=folded)


def fraclap_log_identity(p: Params, spec: QuadSpec = DEFAULT_SPEC) -> float:
    """(-Delta)^s ln(1/|x|^{2s}) at |x| = 1 by quadrature; equals lambda_ns."""
    return 2.0 * p.s * c_ns(p) * _log_integral(p, spec)


def hardy_constant_integral(p: Params, spec: QuadSpec = DEFAULT_SPEC) -> float:
    """c_ns int_0^inf (1 - t^{-(n-2s)/2}) Psi(t) t^{n-1} dt, folded; equals Lambda_ns."""
    n, s = p.n, p.s
    a = (n - 2 * s) / 2

    def folded(t):
        lt = math.log(t)
        br = -math.expm1(-a * lt) * t ** (n - 1) - math.expm1(a * lt) * t ** (2 * s - 1)
        return angular_kernel(p, t, spec) * br

    return c_ns(p) * pv_symmetrized(None, spec, folded=folded)


def _smooth_fraclap(profile: RadialLogProfile, p: Params, R: float, spec: QuadSpec) -> float:
    """P.V. int (g(R) - g(Rt)) Psi(t) t^{n-1} dt for the compactly supported part g."""
    n, s = p.n, p.s
    g = profile.smooth
    lo, hi = profile.support
    gR = g(R)
    edges = [lo / R, hi / R, R / lo, R / hi]
    pts = sorted(x for x in edges if x > 1.0)

    if not lo < R < hi:
        # no singular cancellation: g(R) = 0 and the integrand vanishes near t = 1
        def folded(t):
            return -angular_kernel(p, t, spec) * (g(R * t) * t ** (n - 1) + g(R / t) * t ** (2 * s - 1))

        return integrate_adaptive(folded, 1.0, math.inf, spec, points=pts)

    # second-order Taylor patch next to t = 1, where the direct fold cancels
    h = 1e-3 * min(R - lo, hi - R, R)
    g1 = (g(R + h) - g(R - h)) / (2 * h)
    g2 = (g(R + h) - 2 * gR + g(R - h)) / (h * h)
    cquad = -g2 * R * R - g1 * R * (n + 1 - 2 * s)
    delta = 1e-4

    def folded(t):
        x = t - 1.0
        if x < delta:
            return angular_kernel(p, t, spec) * cquad * x * x
        return angular_kernel(p, t, spec) * ((gR - g(R * t)) * t ** (n - 1) + (gR - g(R / t)) * t ** (2 * s - 1))

    return integrate_adaptive(folded, 1.0, math.inf, spec, points=[1.0 + delta] + pts)


def fraclap_radial(
    profile: RadialLogProfile, p: Params, radius: float, spec: QuadSpec = DEFAULT_SPEC
) -> float:
    """c_ns P.V. int (u(x) - u(y)) |x-y|^{-n-2s} dy at |x| = radius.

    The offset never enters (the difference quotient cancels it exactly).
    For pure logarithmic profiles radii outside [1e-3, 1e3] are handled by
    the exact scaling R^{-2s}; profiles with a smooth part must lie in band.
    """
    R = float(radius)
    if not R > 0 or not math.isfinite(R):
        raise DomainError(f"radius must be positive and finite, got {radius}")
    lo, hi = RADIUS_BAND
    if profile.smooth_part is None:
        if profile.log_coeff == 0.0:
            return 0.0
        if not lo <= R <= hi:
            return fraclap_radial(profile, p, 1.0, spec) * R ** (-2 * p.s)
        return -profile.log_coeff * c_ns(p) * R ** (-2 * p.s) * _log_integral(p, spec)
    if not lo <= R <= hi:
        raise DomainError(f"radius {R} outside the supported band {RADIUS_BAND}")
    total = 0.0
    if profile.log_coeff != 0.0:
        total -= profile.log_coeff * _log_integral(p, spec)
    total += _smooth_fraclap(profile, p, R, spec)
    return c_ns(p) * R ** (-2 * p.s) * total


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not 0.0 < eps < 0.25:
        raise DomainError(f"eps must lie in (0, 1/4), got {eps}")
    return eps


def f_eps(t: float, eps: float) -> float:
    """int_0^inf r^{-1} eta_eps(r) (eta_eps(r) - eta_eps(rt)) dr, in the variable ln r."""
    if not t > 0:
        raise DomainError("t must be positive")
    eta = CutoffFamily(_check_eps(eps))
    if t == 1.0:
        return 0.0
    T = math.log(t)
    base = eta.log_breakpoints()
    pts = sorted(set(base + [b - T for b in base]))
    pts = [x for x in pts if base[0] <= x <= base[-1]]
    return _piecewise(lambda x: eta(math.exp(x)) * (eta(math.exp(x)) - eta(math.exp(x + T))), pts)


def _fold_weight(t: float, eta: CutoffFamily) -> float:
    """f_eps(t) + f_eps(1/t) = int r^{-1} (eta(r) - eta(rt))^2 dr >= 0."""
    T = math.log(t)
    base = eta.log_breakpoints()
    pts = sorted(set(base + [b - T for b in base]))
    return _piecewise(lambda x: (eta(math.exp(x)) - eta(math.exp(x + T))) ** 2, pts)


def hardy_remainder(p: Params, eps: float, spec: QuadSpec = DEFAULT_SPEC) -> float:
    """c_ns int_0^inf Psi(t) t^{n/2+s-1} f_eps(t) dt (folded onto t > 1)."""
    eta = CutoffFamily(_check_eps(eps))
    e = p.n / 2 + p.s - 1

    def folded(t):
        return angular_kernel(p, t, spec) * t ** e * _fold_weight(t, eta)

    return c_ns(p) * pv_symmetrized(None, spec, folded=folded)


def hardy_quotient(p: Params, eps: float, spec: QuadSpec = DEFAULT_SPEC) -> float:
    """Rayleigh quotient of psi = r^{-(n-2s)/2} eta_eps against the weight |x|^{-2s}.

    The quadratic form of psi equals |S^{n-1}| times
    Lambda_ns L(eps) + c_ns int Psi(t) t^{n/2+s-1} f_eps(t) dt, where
    L(eps) = int r^{-1} eta_eps^2 dr; the weighted L^2 norm is |S^{n-1}| L(eps).
    """
    eta = CutoffFamily(_check_eps(eps))
    L = eta.log_norm()
    area = sphere_area(p.n)
    num = area * (Lambda_ns(p) * L + hardy_remainder(p, eps, spec))
    return num / (area * L)


def volume_growth_closed_form(p: Params, r: float) -> float:
    """lambda_ns |S^{n-1}| r^{n-2s} / (n-2s)."""
    return lambda_ns(p) * sphere_area(p.n) * r ** (p.n - 2 * p.s) / (p.n - 2 * p.s)


def volume_growth(p: Params, r: float, spec: QuadSpec = DEFAULT_SPEC) -> float:
    """int_{B_r} e^{u_ns} dx by quadrature of the radial profile.

    The integrand e^{u(rho)} rho^{n-1} is integrated against the algebraic
    weight rho^{n-1-2s}, which absorbs the origin singularity.
    """
    r = float(r)
    if not r > 0 or not math.isfinite(r):
        raise DomainError("r must be positive and finite")
    u = singular_profile(p)
    b = p.n - 1 - 2 * p.s
    val, err = quad(
        lambda rho: math.exp(u(rho)) * rho ** (2 * p.s) if rho > 0 else lambda_ns(p),
        0.0,
        r,
        weight="alg",
        wvar=(b, 0.0),
        epsabs=0.0,
        epsrel=min(spec.rel_tol, 1e-12),
    )
    return sphere_area(p.n) * val
