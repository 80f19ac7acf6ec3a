"""The s-harmonic extension of radial boundary data to the upper half-space.

A point of the half-space is written X = (x, t) with t > 0, and fields are
radial in x, so they are functions of rho = |x| and t.  The extension is

    ubar(X) = int P(X, y) u(y) dy,   P(X, y) = d_ns t^{2s} / |(x - y, t)|^{n+2s}.

For the singular datum u_ns the extension is log-homogeneous,
ubar(lambda X) = ubar(X) - 2s ln lambda, hence determined by its angular
profile phi(tau) = ubar on the unit hemisphere, tau = t/|X|.  Two
independent routes are provided: direct Poisson quadrature, and a profile
obtained from the ODE that div(t^{1-2s} grad ubar) = 0 imposes on phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import beta, betainc

from .constants import Params, d_ns, lambda_ns, sphere_area
from .errors import DomainError
from .fraclap import RadialLogProfile, singular_profile
from .quadrature import DEFAULT_SPEC, QuadSpec, integrate_adaptive, sphere_power

__all__ = [
    "HalfSpaceField",
    "poisson_kernel",
    "poisson_normalization",
    "extend_profile",
    "extend_singular",
    "angular_profile",
    "angular_profile_slope",
    "singular_field",
    "radial_deficit",
]

FD_STEP = 1e-5

Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class HalfSpaceField:
    """A field ubar(rho, t) on the closed upper half-space minus the origin.

    ``evaluator`` takes broadcastable arrays (rho, t) and returns an array.
    ``trace_profile`` is the boundary datum when it is a radial-log profile;
    otherwise the trace is read off the evaluator at t = 0.
    ``singular_trace`` records that the trace is exactly u_ns, which lets
    the energy use a closed form for the boundary-disc term.
    ``gradient_fn`` optionally returns (d/d rho, d/dt); when absent the
    gradient comes from central differences with steps relative to the
    point, which resolves the t^{2s} boundary layer of extended fields.
    """

    evaluator: Evaluator
    params: Params
    trace_profile: RadialLogProfile | None = None
    singular_trace: bool = False
    name: str = "field"
    gradient_fn: Callable | None = None

    def __call__(self, rho, t):
        rho = np.abs(np.asarray(rho, dtype=float))
        t = np.asarray(t, dtype=float)
        out = self.evaluator(rho, t)
        return float(out) if np.ndim(out) == 0 else out

    def gradient(self, rho, t):
        rho = np.abs(np.asarray(rho, dtype=float))
        t = np.asarray(t, dtype=float)
        if self.gradient_fn is not None:
            return self.gradient_fn(rho, t)
        return _relative_fd_gradient(self.evaluator, rho, t)

    def trace(self, rho):
        rho = np.asarray(rho, dtype=float)
        if self.trace_profile is not None:
            return np.vectorize(self.trace_profile, otypes=[float])(rho)
        return self(rho, np.zeros_like(rho))

    def rescaled(self, lam: float) -> "HalfSpaceField":
        """The blow-down rescaling ubar(lam X) + 2s ln lam."""
        if not lam > 0:
            raise DomainError("scale must be positive")
        shift = 2.0 * self.params.s * math.log(lam)
        ev = self.evaluator
        prof = None
        if self.trace_profile is not None:
            tp = self.trace_profile
            prof = RadialLogProfile(
                tp.log_coeff,
                tp.offset + tp.log_coeff * math.log(lam) + shift,
                None if tp.smooth_part is None else (lambda r, g=tp.smooth_part: g(lam * r)),
                None if tp.support is None else (tp.support[0] / lam, tp.support[1] / lam),
            )
        grad = None
        if self.gradient_fn is not None:
            gf = self.gradient_fn

            def grad(rho, t):
                gr, gt = gf(lam * rho, lam * t)
                return lam * gr, lam * gt

        return replace(
            self,
            evaluator=lambda rho, t: ev(lam * rho, lam * t) + shift,
            trace_profile=prof,
            gradient_fn=grad,
            name=f"{self.name}^({lam:g})",
        )

    def perturbed(self, g: Evaluator, name: str = "perturbation", vanishes_on_boundary: bool = False):
        """ubar + g for g smooth on the whole (rho, t) plane and even in rho.

        The trace stays singular only if g vanishes at t = 0.  The gradient
        of g is taken by central differences with an absolute step, which
        is accurate for smooth g right down to t = 0.
        """
        ev = self.evaluator
        keep = vanishes_on_boundary and self.singular_trace
        base = self.gradient

        def grad(rho, t):
            br, bt = base(rho, t)
            gr, gt = _absolute_fd_gradient(g, rho, t)
            return br + gr, bt + gt

        return replace(
            self,
            evaluator=lambda rho, t: ev(rho, t) + g(rho, t),
            trace_profile=self.trace_profile if keep else None,
            singular_trace=keep,
            gradient_fn=grad,
            name=f"{self.name}+{name}",
        )

    def shifted(self, c: float) -> "HalfSpaceField":
        ev = self.evaluator
        prof = None if self.trace_profile is None else self.trace_profile.shifted(c)
        return replace(self, evaluator=lambda rho, t: ev(rho, t) + c, trace_profile=prof,
                       singular_trace=False, name=f"{self.name}+const")


def _relative_fd_gradient(ev: Evaluator, rho: np.ndarray, t: np.ndarray):
    R = np.hypot(rho, t)
    hr = FD_STEP * R
    ht = FD_STEP * t
    d_rho = (ev(np.abs(rho + hr), t) - ev(np.abs(rho - hr), t)) / (2 * hr)
    d_t = (ev(rho, t + ht) - ev(rho, t - ht)) / (2 * ht)
    return d_rho, d_t


def _absolute_fd_gradient(g: Evaluator, rho: np.ndarray, t: np.ndarray):
    h = FD_STEP * np.maximum(np.hypot(rho, t), 1.0)
    d_rho = (g(np.abs(rho + h), t) - g(np.abs(rho - h), t)) / (2 * h)
    d_t = (g(rho, t + h) - g(rho, t - h)) / (2 * h)
    return d_rho, d_t


def poisson_kernel(p: Params, X: tuple[float, float], r: float, mu: float) -> float:
    """P(X, y) for X = (rho e_1, t) and y at radius r with <e_1, y/|y|> = mu."""
    rho, t = X
    if not t > 0:
        raise DomainError("the Poisson kernel needs t > 0")
    dist2 = rho * rho + r * r - 2.0 * rho * r * mu + t * t
    return d_ns(p) * t ** (2 * p.s) * dist2 ** (-(p.n + 2 * p.s) / 2)


def poisson_normalization(p: Params, t: float = 1.0, spec: QuadSpec = DEFAULT_SPEC) -> float:
    """int_{R^n} P((0, t), y) dy by radial quadrature; equals 1 for every t."""
    if not t > 0:
        raise DomainError("t must be positive")
    n, s = p.n, p.s
    e = -(n + 2 * s) / 2
    # the radial integrand turns over at r ~ t
    f = lambda r: r ** (n - 1) * (r * r + t * t) ** e  # noqa: E731
    val = integrate_adaptive(f, 0.0, math.inf, spec, points=[t])
    return d_ns(p) * t ** (2 * s) * sphere_area(n) * val


def _check_point(rho: float, t: float) -> tuple[float, float]:
    rho, t = abs(float(rho)), float(t)
    if not t > 0 or not math.isfinite(t) or not math.isfinite(rho):
        raise DomainError("need a finite point with t > 0")
    return rho, t


def _radial_points(rho: float, t: float, extra=()) -> list[float]:
    pts = [rho - 5 * t, rho - t, rho, rho + t, rho + 5 * t, *extra]
    return sorted({x for x in pts if x > 0})


def extend_profile(
    profile: RadialLogProfile, p: Params, rho: float, t: float, spec: QuadSpec = DEFAULT_SPEC
) -> float:
    """Poisson extension of a radial-log profile at (rho, t) by quadrature.

    The datum's log part is split as a ln|X| plus a ln(|y|/|X|), so only the
    bounded-variation remainder a ln(|y|/|X|) is integrated numerically.
    """
    rho, t = _check_point(rho, t)
    n, s = p.n, p.s
    R = math.hypot(rho, t)
    pw = (n + 2 * s) / 2
    pref = d_ns(p) * t ** (2 * s)

    def S(r):
        return sphere_power(n, (rho - r) ** 2 + t * t, 2.0 * rho * r, pw, spec.jacobi_nodes)

    val = profile.offset
    if profile.log_coeff != 0.0:
        J = integrate_adaptive(
            lambda r: math.log(r / R) * r ** (n - 1) * S(r), 0.0, math.inf, spec,
            points=_radial_points(rho, t, [R]),
        )
        val += profile.log_coeff * (math.log(R) + pref * J)
    if profile.smooth_part is not None:
        lo, hi = profile.support
        pts = [x for x in _radial_points(rho, t) if lo < x < hi]
        g = integrate_adaptive(
            lambda r: profile.smooth(r) * r ** (n - 1) * S(r), lo, hi, spec, points=pts
        )
        val += pref * g
    return val


def extend_singular(p: Params, rho: float, t: float, spec: QuadSpec = DEFAULT_SPEC) -> float:
    """Poisson extension of u_ns at (rho, t)."""
    return extend_profile(singular_profile(p), p, rho, t, spec)


# --- angular profile --------------------------------------------------------

_SERIES_TERMS = 400
_SERIES_CUT = 0.5
_GL_NODES = 40


def _profile_constant(p: Params) -> float:
    return p.s * (p.n - 2 * p.s) * beta(1 - p.s, p.n / 2)


def angular_profile_slope(p: Params, tau):
    """d phi / d tau = -K I_{1-tau^2}(n/2, 1-s) (1-tau^2)^{-n/2} tau^{2s-1}.

    I is the regularized incomplete Beta function and K = s(n-2s)B(1-s, n/2).
    """
    n, s = p.n, p.s
    tau = np.asarray(tau, dtype=float)
    K = _profile_constant(p)
    w = 1.0 - tau * tau
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(w > 0, betainc(n / 2, 1 - s, w) / np.where(w > 0, w, 1.0) ** (n / 2),
                         1.0 / ((n / 2) * beta(n / 2, 1 - s)))
    return -K * ratio * tau ** (2 * s - 1)


def _series_coefficients(p: Params, N: int = _SERIES_TERMS):
    b = p.n / 2
    a = 1 - p.s
    k = np.arange(N)
    # (b)_k / k!
    pb = np.exp(np.concatenate([[0.0], np.cumsum(np.log((b + k[:-1]) / (k[:-1] + 1)))]))
    # Taylor coefficients of 2F1(a, 1-b; a+1; x) / (a B(a, b))
    h = np.empty(N)
    h[0] = 1.0
    for j in range(1, N):
        h[j] = h[j - 1] * (a + j - 1) * (1 - b + j - 1) / ((a + j) * j)
    h /= a * beta(a, b)
    c = np.convolve(pb, h)[:N]
    return pb / (2 * p.s + 2 * k), 0.5 * c / (k + 1)


def _phi_series(p: Params, tau: np.ndarray) -> np.ndarray:
    c1, c2 = _series_coefficients(p)
    w = tau * tau
    s1 = np.polynomial.polynomial.polyval(w, c1)
    s2 = w * np.polynomial.polynomial.polyval(w, c2)
    return math.log(lambda_ns(p)) - _profile_constant(p) * (tau ** (2 * p.s) * s1 - s2)


def angular_profile(p: Params, tau):
    """phi(tau) = ubar_ns at height fraction tau = t/|X| on the unit hemisphere.

    phi(0) = ln lambda_ns.  A power series in tau^2 is used for tau <= 1/2,
    and a Gauss-Legendre integral of the slope beyond.
    """
    tau_arr = np.asarray(tau, dtype=float)
    if np.any(tau_arr < 0) or np.any(tau_arr > 1):
        raise DomainError("tau must lie in [0, 1]")
    flat = tau_arr.ravel()
    out = np.empty_like(flat)
    low = flat <= _SERIES_CUT
    if np.any(low):
        out[low] = _phi_series(p, flat[low])
    if np.any(~low):
        hi = flat[~low]
        base = _phi_series(p, np.array([_SERIES_CUT]))[0]
        x, w = leggauss(_GL_NODES)
        half = 0.5 * (hi - _SERIES_CUT)
        nodes = _SERIES_CUT + half[:, None] * (x[None, :] + 1.0)
        out[~low] = base + half * (angular_profile_slope(p, nodes) @ w)
    out = out.reshape(tau_arr.shape)
    return float(out) if out.ndim == 0 else out


def singular_field(p: Params, method: str = "profile", spec: QuadSpec = DEFAULT_SPEC) -> HalfSpaceField:
    """The extension of u_ns as a HalfSpaceField.

    ``profile`` evaluates phi(t/|X|) - 2s ln|X| (vectorized, also at t = 0);
    ``poisson`` runs the Poisson quadrature pointwise (slow, t > 0 only).
    """
    s = p.s
    if method == "profile":
        def ev(rho, t):
            R = np.hypot(rho, t)
            return angular_profile(p, np.clip(t / R, 0.0, 1.0)) - 2 * s * np.log(R)
    elif method == "poisson":
        scalar = np.vectorize(lambda r, tt: extend_singular(p, r, tt, spec), otypes=[float])

        def ev(rho, t):
            return scalar(rho, t)
    else:
        raise DomainError(f"unknown method {method!r}")
    return HalfSpaceField(ev, p, singular_profile(p), True, f"singular[{method}]")


def radial_deficit(field: HalfSpaceField, R: float, theta: float, step: float = FD_STEP) -> float:
    """d ubar / dr + 2s/r at radius R and polar angle theta from the boundary plane.

    Central difference along the ray with step h = step * R.
    """
    if not R > 0:
        raise DomainError("R must be positive")
    h = step * R
    if not h > 0 or R + h == R or R - h == R:
        raise DomainError("finite-difference step underflows")
    c, sn = math.cos(theta), math.sin(theta)
    up = field((R + h) * c, (R + h) * sn)
    dn = field((R - h) * c, (R - h) * sn)
    return (up - dn) / (2 * h) + 2 * field.params.s / R
