"""Shared one-dimensional quadrature engine.

Every n-dimensional integral with a radial structure is reduced here to
one dimension.  The workhorse is :func:`sphere_power`,

    int_{S^{n-1}} (d + B (1 - mu))^{-p} d omega,      mu = <theta, omega>,

which covers the angular kernel of the fractional Laplacian, the Riesz
kernel and the Poisson kernel of the extension problem.  For n >= 2 the
sphere integral becomes an integral in mu against the Gegenbauer weight
(1 - mu^2)^{(n-3)/2} with prefactor |S^{n-2}|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.special import roots_jacobi

from .constants import Params, sphere_area
from .errors import AccuracyError, DomainError, SingularityError

__all__ = [
    "QuadSpec",
    "DEFAULT_SPEC",
    "integrate_adaptive",
    "gauss_jacobi_nodes",
    "jacobi_rule",
    "sphere_power",
    "angular_kernel",
    "AngularKernelTable",
    "riesz_angular",
    "pv_symmetrized",
]

# tolerance of the inner sphere integrals; far below any outer tolerance
_INNER_REL = 1e-13


@dataclass(frozen=True)
class QuadSpec:
    """Tolerances and node budgets for every quadrature in the package."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdivisions: int = 2000
    jacobi_nodes: int = 64
    pv_window: float = 0.05

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0 or not self.abs_tol + self.rel_tol > 0:
            raise DomainError("need abs_tol >= 0, rel_tol >= 0 and abs_tol + rel_tol > 0")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 8:
            raise DomainError("max_subdivisions must be an integer >= 8")
        if int(self.jacobi_nodes) != self.jacobi_nodes or self.jacobi_nodes < 16:
            raise DomainError("jacobi_nodes must be an integer >= 16")
        if not 0.0 < self.pv_window < 0.5:
            raise DomainError("pv_window must lie in (0, 1/2)")

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_SPEC = QuadSpec()


def _quad(f, a, b, spec, epsabs, epsrel, points=None):
    val, err, *_ = quad(
        f,
        a,
        b,
        epsabs=epsabs,
        epsrel=epsrel,
        limit=spec.max_subdivisions,
        points=points,
        full_output=1,
    )
    return val, err


def _inverted(f):
    def g(u):
        if u <= 0.0:
            return 0.0
        return f(1.0 / u) / (u * u)

    return g


def integrate_adaptive(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadSpec = DEFAULT_SPEC,
    points: Sequence[float] = (),
    return_error: bool = False,
):
    """Adaptive Gauss-Kronrod integral of ``f`` over (a, b).

    ``b`` may be ``math.inf``; the part beyond a cut point c is mapped onto
    (0, 1/c) by t -> 1/t so algebraic tails are integrated exactly rather
    than truncated.  Interior breakpoints in ``points`` are honored.  Raises
    :class:`AccuracyError` when the combined error estimate exceeds
    max(abs_tol, rel_tol |value|).
    """
    a = float(a)
    b = float(b)
    if math.isnan(a) or math.isnan(b) or a == math.inf:
        raise DomainError("invalid integration limits")
    if b < a:
        v, e = integrate_adaptive(f, b, a, spec, points, return_error=True)
        return (-v, e) if return_error else -v
    if a == b:
        return (0.0, 0.0) if return_error else 0.0
    pieces = []
    if math.isinf(b):
        cut = max(2.0 * a, a + 1.0) if a > 0 else a + 1.0
        cut = max([cut] + [2.0 * x for x in points if x > a])
        pieces.append((f, a, cut, [x for x in points if a < x < cut]))
        pieces.append((_inverted(f), 0.0, 1.0 / cut, []))
    else:
        pieces.append((f, a, b, [x for x in points if a < x < b]))

    def run(epsabs, epsrel):
        total, total_err = 0.0, 0.0
        for g, lo, hi, pts in pieces:
            v, e = _quad(g, lo, hi, spec, epsabs, epsrel, points=sorted(pts) or None)
            total += v
            total_err += e
        return total, total_err

    k = len(pieces)
    total, total_err = run(spec.abs_tol / k, spec.rel_tol / k)
    if math.isfinite(total) and total_err > spec.tolerance(total):
        # pieces may cancel; retry with an absolute target set by the first estimate
        target = 0.5 * spec.tolerance(total) / k
        total, total_err = run(target, 0.0)
    if not math.isfinite(total) or total_err > spec.tolerance(total):
        raise AccuracyError(
            f"adaptive quadrature did not converge: estimate {total!r}, error bound {total_err!r}",
            estimate=total,
            error=total_err,
        )
    return (total, total_err) if return_error else total


@lru_cache(maxsize=256)
def jacobi_rule(m: int, alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Jacobi rule for the weight (1-x)^alpha (1+x)^beta on [-1, 1].

    Cached per (m, alpha, beta); ``functools.lru_cache`` is thread safe and
    the returned arrays are read-only.
    """
    if alpha <= -1 or beta <= -1:
        raise DomainError("Jacobi exponents must exceed -1")
    if m < 1:
        raise DomainError("need at least one node")
    x, w = roots_jacobi(int(m), float(alpha), float(beta))
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_jacobi_nodes(alpha: float, m: int) -> tuple[np.ndarray, np.ndarray]:
    """m-point rule for the symmetric weight (1 - mu^2)^alpha on [-1, 1]."""
    if not alpha > -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    if m < 1:
        raise DomainError(f"need m >= 1, got {m}")
    return jacobi_rule(int(m), float(alpha), float(alpha))


def sphere_power(n: int, d: float, B: float, p: float, m: int = 64) -> float:
    """Integral over S^{n-1} of (d + B(1 - mu))^{-p}, with d > 0 and B >= 0.

    Far from the singularity (d/B large) a single m-point Gauss-Jacobi rule
    in mu converges to machine precision.  When d/B is small the integrand
    is sharply peaked at mu = 1; there the variable w = 1 - mu is split at
    w = 1, the near half is rescaled by w = (d/B) v and integrated
    adaptively (in log v beyond v = 1), and the far half uses a Jacobi rule.
    """
    if not d > 0:
        if d == 0:
            raise SingularityError("sphere integral evaluated on the kernel singularity")
        raise DomainError("d must be positive")
    if B < 0:
        raise DomainError("B must be nonnegative")
    if n == 1:
        return d ** -p + (d + 2.0 * B) ** -p
    if B == 0:
        return sphere_area(n) * d ** -p
    al = (n - 3) / 2.0
    pref = sphere_area(n - 1)
    q = d / B
    if q > math.cosh(18.0 / m) - 1.0:
        x, w = jacobi_rule(m, al, al)
        return pref * float(np.dot(w, (d + B * (1.0 - x)) ** -p))

    # w in [1, 2]: w = 1.5 + 0.5 y, weight (2 - w)^al = 0.5^al (1 - y)^al
    y, wy = jacobi_rule(m, al, 0.0)
    ww = 1.5 + 0.5 * y
    far = 0.5 ** (al + 1.0) * float(np.dot(wy, ww ** al * (d + B * ww) ** -p))

    # w in [0, 1]: w = q v, so the integrand becomes q^{al+1} d^{-p} v^al (2 - qv)^al (1+v)^{-p}
    V = 1.0 / q
    v1 = min(1.0, V)
    near, _ = quad(
        lambda v: (2.0 - q * v) ** al * (1.0 + v) ** -p,
        0.0,
        v1,
        weight="alg",
        wvar=(al, 0.0),
        epsabs=0.0,
        epsrel=_INNER_REL,
        limit=200,
    )
    if V > 1.0:
        def g(xi):
            ex = math.exp(xi)
            return math.exp(xi * (al + 1.0)) * (2.0 - q * ex) ** al * (1.0 + ex) ** -p

        tail, _ = quad(g, 0.0, math.log(V), epsabs=0.0, epsrel=_INNER_REL, limit=400)
        near += tail
    near *= q ** (al + 1.0) * d ** -p
    return pref * (near + far)


def angular_kernel(p: Params, t: float, spec: QuadSpec = DEFAULT_SPEC) -> float:
    """Psi(t) = int_{S^{n-1}} (t^2 + 1 - 2t<theta,omega>)^{-(n+2s)/2} d omega."""
    t = float(t)
    if t < 0 or not math.isfinite(t):
        raise DomainError(f"t must be a finite nonnegative number, got {t}")
    if t == 1.0:
        raise SingularityError("angular kernel diverges at t = 1")
    if t == 0.0:
        return sphere_area(p.n)
    return sphere_power(p.n, (1.0 - t) ** 2, 2.0 * t, (p.n + 2.0 * p.s) / 2.0, spec.jacobi_nodes)


@dataclass(frozen=True)
class AngularKernelTable:
    """Psi tabulated on a strictly increasing grid of positive t.

    Construction verifies positivity and, for every pair (t, 1/t) present
    in the grid, the reflection identity Psi(1/t) = t^{n+2s} Psi(t).
    """

    params: Params
    t_grid: tuple[float, ...]
    values: tuple[float, ...]
    rel_tol: float = 1e-9

    def __post_init__(self):
        t = np.asarray(self.t_grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or t.size == 0:
            raise DomainError("t-grid and values must be matching nonempty 1D sequences")
        if np.any(t <= 0) or np.any(np.diff(t) <= 0):
            raise DomainError("t-grid must be strictly increasing and positive")
        if np.any(v <= 0):
            raise DomainError("angular kernel values must be positive")
        worst = self.reflection_residual()
        if worst > 10 * self.rel_tol:
            raise AccuracyError(f"reflection identity violated by {worst:.3e}", error=worst)

    @classmethod
    def build(cls, p: Params, t_grid: Sequence[float], spec: QuadSpec = DEFAULT_SPEC):
        grid = tuple(float(x) for x in t_grid)
        return cls(p, grid, tuple(angular_kernel(p, x, spec) for x in grid), spec.rel_tol)

    def reflection_pairs(self) -> list[tuple[int, int]]:
        index = {x: i for i, x in enumerate(self.t_grid)}
        pairs = []
        for i, x in enumerate(self.t_grid):
            j = index.get(1.0 / x)
            if j is None:
                # tolerate grids built as 1/t in floating point
                k = int(np.argmin(np.abs(np.asarray(self.t_grid) - 1.0 / x)))
                if abs(self.t_grid[k] * x - 1.0) < 1e-14:
                    j = k
            if j is not None and i < j:
                pairs.append((i, j))
        return pairs

    def reflection_residual(self) -> float:
        """Largest relative defect of Psi(1/t) = t^{n+2s} Psi(t) over grid pairs."""
        e = self.params.n + 2 * self.params.s
        worst = 0.0
        for i, j in self.reflection_pairs():
            t = self.t_grid[i]
            worst = max(worst, abs(self.values[j] / (t**e * self.values[i]) - 1.0))
        return worst

    def __call__(self, t: float) -> float:
        """Interpolated value (log-log linear); exact at grid points."""
        lt = np.log(np.asarray(self.t_grid))
        lv = np.log(np.asarray(self.values))
        return float(np.exp(np.interp(math.log(t), lt, lv)))


def riesz_angular(p: Params, a: float, b: float, spec: QuadSpec = DEFAULT_SPEC) -> float:
    """int_{S^{n-1}} |a e_1 - b omega|^{2s-n} d omega for a, b > 0, a != b."""
    a = float(a)
    b = float(b)
    if not (a > 0 and b > 0):
        raise DomainError("radii must be positive")
    if a == b:
        raise SingularityError("Riesz angular integral diverges at a = b")
    return sphere_power(p.n, (a - b) ** 2, 2.0 * a * b, (p.n - 2.0 * p.s) / 2.0, spec.jacobi_nodes)


def pv_symmetrized(
    f: Callable[[float], float] | None,
    spec: QuadSpec = DEFAULT_SPEC,
    folded: Callable[[float], float] | None = None,
    method: str = "fold",
) -> float:
    """Principal value of int_0^inf f(t) dt with a singular point at t = 1.

    The default ``fold`` method maps (0, 1) onto (1, inf) by t -> 1/t and
    integrates f(t) + f(1/t)/t^2 over (1, inf).  Callers that know the
    cancellation analytically (via the reflection identity of the kernel)
    should pass the simplified ``folded`` integrand, which avoids the
    subtraction of two large numbers next to t = 1.

    ``excise`` removes |ln t| < pv_window and integrates the rest; it is a
    biased fallback kept for comparison only.
    """
    if method == "fold":
        if folded is None:
            if f is None:
                raise DomainError("need an integrand")
            folded = lambda t: f(t) + f(1.0 / t) / (t * t)  # noqa: E731
        return integrate_adaptive(folded, 1.0, math.inf, spec)
    if method == "excise":
        if f is None:
            raise DomainError("excision needs the raw integrand")
        w = spec.pv_window
        lo = math.exp(-w)
        hi = math.exp(w)
        return integrate_adaptive(f, 0.0, lo, spec) + integrate_adaptive(f, hi, math.inf, spec)
    raise DomainError(f"unknown principal-value method {method!r}")
