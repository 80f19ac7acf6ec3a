"""Stability of the singular solution and the critical order in each dimension.

The singular solution is stable exactly when lambda_ns <= Lambda_ns, so
everything is driven by the log-ratio

    margin(n, s) = ln lambda_ns - ln Lambda_ns

(the common factor 2^{2s} cancels).  A positive margin means unstable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .constants import Params, log_gamma
from .errors import DomainError, StructureError

__all__ = [
    "Verdict",
    "StabilityVerdict",
    "Outcome",
    "BoundaryResult",
    "PhaseRow",
    "stability_margin",
    "classify",
    "stability_boundary",
    "phase_diagram",
]

SCAN_EPS = 1e-6
SCAN_POINTS = 400
MAX_BISECTIONS = 60


class Verdict(enum.Enum):
    SINGULAR_STABLE = "stable"
    SINGULAR_UNSTABLE = "unstable"
    BOUNDARY = "boundary"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class StabilityVerdict:
    margin: float
    verdict: Verdict


class Outcome(enum.Enum):
    ALL_UNSTABLE = "AllUnstable"
    ALL_STABLE = "AllStable"
    ROOT = "Root"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class BoundaryResult:
    """Outcome of the critical-order search; ``s_star`` is set only for ROOT."""

    n: int
    outcome: Outcome
    s_star: float | None = None
    bracket: tuple[float, float] | None = None
    iterations: int = 0

    def as_dict(self) -> dict:
        d = {"n": self.n, "outcome": str(self.outcome)}
        if self.outcome is Outcome.ROOT:
            d["s_star"] = self.s_star
            d["bracket"] = list(self.bracket)
            d["iterations"] = self.iterations
        return d


def _margin(n: int, s: float) -> float:
    return (
        log_gamma(n / 2)
        + log_gamma(1 + s)
        - log_gamma((n - 2 * s) / 2)
        - 2 * (log_gamma((n + 2 * s) / 4) - log_gamma((n - 2 * s) / 4))
    )


def stability_margin(p: Params) -> float:
    """ln[G(n/2) G(1+s) / G((n-2s)/2)] - 2 ln[G((n+2s)/4) / G((n-2s)/4)]."""
    return _margin(p.n, p.s)


def classify(p: Params, tie_tol: float = 0.0) -> StabilityVerdict:
    """Map the margin through the tie band |margin| <= tie_tol.

    With tie_tol = 0 an exactly vanishing margin is stable, because the
    stability criterion is the non-strict inequality lambda <= Lambda.
    """
    if not tie_tol >= 0:
        raise DomainError(f"tie_tol must be nonnegative, got {tie_tol}")
    m = stability_margin(p)
    if m > tie_tol:
        v = Verdict.SINGULAR_UNSTABLE
    elif m < -tie_tol or (tie_tol == 0 and m == 0):
        v = Verdict.SINGULAR_STABLE
    else:
        v = Verdict.BOUNDARY
    return StabilityVerdict(m, v)


def stability_boundary(n: int, root_tol: float = 1e-10) -> BoundaryResult:
    """Locate the order s* at which the margin changes sign in dimension n.

    A uniform pre-scan brackets the sign change; bisection then runs until
    the bracket is no wider than ``root_tol`` (and the margin at the
    midpoint no larger), or until the bracket stops shrinking in floating
    point.  More than one sign change raises StructureError.
    """
    Params(n, 0.5)  # validates n
    if n < 3:
        raise DomainError("the boundary search requires n >= 3")
    if not 0 < root_tol <= 1e-3:
        raise DomainError(f"root_tol must lie in (0, 1e-3], got {root_tol}")
    s_hi = min(1.0, n / 2) - SCAN_EPS
    grid = np.linspace(SCAN_EPS, s_hi, SCAN_POINTS)
    m = np.array([_margin(n, float(s)) for s in grid])
    sign = np.sign(m)
    changes = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    zeros = np.flatnonzero(sign == 0)
    if len(changes) + len(zeros) > 1:
        raise StructureError(f"margin changes sign more than once for n={n}")
    if len(zeros) == 1:
        s0 = float(grid[zeros[0]])
        return BoundaryResult(n, Outcome.ROOT, s0, (s0, s0), 0)
    if len(changes) == 0:
        return BoundaryResult(n, Outcome.ALL_UNSTABLE if m[0] > 0 else Outcome.ALL_STABLE)

    k = changes[0]
    lo, hi = float(grid[k]), float(grid[k + 1])
    m_lo = m[k]
    it = 0
    mid = 0.5 * (lo + hi)
    while it < MAX_BISECTIONS:
        mid = 0.5 * (lo + hi)
        m_mid = _margin(n, mid)
        it += 1
        if m_mid == 0:
            lo = hi = mid
            break
        if (m_mid > 0) == (m_lo > 0):
            lo, m_lo = mid, m_mid
        else:
            hi = mid
        if hi - lo <= root_tol and abs(m_mid) <= root_tol:
            break
        if 0.5 * (lo + hi) in (lo, hi):
            break  # bracket is down to adjacent floats
    return BoundaryResult(n, Outcome.ROOT, 0.5 * (lo + hi), (lo, hi), it)


@dataclass(frozen=True)
class PhaseRow:
    n: int
    s: float
    margin: float
    verdict: Verdict


def phase_diagram(n_lo: int, n_hi: int, s_steps: int, tie_tol: float = 0.0) -> list[PhaseRow]:
    """Classify the grid n_lo..n_hi times s_k = k/(s_steps+1), k = 1..s_steps.

    Cells violating n > 2s are skipped; rows are ordered by n, then s.
    """
    if not (3 <= n_lo <= n_hi <= 60):
        raise DomainError("need 3 <= n_lo <= n_hi <= 60")
    if s_steps < 2:
        raise DomainError("need s_steps >= 2")
    rows = []
    for n in range(n_lo, n_hi + 1):
        for k in range(1, s_steps + 1):
            s = k / (s_steps + 1)
            if not n > 2 * s:
                continue
            v = classify(Params(n, s), tie_tol)
            rows.append(PhaseRow(n, s, v.margin, v.verdict))
    return rows
