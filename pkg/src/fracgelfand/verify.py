"""Verification suites: each identity becomes a row of a report.

A suite is a function (params, spec, seed) -> list[Check].  Rows carry the
computed and reference values, the errors, the tolerance and the rule used
to decide pass/fail, plus the wall-clock time spent on the row.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .constants import Lambda_ns, Params, lambda_ns
from .energy import energy_constancy_scan, energy_derivative_surface, energy_scaling_identity
from .errors import FracGelfandError
from .extension import extend_singular, poisson_normalization, radial_deficit, singular_field
from .fraclap import (
    fraclap_log_identity,
    fraclap_radial,
    hardy_constant_integral,
    hardy_quotient,
    singular_profile,
    volume_growth,
    volume_growth_closed_form,
)
from .quadrature import DEFAULT_SPEC, QuadSpec
from .representation import representation_check

__all__ = ["Check", "VerificationReport", "SUITES", "run_suite", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1
HARDY_EPS = (1e-2, 1e-3, 1e-4)


@dataclass
class Check:
    """One verified identity.

    ``mode`` is the comparison rule: ``rel`` and ``abs`` bound the relative
    or absolute error by ``tolerance``; ``max`` requires
    computed <= reference + tolerance; ``min`` requires
    computed >= reference - tolerance.
    """

    name: str
    computed: float
    reference: float
    tolerance: float
    mode: str = "rel"
    seconds: float = 0.0
    note: str = ""

    @property
    def abs_err(self) -> float:
        return abs(self.computed - self.reference)

    @property
    def rel_err(self) -> float:
        if self.reference == 0:
            return self.abs_err
        return self.abs_err / abs(self.reference)

    @property
    def passed(self) -> bool:
        c, r, tol = self.computed, self.reference, self.tolerance
        if not math.isfinite(c):
            return False
        if self.mode == "rel":
            return self.rel_err <= tol
        if self.mode == "abs":
            return self.abs_err <= tol
        if self.mode == "max":
            return c <= r + tol
        if self.mode == "min":
            return c >= r - tol
        raise ValueError(f"unknown comparison mode {self.mode!r}")

    def as_dict(self, timings: bool = False) -> dict:
        d = {
            "identity": self.name,
            "computed": _finite_or_none(self.computed),
            "reference": _finite_or_none(self.reference),
            "abs_err": _finite_or_none(self.abs_err),
            "rel_err": _finite_or_none(self.rel_err),
            "tolerance": self.tolerance,
            "mode": self.mode,
            "pass": self.passed,
        }
        if self.note:
            d["note"] = self.note
        if timings:
            d["seconds"] = self.seconds
        return d


def _finite_or_none(x: float):
    return x if math.isfinite(x) else None


@dataclass
class VerificationReport:
    suite: str
    params: Params
    seed: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def sorted_checks(self) -> list[Check]:
        return sorted(self.checks, key=lambda c: c.name)

    def as_dict(self, timings: bool = False) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "params": {"n": self.params.n, "s": self.params.s},
            "seed": self.seed,
            "pass": self.passed,
            "checks": [c.as_dict(timings) for c in self.sorted_checks()],
        }

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.as_dict(timings), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"suite {self.suite}  n={self.params.n}  s={self.params.s!r}  seed={self.seed}"]
        for c in self.sorted_checks():
            flag = "PASS" if c.passed else "FAIL"
            lines.append(
                f"{flag}  {c.name:<44s} computed={c.computed:.12g}  reference={c.reference:.12g}"
                f"  err={c.rel_err if c.mode == 'rel' else c.abs_err:.3e}  tol={c.tolerance:.1e}"
                f" [{c.mode}]  {c.seconds:.2f}s"
            )
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"


def _timed(name, fn, reference, tolerance, mode="rel", note=""):
    t0 = time.perf_counter()
    try:
        value = float(fn())
    except FracGelfandError as exc:
        value, note = math.nan, f"{type(exc).__name__}: {exc}"
    return Check(name, value, reference, tolerance, mode, time.perf_counter() - t0, note)


def suite_fraclap(p: Params, spec: QuadSpec, seed: int) -> list[Check]:
    lam = lambda_ns(p)
    u = singular_profile(p)
    out = [_timed("fraclap.log_identity", lambda: fraclap_log_identity(p, spec), lam, 1e-6)]
    for r in (0.5, 1.0, 2.0):
        out.append(
            _timed(f"fraclap.singular_solution[r={r:g}]", lambda r=r: fraclap_radial(u, p, r, spec),
                   lam * r ** (-2 * p.s), 1e-6)
        )
    for r in (1.0, 10.0):
        out.append(
            _timed(f"fraclap.volume_growth[r={r:g}]", lambda r=r: volume_growth(p, r, spec),
                   volume_growth_closed_form(p, r), 1e-8)
        )
    return out


def suite_hardy(p: Params, spec: QuadSpec, seed: int) -> list[Check]:
    Lam = Lambda_ns(p)
    out = [_timed("hardy.constant_integral", lambda: hardy_constant_integral(p, spec), Lam, 1e-6)]
    quotients = {}
    for eps in HARDY_EPS:
        chk = _timed(f"hardy.quotient_lower_bound[eps={eps:g}]", lambda e=eps: hardy_quotient(p, e, spec),
                     Lam, 1e-8, "min")
        quotients[eps] = chk.computed
        out.append(chk)
    q = quotients[HARDY_EPS[-1]]
    out.append(Check(f"hardy.quotient_within_5pct[eps={HARDY_EPS[-1]:g}]", q, Lam, 0.05, "rel"))
    excess = [quotients[e] - Lam for e in HARDY_EPS]
    steps = [b - a for a, b in zip(excess[:-1], excess[1:])]
    worst = max(steps) if all(map(math.isfinite, steps)) else math.nan
    out.append(Check("hardy.excess_decreasing", worst, 0.0, 0.0, "max",
                     note="largest increment of the excess along decreasing eps"))
    return out


def suite_extension(p: Params, spec: QuadSpec, seed: int) -> list[Check]:
    out = []
    for t in (0.1, 1.0, 10.0):
        out.append(_timed(f"extension.poisson_normalization[t={t:g}]",
                          lambda t=t: poisson_normalization(p, t, spec), 1.0, 1e-8, "abs"))
    rng = np.random.default_rng(seed)
    pts = [(float(rng.uniform(0.0, 2.0)), float(rng.uniform(0.05, 2.0))) for _ in range(3)]
    shift = 2 * p.s * math.log(2.0)
    field = singular_field(p)
    for k, (rho, t) in enumerate(pts):
        out.append(_timed(
            f"extension.homogeneity[{k}]",
            lambda rho=rho, t=t: extend_singular(p, 2 * rho, 2 * t, spec) + shift - extend_singular(p, rho, t, spec),
            0.0, 1e-6, "abs"))
        out.append(_timed(
            f"extension.profile_vs_poisson[{k}]",
            lambda rho=rho, t=t: field(rho, t) - extend_singular(p, rho, t, spec),
            0.0, 1e-8, "abs"))
        theta = math.atan2(t, rho)
        out.append(_timed(
            f"extension.radial_deficit[{k}]",
            lambda rho=rho, t=t, theta=theta: radial_deficit(field, math.hypot(rho, t), theta),
            0.0, 1e-5, "abs"))
    return out


def random_bump_fields(p: Params, seed: int, count: int = 4):
    """The singular field plus ``count`` seeded Gaussian-bump perturbations."""
    base = singular_field(p)
    rng = np.random.default_rng(seed)
    fields = [base]
    for k in range(count):
        amp = float(rng.uniform(-0.5, 0.5))
        c = float(rng.uniform(0.3, 1.5))
        w = float(rng.uniform(0.3, 1.0))
        g = lambda rho, t, amp=amp, c=c, w=w: amp * np.exp(-(rho**2 + (t - c) ** 2) / w**2)  # noqa: E731
        fields.append(base.perturbed(g, name=f"bump{k}"))
    return fields


def suite_energy(p: Params, spec: QuadSpec, seed: int) -> list[Check]:
    out = []
    t0 = time.perf_counter()
    try:
        spread, values = energy_constancy_scan(p, (0.5, 1.0, 2.0, 4.0), spec)
        E = values[1]
        note = f"E(1) = {E!r}"
    except FracGelfandError as exc:
        spread, E, note = math.nan, 0.0, str(exc)
    out.append(Check("energy.constancy_spread", spread, 0.0, 1e-4 * (1 + abs(E)), "max",
                     time.perf_counter() - t0, note))
    field = singular_field(p)
    for lam in (0.5, 1.0, 2.0, 4.0):
        out.append(_timed(f"energy.derivative_surface[lam={lam:g}]",
                          lambda lam=lam: energy_derivative_surface(field, p, lam, spec), 0.0, 1e-8, "max"))
    for k, f in enumerate(random_bump_fields(p, seed)):
        for lam in (2.0, 3.0):
            t0 = time.perf_counter()
            try:
                lhs, rhs, gap = energy_scaling_identity(f, p, lam, spec)
                note = ""
            except FracGelfandError as exc:
                lhs, rhs, note = math.nan, math.nan, str(exc)
            out.append(Check(f"energy.scaling_identity[field={k},lam={lam:g}]", lhs, rhs, 1e-5, "rel",
                             time.perf_counter() - t0, note))
    return out


def suite_representation(p: Params, spec: QuadSpec, seed: int) -> list[Check]:
    t0 = time.perf_counter()
    rep = representation_check(p, (0.5, 1.0, 2.0, 4.0), 1e-3, spec)
    t1 = time.perf_counter()
    ctl = representation_check(p, (0.5, 1.0, 2.0, 4.0), 1e-3, spec, constant_scale=1.5)
    t2 = time.perf_counter()
    note = "; ".join(f"r={r}: {m}" for r, m in rep.failures.items())
    return [
        Check("representation.constancy_spread", rep.spread, 0.0, 1e-3, "max", t1 - t0,
              note or f"u - v = {rep.constant!r}"),
        Check("representation.negative_control_spread", ctl.spread, 0.05, 0.0, "min", t2 - t1,
              "riesz constant scaled by 1.5"),
    ]


SUITES: dict[str, Callable[[Params, QuadSpec, int], list[Check]]] = {
    "fraclap": suite_fraclap,
    "hardy": suite_hardy,
    "extension": suite_extension,
    "energy": suite_energy,
    "representation": suite_representation,
}


def run_suite(name: str, p: Params, spec: QuadSpec = DEFAULT_SPEC, seed: int = 0) -> VerificationReport:
    """Run one suite, or every suite for ``all``."""
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise KeyError(name)
    report = VerificationReport(name, p, seed)
    for key in names:
        report.checks.extend(SUITES[key](p, spec, seed))
    return report
