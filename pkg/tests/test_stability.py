import time

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracgelfand.constants import Params
from fracgelfand.errors import DomainError
from fracgelfand.stability import (
    Outcome,
    Verdict,
    classify,
    phase_diagram,
    stability_boundary,
    stability_margin,
)

# roots of ln(lambda/Lambda) in s by mpmath findroot at 40 digits
ROOT_8 = 0.28206671815476774974
ROOT_9 = 0.63237610608303311677


def mp_margin(n, s):
    mp.mp.dps = 40
    n, s = mp.mpf(n), mp.mpf(s)
    G = mp.loggamma
    return G(n / 2) + G(1 + s) - G((n - 2 * s) / 2) - 2 * (G((n + 2 * s) / 4) - G((n - 2 * s) / 4))


def test_frozen_roots_are_roots():
    mp.mp.dps = 40
    assert float(mp.findroot(lambda s: mp_margin(8, s), 0.28)) == pytest.approx(ROOT_8, abs=1e-15)
    assert float(mp.findroot(lambda s: mp_margin(9, s), 0.63)) == pytest.approx(ROOT_9, abs=1e-15)


@pytest.mark.parametrize("n, root, printed", [(8, ROOT_8, 0.28206), (9, ROOT_9, 0.63237)])
def test_boundary_roots(n, root, printed):
    t0 = time.perf_counter()
    res = stability_boundary(n)
    assert time.perf_counter() - t0 < 1.0
    assert res.outcome is Outcome.ROOT
    assert res.s_star == pytest.approx(root, abs=1e-10)
    assert abs(res.s_star - printed) <= 5e-5
    lo, hi = res.bracket
    assert lo <= res.s_star <= hi
    assert res.iterations > 0


@pytest.mark.parametrize("tol", [1e-4, 1e-7, 1e-12])
def test_boundary_respects_tolerance(tol):
    res = stability_boundary(8, tol)
    assert abs(res.s_star - ROOT_8) <= max(tol, 1e-14)


@pytest.mark.parametrize("n, outcome", [(3, Outcome.ALL_UNSTABLE), (7, Outcome.ALL_UNSTABLE),
                                        (10, Outcome.ALL_STABLE), (20, Outcome.ALL_STABLE)])
def test_boundary_outcomes(n, outcome):
    res = stability_boundary(n)
    assert res.outcome is outcome
    assert res.s_star is None
    assert res.as_dict() == {"n": n, "outcome": str(outcome)}


@pytest.mark.parametrize("n, tol", [(2, 1e-10), (1, 1e-10), (8, 0.0), (8, 1e-2), (8.5, 1e-10)])
def test_boundary_rejects(n, tol):
    with pytest.raises(DomainError):
        stability_boundary(n, tol)


def test_verdict_sides_of_the_root():
    assert classify(Params(8, ROOT_8 - 1e-6)).verdict is Verdict.SINGULAR_STABLE
    assert classify(Params(8, ROOT_8 + 1e-6)).verdict is Verdict.SINGULAR_UNSTABLE
    assert classify(Params(8, 0.28206)).verdict is Verdict.SINGULAR_STABLE
    assert classify(Params(9, 0.63237)).verdict is Verdict.SINGULAR_STABLE
    assert classify(Params(9, 0.6324)).verdict is Verdict.SINGULAR_UNSTABLE


def test_tie_band():
    p = Params(8, ROOT_8 + 1e-9)
    assert classify(p, tie_tol=1e-6).verdict is Verdict.BOUNDARY
    assert str(Verdict.BOUNDARY) == "boundary"
    with pytest.raises(DomainError):
        classify(p, tie_tol=-1.0)


def test_margin_value_against_mpmath():
    assert stability_margin(Params(2, 0.5)) == pytest.approx(1.4763359659736188624, rel=1e-14)


@settings(max_examples=200, deadline=None)
@given(st.integers(3, 40), st.floats(0.01, 0.99))
def test_margin_matches_mpmath(n, s):
    assert stability_margin(Params(n, s)) == pytest.approx(float(mp_margin(n, s)), abs=1e-13)


def test_phase_pattern():
    t0 = time.perf_counter()
    rows = phase_diagram(3, 12, 9)
    assert time.perf_counter() - t0 < 5.0
    assert len(rows) == 90
    by_n = {}
    for r in rows:
        by_n.setdefault(r.n, []).append(r)
    for n, cells in by_n.items():
        verdicts = [c.verdict for c in cells]
        if n <= 7:
            assert all(v is Verdict.SINGULAR_UNSTABLE for v in verdicts)
        elif n >= 10:
            assert all(v is Verdict.SINGULAR_STABLE for v in verdicts)
        else:
            flips = sum(a is not b for a, b in zip(verdicts[:-1], verdicts[1:]))
            assert flips == 1
            assert verdicts[0] is Verdict.SINGULAR_STABLE


def test_phase_diagram_grid_invariant():
    # stable exactly when the margin is <= 0, on a finer grid
    for r in phase_diagram(3, 12, 19):
        assert (r.verdict is Verdict.SINGULAR_STABLE) == (r.margin <= 0)
        assert r.n > 2 * r.s


def test_phase_diagram_rejects():
    with pytest.raises(DomainError):
        phase_diagram(2, 5, 9)
    with pytest.raises(DomainError):
        phase_diagram(5, 4, 9)
    with pytest.raises(DomainError):
        phase_diagram(3, 5, 1)


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 30), st.floats(0.02, 0.98))
def test_margin_decreases_with_dimension(n, s):
    assert stability_margin(Params(n + 1, s)) < stability_margin(Params(n, s))
