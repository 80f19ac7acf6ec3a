import math

import numpy as np
import pytest
from scipy.integrate import quad

from fracgelfand.constants import Lambda_ns, Params, c_ns, lambda_ns, sphere_area
from fracgelfand.errors import DomainError
from fracgelfand.fraclap import (
    CutoffFamily,
    RadialLogProfile,
    bump,
    f_eps,
    fraclap_log_identity,
    fraclap_radial,
    hardy_constant_integral,
    hardy_quotient,
    singular_profile,
    volume_growth,
    volume_growth_closed_form,
)


def smooth_bump(r):
    """C-infinity, supported in (0.5, 3)."""
    x = (r - 0.5) / 2.5
    return math.exp(-1.0 / (x * (1 - x))) * 40.0 if 0 < x < 1 else 0.0


SMOOTH = RadialLogProfile(0.0, 0.0, smooth_bump, (0.5, 3.0))


def brute_fraclap_1d(g, x, s, lo, hi):
    """c_{1,s} int_0^inf (2 g(x) - g(x+z) - g(x-z)) z^{-1-2s} dz, g even."""
    c = c_ns(Params(1, s))
    G = lambda y: g(abs(y))  # noqa: E731
    pts = sorted({abs(x - b) for b in (lo, hi, -lo, -hi)} | {abs(x + b) for b in (lo, hi)})
    f = lambda z: (2 * G(x) - G(x + z) - G(x - z)) * z ** (-1 - 2 * s)  # noqa: E731
    # near z = 0 the bracket is O(z^2)
    edges = [0.0] + [p for p in pts if p > 0] + [hi + x + 1]
    val = sum(quad(f, a, b, limit=400, epsabs=1e-13, epsrel=1e-11)[0] for a, b in zip(edges[:-1], edges[1:]))
    val += 2 * G(x) * (hi + x + 1) ** (-2 * s) / (2 * s)
    return c * val


# --- bump and cutoff family ----------------------------------------------------

def test_bump_shape():
    assert bump(0.3) == 1.0 and bump(1.0) == 1.0 and bump(2.0) == 0.0 and bump(5.0) == 0.0
    assert bump(1.5) == pytest.approx(0.5, abs=1e-15)
    xs = np.linspace(1.0, 2.0, 201)
    vals = [bump(x) for x in xs]
    assert all(a >= b for a, b in zip(vals[:-1], vals[1:]))


@pytest.mark.parametrize("eps", [1e-2, 1e-3, 0.2])
def test_cutoff_family_invariants(eps):
    eta = CutoffFamily(eps)
    for r in np.geomspace(eps * 1.0001, 1 / eps * 0.9999, 50):
        assert eta(r) == 1.0
    for r in [eps / 2 * 0.999, eps / 10, 2 / eps * 1.001, 10 / eps, 0.0]:
        assert eta(r) == 0.0


def test_cutoff_family_log_norm_grows_like_log():
    for eps in (1e-2, 1e-3, 1e-4):
        L = CutoffFamily(eps).log_norm()
        assert 2 * math.log(1 / eps) < L < 2 * math.log(2 / eps)


@pytest.mark.parametrize("eps", [0.0, 0.25, -1.0, 0.3])
def test_cutoff_family_rejects(eps):
    with pytest.raises(DomainError):
        CutoffFamily(eps)


def test_profile_validation():
    with pytest.raises(DomainError):
        RadialLogProfile(1.0, 0.0, smooth_bump, None)
    with pytest.raises(DomainError):
        RadialLogProfile(1.0, 0.0, smooth_bump, (0.0, 1.0))
    u = singular_profile(Params(3, 0.5))
    assert u(1.0) == pytest.approx(math.log(lambda_ns(Params(3, 0.5))))
    assert u.shifted(2.0)(3.0) == pytest.approx(u(3.0) + 2.0)


# --- log identity and singular residual --------------------------------------------

@pytest.mark.parametrize("n, s, expected", [(2, 0.5, 1.0), (4, 0.5, 2.0)])
def test_log_identity_exact_values(n, s, expected):
    assert fraclap_log_identity(Params(n, s)) == pytest.approx(expected, rel=1e-6)


def test_log_identity_against_constants(wide_params):
    assert fraclap_log_identity(wide_params) == pytest.approx(lambda_ns(wide_params), rel=1e-6)


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_singular_residual(acc_params, r):
    lam = lambda_ns(acc_params)
    val = fraclap_radial(singular_profile(acc_params), acc_params, r)
    assert val == pytest.approx(lam * r ** (-2 * acc_params.s), rel=1e-6)


def test_constant_profile_gives_zero():
    assert fraclap_radial(RadialLogProfile(0.0, 3.7), Params(3, 0.5), 1.3) == 0.0


def test_offset_invariance(wide_params):
    u = singular_profile(wide_params)
    a = fraclap_radial(u, wide_params, 1.7)
    b = fraclap_radial(u.shifted(11.0), wide_params, 1.7)
    assert abs(a - b) < 1e-10
    p = Params(3, 0.4)
    a = fraclap_radial(SMOOTH, p, 1.1)
    b = fraclap_radial(SMOOTH.shifted(-5.0), p, 1.1)
    assert abs(a - b) < 1e-10


@pytest.mark.parametrize("r", [1e-5, 1e-3, 0.1, 30.0, 1e3, 1e6])
def test_scaling_covariance(r):
    p = Params(4, 0.3)
    u = singular_profile(p)
    assert fraclap_radial(u, p, r) == pytest.approx(r ** (-0.6) * fraclap_radial(u, p, 1.0), rel=1e-9)


def test_smooth_part_radius_band():
    with pytest.raises(DomainError):
        fraclap_radial(SMOOTH, Params(3, 0.5), 5e3)
    with pytest.raises(DomainError):
        fraclap_radial(SMOOTH, Params(3, 0.5), -1.0)


@pytest.mark.parametrize("s", [0.2, 0.3, 0.45])
@pytest.mark.parametrize("x", [0.3, 1.0, 1.75, 2.9, 4.0])
def test_smooth_part_against_brute_force_n1(s, x):
    val = fraclap_radial(SMOOTH, Params(1, s), x)
    ref = brute_fraclap_1d(smooth_bump, x, s, 0.5, 3.0)
    assert val == pytest.approx(ref, rel=1e-6, abs=1e-8)


def test_smooth_part_dilation_covariance():
    # (-Delta)^s [g(./lam)](x) = lam^{-2s} ((-Delta)^s g)(x/lam)
    p = Params(3, 0.35)
    lam = 2.0
    dil = RadialLogProfile(0.0, 0.0, lambda r: smooth_bump(r / lam), (0.5 * lam, 3.0 * lam))
    for x in (1.5, 3.0, 5.0):
        a = fraclap_radial(dil, p, x)
        b = lam ** (-0.7) * fraclap_radial(SMOOTH, p, x / lam)
        assert a == pytest.approx(b, rel=1e-6, abs=1e-9)


def test_log_plus_smooth_is_linear():
    p = Params(2, 0.5)
    mixed = RadialLogProfile(-1.0, 0.3, smooth_bump, (0.5, 3.0))
    a = fraclap_radial(mixed, p, 1.2)
    b = fraclap_radial(singular_profile(p), p, 1.2) + fraclap_radial(SMOOTH, p, 1.2)
    assert a == pytest.approx(b, rel=1e-9)


# --- Hardy constant -----------------------------------------------------------------

def test_hardy_constant_examples():
    assert hardy_constant_integral(Params(2, 0.5)) == pytest.approx(0.228473, abs=1e-6)
    # the oracle is the closed form (mpmath value 1.0942198076...)
    assert hardy_constant_integral(Params(4, 0.5)) == pytest.approx(Lambda_ns(Params(4, 0.5)), rel=1e-6)


def test_hardy_constant_two_routes(wide_params):
    assert hardy_constant_integral(wide_params) == pytest.approx(Lambda_ns(wide_params), rel=1e-6)


def test_hardy_constant_equals_lambda_on_boundary():
    p = Params(9, 0.63237)
    assert hardy_constant_integral(p) == pytest.approx(lambda_ns(p), rel=1e-4)


# --- f_eps ----------------------------------------------------------------------

def test_f_eps_vanishes_at_one():
    assert f_eps(1.0, 1e-2) == 0.0


def test_f_eps_bound_uniform_in_eps():
    ts = [1e-3, 0.01, 0.1, 0.5, 0.9, 1.1, 2.0, 4.0, 10.0, 100.0, 1e3]
    ratios = {}
    for eps in (1e-2, 1e-3, 1e-4):
        ratios[eps] = max(abs(f_eps(t, eps)) / (1 + abs(math.log(t))) for t in ts)
    C = max(ratios.values())
    assert C < 1.0
    # the constant does not grow as eps shrinks
    assert ratios[1e-4] <= ratios[1e-2] * (1 + 1e-9)


def test_f_eps_frozen_values():
    # regression: for t within the plateau the value is independent of eps
    for eps in (1e-2, 1e-3, 1e-4):
        assert f_eps(4.0, eps) == pytest.approx(1.259521, abs=1e-6)
        assert f_eps(100.0, eps) == pytest.approx(4.478397, abs=1e-6)


@pytest.mark.parametrize("t", [0.01, 0.3, 3.0, 50.0])
def test_f_eps_reflection(t):
    for eps in (1e-2, 1e-4):
        assert abs(f_eps(t, eps) - f_eps(1 / t, eps)) <= 1.0
        assert f_eps(t, eps) + f_eps(1 / t, eps) >= 0.0


def test_f_eps_rejects():
    with pytest.raises(DomainError):
        f_eps(0.0, 1e-2)
    with pytest.raises(DomainError):
        f_eps(2.0, 0.5)


# --- Hardy quotient ---------------------------------------------------------------

# brute-force double integral of the Gagliardo form of psi for n = 1, s = 0.3,
# eps = 0.2 (nested adaptive quadrature, about 30 s); reproduced in the slow test
BRUTE_N1 = 0.5066588075086


def test_hardy_quotient_matches_brute_force_value():
    assert hardy_quotient(Params(1, 0.3), 0.2) == pytest.approx(BRUTE_N1, rel=1e-9)


@pytest.mark.slow
def test_hardy_quotient_brute_force_recomputed():
    n, s, eps = 1, 0.3, 0.2
    p = Params(n, s)
    eta = CutoffFamily(eps)
    a = (1 - 2 * s) / 2
    psi = lambda r: r**-a * eta(r) if r > 0 else 0.0  # noqa: E731
    edges = [eps / 2, eps, 1 / eps, 2 / eps]
    hi = edges[-1]
    opts = dict(limit=400, epsabs=1e-13, epsrel=1e-11)

    def F(x):
        px = psi(x)
        same = lambda z: (px - psi(x + z)) ** 2 / abs(z) ** (1 + 2 * s)  # noqa: E731
        zpts = [e - x for e in edges]
        far = max(hi - x, 0.0) + 10
        v1 = quad(same, -x, 0, points=[z for z in zpts if -x < z < 0] or None, **opts)[0]
        v2 = quad(same, 0, far, points=[z for z in zpts if 0 < z < far] or None, **opts)[0]
        v2 += px**2 * far ** (-2 * s) / (2 * s)
        v3 = quad(lambda y: (px - psi(y)) ** 2 / (x + y) ** (1 + 2 * s), 0, hi, points=edges[:-1], limit=400,
                  epsabs=1e-13)[0] + px**2 * (x + hi) ** (-2 * s) / (2 * s)
        return v1 + v2 + v3

    xs = [0.0] + edges
    num = sum(quad(F, a_, b_, limit=200, epsabs=1e-11, epsrel=1e-9)[0] for a_, b_ in zip(xs[:-1], xs[1:]))
    num += quad(F, hi, math.inf, limit=200, epsabs=1e-11, epsrel=1e-9)[0]
    num *= c_ns(p)
    den = 2 * eta.log_norm()
    assert num / den == pytest.approx(hardy_quotient(p, eps), rel=1e-8)


def test_hardy_quotient_lower_bound_and_monotone_excess(acc_params):
    Lam = Lambda_ns(acc_params)
    qs = [hardy_quotient(acc_params, e) for e in (1e-2, 1e-3, 1e-4)]
    assert all(q >= Lam - 1e-8 for q in qs)
    excess = [q - Lam for q in qs]
    assert excess[0] > excess[1] > excess[2] > 0


def test_hardy_excess_decays_like_inverse_log():
    # excess * ln(1/eps) settles to an O(1) constant
    p = Params(3, 0.5)
    Lam = Lambda_ns(p)
    prods = [(hardy_quotient(p, e) - Lam) * math.log(1 / e) for e in (1e-3, 1e-4, 1e-6)]
    assert max(prods) / min(prods) < 1.2


# --- volume growth --------------------------------------------------------------

def test_volume_growth_example():
    p = Params(3, 0.5)
    assert volume_growth(p, 1.0) == pytest.approx(lambda_ns(p) * 4 * math.pi / 2, rel=1e-8)


@pytest.mark.parametrize("r", [1e-2, 1.0, 10.0, 1e3])
def test_volume_growth_closed_form(wide_params, r):
    assert volume_growth(wide_params, r) == pytest.approx(volume_growth_closed_form(wide_params, r), rel=1e-8)


def test_volume_growth_doubling(acc_params):
    p = acc_params
    ratio = volume_growth(p, 6.0) / volume_growth(p, 3.0)
    assert ratio == pytest.approx(2 ** (p.n - 2 * p.s), rel=1e-8)
    assert volume_growth_closed_form(p, 1.0) == pytest.approx(
        lambda_ns(p) * sphere_area(p.n) / (p.n - 2 * p.s), rel=1e-15)


def test_volume_growth_rejects():
    with pytest.raises(DomainError):
        volume_growth(Params(3, 0.5), 0.0)
