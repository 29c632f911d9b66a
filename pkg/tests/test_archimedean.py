import math

import pytest
from scipy import integrate

from quadcorr.constants import archimedean as arch
from quadcorr.constants.archimedean import (
    WindowSpec,
    bump,
    c_inf_window,
    gamma_inf_nonsplit,
    gamma_inf_quad,
    sigma_inf,
    sigma_inf_quad,
    slab_density,
)
from quadcorr.errors import DomainError

PI2 = math.pi**2


@pytest.mark.parametrize("X, l", [(1, 0), (1, 1), (1, 1000), (1000, 1), (3.5, 0.25), (1e5, 12), (1e4, 1e4)])
def test_closed_form_matches_quadrature(X, l):
    assert sigma_inf(X, l) == pytest.approx(sigma_inf_quad(X, l), rel=1e-8)


def test_limits():
    assert abs(sigma_inf(7.0, 0) - 4 * PI2 / 3) <= 4 * 2.3e-16 * 4 * PI2 / 3
    assert sigma_inf(1.0, 1e6) == pytest.approx(16 * PI2 / 9, rel=1e-2)
    # approaching l = 0 continuously
    assert sigma_inf(1.0, 1e-12) == pytest.approx(4 * PI2 / 3, rel=1e-9)
    # depends only on l / X
    assert sigma_inf(10.0, 30.0) == pytest.approx(sigma_inf(1.0, 3.0), rel=1e-13)


def test_monotone_in_shift():
    vals = [sigma_inf(1.0, l) for l in (0, 0.01, 0.1, 1, 10, 100)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("X, d", [(1, 1), (10, 2), (1e4, 4), (3, 1e6), (1e3, 0.5)])
def test_nonsplit_closed_form(X, d):
    assert gamma_inf_nonsplit(X, d) == pytest.approx(gamma_inf_quad(X, d), rel=1e-8)
    assert gamma_inf_nonsplit(X, d) == pytest.approx(gamma_inf_nonsplit(1.0, d / X**2), rel=1e-12)


def test_nonsplit_limits():
    assert gamma_inf_nonsplit(5.0, 0) == pytest.approx(2 * math.pi)
    assert gamma_inf_nonsplit(1e-3, 1.0) == pytest.approx(4 * math.pi, rel=1e-5)


def test_slab_density_special_cases():
    assert slab_density(2, 2, 10.0, 3.0) == pytest.approx(PI2)
    assert slab_density(3, 3, 2.0, 5.0) == pytest.approx(1.5 * sigma_inf(2.0, 5.0), rel=1e-10)
    # k1 = 4: (2 V4) (k2 V_k2) int r^(k2-1) u dr at l = 0 gives 2 V4 V_k2 k2 / (k2 + 2)
    V4, V3 = PI2 / 2, 4 * math.pi / 3
    assert slab_density(4, 3, 1.0, 0.0) == pytest.approx(2 * V4 * 3 * V3 / 5, rel=1e-10)


@pytest.mark.parametrize("X, l", [(1.0, 0.0), (1.0, 1.0), (4.0, 1.0)])
def test_kappa_limit_sharp_windows(X, l):
    assert c_inf_window(WindowSpec.sharp(), X, l) == pytest.approx(1.5 * sigma_inf(X, l), rel=1e-4)


def test_kappa_limit_two_plus_two():
    assert c_inf_window(WindowSpec.sharp(2, 2), 1.0, 0.5) == pytest.approx(PI2, rel=1e-4)


def test_kappa_limit_smooth_weights():
    # two-dimensional shells have d vol = pi d rho, so at l = 0 the density is pi^2 int w1 w2
    w = WindowSpec(2, 2, bump, bump)
    want = PI2 * integrate.quad(lambda r: bump(r) ** 2, 0, 1, epsabs=1e-16)[0]
    assert c_inf_window(w, 1.0, 0.0, kappa0=0.05, rtol=1e-4) == pytest.approx(want, rel=1e-4)


def test_prefactor_is_read_at_call_time(monkeypatch):
    base = sigma_inf(1.0, 1.0)
    monkeypatch.setattr(arch, "SIGMA_INF_PREFACTOR", arch.SIGMA_INF_PREFACTOR * 1.01)
    assert sigma_inf(1.0, 1.0) == pytest.approx(1.01 * base)


def test_domain_errors():
    for f in (sigma_inf, sigma_inf_quad, gamma_inf_nonsplit):
        with pytest.raises(DomainError):
            f(0.0, 1.0)
        with pytest.raises(DomainError):
            f(1.0, -1.0)
    with pytest.raises(DomainError):
        slab_density(3, 3, -1.0, 0.0)
