"""Singular integrals: slab volumes around the real quadric.

All densities are limits (1/2 kappa) vol{|rho1 - (X rho2 + l)/Y| <= kappa}
over the region where the normalized values rho1 = Q1(x1)/Y and
rho2 = Q2(x2)/X carry the window weights.  Integrating the spheres out first
leaves one-dimensional integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import mpmath
import numpy as np
from scipy import integrate

from ..errors import DomainError, ExtrapolationError

__all__ = [
    "sigma_inf",
    "sigma_inf_quad",
    "slab_density",
    "gamma_inf_nonsplit",
    "gamma_inf_quad",
    "WindowSpec",
    "c_inf_window",
    "SIGMA_INF_PREFACTOR",
]

# the closed form below is (2 pi^2 / 3) X^{-3/2} Y^{-1/2} [...]
SIGMA_INF_PREFACTOR = 2 * math.pi**2 / 3


def _unit_ball_volume(k: int) -> float:
    return math.pi ** (k / 2) / math.gamma(k / 2 + 1)


def sigma_inf(X: float, l: float) -> float:
    """(16 pi^2 / (3 sqrt(X + l))) int_0^1 r^2 sqrt(r^2 X + l) dr in closed form.

    Evaluated in 40-digit arithmetic, so the cancellation for l >> X is
    harmless.
    """
    if X <= 0:
        raise DomainError("X must be positive")
    if l < 0:
        raise DomainError("l must be non-negative")
    if l == 0:
        return 2 * SIGMA_INF_PREFACTOR
    with mpmath.workdps(40):
        X_, l_ = mpmath.mpf(X), mpmath.mpf(l)
        Y = X_ + l_
        bracket = (2 * X_ + l_) * mpmath.sqrt(X_ * Y) - l_**2 * mpmath.asinh(mpmath.sqrt(X_ / l_))
        return float(SIGMA_INF_PREFACTOR * X_ ** mpmath.mpf(-1.5) / mpmath.sqrt(Y) * bracket)


def sigma_inf_quad(X: float, l: float) -> float:
    """The same integral by adaptive quadrature."""
    if X <= 0 or l < 0:
        raise DomainError("need X > 0 and l >= 0")
    val, _ = integrate.quad(lambda r: r * r * math.sqrt(r * r * X + l), 0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)
    return 16 * math.pi**2 / (3 * math.sqrt(X + l)) * val


def slab_density(k1: int, k2: int, X: float, l: float) -> float:
    """Slab density for sums of k1 and k2 squares, sharp windows.

    Equals (k1/2) V_k1 * k2 V_k2 * int_0^1 r^(k2-1) ((X r^2 + l) / Y)^(k1/2 - 1) dr,
    with V_k the volume of the unit k-ball.  Divide by sqrt(det G1 det G2)
    for other forms.
    """
    if X <= 0 or l < 0:
        raise DomainError("need X > 0 and l >= 0")
    Y = X + l
    e = k1 / 2 - 1
    if e == 0:
        integral = 1.0 / k2
    else:
        integral, _ = integrate.quad(
            lambda r: r ** (k2 - 1) * ((X * r * r + l) / Y) ** e, 0.0, 1.0, epsabs=0.0, epsrel=1e-12, limit=200
        )
    return (k1 / 2) * _unit_ball_volume(k1) * k2 * _unit_ball_volume(k2) * integral


def gamma_inf_nonsplit(X: float, d: float) -> float:
    """Slab density for F(x) - y^2 = d with |x|^2 <= X^2 + d, |y| <= X.

    4 pi (X^2 + d)^(-1/2) int_0^1 sqrt(X^2 v^2 + d) dv
    = 2 pi (X^2 + d)^(-1/2) [sqrt(X^2 + d) + (d / X) asinh(X / sqrt d)].
    """
    if X <= 0:
        raise DomainError("X must be positive")
    if d < 0:
        raise DomainError("d must be non-negative")
    if d == 0:
        return 2 * math.pi
    with mpmath.workdps(40):
        X_, d_ = mpmath.mpf(X), mpmath.mpf(d)
        R = mpmath.sqrt(X_**2 + d_)
        return float(2 * mpmath.pi / R * (R + d_ / X_ * mpmath.asinh(X_ / mpmath.sqrt(d_))))


def gamma_inf_quad(X: float, d: float) -> float:
    if X <= 0 or d < 0:
        raise DomainError("need X > 0 and d >= 0")
    val, _ = integrate.quad(lambda v: math.sqrt(X * X * v * v + d), 0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)
    return 4 * math.pi / math.sqrt(X * X + d) * val


# ---------------------------------------------------------------------------
# general product windows
# ---------------------------------------------------------------------------


def _sharp(rho: float) -> float:
    return 1.0 if 0.0 <= rho <= 1.0 else 0.0


def bump(rho: float) -> float:
    """Smooth weight supported on (0, 1)."""
    if rho <= 0.0 or rho >= 1.0:
        return 0.0
    return math.exp(-1.0 / (rho * (1.0 - rho)))


@dataclass(frozen=True)
class WindowSpec:
    """Product window w1(Q1(x1)/Y) w2(Q2(x2)/X) for sums of k1 and k2 squares.

    A weight of None means the sharp indicator of [0, 1].
    """

    k1: int
    k2: int
    w1: Callable[[float], float] | None = None
    w2: Callable[[float], float] | None = None

    @classmethod
    def sharp(cls, k1: int = 3, k2: int = 3) -> "WindowSpec":
        return cls(k1, k2)


def _kappa_slab(w: WindowSpec, X: float, l: float, kappa: float) -> float:
    """(1 / 2 kappa) times the weighted volume of the slab of half-width kappa."""
    Y = X + l
    k1, k2 = w.k1, w.k2
    c1 = k1 * _unit_ball_volume(k1)
    c2 = k2 * _unit_ball_volume(k2)
    V1 = _unit_ball_volume(k1)

    def inner(r2: float) -> float:
        u = (X * r2 * r2 + l) / Y
        a, b = max(u - kappa, 0.0), min(u + kappa, 1.0)
        if b <= a:
            return 0.0
        if w.w1 is None:
            return V1 * (b ** (k1 / 2) - a ** (k1 / 2))
        val, _ = integrate.quad(
            lambda r1: w.w1(r1 * r1) * c1 * r1 ** (k1 - 1), math.sqrt(a), math.sqrt(b), epsabs=1e-15, epsrel=1e-12
        )
        return val

    w2 = w.w2 or _sharp
    # breakpoints in r2 where the slab meets 0 or 1
    pts = []
    for target in (kappa, 1 - kappa, 1 + kappa):
        r2sq = (target * Y - l) / X
        if 0.0 < r2sq < 1.0:
            pts.append(math.sqrt(r2sq))
    val, _ = integrate.quad(
        lambda r2: w2(r2 * r2) * c2 * r2 ** (k2 - 1) * inner(r2),
        0.0,
        1.0,
        points=sorted(pts) or None,
        epsabs=1e-15,
        epsrel=1e-11,
        limit=400,
    )
    return val / (2 * kappa)


def c_inf_window(
    w: WindowSpec,
    X: float,
    l: float,
    *,
    kappa0: float = 1e-2,
    levels: int = 6,
    exponents=(1.0, 1.5, 2.0, 2.5, 3.0),
    rtol: float = 1e-5,
) -> float:
    """lim_{kappa -> 0} of the kappa-slab volume, by Richardson extrapolation.

    The slab average has an expansion in powers kappa^e (half-integer powers
    come from the square-root edge of the sphere shells); the leading
    coefficient is solved from ``levels`` halvings of kappa.  Two
    extrapolations of different order must agree to ``rtol``.
    """
    if X <= 0 or l < 0:
        raise DomainError("need X > 0 and l >= 0")
    kappas = kappa0 / 2.0 ** np.arange(levels)
    vals = np.array([_kappa_slab(w, X, l, float(k)) for k in kappas])

    def extrapolate(m: int) -> float:
        ex = list(exponents[: m - 1])
        A = np.column_stack([np.ones(m)] + [kappas[-m:] ** e for e in ex])
        return float(np.linalg.solve(A, vals[-m:])[0])

    m = min(levels, len(exponents) + 1)
    hi, lo = extrapolate(m), extrapolate(m - 1)
    if not math.isfinite(hi) or abs(hi - lo) > rtol * max(abs(hi), 1e-300):
        raise ExtrapolationError(f"kappa extrapolation unstable: {hi!r} vs {lo!r}")
    return hi
