"""Predicted main terms: archimedean density times a truncated Euler product."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import (
    LocalProblem,
    gamma_inf_nonsplit,
    sigma_hat,
    sigma_inf,
    sigma_tilde,
    singular_series,
    slab_density,
)
from .constants.series import EulerProduct, iwaniec_product
from .errors import DomainError
from .forms import QuadForm

__all__ = ["Prediction", "predict_split", "predict_nonsplit", "predict_r2", "predict_rq", "predict", "KINDS"]

KINDS = ("split", "nonsplit", "r2", "rq")
SUM2 = QuadForm.sum_of_squares(2)


@dataclass(frozen=True)
class Prediction:
    kind: str
    X: int
    shift: int
    main: float
    archimedean: float
    finite: EulerProduct

    @property
    def sigma_finite(self) -> float:
        return self.finite.value


def predict_split(X: int, l: int, P_max: int = 200, *, workers: int = 1) -> Prediction:
    """Main term of the flat sum of h(-n) h(-n-l) over n <= X.

    The slab density of F(x) - F(y) for two sums of three squares is
    3/2 sigma_inf(X, l); see slab_density(3, 3, X, l).
    """
    fin = sigma_hat(l, P_max, workers=workers)
    arch = 1.5 * sigma_inf(X, l)
    main = arch * fin.value * X**1.5 * (X + l) ** 0.5 / 576
    return Prediction("split", X, l, main, arch, fin)


def predict_nonsplit(X: int, d: int, P_max: int = 200, *, workers: int = 1) -> Prediction:
    """Main term of the flat sum of h(-(n^2 + d)) over 1 <= n <= X.

    Each n is hit by y = +n and y = -n, hence 1/48 rather than 1/24 in front
    of the count of F(x) - y^2 = d.
    """
    fin = sigma_tilde(d, P_max, workers=workers)
    arch = gamma_inf_nonsplit(X, d)
    main = arch * fin.value * X * math.sqrt(X * X + d) / 48
    return Prediction("nonsplit", X, d, main, arch, fin)


def predict_r2(X: int, l: int, P_max: int = 1000, *, workers: int = 1) -> Prediction:
    """c(l) X for the sum of r(n) r(n + l), r the two-squares function."""
    fin = iwaniec_product(l, P_max, workers=workers)
    arch = math.pi**2
    return Prediction("r2", X, l, arch * fin.value * X, arch, fin)


def predict_rq(Q1: QuadForm, Q2: QuadForm, X: int, l: int, P_max: int = 100, *, workers: int = 1) -> Prediction:
    """c X^(k2/2) (X + l)^(k1/2 - 1) for the sum of r_Q2(n) r_Q1(n + l)."""
    k1, k2 = Q1.dim, Q2.dim
    if k1 + k2 < 4:
        raise DomainError("need at least four variables in total")
    arch = slab_density(k1, k2, X, l) / math.sqrt(float(Q1.det_gram * Q2.det_gram))
    fin = singular_series(LocalProblem.plain(Q1, Q2, l), P_max, workers=workers)
    main = arch * fin.value * X ** (k2 / 2) * (X + l) ** (k1 / 2 - 1)
    return Prediction("rq", X, l, main, arch, fin)


def predict(kind: str, X: int, shift: int, P_max: int | None = None, *, forms=None, workers: int = 1) -> Prediction:
    kw = {} if P_max is None else {"P_max": P_max}
    if kind == "split":
        return predict_split(X, shift, workers=workers, **kw)
    if kind == "nonsplit":
        return predict_nonsplit(X, shift, workers=workers, **kw)
    if kind == "r2":
        return predict_r2(X, shift, workers=workers, **kw)
    if kind == "rq":
        Q1, Q2 = forms if forms is not None else (SUM2, SUM2)
        return predict_rq(Q1, Q2, X, shift, workers=workers, **kw)
    raise DomainError(f"unknown kind {kind!r}")
