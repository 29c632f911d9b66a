"""Enumeration of lattice points in the ellipsoid Q(x) <= N.

Two routes produce the value histogram ``hist[m] = #{x : Q(x) = m}``:
diagonal forms are handled by truncated convolution of one-variable theta
series, anything else by Fincke-Pohst enumeration with an exact integer
re-check of every candidate.  Both accept a residue class x = a (mod A).
"""

from __future__ import annotations

from math import isqrt, sqrt

import numpy as np

from . import budget
from .forms import QuadForm


def _class_points(a: int, A: int, lo: float, hi: float) -> np.ndarray:
    """Integers x in [lo, hi] with x = a (mod A)."""
    zlo = int(np.ceil((lo - a) / A))
    zhi = int(np.floor((hi - a) / A))
    if zhi < zlo:
        return np.zeros(0, dtype=np.int64)
    return a + A * np.arange(zlo, zhi + 1, dtype=np.int64)


def _theta(coef: int, N: int, a: int, A: int) -> np.ndarray:
    r = isqrt(N // coef)
    xs = _class_points(a, A, -r, r)
    vals = coef * xs * xs
    return np.bincount(vals[vals <= N], minlength=N + 1).astype(np.int64)


def _truncated_convolve(acc: np.ndarray, th: np.ndarray) -> np.ndarray:
    N = len(acc) - 1
    out = np.zeros_like(acc)
    for m in np.flatnonzero(th).tolist():
        out[m:] += th[m] * acc[: N + 1 - m]
    return out


def _diagonal_histogram(form: QuadForm, N: int, residues, A: int) -> np.ndarray:
    acc = None
    for coef, a in zip(form.diag, residues):
        th = _theta(coef, N, a, A)
        acc = th if acc is None else _truncated_convolve(acc, th)
    return acc


def _cholesky_upper(form: QuadForm) -> tuple[np.ndarray, np.ndarray]:
    G = np.array(form.gram(), dtype=float)
    R = np.linalg.cholesky(G).T  # G = R^T R
    d = np.diag(R) ** 2
    mu = R / np.diag(R)[:, None]
    return d, mu


def _fincke_pohst_histogram(form: QuadForm, N: int, residues, A: int) -> np.ndarray:
    k = form.dim
    d, mu = _cholesky_upper(form)
    hist = np.zeros(N + 1, dtype=np.int64)
    q00 = form.q(0, 0)
    row0 = [form.q(0, j) for j in range(1, k)]
    x = [0] * k
    slack = 1e-7 * (N + 1)

    def tail_value() -> int:
        return sum(form.q(i, j) * x[i] * x[j] for i in range(1, k) for j in range(i, k))

    def descend(i: int, remaining: float) -> None:
        center = -sum(mu[i, j] * x[j] for j in range(i + 1, k))
        half = sqrt(max(remaining + slack, 0.0) / d[i])
        pts = _class_points(residues[i], A, center - half - 1e-9, center + half + 1e-9)
        if i == 0:
            if pts.size == 0:
                return
            lin = sum(c * x[j + 1] for j, c in enumerate(row0))
            vals = q00 * pts * pts + lin * pts + tail_value()
            vals = vals[(vals >= 0) & (vals <= N)]
            hist[:] += np.bincount(vals, minlength=N + 1)
            return
        for xi in pts.tolist():
            x[i] = xi
            t = xi - center
            descend(i - 1, remaining - d[i] * t * t)
        x[i] = 0

    descend(k - 1, float(N))
    return hist


def value_histogram(form: QuadForm, N: int, residues=None, modulus: int = 1,
                    method: str = "auto") -> np.ndarray:
    """hist[m] = #{x in Z^k : x = residues (mod modulus), Q(x) = m}, 0 <= m <= N."""
    if N < 0:
        raise ValueError("N must be non-negative")
    residues = [0] * form.dim if residues is None else [int(r) % modulus for r in residues]
    if len(residues) != form.dim:
        raise ValueError("residue vector length does not match the form")
    budget.check_elements(N + 1, "representation table")
    est = form.ball_volume(N + 1) / modulus**form.dim + 1
    if method == "auto":
        method = "diagonal" if form.is_diagonal else "fincke-pohst"
    if method == "diagonal":
        if not form.is_diagonal:
            raise ValueError("diagonal method needs a diagonal form")
        return _diagonal_histogram(form, N, residues, modulus)
    budget.check_points(int(est), "ellipsoid enumeration")
    return _fincke_pohst_histogram(form, N, residues, modulus)


def ball_count_bruteforce(form: QuadForm, N: int, residues=None, modulus: int = 1) -> np.ndarray:
    """Histogram by scanning a bounding box (test oracle; tiny N only)."""
    k = form.dim
    residues = [0] * k if residues is None else list(residues)
    # |x_i| <= sqrt(N * (G^-1)_ii)
    Ginv = np.linalg.inv(np.array(form.gram(), dtype=float))
    bounds = [int(sqrt(N * Ginv[i, i])) + 1 for i in range(k)]
    axes = [_class_points(residues[i] % modulus, modulus, -b, b) for i, b in enumerate(bounds)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, k)
    vals = form(grid)
    vals = vals[vals <= N]
    return np.bincount(vals, minlength=N + 1).astype(np.int64)
