"""Complete exponential sums S_q(c) and the 2-adic-weighted sums T_q.

    S_q(c) = sum*_{d mod q} sum_{x mod qA, x = a (A)} e_q(d (Q1(x1) - Q2(x2) - l) + c.x)

Each side is reduced to a table of its values (and linear phases) modulo q,
so the x-sum becomes a weighted character sum of length q; the d-sum runs
over units directly.  Sums use ``math.fsum`` in a fixed order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from . import budget
from .arith import divisors, moebius_sieve
from .constants.tables import SPLIT
from .errors import DomainError
from .forms import QuadForm
from .quadcount import CongruenceClass, ShiftedProblem

__all__ = [
    "ExpSumValue",
    "exp_sum_Sq",
    "exp_sum_Sq_exact",
    "exp_sum_Tq",
    "check_multiplicativity",
    "partial_singular_sum",
    "partial_singular_sum_exact",
    "bound_constant",
    "averaged_growth_exponent",
]

_EPS = np.finfo(float).eps
F3 = QuadForm.sum_of_squares(3)


@dataclass(frozen=True)
class ExpSumValue:
    q: int
    c: tuple[int, ...]
    value: complex
    abs_error: float

    def __complex__(self) -> complex:
        return self.value

    def __abs__(self) -> float:
        return abs(self.value)


def _phases(q: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(q) / q)


def _points(form: QuadForm, cc: CongruenceClass, q: int) -> list[np.ndarray]:
    """Per-coordinate representatives x = a + A z, z mod q."""
    return [a + cc.modulus * np.arange(q, dtype=np.int64) for a in cc.residues]


def _value_counts(form: QuadForm, cc: CongruenceClass, q: int) -> np.ndarray:
    """N[u] = #{z mod q : Q(a + A z) = u (mod q)}."""
    pts = _points(form, cc, q)
    if form.is_diagonal:
        acc = None
        for coef, x in zip(form.diag, pts):
            one = np.bincount((coef % q) * (x % q) ** 2 % q, minlength=q).astype(np.int64)
            if acc is None:
                acc = one
            else:
                full = np.convolve(acc, one)
                acc = full[:q].copy()
                acc[: len(full) - q] += full[q:]
        return acc
    budget.check_points(q**form.dim, "exponential-sum enumeration")
    grid = np.stack(np.meshgrid(*pts, indexing="ij"), axis=-1).reshape(-1, form.dim)
    return np.bincount(form(grid % q) % q, minlength=q).astype(np.int64)


def _side_sums(form: QuadForm, cc: CongruenceClass, q: int, c, sign: int) -> np.ndarray:
    """T[d] = sum_{z mod q} e_q(sign d Q(x) + c.x), x = a + A z, for all d mod q."""
    E = _phases(q)
    d = np.arange(q, dtype=np.int64)[:, None]
    c = [int(v) % q for v in c]
    if not any(c):
        N = _value_counts(form, cc, q)
        u = np.arange(q, dtype=np.int64)[None, :]
        return E[(sign * d * u) % q] @ N.astype(float)
    pts = _points(form, cc, q)
    if form.is_diagonal:
        out = np.ones(q, dtype=complex)
        for coef, ci, x in zip(form.diag, c, pts):
            xm = x % q
            arg = (sign * d * ((coef % q) * xm * xm % q)[None, :] + (ci * xm % q)[None, :]) % q
            out *= E[arg].sum(axis=1)
        return out
    budget.check_points(q**form.dim, "exponential-sum enumeration")
    grid = np.stack(np.meshgrid(*pts, indexing="ij"), axis=-1).reshape(-1, form.dim) % q
    vals = form(grid) % q
    lin = (grid @ np.array(c, dtype=np.int64)) % q
    H = np.bincount(vals * q + lin, minlength=q * q).reshape(q, q).astype(float)
    u = np.arange(q, dtype=np.int64)
    return np.array([np.sum(H * E[(sign * int(di) * u[:, None] + u[None, :]) % q]) for di in range(q)])


def _unit_sum(q: int, l: int, T1: np.ndarray, T2: np.ndarray) -> complex:
    E = _phases(q)
    terms = [E[(-dd * l) % q] * T1[dd] * T2[dd] for dd in range(q) if gcd(dd, q) == 1]
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def _error_bound(q: int, n_points: int) -> float:
    # each of the ~q * n_points unit-modulus terms carries a few ulps
    return 16 * _EPS * q * n_points * (1 + math.log2(q + 1))


def _split_c(prob: ShiftedProblem, c) -> tuple[tuple[int, ...], tuple[int, ...]]:
    n = prob.n
    c = tuple(int(v) for v in (c if c is not None else (0,) * n))
    if len(c) != n:
        raise DomainError(f"c must have length {n}")
    return c[: prob.q1.dim], c[prob.q1.dim :]


def exp_sum_Sq(q: int, c, prob: ShiftedProblem) -> ExpSumValue:
    """S_q(c) in double precision with a rounding bound."""
    if q < 1:
        raise DomainError("q must be positive")
    c1, c2 = _split_c(prob, c)
    if q == 1:
        return ExpSumValue(1, c1 + c2, 1 + 0j, 0.0)
    T1 = _side_sums(prob.q1, prob.cc1, q, c1, +1)
    T2 = _side_sums(prob.q2, prob.cc2, q, c2, -1)
    val = _unit_sum(q, prob.l, T1, T2)
    return ExpSumValue(q, c1 + c2, val, _error_bound(q, q**prob.n))


def _ramanujan(q: int) -> np.ndarray:
    """c_q(m) for m mod q, exactly."""
    mu = moebius_sieve(q)
    out = np.zeros(q, dtype=object)
    for g in divisors(q):
        out[::g] += int(mu[q // g]) * g
    return out


def exp_sum_Sq_exact(q: int, prob: ShiftedProblem) -> int:
    """S_q(0) as an integer via Ramanujan sums."""
    if q < 1:
        raise DomainError("q must be positive")
    N1 = _value_counts(prob.q1, prob.cc1, q).astype(object)
    N2 = _value_counts(prob.q2, prob.cc2, q).astype(object)
    # W[w] = #{(x, y) : Q1(x) - Q2(y) = w}
    W = np.zeros(q, dtype=object)
    for u2 in np.flatnonzero(N2).tolist():
        W += N2[u2] * np.roll(N1, -u2)
    cq = _ramanujan(q)
    shift = np.roll(cq, prob.l)  # shift[w] = c_q(w - l)
    return int(np.dot(W, shift))


def exp_sum_Tq(q: int, j: int, k: int, st: tuple[int, int], l: int, table=SPLIT) -> ExpSumValue:
    """T_q(j, k, (s, t); l) for the split problem.

    x runs over residues mod M(s) q j^2 whose value F(x) lies in the value
    classes of s mod M(s) and is divisible by j^2; y likewise with t, k.
    The phase is e_q(d (s F(x) - t F(y) - l)).
    """
    if q < 1:
        raise DomainError("q must be positive")
    s, t = st
    E = _phases(q)
    dd = np.arange(q, dtype=np.int64)[:, None]

    def side(coeff: int, cls: int, jj: int, sign: int) -> tuple[np.ndarray, int]:
        M = table.moduli[cls]
        L = M * q * jj * jj
        budget.check_elements(q * L, "T_q phase table")
        x = np.arange(L, dtype=np.int64)
        sq = np.bincount(x * x % L, minlength=L).astype(np.int64)
        N = sq
        for _ in range(F3.dim - 1):
            full = np.convolve(N, sq)
            N = full[:L].copy()
            N[: len(full) - L] += full[L:]
        u = np.arange(L, dtype=np.int64)
        keep = np.isin(u % M, sorted(table.value_classes(cls))) & (u % (jj * jj) == 0)
        N = np.where(keep, N, 0)
        vals = E[(sign * dd * coeff * (u[None, :] % q)) % q] @ N.astype(float)
        return vals, L**3

    T1, n1 = side(s, s, j, +1)
    T2, n2 = side(t, t, k, -1)
    val = _unit_sum(q, l, T1, T2) if q > 1 else complex(T1[0] * T2[0])
    return ExpSumValue(q, (), val, _error_bound(q, n1 * n2))


def check_multiplicativity(q1: int, q2: int, c, prob: ShiftedProblem, rtol: float = 1e-6):
    """Compare S_{q1 q2}(c) with S_{q1}(q2^-1 c) S_{q2}(q1^-1 c).

    Returns (ok, residual).  The moduli must be coprime to each other and to
    the congruence moduli.
    """
    if gcd(q1, q2) != 1:
        raise DomainError("q1 and q2 must be coprime")
    if gcd(q1 * q2, prob.cc1.modulus * prob.cc2.modulus) != 1:
        raise DomainError("q1 q2 must be coprime to the congruence moduli")
    c = tuple(int(v) for v in (c if c is not None else (0,) * prob.n))
    lhs = exp_sum_Sq(q1 * q2, c, prob).value
    inv2 = pow(q2, -1, q1) if q1 > 1 else 0
    inv1 = pow(q1, -1, q2) if q2 > 1 else 0
    a = exp_sum_Sq(q1, tuple(inv2 * v for v in c), prob).value
    b = exp_sum_Sq(q2, tuple(inv1 * v for v in c), prob).value
    residual = abs(lhs - a * b)
    return residual <= rtol * (1 + abs(lhs)), residual


def partial_singular_sum(Z: int, prob: ShiftedProblem) -> float:
    """sum_{q <= Z} q^-n Re S_q(0), summed in the order q = 1..Z."""
    if Z < 1:
        raise DomainError("Z must be positive")
    n = prob.n
    return math.fsum(exp_sum_Sq(q, None, prob).value.real / q**n for q in range(1, Z + 1))


def partial_singular_sum_exact(Z: int, prob: ShiftedProblem) -> Fraction:
    """The same partial sum as an exact rational."""
    n = prob.n
    return sum((Fraction(exp_sum_Sq_exact(q, prob), q**n) for q in range(1, Z + 1)), Fraction(0))


def bound_constant(q: int, c, prob: ShiftedProblem) -> float:
    """|S_q(c)| / ((A1 A2)^n q^(1 + n/2))."""
    n = prob.n
    A = prob.cc1.modulus * prob.cc2.modulus
    return abs(exp_sum_Sq(q, c, prob).value) / (A**n * q ** (1 + n / 2))


def averaged_growth_exponent(Zs, prob: ShiftedProblem) -> float:
    """Least-squares slope of log sum_{q <= Z} |S_q(0)| against log Z."""
    Zs = sorted(int(z) for z in Zs)
    if len(Zs) < 2:
        raise DomainError("need at least two cutoffs")
    sums, acc, q = [], 0.0, 0
    for Z in Zs:
        while q < Z:
            q += 1
            acc += abs(exp_sum_Sq(q, None, prob).value)
        sums.append(acc)
    slope, _ = np.polyfit(np.log(Zs), np.log(sums), 1)
    return float(slope)
