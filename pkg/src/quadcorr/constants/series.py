"""Euler products of local densities: sigma_hat(l), sigma_tilde(d), c(l)."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType

from ..arith import kronecker, primes_up_to, valuation
from ..errors import DomainError
from ..forms import QuadForm
from ..quadcount import ShiftedProblem
from .local import LocalProblem, Side, density_cp
from .tables import NONSPLIT, SPLIT

__all__ = [
    "EulerProduct",
    "TAIL_CONSTANT",
    "gamma_jk",
    "gamma_nonsplit",
    "sigma_p",
    "sigma_tilde_p",
    "iwaniec_cp",
    "sigma_hat",
    "sigma_tilde",
    "iwaniec_c",
    "singular_series",
    "euler_product",
]

F3 = QuadForm.sum_of_squares(3)
X1 = QuadForm.sum_of_squares(1)
SUM2 = QuadForm.sum_of_squares(2)

TAIL_CONSTANT = 10.0


@dataclass(frozen=True)
class EulerProduct:
    """Truncated product over p <= cutoff with a heuristic relative tail bound."""

    factors: MappingProxyType
    cutoff: int
    tail_bound: float
    value: float

    def exact(self) -> Fraction:
        return math.prod(self.factors.values(), start=Fraction(1))

    @property
    def nonpositive(self) -> tuple[int, ...]:
        """Primes whose factor is <= 0 (reported, never assumed away)."""
        return tuple(p for p, f in self.factors.items() if f <= 0)

    def factor_strings(self) -> dict[int, str]:
        return {p: str(f) for p, f in self.factors.items()}


@lru_cache(maxsize=1)
def _inverse_square_prime_sums(limit: int = 10**6) -> tuple[list[int], list[float]]:
    """Primes up to limit and the suffix sums of p^-2 beyond each of them."""
    ps = primes_up_to(limit)
    # remainder beyond limit from sum_{p > N} p^-2 ~ 1 / (N log N)
    tail = 1.0 / (limit * math.log(limit))
    suffix = [0.0] * len(ps)
    acc = tail
    for i in range(len(ps) - 1, -1, -1):
        suffix[i] = acc
        acc += 1.0 / ps[i] ** 2
    return ps, suffix


def tail_bound(P_max: int, C: float = TAIL_CONSTANT) -> float:
    """exp(C sum_{p > P_max} p^-2) - 1, the relative size allowed for the missing factors."""
    import bisect

    ps, suffix = _inverse_square_prime_sums()
    i = bisect.bisect_right(ps, P_max)
    rest = suffix[i - 1] if i > 0 else suffix[0] + 1.0 / ps[0] ** 2
    return math.expm1(C * rest)


def euler_product(factor, P_max: int, *, workers: int = 1) -> EulerProduct:
    """Assemble p -> factor(p) for p <= P_max; the merge is ordered by p."""
    if P_max < 2:
        raise DomainError("P_max must be at least 2")
    ps = primes_up_to(P_max)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            values = list(pool.map(factor, ps))
    else:
        values = [factor(p) for p in ps]
    factors = dict(zip(ps, values))
    exact = math.prod(values, start=Fraction(1))
    return EulerProduct(MappingProxyType(factors), P_max, tail_bound(P_max), float(exact))


def _class_key(m: int, p: int) -> tuple:
    """Local class of m that the densities below depend on."""
    if m == 0:
        return (None,)
    v = valuation(p, m)
    u = m // p**v
    return (v, u % 8) if p == 2 else (v, kronecker(u, p))


def _class_rep(key: tuple, p: int) -> int:
    if key == (None,):
        return 0
    v, r = key
    if p == 2:
        return 2**v * r
    if r == 1:
        return p**v
    g = 2
    while kronecker(g, p) != -1:
        g += 1
    return p**v * g


# ---------------------------------------------------------------------------
# split problem: F(x) - F(y) = l, F the sum of three squares
# ---------------------------------------------------------------------------


def _two_adic_side(table, s: int, coeff: int, form: QuadForm = F3) -> Side:
    return Side(form, coeff, None, table.moduli[s], table.value_classes(s))


def _odd_side(j: int, p: int, form: QuadForm = F3) -> Side:
    e = 2 * valuation(p, j)
    return Side(form, 1, None, p**e, frozenset({0})) if e else Side(form)


def gamma_jk(j: int, k: int, st: tuple[int, int] | None, l: int, p: int) -> Fraction:
    """Local density of F(x) - F(y) = l with p^(2 v_p(j)) | F(x), p^(2 v_p(k)) | F(y).

    At p = 2 the pair st = (s, t) selects F(x) in R(s) mod M(s), F(y) in
    R(t) mod M(t) and the equation s F(x) - t F(y) = l; j and k must be odd.
    """
    if p == 2:
        if st is None:
            raise DomainError("p = 2 needs the class pair (s, t)")
        if j % 2 == 0 or k % 2 == 0:
            raise DomainError("j and k are odd at p = 2")
        s, t = st
        prob = LocalProblem(_two_adic_side(SPLIT, s, s), _two_adic_side(SPLIT, t, t), int(l))
    else:
        prob = LocalProblem(_odd_side(j, p), _odd_side(k, p), int(l))
    return density_cp(p, prob).normalized


@lru_cache(maxsize=None)
def _sigma_p_key(p: int, key: tuple) -> Fraction:
    l = _class_rep(key, p)
    if p == 2:
        return sum(
            (gamma_jk(1, 1, (s, t), l, 2) / SPLIT.tau(s, t) ** 2 for s in SPLIT.S for t in SPLIT.S),
            Fraction(0),
        )
    g = lambda j, k: gamma_jk(j, k, None, l, p)  # noqa: E731
    return g(1, 1) - g(p, 1) - g(1, p) + g(p, p)


def sigma_p(l: int, p: int) -> Fraction:
    """Local factor of the split constant at p."""
    if l < 0:
        raise DomainError("shift must be non-negative")
    return _sigma_p_key(p, _class_key(l, p))


def sigma_hat(l: int, P_max: int = 200, *, workers: int = 1) -> EulerProduct:
    """prod_{p <= P_max} sigma_p(l)."""
    if P_max < 3:
        raise DomainError("P_max must be at least 3")
    return euler_product(lambda p: sigma_p(l, p), P_max, workers=workers)


# ---------------------------------------------------------------------------
# non-split problem: F(x) - y^2 = d
# ---------------------------------------------------------------------------


def gamma_nonsplit(j: int, s: int | None, d: int, p: int) -> Fraction:
    """Local density of F(x) - y^2 = d; p^(2 v_p(j)) | F(x), or F(x) in class s at p = 2."""
    if p == 2:
        if s is None:
            raise DomainError("p = 2 needs the class s")
        prob = LocalProblem(_two_adic_side(NONSPLIT, s, 1), Side(X1), int(d))
    else:
        prob = LocalProblem(_odd_side(j, p), Side(X1), int(d))
    return density_cp(p, prob).normalized


@lru_cache(maxsize=None)
def _sigma_tilde_key(p: int, key: tuple) -> Fraction:
    d = _class_rep(key, p)
    if p == 2:
        return sum((NONSPLIT.tau(s) * gamma_nonsplit(1, s, d, 2) for s in NONSPLIT.S), Fraction(0))
    return gamma_nonsplit(1, None, d, p) - gamma_nonsplit(p, None, d, p)


def sigma_tilde_p(d: int, p: int) -> Fraction:
    if d < 0:
        raise DomainError("d must be non-negative")
    return _sigma_tilde_key(p, _class_key(d, p))


def sigma_tilde(d: int, P_max: int = 200, *, workers: int = 1) -> EulerProduct:
    """prod_{p <= P_max} sigma_tilde_p(d)."""
    if P_max < 3:
        raise DomainError("P_max must be at least 3")
    return euler_product(lambda p: sigma_tilde_p(d, p), P_max, workers=workers)


# ---------------------------------------------------------------------------
# two squares and general forms
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _iwaniec_key(p: int, key: tuple) -> Fraction:
    return density_cp(p, LocalProblem.plain(SUM2, SUM2, _class_rep(key, p))).normalized


def iwaniec_cp(l: int, p: int) -> Fraction:
    """Local density of x1^2 + x2^2 - y1^2 - y2^2 = l."""
    if l < 1:
        raise DomainError("l must be positive")
    return _iwaniec_key(p, _class_key(l, p))


def iwaniec_c(l: int, P_max: int = 1000, *, workers: int = 1) -> float:
    """pi^2 prod_{p <= P_max} c_p(l)."""
    return math.pi**2 * iwaniec_product(l, P_max, workers=workers).value


def iwaniec_product(l: int, P_max: int = 1000, *, workers: int = 1) -> EulerProduct:
    return euler_product(lambda p: iwaniec_cp(l, p), P_max, workers=workers)


def singular_series(prob: LocalProblem | ShiftedProblem, P_max: int, *, workers: int = 1) -> EulerProduct:
    """prod_{p <= P_max} c_p for a general problem."""
    if isinstance(prob, ShiftedProblem):
        prob = LocalProblem.from_shifted(prob)
    return euler_product(lambda p: density_cp(p, prob).normalized, P_max, workers=workers)
