"""Exact integer arithmetic: Kronecker symbol, Moebius sieve, discriminants.

Scalar functions work on Python ints; the sieves return numpy arrays.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from . import budget
from .errors import DomainError

__all__ = [
    "FundKind",
    "FundClass",
    "kronecker",
    "valuation",
    "factorint",
    "divisors",
    "is_prime",
    "primes_up_to",
    "is_squarefree",
    "moebius_sieve",
    "squarefree_sieve",
    "classify_discriminant",
    "fundamental_mask",
    "flat_mask",
]


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), the standard extension of the Jacobi symbol.

    Conventions: (a/1) = 1, (a/0) = [|a| == 1], (a/-1) = sign(a) (with
    (0/-1) = 1), and (a/2) = 0, 1, -1 for a even, a = +-1 mod 8, a = +-3 mod 8.
    """
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 == 1 and a % 8 in (3, 5):
            result = -result
    # n is now odd and positive: Jacobi symbol
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def valuation(p: int, n: int) -> int:
    """Largest v with p**v dividing n (n != 0)."""
    if n == 0:
        raise DomainError("valuation of 0 is undefined")
    if p < 2:
        raise DomainError(f"invalid prime {p}")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def factorint(n: int) -> dict[int, int]:
    """Prime factorization by trial division (fine for |n| < 10**14 or so)."""
    n = abs(n)
    if n == 0:
        raise DomainError("cannot factor 0")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for q in (d, d + 2):
            while n % q == 0:
                out[q] = out.get(q, 0) + 1
                n //= q
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of n."""
    divs = [1]
    for p, e in factorint(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=16)
def _prime_sieve(n: int) -> np.ndarray:
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags)


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    budget.check_elements(n + 1, "prime sieve")
    return _prime_sieve(int(n)).tolist()


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factorint(n).values())


def moebius_sieve(N: int) -> np.ndarray:
    """mu(n) for 0 <= n <= N as int8 (index 0 holds 0)."""
    if N < 1:
        raise DomainError("moebius_sieve needs N >= 1")
    budget.check_elements(N + 1, "Moebius sieve")
    mu = np.ones(N + 1, dtype=np.int8)
    mu[0] = 0
    for p in _prime_sieve(N).tolist():
        mu[p::p] *= -1
        if p * p <= N:
            mu[p * p :: p * p] = 0
    return mu


def squarefree_sieve(N: int) -> np.ndarray:
    """Boolean mask sf[n] = (n is squarefree), 0 <= n <= N."""
    budget.check_elements(N + 1, "squarefree sieve")
    sf = np.ones(N + 1, dtype=bool)
    sf[0] = False
    for d in range(2, isqrt(N) + 1):
        sf[d * d :: d * d] = False
    return sf


class FundKind(enum.Enum):
    NOT_FUNDAMENTAL = "NotFundamental"
    ODD = "OddFund"
    EVEN = "EvenFund"


@dataclass(frozen=True)
class FundClass:
    kind: FundKind
    residue_mod8: int

    @property
    def fundamental(self) -> bool:
        return self.kind is not FundKind.NOT_FUNDAMENTAL

    @property
    def flat(self) -> bool:
        """Fundamental and not congruent to 1 mod 8."""
        return self.fundamental and self.residue_mod8 != 1


def classify_discriminant(d: int) -> FundClass:
    """Classify a negative integer d as a fundamental discriminant or not.

    d is fundamental iff d = 1 mod 4 and squarefree, or d = 4m with m
    squarefree and m = 2, 3 mod 4 (all congruences on the signed value).
    """
    if d >= 0:
        raise DomainError(f"classify_discriminant expects d < 0, got {d}")
    r8 = d % 8
    if d % 4 == 1:
        kind = FundKind.ODD if is_squarefree(d) else FundKind.NOT_FUNDAMENTAL
    elif d % 4 == 0 and (d // 4) % 4 in (2, 3) and is_squarefree(d // 4):
        kind = FundKind.EVEN
    else:
        kind = FundKind.NOT_FUNDAMENTAL
    return FundClass(kind, r8)


def fundamental_mask(N: int) -> np.ndarray:
    """mask[n] = (-n is a fundamental discriminant), 0 <= n <= N."""
    sf = squarefree_sieve(N)
    n = np.arange(N + 1, dtype=np.int64)
    odd = ((-n) % 4 == 1) & sf
    m = n // 4
    even = (n % 4 == 0) & np.isin((-m) % 4, (2, 3)) & sf[m]
    mask = odd | even
    mask[0] = False
    return mask


def flat_mask(N: int) -> np.ndarray:
    """mask[n] = (-n fundamental and -n not = 1 mod 8)."""
    n = np.arange(N + 1, dtype=np.int64)
    return fundamental_mask(N) & ((-n) % 8 != 1)


def crt_inverse(a: int, m: int) -> int:
    """Inverse of a modulo m (m >= 1); pow(a, -1, 1) is 0 by convention."""
    if m == 1:
        return 0
    if gcd(a, m) != 1:
        raise DomainError(f"{a} is not invertible mod {m}")
    return pow(a, -1, m)
