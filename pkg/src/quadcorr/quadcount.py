"""Exact left-hand sides: constrained lattice counts and class-number correlations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import budget
from .arith import flat_mask, primes_up_to
from .errors import DomainError
from .forms import QuadForm
from .repnum import SieveCache, class_number_table, class_numbers, rq_sieve

__all__ = [
    "CongruenceClass",
    "ShiftedProblem",
    "count_constrained",
    "empirical_D",
    "empirical_nonsplit",
    "empirical_rr",
    "flat_values_mask",
]


@dataclass(frozen=True)
class CongruenceClass:
    """x = residues (mod modulus), entries reduced into [0, modulus)."""

    modulus: int
    residues: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise DomainError("modulus must be positive")
        object.__setattr__(self, "residues", tuple(int(r) % self.modulus for r in self.residues))

    @classmethod
    def trivial(cls, k: int) -> "CongruenceClass":
        return cls(1, (0,) * k)

    @property
    def is_trivial(self) -> bool:
        return self.modulus == 1

    def __len__(self):
        return len(self.residues)


@dataclass(frozen=True)
class ShiftedProblem:
    """Pairs (x, y) with x = a1 (A1), y = a2 (A2), Q1(x) - Q2(y) = l, Q1(x) <= Y, Q2(y) <= X."""

    q1: QuadForm
    q2: QuadForm
    l: int = 0
    cc1: CongruenceClass | None = None
    cc2: CongruenceClass | None = None
    X: int = 1
    Y: int = field(init=False)

    def __post_init__(self):
        if self.l < 0:
            raise DomainError("shift must be non-negative")
        if self.X < 0:
            raise DomainError("X must be non-negative")
        cc1 = self.cc1 or CongruenceClass.trivial(self.q1.dim)
        cc2 = self.cc2 or CongruenceClass.trivial(self.q2.dim)
        if len(cc1) != self.q1.dim or len(cc2) != self.q2.dim:
            raise DomainError("congruence class length does not match form dimension")
        object.__setattr__(self, "cc1", cc1)
        object.__setattr__(self, "cc2", cc2)
        object.__setattr__(self, "Y", self.X + self.l)

    @property
    def n(self) -> int:
        return self.q1.dim + self.q2.dim


def _fiber_sum(t1: np.ndarray, t2: np.ndarray, X: int, l: int, start: int = 0) -> int:
    """sum_{start <= n <= X} t2[n] * t1[n + l], exact."""
    a = t2[start : X + 1]
    b = t1[start + l : X + l + 1]
    if a.size == 0:
        return 0
    bound = int(a.max(initial=0)) * int(b.max(initial=0)) * a.size
    if bound < 2**62:
        return int(np.dot(a.astype(np.int64), b.astype(np.int64)))
    return sum(int(x) * int(y) for x, y in zip(a.tolist(), b.tolist()))


def count_constrained(p: ShiftedProblem, cache: SieveCache | None = None) -> int:
    """Exact count of the sharp-window constrained sum."""
    get = cache.get if cache is not None else rq_sieve
    t1 = get(p.q1, p.Y, p.cc1.residues, p.cc1.modulus).counts
    t2 = get(p.q2, p.X, p.cc2.residues, p.cc2.modulus).counts
    return _fiber_sum(t1, t2, p.X, p.l)


def empirical_rr(Q1: QuadForm, Q2: QuadForm, X: int, l: int, cache: SieveCache | None = None) -> int:
    """sum_{1 <= n <= X} r_Q2(n) r_Q1(n + l)."""
    if X < 1 or l < 0:
        raise DomainError("need X >= 1 and l >= 0")
    get = cache.get if cache is not None else rq_sieve
    t1 = get(Q1, X + l).counts
    t2 = get(Q2, X).counts
    return _fiber_sum(t1, t2, X, l, start=1)


def empirical_D(X: int, l: int, h: np.ndarray | None = None) -> int:
    """Flat sum of h(-n) h(-n-l) over 1 <= n <= X.

    Both -n and -n-l must be fundamental and not = 1 (mod 8).  ``h`` may be a
    precomputed class-number table reaching X + l.
    """
    if X < 1 or l < 0:
        raise DomainError("need X >= 1 and l >= 0")
    N = X + l
    if h is None or len(h) <= N:
        h = class_number_table(N)
    ok = flat_mask(N)
    n = np.arange(1, X + 1)
    sel = n[ok[n] & ok[n + l]]
    return int(np.dot(h[sel].astype(np.int64), h[sel + l].astype(np.int64)))


def flat_values_mask(values: np.ndarray) -> np.ndarray:
    """mask[i] = (-values[i] fundamental and not = 1 mod 8), for positive int64 values."""
    v = np.asarray(values, dtype=np.int64)
    if v.size == 0:
        return np.zeros(0, dtype=bool)
    if v.min() < 1:
        raise DomainError("values must be positive")
    r = (-v) % 16
    # -v = 5 mod 8 (odd, 1 mod 4, not 1 mod 8) or -v = 4m with m = 2, 3 mod 4
    odd = (-v) % 8 == 5
    even = np.isin(r, (8, 12))
    core = np.where(odd, v, v // 4)
    ok = odd | even
    if not ok.any():
        return ok
    # squarefree test of the odd part by trial division with p^2
    limit = int(np.sqrt(float(core.max()))) + 1
    budget.check_elements(limit, "squarefree trial division")
    for p in primes_up_to(limit):
        if p == 2:
            continue
        ok &= core % (p * p) != 0
    return ok


def empirical_nonsplit(X: int, d: int) -> int:
    """Flat sum of h(-(n^2 + d)) over 1 <= n <= X."""
    if X < 1 or d < 0:
        raise DomainError("need X >= 1 and d >= 0")
    n = np.arange(1, X + 1, dtype=np.int64)
    vals = n * n + d
    vals = vals[flat_values_mask(vals)]
    if vals.size == 0:
        return 0
    return int(class_numbers((-vals).tolist()).sum())
