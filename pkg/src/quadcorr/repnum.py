"""Representation numbers r_Q(n) and class numbers h(D) of negative discriminants.

Class numbers are counted directly as reduced primitive binary forms, so
they stay independent of the three-squares route used by ``h_from_r3``.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt
from pathlib import Path

import numba
import numpy as np

from . import budget
from .arith import classify_discriminant, kronecker
from .errors import DomainError, IdentityViolation
from .forms import QuadForm
from .lattice import value_histogram

__all__ = [
    "RepTable",
    "rq_sieve",
    "r3_table",
    "r2_divisor",
    "class_number",
    "class_numbers",
    "class_number_table",
    "h_from_r3",
    "SieveCache",
    "save_table",
    "load_table",
]

SUM2 = QuadForm.sum_of_squares(2)
SUM3 = QuadForm.sum_of_squares(3)


@dataclass(frozen=True)
class RepTable:
    form: QuadForm
    bound: int
    counts: np.ndarray
    residues: tuple[int, ...] | None = None
    modulus: int = 1

    def __getitem__(self, n):
        return self.counts[n]

    def __len__(self):
        return self.bound + 1

    def truncated(self, N: int) -> "RepTable":
        if N > self.bound:
            raise ValueError(f"table only reaches {self.bound}")
        return RepTable(self.form, N, self.counts[: N + 1].copy(), self.residues, self.modulus)


def rq_sieve(Q: QuadForm, N: int, residues=None, modulus: int = 1) -> RepTable:
    """Exact r_Q(n) for 0 <= n <= N, optionally restricted to x = residues mod modulus."""
    counts = value_histogram(Q, N, residues, modulus)
    res = None if residues is None else tuple(int(r) % modulus for r in residues)
    return RepTable(Q, N, counts, res, modulus)


def r3_table(N: int) -> RepTable:
    return rq_sieve(SUM3, N)


def r2_divisor(n: int) -> int:
    """r(n) = 4 * sum_{d | n} chi_{-4}(d)."""
    if n < 1:
        raise DomainError("r2_divisor needs n >= 1")
    total = 0
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            total += kronecker(-4, d)
            e = n // d
            if e != d:
                total += kronecker(-4, e)
    return 4 * total


# ---------------------------------------------------------------------------
# class numbers by reduced-form enumeration
# ---------------------------------------------------------------------------


@numba.njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@numba.njit(cache=True)
def _class_number_table_kernel(N):
    # h[D] = #{(a,b,c) reduced primitive, 4ac - b^2 = D}
    h = np.zeros(N + 1, dtype=np.int64)
    amax = 0
    while 3 * (amax + 1) * (amax + 1) <= N:
        amax += 1
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            g = _gcd(a, abs(b))
            cmax = (N + b * b) // (4 * a)
            c0 = a if b >= 0 else a + 1
            for c in range(c0, cmax + 1):
                if _gcd(g, c) == 1:
                    h[4 * a * c - b * b] += 1
    return h


@numba.njit(cache=True)
def _spf_kernel(n):
    spf = np.zeros(n + 1, dtype=np.int32)
    for i in range(2, n + 1):
        if spf[i] == 0:
            for j in range(i, n + 1, i):
                if spf[j] == 0:
                    spf[j] = i
    return spf


@numba.njit(cache=True)
def _class_number_one(D, spf):
    # D = |disc| > 0 with D = 0, 3 mod 4; enumerate b >= 0 then a | (b^2 + D)/4
    primes = np.zeros(64, dtype=np.int64)
    exps = np.zeros(64, dtype=np.int64)
    cur = np.zeros(64, dtype=np.int64)
    h = 0
    b = D % 2
    while 3 * b * b <= D:
        k = (b * b + D) // 4
        # factor k
        m = k
        nf = 0
        while m > 1:
            p = spf[m]
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            primes[nf] = p
            exps[nf] = e
            nf += 1
        for i in range(nf):
            cur[i] = 0
        # odometer over divisors
        while True:
            a = 1
            for i in range(nf):
                for _ in range(cur[i]):
                    a *= primes[i]
            if a >= b and a >= 1 and a * a <= k:
                c = k // a
                if _gcd(_gcd(a, b), c) == 1:
                    if b == 0 or a == b or a == c:
                        h += 1
                    else:
                        h += 2
            i = 0
            while i < nf:
                cur[i] += 1
                if cur[i] <= exps[i]:
                    break
                cur[i] = 0
                i += 1
            if i == nf:
                break
        b += 2
    return h


@numba.njit(cache=True)
def _class_numbers_kernel(Ds, spf):
    out = np.zeros(Ds.shape[0], dtype=np.int64)
    for i in range(Ds.shape[0]):
        out[i] = _class_number_one(Ds[i], spf)
    return out


@lru_cache(maxsize=2)
def _spf(n: int) -> np.ndarray:
    size = 1 << max(10, (n + 1).bit_length())
    budget.check_elements(size, "smallest-prime-factor sieve")
    return _spf_kernel(size)


def _check_disc(D: int) -> None:
    if D >= 0 or (-D) % 4 not in (0, 3):
        raise DomainError(f"{D} is not a negative discriminant")


def class_numbers(Ds, *, require_fundamental: bool = False) -> np.ndarray:
    """h(D) for each negative discriminant in Ds (form class number, not divided by units)."""
    Ds = [int(D) for D in Ds]
    for D in Ds:
        _check_disc(D)
        if require_fundamental and not classify_discriminant(D).fundamental:
            raise DomainError(f"{D} is not a fundamental discriminant")
    if not Ds:
        return np.zeros(0, dtype=np.int64)
    absD = np.array([-D for D in Ds], dtype=np.int64)
    spf = _spf(int(absD.max()) // 3 + 2)
    return _class_numbers_kernel(absD, spf)


def class_number(D: int) -> int:
    """h(D) for a fundamental discriminant D < 0, by enumerating reduced forms.

    Counts (a, b, c) with b^2 - 4ac = D, |b| <= a <= c, gcd(a, b, c) = 1 and
    b >= 0 whenever |b| = a or a = c.
    """
    return int(class_numbers([D], require_fundamental=True)[0])


def class_number_table(N: int) -> np.ndarray:
    """h[n] = number of reduced primitive forms of discriminant -n, 0 <= n <= N.

    Entries for n = 1, 2 mod 4 are zero (no such discriminants).
    """
    budget.check_elements(N + 1, "class-number table")
    return _class_number_table_kernel(int(N))


def gauss_prefactor(n: int) -> int:
    return 12 * (1 - kronecker(-n, 2))


def h_from_r3(n: int, r3: RepTable) -> int:
    """h(-n) = r3(n) / (12 (1 - (-n/2))) for fundamental -n, n > 4, -n != 1 mod 8."""
    if n <= 4:
        raise DomainError("identity is only used for n > 4")
    fc = classify_discriminant(-n)
    if not fc.fundamental:
        raise DomainError(f"-{n} is not a fundamental discriminant")
    pref = gauss_prefactor(n)
    if pref == 0:
        raise DomainError(f"-{n} = 1 mod 8: prefactor vanishes")
    if n > r3.bound:
        raise DomainError(f"r3 table only reaches {r3.bound}")
    value = int(r3.counts[n])
    if value % pref:
        raise IdentityViolation(f"r3({n}) = {value} is not divisible by {pref}")
    return value // pref


# ---------------------------------------------------------------------------
# sieve cache files
# ---------------------------------------------------------------------------

_MAGIC = b"QCRT"
_VERSION = 1
_HEADER = struct.Struct("<4sI32sQQ")  # magic, version, form hash, N, modulus


def _table_digest(form: QuadForm, residues, modulus: int) -> bytes:
    import hashlib

    key = form.describe() + f"|{modulus}|" + ",".join(map(str, residues or ()))
    return hashlib.sha256(key.encode()).digest()


def save_table(path, table: RepTable) -> None:
    path = Path(path)
    header = _HEADER.pack(_MAGIC, _VERSION, _table_digest(table.form, table.residues, table.modulus),
                          table.bound, table.modulus)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(table.counts, dtype="<i8").tobytes())
    os.replace(tmp, path)


def load_table(path, form: QuadForm, residues=None, modulus: int = 1) -> RepTable:
    raw = Path(path).read_bytes()
    magic, version, digest, N, mod = _HEADER.unpack_from(raw)
    if magic != _MAGIC or version != _VERSION:
        raise ValueError(f"{path}: not a quadcorr sieve cache file")
    res = None if residues is None else tuple(int(r) % modulus for r in residues)
    if digest != _table_digest(form, res, modulus) or mod != modulus:
        raise ValueError(f"{path}: cache belongs to a different form")
    counts = np.frombuffer(raw, dtype="<i8", offset=_HEADER.size).astype(np.int64)
    if counts.size != N + 1:
        raise ValueError(f"{path}: truncated cache file")
    return RepTable(form, int(N), counts, res, modulus)


class SieveCache:
    """Directory of representation tables keyed by (form, residue class)."""

    def __init__(self, directory=None):
        directory = directory or os.environ.get("QUADCORR_CACHE")
        self.directory = Path(directory) if directory else None
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, form, residues, modulus) -> Path:
        return self.directory / (_table_digest(form, residues, modulus).hex()[:24] + ".rep")

    def get(self, form: QuadForm, N: int, residues=None, modulus: int = 1) -> RepTable:
        res = None if residues is None else tuple(int(r) % modulus for r in residues)
        if self.directory is None:
            return rq_sieve(form, N, res, modulus)
        path = self._path(form, res, modulus)
        if path.exists():
            table = load_table(path, form, res, modulus)
            if table.bound >= N:
                return table.truncated(N)
        table = rq_sieve(form, N, res, modulus)
        save_table(path, table)
        return table
