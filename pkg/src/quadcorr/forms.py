"""Integral positive-definite quadratic forms."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, pi, gamma

import numpy as np

from .errors import DomainError


def _bareiss_det(m: list[list[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    a = [row[:] for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class QuadForm:
    """Q(x) = sum_{i <= j} q_ij x_i x_j with integer coefficients.

    ``coeffs`` is the upper-triangular table as a tuple of rows; row i holds
    q_ii, q_i,i+1, ..., q_i,k-1 (0-based).
    """

    dim: int
    coeffs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.dim < 1 or len(self.coeffs) != self.dim:
            raise DomainError("coefficient table does not match dimension")
        for i, row in enumerate(self.coeffs):
            if len(row) != self.dim - i:
                raise DomainError(f"row {i} must have {self.dim - i} entries")
            if any(int(c) != c for c in row):
                raise DomainError("coefficients must be integers")
        object.__setattr__(
            self, "coeffs", tuple(tuple(int(c) for c in row) for row in self.coeffs)
        )
        if not self.is_positive_definite():
            raise DomainError(f"form {self.describe()} is not positive definite")

    # construction ---------------------------------------------------------
    @classmethod
    def diagonal(cls, diag) -> "QuadForm":
        diag = [int(d) for d in diag]
        k = len(diag)
        return cls(k, tuple((diag[i],) + (0,) * (k - i - 1) for i in range(k)))

    @classmethod
    def sum_of_squares(cls, k: int) -> "QuadForm":
        return cls.diagonal([1] * k)

    @classmethod
    def from_upper(cls, dim: int, flat) -> "QuadForm":
        flat = [int(c) for c in flat]
        if len(flat) != dim * (dim + 1) // 2:
            raise DomainError("wrong number of upper-triangular coefficients")
        rows, pos = [], 0
        for i in range(dim):
            rows.append(tuple(flat[pos : pos + dim - i]))
            pos += dim - i
        return cls(dim, tuple(rows))

    @classmethod
    def parse(cls, text: str) -> "QuadForm":
        """Parse ``diag:1,1,1`` or ``upper:k:q11,q12,...`` (also bare ``1,1,1``)."""
        text = text.strip()
        if text.startswith("upper:"):
            _, dim, rest = text.split(":", 2)
            return cls.from_upper(int(dim), rest.split(","))
        if text.startswith("diag:"):
            text = text[5:]
        return cls.diagonal(text.split(","))

    # accessors ------------------------------------------------------------
    def q(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return self.coeffs[i][j - i]

    @property
    def is_diagonal(self) -> bool:
        return all(c == 0 for row in self.coeffs for c in row[1:])

    @property
    def diag(self) -> tuple[int, ...]:
        return tuple(row[0] for row in self.coeffs)

    def doubled_gram(self) -> list[list[int]]:
        """Integer matrix 2G with Q(x) = x^T G x."""
        k = self.dim
        return [[2 * self.q(i, i) if i == j else self.q(i, j) for j in range(k)] for i in range(k)]

    def gram(self) -> list[list[Fraction]]:
        return [[Fraction(v, 2) for v in row] for row in self.doubled_gram()]

    def is_positive_definite(self) -> bool:
        m = self.doubled_gram()
        return all(_bareiss_det([r[:i] for r in m[:i]]) > 0 for i in range(1, self.dim + 1))

    @property
    def det_doubled(self) -> int:
        return _bareiss_det(self.doubled_gram())

    @property
    def det_gram(self) -> Fraction:
        return Fraction(self.det_doubled, 2**self.dim)

    def ball_volume(self, radius_sq: float = 1.0) -> float:
        """Lebesgue volume of {x : Q(x) <= radius_sq}."""
        k = self.dim
        unit = pi ** (k / 2) / gamma(k / 2 + 1)
        return unit * radius_sq ** (k / 2) / float(self.det_gram) ** 0.5

    def content(self) -> int:
        g = 0
        for row in self.coeffs:
            for c in row:
                g = gcd(g, c)
        return g

    # evaluation -----------------------------------------------------------
    def __call__(self, x):
        x = np.asarray(x)
        if x.dtype == object:
            xs = [x[..., i] for i in range(self.dim)]
        else:
            xs = [x[..., i].astype(np.int64) for i in range(self.dim)]
        total = 0
        for i in range(self.dim):
            for j in range(i, self.dim):
                c = self.q(i, j)
                if c:
                    total = total + c * xs[i] * xs[j]
        return total

    def value(self, x) -> int:
        return int(sum(self.q(i, j) * x[i] * x[j] for i in range(self.dim) for j in range(i, self.dim)))

    def transform(self, U) -> "QuadForm":
        """The form y -> Q(U y) for an integer matrix U."""
        U = [[int(v) for v in row] for row in U]
        k = self.dim
        G2 = self.doubled_gram()
        # (U^T (2G) U)
        M = [[sum(U[a][i] * G2[a][b] * U[b][j] for a in range(k) for b in range(k)) for j in range(k)] for i in range(k)]
        rows = []
        for i in range(k):
            rows.append((M[i][i] // 2,) + tuple(M[i][j] for j in range(i + 1, k)))
        return QuadForm(k, tuple(rows))

    def describe(self) -> str:
        if self.is_diagonal:
            return "diag:" + ",".join(str(d) for d in self.diag)
        flat = [c for row in self.coeffs for c in row]
        return f"upper:{self.dim}:" + ",".join(str(c) for c in flat)

    def digest(self) -> bytes:
        return hashlib.sha256(self.describe().encode()).digest()

    def __str__(self) -> str:
        return self.describe()
