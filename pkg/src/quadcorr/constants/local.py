"""p-adic solution counts and local densities.

The basic equation at a prime p and level t is

    c1 Q1(x) - c2 Q2(y) = l  (mod p^t),

with x mod p^(t + v1), y mod p^(t + v2) in fixed residue classes mod p^v1,
p^v2 (v_i the p-adic valuation of the congruence moduli), and optional
conditions Q_i(x) mod p^e_i in a given residue set.  Counts are built from
value distributions N(u) = #{x : Q(x) = u (mod p^t)}.

For odd p and conditions that are unions of square classes, N is constant on
the classes u -> w^2 u (w a unit), so it is stored as a vector over the
2t + 1 classes {0} and p^v * (residue / non-residue unit).  Everything else
uses full arrays of exact integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .. import budget
from ..arith import kronecker, valuation
from ..errors import DomainError, NonStabilizedError
from ..forms import QuadForm
from ..quadcount import CongruenceClass, ShiftedProblem

__all__ = [
    "Side",
    "LocalProblem",
    "LocalDensity",
    "local_count",
    "primitive_count",
    "density_cp",
    "value_distribution",
    "jordan_diagonal",
]


# ---------------------------------------------------------------------------
# problem description
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Side:
    """One side c * Q(x) of the equation, with its local constraints."""

    form: QuadForm
    coeff: int = 1
    cc: CongruenceClass | None = None
    value_modulus: int = 1
    value_residues: frozenset[int] = frozenset({0})

    def __post_init__(self):
        if self.value_modulus < 1:
            raise DomainError("value modulus must be positive")
        object.__setattr__(
            self, "value_residues", frozenset(int(r) % self.value_modulus for r in self.value_residues)
        )
        if self.cc is not None and len(self.cc) != self.form.dim:
            raise DomainError("congruence class length does not match form")

    @property
    def k(self) -> int:
        return self.form.dim

    def congruence_at(self, p: int) -> tuple[int, tuple[int, ...]]:
        """(v, residues mod p^v) with v = v_p(A)."""
        if self.cc is None or self.cc.modulus == 1:
            return 0, (0,) * self.k
        v = valuation(p, self.cc.modulus)
        return v, tuple(r % p**v for r in self.cc.residues)

    def value_exponent(self, p: int) -> int:
        if self.value_modulus == 1:
            return 0
        e = valuation(p, self.value_modulus)
        if p**e != self.value_modulus:
            raise DomainError(f"value modulus {self.value_modulus} is not a power of {p}")
        return e

    def allowed(self, u: np.ndarray) -> np.ndarray:
        if self.value_modulus == 1:
            return np.ones(u.shape, dtype=bool)
        return np.isin(u % self.value_modulus, sorted(self.value_residues))


@dataclass(frozen=True)
class LocalProblem:
    """c1 Q1(x) - c2 Q2(y) = l with per-side local constraints."""

    left: Side
    right: Side
    l: int = 0

    @property
    def n(self) -> int:
        return self.left.k + self.right.k

    @classmethod
    def plain(cls, q1: QuadForm, q2: QuadForm, l: int) -> "LocalProblem":
        return cls(Side(q1), Side(q2), int(l))

    @classmethod
    def from_shifted(cls, sp: ShiftedProblem) -> "LocalProblem":
        return cls(Side(sp.q1, cc=sp.cc1), Side(sp.q2, cc=sp.cc2), sp.l)

    def has_congruence(self, p: int) -> bool:
        return self.left.congruence_at(p)[0] > 0 or self.right.congruence_at(p)[0] > 0


@dataclass(frozen=True)
class LocalDensity:
    """Density at p: ``normalized`` is the exact limit, ``raw_count`` the count at ``level``."""

    p: int
    level: int
    raw_count: int
    normalized: Fraction
    stabilized: bool = True
    method: str = "direct"
    history: tuple[Fraction, ...] = field(default=(), compare=False)

    def __float__(self) -> float:
        return float(self.normalized)


# ---------------------------------------------------------------------------
# square classes of Z/p^t (odd p)
# ---------------------------------------------------------------------------


def _least_nonresidue(p: int) -> int:
    g = 2
    while kronecker(g, p) != -1:
        g += 1
    return g


class _Classes:
    """Class 0 = {0}; class 1 + 2v (+) / 2 + 2v (-) = p^v times a (non-)residue unit."""

    def __init__(self, p: int, t: int):
        self.p, self.t, self.m = p, t, p**t
        self.C = 2 * t + 1
        self.g = _least_nonresidue(p)

    def index(self, v: int, eps: int) -> int:
        return 1 + 2 * v + (0 if eps == 1 else 1)

    def of(self, u: int) -> int:
        u %= self.m
        if u == 0:
            return 0
        v = valuation(self.p, u)
        return self.index(v, kronecker(u // self.p**v, self.p))

    def rep(self, c: int) -> int:
        if c == 0:
            return 0
        v, minus = divmod(c - 1, 2)
        return self.p**v * (self.g if minus else 1)

    def valuation_of(self, c: int) -> int:
        return self.t if c == 0 else (c - 1) // 2

    def sizes(self) -> list[int]:
        p, t = self.p, self.t
        out = [1]
        for v in range(t):
            half = p ** (t - v - 1) * (p - 1) // 2
            out += [half, half]
        return out

    def array(self) -> np.ndarray:
        return _class_array(self.p, self.t)


@lru_cache(maxsize=64)
def _class_array(p: int, t: int) -> np.ndarray:
    m = p**t
    budget.check_elements(m, "square-class table")
    u = np.arange(m, dtype=np.int64)
    v = np.zeros(m, dtype=np.int64)
    unit = u.copy()
    for _ in range(t - 1):
        div = (unit % p == 0) & (unit != 0)
        unit[div] //= p
        v[div] += 1
    qr = np.zeros(p, dtype=bool)
    qr[(np.arange(1, p) ** 2) % p] = True
    minus = ~qr[unit % p]
    cls = (1 + 2 * v + minus).astype(np.int8)
    cls[0] = 0
    return cls


@lru_cache(maxsize=256)
def _pair_counts(p: int, t: int, cls_l: int) -> np.ndarray:
    """L[c1, c2] = #{w mod p^t : class(w) = c1, class(w - l) = c2} for l in class cls_l."""
    S = _Classes(p, t)
    l = S.rep(cls_l)
    cls = S.array().astype(np.int64)
    shifted = np.roll(cls, l)  # shifted[w] = cls[w - l]
    return np.bincount(cls * S.C + shifted, minlength=S.C * S.C).reshape(S.C, S.C)


@lru_cache(maxsize=64)
def _conv_tensor(p: int, t: int) -> np.ndarray:
    """K[r, c1, c2] = #{a : class(a) = c1, class(rep_r - a) = c2}."""
    S = _Classes(p, t)
    budget.check_points(S.C * S.m, "class convolution tensor")
    cls = S.array().astype(np.int64)
    a = np.arange(S.m, dtype=np.int64)
    out = np.zeros((S.C, S.C, S.C), dtype=np.int64)
    for r in range(S.C):
        other = cls[(S.rep(r) - a) % S.m]
        out[r] = np.bincount(cls * S.C + other, minlength=S.C * S.C).reshape(S.C, S.C)
    return out


def _class_convolve(A: list[int], B: list[int], p: int, t: int) -> list[int]:
    K = _conv_tensor(p, t)
    C = len(A)
    out = []
    for r in range(C):
        Kr = K[r]
        out.append(sum(A[i] * B[j] * int(Kr[i, j]) for i in range(C) if A[i] for j in range(C) if B[j] and Kr[i, j]))
    return out


def _one_var_classes(c: int, p: int, t: int) -> list[int]:
    """Per-element counts of x mod p^t with c x^2 = u, as a class vector."""
    S = _Classes(p, t)
    x = np.arange(S.m, dtype=np.int64)
    vals = (c % S.m) * (x * x % S.m) % S.m
    totals = np.bincount(S.array().astype(np.int64)[vals], minlength=S.C)
    sizes = S.sizes()
    return [int(totals[i]) // sizes[i] for i in range(S.C)]


# ---------------------------------------------------------------------------
# Jordan splitting at odd p
# ---------------------------------------------------------------------------


def _fvaluation(p: int, x: Fraction) -> int:
    if x == 0:
        return 10**9
    return valuation(p, x.numerator) - valuation(p, x.denominator)


@lru_cache(maxsize=512)
def jordan_blocks(form: QuadForm, p: int) -> tuple[tuple[Fraction, ...], ...]:
    """Split Q over Z_p into blocks a x^2 or a x^2 + b x y + c y^2.

    The basis changes have entries in Z localized at p, so they stay
    invertible modulo every power of p.  Binary blocks only occur for p = 2,
    when an off-diagonal entry of 2G is strictly more divisible than every
    diagonal entry.
    """
    B = [[Fraction(v) for v in row] for row in form.doubled_gram()]
    live = list(range(len(B)))
    blocks = []

    def add_to(i, j, f):
        # e_i <- e_i + f e_j
        for r in range(len(B)):
            B[r][i] += f * B[r][j]
        for c in range(len(B)):
            B[i][c] += f * B[j][c]

    while live:
        i, j = min(((i, j) for i in live for j in live if j >= i),
                   key=lambda ij: (_fvaluation(p, B[ij[0]][ij[1]]), ij[0] != ij[1]))
        if i != j and p != 2:
            add_to(i, j, Fraction(1))
        if i == j or p != 2:
            piv = B[i][i]
            live.remove(i)
            for r in live:
                if B[r][i]:
                    add_to(r, i, -B[r][i] / piv)
            blocks.append((piv / 2,))
            continue
        # binary block on (i, j); its inverse times the coupling is 2-integral
        a, b, c = B[i][i], B[i][j], B[j][j]
        det = a * c - b * b
        live.remove(i)
        live.remove(j)
        for r in live:
            u, w = B[r][i], B[r][j]
            fi = (c * u - b * w) / det
            fj = (a * w - b * u) / det
            if fi:
                add_to(r, i, -fi)
            if fj:
                add_to(r, j, -fj)
        blocks.append((a / 2, b, c / 2))
    return tuple(blocks)


def jordan_diagonal(form: QuadForm, p: int) -> list[Fraction]:
    """Coefficients c_i with Q equivalent over Z_p (p odd) to sum c_i x_i^2."""
    if p == 2:
        raise DomainError("use jordan_blocks at p = 2")
    return [blk[0] for blk in jordan_blocks(form, p)]


def jordan_scale(form: QuadForm, p: int) -> int:
    """Largest p-adic valuation among the Jordan block scales."""
    return max(_fvaluation(p, blk[0] if len(blk) == 1 else blk[1]) for blk in jordan_blocks(form, p))


def _mod_fraction(x: Fraction, m: int) -> int:
    return x.numerator * pow(x.denominator, -1, m) % m


# ---------------------------------------------------------------------------
# value distributions
# ---------------------------------------------------------------------------


@lru_cache(maxsize=512)
def _level1_classes(form: QuadForm, p: int) -> list[int]:
    coeffs = [_mod_fraction(c, p) for c in jordan_diagonal(form, p)]
    vec = None
    for c in coeffs:
        one = _one_var_classes(c, p, 1)
        vec = one if vec is None else _class_convolve(vec, one, p, 1)
    return vec


@lru_cache(maxsize=1024)
def form_classes(form: QuadForm, p: int, t: int) -> tuple[int, ...]:
    """Class vector of N(u) = #{x mod p^t : Q(x) = u} for odd p."""
    if t == 0:
        return (1,)
    k = form.dim
    if form.det_doubled % p:
        # unimodular: primitive solutions lift, imprimitive ones recurse two levels down
        N1 = _level1_classes(form, p)
        if t == 1:
            return tuple(N1)
        S = _Classes(p, t)
        lift = p ** ((k - 1) * (t - 1))
        P0 = N1[0] - 1
        low = form_classes(form, p, t - 2)
        out = [0] * S.C
        out[0] = lift * P0 + p**k * low[0]
        for v in range(t):
            for eps in (1, -1):
                c = S.index(v, eps)
                if v == 0:
                    out[c] = lift * N1[S.index(0, eps)]
                elif v == 1:
                    out[c] = lift * P0
                else:
                    out[c] = lift * P0 + p**k * low[_Classes(p, t - 2).index(v - 2, eps)]
        return tuple(out)
    m = p**t
    coeffs = [_mod_fraction(c, m) for c in jordan_diagonal(form, p)]
    vec = None
    for c in coeffs:
        one = _one_var_classes(c, p, t)
        vec = one if vec is None else _class_convolve(vec, one, p, t)
    return tuple(vec)


def _zero_part_classes(form: QuadForm, p: int, t: int) -> list[int]:
    """Class vector of #{x = 0 (mod p), x mod p^t : Q(x) = u}."""
    S = _Classes(p, t)
    out = [0] * S.C
    if t == 1:
        out[0] = 1
        return out
    low = form_classes(form, p, t - 2)
    k = form.dim
    L = _Classes(p, t - 2) if t > 2 else None
    out[0] = p**k * low[0]
    for v in range(2, t):
        for eps in (1, -1):
            out[S.index(v, eps)] = p**k * low[L.index(v - 2, eps)]
    return out


def _cyclic_convolve(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    bound = int(np.max(a, initial=0)) * int(np.max(b, initial=0)) * m
    if bound < 2**62:
        full = np.convolve(a.astype(np.int64), b.astype(np.int64))
    else:
        full = np.convolve(a.astype(object), b.astype(object))
    out = full[:m].copy()
    out[: len(full) - m] += full[m:]
    return out


def _block_distribution(blk: tuple[Fraction, ...], m: int) -> np.ndarray:
    x = np.arange(m, dtype=np.int64)
    if len(blk) == 1:
        return np.bincount(_mod_fraction(blk[0], m) * (x * x % m) % m, minlength=m).astype(np.int64)
    budget.check_points(m * m, "binary block enumeration")
    a, b, c = (_mod_fraction(v, m) for v in blk)
    X, Y = x[:, None], x[None, :]
    vals = (a * (X * X % m) + b * (X * Y % m) + c * (Y * Y % m)) % m
    return np.bincount(vals.ravel(), minlength=m).astype(np.int64)


def value_distribution(form: QuadForm, p: int, t: int, residues=None, v: int = 0) -> np.ndarray:
    """N(u) = #{x mod p^(t+v) : x = residues (mod p^v), Q(x) = u (mod p^t)} as an array."""
    m = p**t
    k = form.dim
    residues = (0,) * k if residues is None else tuple(residues)
    w = min(v, t)
    # each z mod p^t in the class has p^(k w) lifts to x mod p^(t + v)
    mult = p ** (k * w)
    step = p**w
    if w == 0:
        acc = None
        for blk in jordan_blocks(form, p):
            one = _block_distribution(blk, m)
            acc = one if acc is None else _cyclic_convolve(acc, one, m)
    elif form.is_diagonal:
        acc = None
        for c, a in zip(form.diag, residues):
            z = (a % step + step * np.arange(p ** (t - w), dtype=np.int64)) % m
            one = np.bincount((c % m) * (z * z % m) % m, minlength=m).astype(np.int64)
            acc = one if acc is None else _cyclic_convolve(acc, one, m)
    else:
        budget.check_points(p ** ((t - w) * k), "local value enumeration")
        axes = [(a % step + step * np.arange(p ** (t - w), dtype=np.int64)) % m for a in residues]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, k)
        acc = np.bincount(form(grid) % m, minlength=m).astype(np.int64)
    if mult != 1:
        acc = acc.astype(object) * mult if int(acc.max()) * mult >= 2**62 else acc * mult
    return acc


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------


def _class_path_ok(p: int, prob: LocalProblem) -> bool:
    if p == 2 or prob.has_congruence(p):
        return False
    for side in (prob.left, prob.right):
        if side.coeff % p == 0:
            return False
        e = side.value_exponent(p)
        if e and not _class_closed(p, e, side.value_residues):
            return False
    return True


@lru_cache(maxsize=256)
def _class_closed(p: int, e: int, residues: frozenset[int]) -> bool:
    S = _Classes(p, e)
    cls = S.array()
    inside = np.zeros(S.C, dtype=np.int64)
    outside = np.zeros(S.C, dtype=np.int64)
    for u in range(p**e):
        (inside if u in residues else outside)[cls[u]] += 1
    return not np.any((inside > 0) & (outside > 0))


def _side_classes(p: int, t: int, side: Side, zero_part: bool) -> list[int]:
    S = _Classes(p, t)
    vec = list(_zero_part_classes(side.form, p, t) if zero_part else form_classes(side.form, p, t))
    e = side.value_exponent(p)
    if e:
        for c in range(S.C):
            v = S.valuation_of(c)
            u = 0 if v >= e else S.rep(c) % p**e
            if u not in side.value_residues:
                vec[c] = 0
    if kronecker(side.coeff, p) == -1:
        for v in range(t):
            a, b = S.index(v, 1), S.index(v, -1)
            vec[a], vec[b] = vec[b], vec[a]
    return vec


def _count_classes(p: int, t: int, prob: LocalProblem, zero_part: bool) -> int:
    S = _Classes(p, t)
    A = _side_classes(p, t, prob.left, zero_part)
    B = _side_classes(p, t, prob.right, zero_part)
    L = _pair_counts(p, t, S.of(prob.l))
    total = 0
    for i in range(S.C):
        if A[i]:
            for j in range(S.C):
                if B[j] and L[i, j]:
                    total += A[i] * B[j] * int(L[i, j])
    return total


def _side_array(p: int, t: int, side: Side, zero_part: bool) -> np.ndarray:
    m = p**t
    if zero_part:
        N = np.zeros(m, dtype=object)
        if t == 1:
            N[0] = 1
        else:
            low = value_distribution(side.form, p, t - 2)
            idx = (p * p * np.arange(p ** (t - 2), dtype=np.int64)) % m
            N[idx] = low.astype(object) * p**side.k
    else:
        v, res = side.congruence_at(p)
        N = value_distribution(side.form, p, t, res, v).astype(object)
    u = np.arange(m, dtype=np.int64)
    N = np.where(side.allowed(u), N, 0)
    out = np.zeros(m, dtype=object)
    target = (side.coeff % m) * u % m
    for src in np.flatnonzero(N != 0).tolist():
        out[target[src]] += N[src]
    return out


def _count_arrays(p: int, t: int, prob: LocalProblem, zero_part: bool) -> int:
    m = p**t
    budget.check_elements(m, "local value array")
    A = _side_array(p, t, prob.left, zero_part)
    B = _side_array(p, t, prob.right, zero_part)
    l = prob.l % m
    total = 0
    for w in np.flatnonzero(A != 0).tolist():
        b = B[(w - l) % m]
        if b:
            total += A[w] * b
    return int(total)


def _check_level(p: int, t: int, prob: LocalProblem) -> None:
    if t < 1:
        raise DomainError("level must be >= 1")
    for side in (prob.left, prob.right):
        if side.value_exponent(p) > t:
            raise DomainError(f"value condition mod {side.value_modulus} needs level >= its exponent")


def local_count(p: int, t: int, prob: LocalProblem) -> int:
    """Exact number of solutions at level t (x mod p^(t+v1), y mod p^(t+v2))."""
    _check_level(p, t, prob)
    if _class_path_ok(p, prob):
        return _count_classes(p, t, prob, False)
    return _count_arrays(p, t, prob, False)


def primitive_count(p: int, t: int, prob: LocalProblem) -> int:
    """Solutions at level t with (x, y) not = 0 (mod p)."""
    _check_level(p, t, prob)
    if prob.has_congruence(p):
        raise DomainError("primitive splitting is only implemented without congruence conditions")
    if _class_path_ok(p, prob):
        return _count_classes(p, t, prob, False) - _count_classes(p, t, prob, True)
    return _count_arrays(p, t, prob, False) - _count_arrays(p, t, prob, True)


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------


def _start_level(p: int, prob: LocalProblem, direct: bool = False) -> int:
    """First level worth comparing.

    A coefficient p^a c only sees Q mod p^(t - a), a Jordan block of scale
    p^j only starts to lift beyond level j + 1, and for the full count the
    p-part of l has to be visible.
    """
    t0 = 1
    for s in (prob.left, prob.right):
        a = valuation(p, s.coeff) if s.coeff else 0
        t0 = max(t0, s.value_exponent(p) + a, jordan_scale(s.form, p) + a + 1)
    if direct and prob.l:
        t0 = max(t0, valuation(p, prob.l) + 1)
    return t0


def _agreements(p: int, prob: LocalProblem, direct: bool = False) -> int:
    """Consecutive equal levels demanded before a value counts as stable.

    At odd p with unimodular forms and unit coefficients primitive solutions
    lift by Hensel's lemma, so one agreement suffices; anything else gets a
    second confirmation.  Full counts with l = 0 grow in steps of two levels,
    so they always need two.
    """
    if p == 2 or prob.has_congruence(p) or (direct and prob.l == 0):
        return 2
    for s in (prob.left, prob.right):
        if s.coeff % p == 0 or s.form.det_doubled % p == 0:
            return 2
    return 1


def default_t_max(p: int, prob: LocalProblem, direct: bool = False) -> int:
    return _start_level(p, prob, direct) + (6 if p == 2 else 4)


def _stabilize(values, p: int, need: int, t_max: int, what: str):
    """Scan (t, value, raw) triples; return the first run of need + 1 equal values."""
    hist = []
    run = 0
    first = None
    for t, val, raw in values:
        hist.append(val)
        if first is not None and val == first[1]:
            run += 1
            if run >= need:
                return first, hist
        else:
            first, run = (t, val, raw), 0
    raise NonStabilizedError(f"{what} at p={p} did not stabilize by level {t_max}", p=p, levels=hist)


def _descend(p: int, prob: LocalProblem) -> LocalProblem | None:
    """The problem satisfied by (x, y) / p for solutions with (x, y) = 0 (mod p)."""
    if prob.l % (p * p):
        return None
    sides = []
    for side in (prob.left, prob.right):
        e = side.value_exponent(p)
        if e == 0:
            sides.append(side)
        elif e <= 2:
            if 0 not in side.value_residues:
                return None
            sides.append(replace(side, value_modulus=1, value_residues=frozenset({0})))
        else:
            M = p ** (e - 2)
            new = frozenset(r // (p * p) for r in side.value_residues if r % (p * p) == 0)
            if not new:
                return None
            sides.append(replace(side, value_modulus=M, value_residues=new))
    return LocalProblem(sides[0], sides[1], prob.l // (p * p))


def _direct_density(p: int, prob: LocalProblem, t_max: int) -> LocalDensity:
    n = prob.n

    def levels():
        for t in range(_start_level(p, prob, True), t_max + 1):
            count = local_count(p, t, prob)
            yield t, Fraction(count, p ** ((n - 1) * t)), count

    (t, val, count), hist = _stabilize(levels(), p, _agreements(p, prob, True), t_max, "density")
    return LocalDensity(p, t, count, val, True, "direct", tuple(hist))


def _primitive_density(p: int, prob: LocalProblem, t_max: int) -> tuple[Fraction, int, list]:
    n = prob.n

    def levels():
        for t in range(_start_level(p, prob), t_max + 1):
            prim = primitive_count(p, t, prob)
            yield t, Fraction(prim, p ** ((n - 1) * t)), prim

    (t, val, _), hist = _stabilize(levels(), p, _agreements(p, prob), t_max, "primitive density")
    return val, t, hist


def _recursive_density(p: int, prob: LocalProblem, t_max: int | None, depth: int = 0) -> Fraction:
    n = prob.n
    tm = t_max if t_max is not None else default_t_max(p, prob)
    pi, _, _ = _primitive_density(p, prob, tm)
    sub = _descend(p, prob)
    if sub is None:
        return pi
    factor = Fraction(p) ** (2 - n)
    if sub == prob:
        if n <= 2:
            raise DomainError("density diverges for binary problems with l = 0")
        return pi / (1 - factor)
    if depth > 64:
        raise NonStabilizedError("descent did not terminate", p=p)
    return pi + factor * _recursive_density(p, sub, t_max, depth + 1)


def density_cp(p: int, prob: LocalProblem, t_max: int | None = None, *, method: str = "auto") -> LocalDensity:
    """Local density lim_t count_t / p^((n-1)t).

    ``method="direct"`` accepts the first level that agrees exactly with the
    next one.  ``"recursive"`` splits off the solutions with (x, y) = 0 mod p,
    whose density is p^(2-n) times that of a descended problem; only the
    primitive part has to stabilize, which makes l = 0 and high p-powers in l
    tractable.  ``"auto"`` uses the recursion whenever no congruence
    conditions are present at p.
    """
    if method == "auto":
        method = "direct" if prob.has_congruence(p) else "recursive"
    if method == "direct":
        return _direct_density(p, prob, t_max if t_max is not None else default_t_max(p, prob, True))
    if method != "recursive":
        raise ValueError(f"unknown method {method!r}")
    tm = t_max if t_max is not None else default_t_max(p, prob)
    _, level, hist = _primitive_density(p, prob, tm)
    value = _recursive_density(p, prob, t_max)
    return LocalDensity(p, level, local_count(p, level, prob), value, True, "recursive", tuple(hist))
