from math import gcd, isqrt

import numpy as np
import pytest

from quadcorr.arith import classify_discriminant
from quadcorr.errors import DomainError, IdentityViolation
from quadcorr.forms import QuadForm
from quadcorr.repnum import (
    RepTable,
    SieveCache,
    class_number,
    class_number_table,
    class_numbers,
    h_from_r3,
    load_table,
    r2_divisor,
    r3_table,
    rq_sieve,
    save_table,
)


def h_naive(D):
    """Reduced primitive forms (a, b, c), b^2 - 4ac = D < 0, by a plain triple loop."""
    count = 0
    for a in range(1, isqrt(-D // 3) + 2):
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, abs(b)), c) == 1:
                count += 1
    return count


@pytest.mark.parametrize(
    "D, h",
    [(-3, 1), (-4, 1), (-7, 1), (-8, 1), (-11, 1), (-15, 2), (-20, 2), (-23, 3), (-24, 2),
     (-47, 5), (-71, 7), (-163, 1), (-199, 9), (-3299, 27), (-4027, 9)],
)
def test_known_class_numbers(D, h):
    assert class_number(D) == h


def test_kernels_agree_with_naive_loop():
    N = 3000
    table = class_number_table(N)
    Ds = [-n for n in range(3, N + 1) if n % 4 in (0, 3)]
    batch = class_numbers(Ds)
    for D, hb in zip(Ds, batch):
        assert table[-D] == hb == h_naive(D)
    assert all(table[n] == 0 for n in range(N + 1) if n % 4 in (1, 2))


def test_large_discriminants_batch_vs_naive():
    Ds = [-(10**6 + k) for k in range(3, 400) if (10**6 + k) % 4 in (0, 3)]
    assert class_numbers(Ds).tolist() == [h_naive(D) for D in Ds]


def test_class_number_requires_fundamental():
    with pytest.raises(DomainError):
        class_number(-12)
    with pytest.raises(DomainError):
        class_numbers([-5])
    assert class_numbers([-12]).tolist() == [1]


def test_r2_divisor_matches_sieve():
    t = rq_sieve(QuadForm.sum_of_squares(2), 2000)
    assert all(r2_divisor(n) == t[n] for n in range(1, 2001))


def test_gauss_identity_small_range():
    r3 = r3_table(3000)
    for n in range(5, 3001):
        fc = classify_discriminant(-n)
        if fc.flat:
            assert h_from_r3(n, r3) == class_number(-n)


def test_h_from_r3_domain():
    r3 = r3_table(100)
    with pytest.raises(DomainError):
        h_from_r3(4, r3)
    with pytest.raises(DomainError):
        h_from_r3(7, r3)  # -7 = 1 mod 8
    with pytest.raises(DomainError):
        h_from_r3(12, r3)  # not fundamental
    with pytest.raises(DomainError):
        h_from_r3(203, r3)  # beyond the table
    fake = RepTable(r3.form, r3.bound, r3.counts.copy())
    fake.counts[19] += 1
    with pytest.raises(IdentityViolation):
        h_from_r3(19, fake)


def test_cache_roundtrip(tmp_path):
    Q = QuadForm.diagonal([1, 1, 2])
    t = rq_sieve(Q, 500, (1, 0, 1), 2)
    save_table(tmp_path / "t.rep", t)
    back = load_table(tmp_path / "t.rep", Q, (1, 0, 1), 2)
    assert np.array_equal(back.counts, t.counts) and back.bound == 500
    with pytest.raises(ValueError):
        load_table(tmp_path / "t.rep", QuadForm.sum_of_squares(3), (1, 0, 1), 2)


def test_sieve_cache_warm_equals_cold(tmp_path):
    cache = SieveCache(tmp_path)
    Q = QuadForm.sum_of_squares(3)
    cold = cache.get(Q, 1000)
    warm = cache.get(Q, 700)
    assert np.array_equal(warm.counts, cold.counts[:701])
    bigger = cache.get(Q, 1500)
    assert np.array_equal(bigger.counts[:1001], cold.counts)
    assert np.array_equal(SieveCache(tmp_path).get(Q, 1500).counts, rq_sieve(Q, 1500).counts)
