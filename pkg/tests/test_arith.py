import random
from math import gcd

import numpy as np
import pytest

from quadcorr.arith import (
    FundKind,
    classify_discriminant,
    crt_inverse,
    divisors,
    factorint,
    flat_mask,
    fundamental_mask,
    is_prime,
    is_squarefree,
    kronecker,
    moebius_sieve,
    primes_up_to,
    squarefree_sieve,
    valuation,
)
from quadcorr.errors import DomainError


def legendre_euler(a, p):
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def test_kronecker_matches_euler_criterion():
    for p in primes_up_to(200)[1:]:
        for a in range(-50, 51):
            assert kronecker(a, p) == legendre_euler(a, p)


def test_kronecker_small_values():
    assert kronecker(-4, 3) == -1
    assert kronecker(5, 2) == -1  # 5 = 5 mod 8
    assert kronecker(7, 2) == 1
    assert kronecker(-3, 2) == -1
    assert kronecker(-1, -1) == -1
    assert kronecker(2, 0) == 0
    assert kronecker(1, 0) == 1


def test_kronecker_multiplicative_exhaustive_small():
    # zero arguments are excluded: (0 / -1) = 1 breaks multiplicativity by convention
    nonzero = [a for a in range(-200, 201) if a]
    for n in range(-30, 31):
        row = {a: kronecker(a, n) for a in nonzero}
        for a in nonzero:
            for b in nonzero[::7]:
                assert kronecker(a * b, n) == row[a] * row[b]


def test_kronecker_multiplicative_random_wide():
    rng = random.Random(0)
    for _ in range(20000):
        a, b, n = (rng.choice([-1, 1]) * rng.randint(1, 200) for _ in range(3))
        assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n)
        assert kronecker(a, b * n) == kronecker(a, b) * kronecker(a, n)


def test_factor_valuation_divisors():
    for n in range(1, 3000):
        f = factorint(n)
        assert np.prod([p**e for p, e in f.items()], dtype=np.int64) == n
        assert all(is_prime(p) and valuation(p, n) == e for p, e in f.items())
        assert divisors(n) == [d for d in range(1, n + 1) if n % d == 0]


def test_is_prime_against_sieve():
    ps = set(primes_up_to(20000))
    assert all(is_prime(n) == (n in ps) for n in range(20001))
    assert is_prime(2**61 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


def test_moebius_identities():
    N = 5000
    mu = moebius_sieve(N)
    assert mu[1] == 1
    for n in range(1, 600):
        assert sum(int(mu[d]) for d in divisors(n)) == (1 if n == 1 else 0)
    for m in range(1, 70):
        for n in range(1, 70):
            if gcd(m, n) == 1:
                assert mu[m * n] == mu[m] * mu[n]
    sf = squarefree_sieve(N)
    for n in range(1, N + 1):
        assert (mu[n] != 0) == sf[n] == is_squarefree(n)


def test_squarefree_expansion_identity():
    mu = moebius_sieve(100)
    for n in range(1, 4000):
        rhs = sum(int(mu[d]) for d in range(1, 64) if n % (d * d) == 0)
        assert rhs == (1 if is_squarefree(n) else 0)


@pytest.mark.parametrize(
    "d, kind",
    [
        (-3, FundKind.ODD),
        (-4, FundKind.EVEN),
        (-7, FundKind.ODD),
        (-8, FundKind.EVEN),
        (-12, FundKind.NOT_FUNDAMENTAL),
        (-15, FundKind.ODD),
        (-16, FundKind.NOT_FUNDAMENTAL),
        (-20, FundKind.EVEN),
        (-24, FundKind.EVEN),
        (-27, FundKind.NOT_FUNDAMENTAL),
        (-2, FundKind.NOT_FUNDAMENTAL),
    ],
)
def test_classify_examples(d, kind):
    assert classify_discriminant(d).kind is kind


def test_flat_excludes_one_mod_eight():
    assert classify_discriminant(-7).fundamental and not classify_discriminant(-7).flat
    assert classify_discriminant(-3).flat and classify_discriminant(-4).flat


def test_classify_rejects_nonnegative():
    with pytest.raises(DomainError):
        classify_discriminant(0)


def test_masks_agree_with_classifier():
    N = 4000
    fm, flm = fundamental_mask(N), flat_mask(N)
    for n in range(1, N + 1):
        fc = classify_discriminant(-n)
        assert fm[n] == fc.fundamental
        assert flm[n] == fc.flat
    assert not fm[0]


def test_crt_inverse():
    assert crt_inverse(3, 7) * 3 % 7 == 1
    assert crt_inverse(5, 1) == 0
    with pytest.raises(DomainError):
        crt_inverse(6, 9)
