"""Self-checks run by ``quadcorr verify``.

Every check returns a :class:`CheckResult`; failures are data, not
exceptions, so a run always produces a complete summary.
"""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .arith import classify_discriminant, divisors, kronecker, primes_up_to
from .errors import QuadcorrError
from .forms import QuadForm

__all__ = ["CheckResult", "CHECKS", "run_checks"]

F3 = QuadForm.sum_of_squares(3)
X1 = QuadForm.sum_of_squares(1)


@dataclass
class CheckResult:
    name: str
    passed: bool
    checked: int
    failures: int
    seconds: float = 0.0
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def check_gauss(N: int = 20000) -> CheckResult:
    """r3(n) = 12 (1 - (-n/2)) h(-n) for fundamental -n, 4 < n <= N, -n != 1 mod 8."""
    from .repnum import class_number_table, r3_table

    r3 = r3_table(N).counts
    h = class_number_table(N)
    checked = failures = 0
    bad = []
    for n in range(5, N + 1):
        fc = classify_discriminant(-n)
        if not fc.flat:
            continue
        checked += 1
        if int(r3[n]) != 12 * (1 - kronecker(-n, 2)) * int(h[n]):
            failures += 1
            bad.append(n)
    return CheckResult("gauss", failures == 0 and checked > 0, checked, failures, detail={"first_failures": bad[:10]})


def check_multiplicativity(pairs: int = 200, seed: int = 1) -> CheckResult:
    """S_{q1 q2}(c) = S_{q1}(q2^-1 c) S_{q2}(q1^-1 c) for random coprime pairs."""
    from math import gcd

    from .expsum import check_multiplicativity as check
    from .quadcount import ShiftedProblem

    rng = random.Random(seed)
    prob = ShiftedProblem(F3, F3, 1)
    cands = [(a, b) for a in range(2, 31) for b in range(2, 31) if a * b <= 60 and gcd(a, b) == 1]
    failures, worst = 0, 0.0
    for _ in range(pairs):
        q1, q2 = rng.choice(cands)
        c = [rng.randrange(-30, 31) for _ in range(prob.n)]
        ok, res = check(q1, q2, c, prob)
        worst = max(worst, res)
        failures += not ok
    return CheckResult("multiplicativity", failures == 0, pairs, failures, detail={"worst_abs_residual": worst})


def check_orthogonality(primes=(3, 5, 7, 11)) -> CheckResult:
    """S_p(0) = p #{x mod p : Q1 - Q2 = l} - p^n for both toy problems."""
    from .expsum import exp_sum_Sq
    from .quadcount import ShiftedProblem

    failures = checked = 0
    for prob in (ShiftedProblem(F3, F3, 1), ShiftedProblem(F3, X1, 2)):
        n = prob.n
        for p in primes:
            u = np.arange(p)
            sq = np.bincount(u * u % p, minlength=p)
            N1 = sq
            for _ in range(prob.q1.dim - 1):
                N1 = np.array([sum(N1[a] * sq[(b - a) % p] for a in range(p)) for b in range(p)])
            N2 = sq
            for _ in range(prob.q2.dim - 1):
                N2 = np.array([sum(N2[a] * sq[(b - a) % p] for a in range(p)) for b in range(p)])
            Np = sum(int(N1[a]) * int(N2[(a - prob.l) % p]) for a in range(p))
            val = exp_sum_Sq(p, None, prob).value
            checked += 1
            failures += abs(val - (p * Np - p**n)) > 1e-6 * (1 + abs(val))
    return CheckResult("orthogonality", failures == 0, checked, failures)


def check_stabilization(p_max: int = 50, shifts=(1, 2, 3, 5)) -> CheckResult:
    """Counts at levels 1 and 2 agree for odd p not dividing 2 l det (split and non-split)."""
    from .constants.local import LocalProblem, local_count

    failures = checked = 0
    bad = []
    for l in shifts:
        for kind, prob in (("split", LocalProblem.plain(F3, F3, l)), ("nonsplit", LocalProblem.plain(F3, X1, l))):
            for p in primes_up_to(p_max):
                if p == 2 or l % p == 0:
                    continue
                n = prob.n
                a = Fraction(local_count(p, 1, prob), p ** (n - 1))
                b = Fraction(local_count(p, 2, prob), p ** (2 * (n - 1)))
                checked += 1
                if a != b:
                    failures += 1
                    bad.append((kind, l, p))
    if local_count(3, 1, LocalProblem.plain(F3, F3, 1)) != 234:
        failures += 1
        bad.append(("worked-example", 1, 3))
    checked += 1
    return CheckResult("stabilization", failures == 0, checked, failures, detail={"failures": bad[:10]})


def check_sigma_inf(grid=((1, 0), (1, 1), (1, 1000), (1000, 1))) -> CheckResult:
    """Closed form of the singular integral against quadrature, plus its limits."""
    import math

    from .constants import archimedean as arch

    failures = checked = 0
    worst = 0.0
    for X, l in grid:
        a, b = arch.sigma_inf(X, l), arch.sigma_inf_quad(X, l)
        rel = abs(a - b) / abs(b)
        worst = max(worst, rel)
        checked += 1
        failures += rel > 1e-8
    checked += 2
    failures += abs(arch.sigma_inf(7.0, 0) - 4 * math.pi**2 / 3) > 4 * np.finfo(float).eps * 4 * math.pi**2 / 3
    failures += abs(arch.sigma_inf(1.0, 1e6) / (16 * math.pi**2 / 9) - 1) > 1e-2
    return CheckResult("sigma_inf", failures == 0, checked, failures, detail={"worst_relative": worst})


def check_iwaniec(shifts=(1, 3, 5, 9, 15), P_max: int = 1000) -> CheckResult:
    """pi^2 prod c_p(l) = 8 sum_{d | l} 1/d for odd l."""
    from .constants.series import iwaniec_c

    failures = 0
    rel = {}
    for l in shifts:
        target = 8 * sum(Fraction(1, d) for d in divisors(l))
        val = iwaniec_c(l, P_max)
        rel[l] = abs(val / float(target) - 1)
        failures += rel[l] > 1e-3
    return CheckResult("iwaniec", failures == 0, len(shifts), failures, detail={"relative_errors": rel})


CHECKS: dict[str, Callable[[], CheckResult]] = {
    "gauss": check_gauss,
    "multiplicativity": check_multiplicativity,
    "orthogonality": check_orthogonality,
    "stabilization": check_stabilization,
    "sigma_inf": check_sigma_inf,
    "iwaniec": check_iwaniec,
}


def run_checks(filter_: str | None = None) -> list[CheckResult]:
    names = [n for n in CHECKS if filter_ is None or filter_ in n]
    out = []
    for name in names:
        t0 = time.perf_counter()
        try:
            res = CHECKS[name]()
        except QuadcorrError as exc:
            res = CheckResult(name, False, 0, 1, detail={"error": str(exc)})
        res.seconds = time.perf_counter() - t0
        out.append(res)
    return out
