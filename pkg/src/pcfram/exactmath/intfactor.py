"""Budgeted integer factorization: trial division, Pollard rho (Brent), Miller-Rabin.

Factorization is never assumed complete.  Whatever could not be split within
the budget is returned as a composite cofactor with ``complete=False``.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt

# Miller-Rabin with the first 12 primes as bases is deterministic below this bound
# (Sorenson-Webster 2015; the first 13 primes are needed up to 3.3e24).
MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
MR_DETERMINISTIC_BOUND = 318665857834031151167461
MR_RANDOM_ROUNDS = 40


@dataclass(frozen=True)
class FactorBudget:
    trial_bound: int = 100_000
    rho_rounds: int = 8
    rho_iterations: int = 30_000

    def __post_init__(self):
        if self.trial_bound < 2 or self.rho_rounds < 0 or self.rho_iterations < 1:
            raise ValueError("factor budget values must be positive")

    @classmethod
    def from_env(cls, **overrides) -> "FactorBudget":
        vals = {
            "trial_bound": int(os.environ.get("PCFRAM_PRIME_BOUND", cls.trial_bound)),
            "rho_rounds": int(os.environ.get("PCFRAM_RHO_ROUNDS", cls.rho_rounds)),
        }
        vals.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**vals)


@lru_cache(maxsize=8)
def primes_below(bound: int) -> tuple[int, ...]:
    if bound < 3:
        return ()
    sieve = bytearray([1]) * bound
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(bound - 1) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, bound, i)))
    return tuple(i for i in range(bound) if sieve[i])


def _mr_round(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below MR_DETERMINISTIC_BOUND, probabilistic above."""
    if n < 2:
        return False
    for p in MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_mr_round(n, a, d, s) for a in MR_BASES):
        return False
    if n < MR_DETERMINISTIC_BOUND:
        return True
    rng = random.Random(n)  # seeded from n so repeated runs agree
    return all(_mr_round(n, rng.randrange(2, n - 1), d, s) for _ in range(MR_RANDOM_ROUNDS))


def is_prime(n: int) -> bool:
    return is_probable_prime(n)


def is_proven_prime(n: int) -> bool:
    return n < MR_DETERMINISTIC_BOUND and is_probable_prime(n)


def pollard_brent(n: int, c: int, max_iter: int) -> int | None:
    """One Brent-style rho attempt with f(x) = x^2 + c; returns a nontrivial factor or None."""
    y, r, q = 2, 1, 1
    g = 1
    x = ys = y
    m = 128
    it = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
            it += m
        r *= 2
        if it > max_iter and g == 1:
            return None
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if 1 < g < n else None


@dataclass(frozen=True)
class IntFactorization:
    n: int
    factors: tuple[tuple[int, int], ...]
    cofactor: int = 1
    probable: tuple[int, ...] = field(default=())

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    @property
    def sign(self) -> int:
        return -1 if self.n < 0 else 1

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def value(self) -> int:
        out = self.cofactor
        for p, e in self.factors:
            out *= p**e
        return out

    def __str__(self):
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors]
        if self.cofactor != 1:
            parts.append(f"[{self.cofactor}]")
        body = " * ".join(parts) or "1"
        return ("-" if self.n < 0 else "") + body


def factor_integer(n: int, budget: FactorBudget | None = None) -> IntFactorization:
    """Factor |n| within the budget; the sign of n is kept on the result, not in the factors."""
    if n == 0:
        raise ValueError("cannot factor 0")
    budget = budget or FactorBudget()
    m = abs(n)
    found: dict[int, int] = {}
    for p in primes_below(budget.trial_bound):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    stack = [m] if m > 1 else []
    leftovers = []
    rounds_left = budget.rho_rounds
    while stack:
        k = stack.pop()
        if k == 1:
            continue
        if k < budget.trial_bound**2 or is_probable_prime(k):
            # below trial_bound^2 every remaining cofactor is prime
            found[k] = found.get(k, 0) + 1
            continue
        r = isqrt(k)
        if r * r == k:
            stack += [r, r]
            continue
        split = None
        c = 1
        while split is None and rounds_left > 0:
            split = pollard_brent(k, c, budget.rho_iterations)
            c += 1
            rounds_left -= 1
        if split is None:
            leftovers.append(k)
        else:
            stack += [split, k // split]
    cof = 1
    for k in leftovers:
        cof *= k
    probable = tuple(sorted(p for p in found if p >= MR_DETERMINISTIC_BOUND))
    return IntFactorization(n, tuple(sorted(found.items())), cof, probable)


def prime_support(n: int, budget: FactorBudget | None = None) -> tuple[tuple[int, ...], int]:
    """(sorted primes dividing n, unsplit cofactor)."""
    f = factor_integer(n, budget)
    return f.primes, f.cofactor
