"""Prime factorization and divisibility checks on cycle counts.

Cycle counts of the n-cube carry arithmetic structure: every count is a
multiple of n!/2, and the quotient by n! has exactly n - 3 distinct odd
prime divisors for the computed range.  This module certifies those claims
with exact integer arithmetic: trial division up to ten million (the
largest observed prime factor is below that), deterministic Miller-Rabin
for cofactors below 2^64, and a Brent-cycle rho fallback that splits any
composite cofactor whose prime pieces stay below 2^64.  Anything beyond
that range is reported as an unfactored remainder, never mislabeled prime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

_TRIAL_LIMIT = 10**7
_CERTIFIED_BOUND = 1 << 64

# Deterministic Miller-Rabin witness set for every integer below 2^64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization with primes strictly increasing.

    The remainder is 1 for a complete factorization; otherwise it holds the
    single cofactor that could not be certified prime within supported range
    (factors times remainder still recombines to the value).
    """

    value: int
    factors: tuple[tuple[int, int], ...]
    remainder: int = 1

    @property
    def complete(self) -> bool:
        return self.remainder == 1

    def recombine(self) -> int:
        out = self.remainder
        for p, e in self.factors:
            out *= p**e
        return out

    def distinct_primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __str__(self) -> str:
        if not self.factors and self.remainder == 1:
            return "1"
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors]
        if self.remainder != 1:
            parts.append(f"{self.remainder}?")
        return " * ".join(parts)


def is_probable_prime(v: int) -> bool:
    """Miller-Rabin; deterministic (exact) for v below 2^64."""
    if v < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if v % p == 0:
            return v == p
    d = v - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, v)
        if x == 1 or x == v - 1:
            continue
        for _ in range(r - 1):
            x = x * x % v
            if x == v - 1:
                break
        else:
            return False
    return True


def _rho_split(v: int) -> int:
    # Brent-cycle Pollard rho; v composite and odd. Deterministic: walks
    # successive polynomial offsets until a nontrivial divisor appears.
    if v % 2 == 0:
        return 2
    for c in range(1, 64):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % v
            y = (y * y + c) % v
            y = (y * y + c) % v
            d = math.gcd(abs(x - y), v)
        if d != v:
            return d
    raise ArithmeticError(f"rho failed to split {v}")


def factorize(v: int) -> Factorization:
    """Complete prime factorization for values whose primes fit in 64 bits.

    Larger certified-prime cofactors cannot occur within the supported
    range; an uncertifiable cofactor is returned as the remainder.
    """
    if v < 1:
        raise ValueError(f"factorize requires a positive integer, got {v}")
    counts: dict[int, int] = {}
    rest = v
    for p in _small_primes():
        if p * p > rest:
            break
        while rest % p == 0:
            counts[p] = counts.get(p, 0) + 1
            rest //= p
    remainder = 1
    stack = [rest] if rest > 1 else []
    while stack:
        c = stack.pop()
        if c < _TRIAL_LIMIT * _TRIAL_LIMIT:
            # No factor below the trial limit, so below its square c is prime.
            counts[c] = counts.get(c, 0) + 1
            continue
        if is_probable_prime(c):
            if c < _CERTIFIED_BOUND:
                counts[c] = counts.get(c, 0) + 1
            else:
                remainder *= c
            continue
        d = _rho_split(c)
        stack.append(d)
        stack.append(c // d)
    return Factorization(
        value=v,
        factors=tuple(sorted(counts.items())),
        remainder=remainder,
    )


_PRIME_CACHE: list[int] = []


def _small_primes() -> list[int]:
    # Sieve of Eratosthenes up to the trial-division limit, built once.
    global _PRIME_CACHE
    if not _PRIME_CACHE:
        import numpy as np

        sieve = np.ones(_TRIAL_LIMIT, dtype=bool)
        sieve[:2] = False
        for p in range(2, int(_TRIAL_LIMIT**0.5) + 1):
            if sieve[p]:
                sieve[p * p :: p] = False
        _PRIME_CACHE = [int(p) for p in np.nonzero(sieve)[0]]
    return _PRIME_CACHE


def check_half_factorial_divisibility(h: int, n: int) -> bool:
    """Whether the cycle count is a multiple of n!/2."""
    if n < 2:
        raise ValueError(f"dimension {n} out of range (n >= 2)")
    return h % (math.factorial(n) // 2) == 0


def odd_prime_divisor_count(h: int, n: int) -> int:
    """Distinct odd primes dividing h / n! (h must be divisible by n!)."""
    if n < 2:
        raise ValueError(f"dimension {n} out of range (n >= 2)")
    fact = math.factorial(n)
    if h % fact:
        raise ArithmeticError(f"{h} is not divisible by {n}!")
    f = factorize(h // fact)
    if not f.complete:
        raise ArithmeticError(f"quotient has an unfactored cofactor: {f}")
    return sum(1 for p in f.distinct_primes() if p % 2 == 1)
