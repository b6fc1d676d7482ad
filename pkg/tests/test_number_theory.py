"""Factorization and the census divisibility/odd-prime-divisor claims."""

from __future__ import annotations

import random
from math import factorial

import pytest

from graycensus.numtheory import (
    Factorization,
    check_half_factorial_divisibility,
    factorize,
    is_probable_prime,
    odd_prime_divisor_count,
)

H6 = 14754666508334433250560
H6_LARGE_FACTORS = (217199, 1085989, 5429923)
H_KNOWN = {2: 1, 3: 6, 4: 1344, 5: 906545760, 6: H6}


class TestFactorize:
    def test_recombination_random(self) -> None:
        rng = random.Random(41)
        values = [rng.randrange(2, 10 ** 12) for _ in range(60)]
        values += [2, 3, 4, 1, 2 ** 40, 3 ** 20, 999999999989, 10 ** 12]
        for v in values:
            f = factorize(v)
            assert f.recombine() == v
            assert f.complete
            assert all(is_probable_prime(p) for p, _ in f.factors)
            assert [p for p, _ in f.factors] == sorted({p for p, _ in f.factors})

    def test_h6_factorization(self) -> None:
        f = factorize(H6)
        assert f.complete and f.recombine() == H6
        assert f.factors == (
            (2, 8), (3, 2), (5, 1), (217199, 1), (1085989, 1), (5429923, 1))

    def test_semiprime_beyond_trial_range(self) -> None:
        p, q = 10000019, 10000079  # both above the trial-division sieve
        f = factorize(p * q)
        assert f.factors == ((p, 1), (q, 1)) and f.complete

    def test_rejects_nonpositive(self) -> None:
        with pytest.raises(ValueError):
            factorize(0)
        with pytest.raises(ValueError):
            factorize(-6)

    def test_display_format(self) -> None:
        assert str(factorize(448)) == "2^6 * 7"
        assert str(factorize(42)) == "2 * 3 * 7"
        assert str(factorize(1)) == "1"
        partial = Factorization(value=6 * (2 ** 89 - 1) * (2 ** 107 - 1),
                                factors=((2, 1), (3, 1)),
                                remainder=(2 ** 89 - 1) * (2 ** 107 - 1))
        assert not partial.complete
        assert str(partial).endswith("?")
        assert partial.recombine() == partial.value


class TestPrimality:
    def test_small_cases(self) -> None:
        def naive(v: int) -> bool:
            if v < 2:
                return False
            return all(v % p for p in range(2, int(v ** 0.5) + 1))

        for v in range(-2, 1000):
            assert is_probable_prime(v) == naive(v), v

    def test_carmichael_numbers_rejected(self) -> None:
        for v in (561, 1105, 1729, 41041, 825265):
            assert not is_probable_prime(v)

    def test_large_known_primes(self) -> None:
        assert is_probable_prime(2 ** 61 - 1)
        assert not is_probable_prime((2 ** 31 - 1) * (2 ** 61 - 1))
        for p in H6_LARGE_FACTORS:
            assert is_probable_prime(p)


class TestCensusClaims:
    def test_half_factorial_divisibility(self) -> None:
        for n, h in H_KNOWN.items():
            assert check_half_factorial_divisibility(h, n)
        assert not check_half_factorial_divisibility(1343, 4)

    def test_odd_prime_divisor_counts(self) -> None:
        for n in (3, 4, 5, 6):
            assert odd_prime_divisor_count(H_KNOWN[n], n) == n - 3

    def test_odd_prime_divisors_count_the_quotient(self) -> None:
        # the count is over distinct odd primes of H_n / (n!/2)
        quotient = H_KNOWN[5] // (factorial(5) // 2)
        odd = [p for p, _ in factorize(quotient).factors if p % 2]
        assert len(odd) == 2 == odd_prime_divisor_count(H_KNOWN[5], 5)

    def test_rejects_non_multiples(self) -> None:
        with pytest.raises(ArithmeticError):
            odd_prime_divisor_count(1343, 4)
