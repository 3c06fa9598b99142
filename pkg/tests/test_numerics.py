import random

import pytest
from hypothesis import given, strategies as st

from primegaps import numerics

import oracles


class TestIsqrt:
    @pytest.mark.parametrize(
        "n,expected", [(0, 0), (1, 1), (2, 1), (3, 1), (4, 2), (15, 3), (16, 4), (17, 4)]
    )
    def test_small_values(self, n, expected):
        assert numerics.isqrt(n) == expected

    def test_top_of_64_bit_domain(self):
        n = 2**64 - 1
        r = numerics.isqrt(n)
        assert r == 4294967295
        assert r * r <= n < (r + 1) * (r + 1)

    @given(st.integers(min_value=0, max_value=2**70))
    def test_postcondition(self, n):
        r = numerics.isqrt(n)
        assert r * r <= n < (r + 1) * (r + 1)

    def test_sampled_across_64_bits(self):
        rng = random.Random(0xC0FFEE)
        for _ in range(20000):
            n = rng.randrange(0, 2**64)
            r = numerics.isqrt(n)
            assert r * r <= n < (r + 1) * (r + 1)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            numerics.isqrt(-1)


class TestIsPrime64:
    def test_tiny(self):
        assert not numerics.is_prime_64(0)
        assert not numerics.is_prime_64(1)
        assert numerics.is_prime_64(2)
        assert numerics.is_prime_64(3)
        assert not numerics.is_prime_64(4)

    def test_exception_set_primes(self):
        # the six exception primes of the strong Andrica statement
        for p in (3, 7, 13, 23, 31, 113):
            assert numerics.is_prime_64(p)

    def test_largest_known_record_start(self):
        # start of the 80th maximal gap; also re-checked against its role as
        # a record start in test_gap_records
        assert numerics.is_prime_64(18361375334787046697)
        assert not numerics.is_prime_64(18361375334787046697 + 2)

    def test_agrees_with_trial_division_exhaustively(self):
        for n in range(20000):
            assert numerics.is_prime_64(n) == oracles.is_prime_trial(n), n

    def test_agrees_with_plain_sieve_for_every_n_to_one_million(self):
        truth = set(oracles.primes_upto(1_000_000))
        for n in range(1_000_000):
            assert numerics.is_prime_64(n) == (n in truth), n

    def test_witness_squares_are_composite(self):
        for a in numerics.MR_WITNESSES_64:
            assert not numerics.is_prime_64(a * a)

    def test_random_64_bit_semiprimes_rejected(self):
        rng = random.Random(42)

        def random_prime_32() -> int:
            while True:
                c = rng.randrange(2**31, 2**32) | 1
                if numerics.is_prime_64(c) and oracles.is_prime_trial(c):
                    return c

        for _ in range(50):
            p, q = random_prime_32(), random_prime_32()
            n = p * q
            assert n < 2**64
            assert not numerics.is_prime_64(n), (p, q)

    def test_strong_pseudoprimes_to_few_bases_still_rejected(self):
        # 3215031751 fools bases {2, 3, 5, 7}; the full witness set does not
        assert not numerics.is_prime_64(3215031751)
        assert not numerics.is_prime_64(3825123056546413051)


class TestNeighbours:
    @pytest.mark.parametrize("n", [0, 1, 2, 3, 10, 113, 523, 9999])
    def test_next_prime_matches_oracle(self, n):
        assert numerics.next_prime(n) == oracles.next_prime_after(n)

    def test_prev_prime(self):
        assert numerics.prev_prime(3) == 2
        assert numerics.prev_prime(10) == 7
        assert numerics.prev_prime(541) == 523
        with pytest.raises(ValueError):
            numerics.prev_prime(2)

    @given(st.integers(min_value=0, max_value=100000))
    def test_next_prime_postcondition(self, n):
        q = numerics.next_prime(n)
        assert q > n
        assert oracles.is_prime_trial(q)
        assert all(not oracles.is_prime_trial(m) for m in range(n + 1, q))
