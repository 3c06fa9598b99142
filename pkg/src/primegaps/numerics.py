"""Exact integer building blocks: floor square root and 64-bit primality.

Every pass/fail decision in this package is made with exact integer
arithmetic. Python integers are arbitrary precision, so intermediates such
as ``16 * p`` or ``p * p`` near 2**64 never overflow or round.
"""

from __future__ import annotations

import math

#: Witnesses making the strong-pseudoprime (Miller-Rabin) test deterministic
#: for every n < 3,317,044,064,679,887,385,961,981 (> 2**64): the first
#: twelve primes. See Sorenson & Webster, "Strong pseudoprimes to twelve
#: prime bases" (2015).
MR_WITNESSES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

U64_BOUND = 1 << 64


def isqrt(n: int) -> int:
    """Floor of the real square root of ``n``.

    The result ``r`` satisfies ``r*r <= n < (r+1)*(r+1)`` exactly, for any
    non-negative ``n`` (not just 64-bit values).
    """
    if n < 0:
        raise ValueError("isqrt requires n >= 0")
    return math.isqrt(n)


def _strong_probable_prime(n: int, a: int, d: int, r: int) -> bool:
    # n - 1 == d * 2**r with d odd
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime_64(n: int) -> bool:
    """Exact primality for any ``0 <= n < 2**64``.

    Deterministic Miller-Rabin over the fixed witness set
    :data:`MR_WITNESSES_64`; there are no pseudoprimes below 2**64 for these
    twelve bases, so the answer is exact rather than probabilistic.
    """
    if n < 2:
        return False
    for p in MR_WITNESSES_64:
        if n % p == 0:
            return n == p
    d = n - 1
    r = (d & -d).bit_length() - 1  # exponent of 2 in n-1
    d >>= r
    return all(_strong_probable_prime(n, a, d, r) for a in MR_WITNESSES_64)


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than ``n``.

    Steps through odd candidates with :func:`is_prime_64`; intended for
    closing a prime gap or probing near a known prime, not for bulk
    enumeration (use the sieve for that).
    """
    if n < 2:
        return 2
    q = n + 1 + (n & 1)  # next odd number > n
    while not is_prime_64(q):
        q += 2
    return q


def prev_prime(n: int) -> int:
    """Largest prime strictly smaller than ``n`` (requires ``n > 2``)."""
    if n <= 2:
        raise ValueError("no prime below 2")
    if n == 3:
        return 2
    q = n - 1 if n % 2 == 0 else n - 2
    while not is_prime_64(q):
        q -= 2
    return q
