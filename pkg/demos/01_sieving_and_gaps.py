"""Sieving windows and walking prime gaps.

The segmented sieve works on any sub-2**64 window: it needs the base primes
up to sqrt(hi), not the primes up to lo, so jumping straight to 10**12 is
cheap. Gap streams stitch across segment boundaries and close the final gap
past the window edge.
"""

from primegaps import (
    count_primes_in,
    gaps_in,
    is_prime_64,
    primes_in,
    sieve_segment,
)

print("primes in [1, 50):", primes_in(1, 50).tolist())
print("primes in [10**12, 10**12 + 200):", primes_in(10**12, 10**12 + 200).tolist())

print("\nprime counts:  pi(10**6) =", count_primes_in(1, 10**6))
print("primes strictly between 9 and 25:", count_primes_in(10, 25))

print("\nfirst gaps (p, g, index):")
for gap in gaps_in(2, 30):
    print("   ", gap)

print("\nthe gap at 113 is famously wide for its size:")
(gap,) = gaps_in(113, 114)
print(f"    ({gap.p}, {gap.g})  ->  next prime {gap.p + gap.g}")

print("\nmid-range scans do not know global indices:")
print("   ", gaps_in(10**9, 10**9 + 100))

seg = sieve_segment(100, 160)
marked = [seg.lo + k for k in range(len(seg.bits)) if seg.bits[k]]
print("\nsegment bitmap [100, 160):", marked)
assert all(is_prime_64(v) for v in marked)
