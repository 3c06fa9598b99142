"""Certifying gap conjectures over explicit ranges.

The key trick: between consecutive maximal-gap records, every gap is at
most the earlier record's width while sqrt(p) only grows. So checking the
strong Andrica inequality once per record start certifies it across the
table's whole coverage; gaps below a small floor are checked directly
(that is where the six exceptions 3, 7, 13, 23, 31, 113 live).

A strong Andrica certificate then propagates: Oppermann for m up to
isqrt(bound), Legendre from Oppermann, Brocard from Legendre, and the
standard/weak Andrica forms along the way. Everything is cross-checkable
by table-free brute-force sweeps.
"""

from primegaps import (
    ConjectureKind,
    direct_sweep,
    load_known_table,
    result_to_json,
    scan_records,
    verify_by_implication,
    verify_strong_andrica,
)

known = load_known_table()
base = verify_strong_andrica(known, brute_floor=523)
print(f"strong Andrica: verified for primes p < {base.verified_up_to:,}")
print(f"exceptions: {base.exceptions}")

print("\npropagated through the implication chain:")
for result in verify_by_implication(base):
    what = (
        f"primes p < {result.verified_up_to:,}"
        if result.bound_kind == "primes"
        else f"integers m <= {result.max_verified:,}"
    )
    tag = f" (c={result.weak_c})" if result.weak_c else ""
    print(f"    {result.kind.value + tag:<22} holds for {what}")

print("\nindependent brute-force cross-check on [2, 10**6):")
scanned = scan_records(10**6)
via_records = verify_strong_andrica(scanned)
via_sweep = direct_sweep(ConjectureKind.STRONG_ANDRICA, 10**6)
print("    record-interval claims == direct-sweep claims:",
      via_records.claims() == via_sweep.claims())

print("\nfull JSON form of the headline certificate:")
print(result_to_json(base))
