"""What it would take for the conjectures to fail next, and how close the
square-root bound runs to the strong Andrica bound.

The next maximal gap record starts beyond p*_80 ~ 1.8e19, so breaking the
strong Andrica inequality there needs a gap wider than sqrt(p*_80) ~ 4.3e9.
Known record gaps are three orders of magnitude short of that.

The square-root conjecture bounds sqrt(p_next) - sqrt(p) by
sqrt(p) * (sqrt(1 + 1/sqrt(p)) - 1), which approaches 1/2 from below as
1/2 - 1/(8 sqrt(p)) + O(1/p).
"""

from decimal import Decimal, localcontext

from primegaps import (
    ConjectureKind,
    compute_exceptions,
    failure_threshold_after,
    load_known_table,
    sqrt_threshold_gap,
)
from primegaps.conjectures import order_of_magnitude

known = load_known_table()
threshold = failure_threshold_after(known)
print(f"last record gap:     {known.last.g_star:>12,}  ({order_of_magnitude(known.last.g_star)})")
print(f"gap needed to break: {threshold:>12,}  ({order_of_magnitude(threshold)})")

print("\nsquare-root conjecture exceptions below 10**6:",
      compute_exceptions(ConjectureKind.SQRT, 10**6))

print("\nhow the sqrt-gap bound approaches 1/2:")
print(f"    {'p':>6}  {'bound':<22}  {'1/2 - bound':>12}")
with localcontext() as ctx:
    ctx.prec = 30
    for k in range(2, 19, 2):
        p = 10**k
        value = sqrt_threshold_gap(p)
        print(f"    10^{k:<3}  {str(value)[:20]:<22}  {Decimal('0.5') - value:.3E}")
