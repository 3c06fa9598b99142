"""Segmented sieve of Eratosthenes over arbitrary sub-2**64 windows.

The sieve works on fixed-size segments (default 2**22 numbers, small enough
for the bitmap to stay cache resident) and represents only odd numbers in
its internal bitmap; 2 is handled specially. Segments are independent, so
they can be sieved by a pool of worker processes; results are always merged
in ascending range order by the consuming (single-threaded) reducer, which
makes every output deterministic and independent of worker count and
segment size.

Heavy consumers iterate numpy arrays (:func:`iter_prime_arrays`,
:func:`iter_gap_arrays`); the list-of-objects APIs (:func:`primes_in`,
:func:`gaps_in`) are for moderate windows and carry a memory budget.
"""

from __future__ import annotations

import math
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .numerics import next_prime

#: Numbers per segment. 2**22 keeps the odd-only bitmap (2 MiB of bools)
#: cache resident while amortizing the per-segment base-prime walk.
DEFAULT_SEGMENT_SIZE = 1 << 22

#: primes_in / gaps_in refuse to materialize windows wider than this;
#: use the streaming iterators for larger scans.
DEFAULT_MAX_SPAN = 1 << 28

U64_BOUND = 1 << 64


class RangeTooLargeError(ValueError):
    """A materializing API was asked for a window beyond its memory budget."""


class SieveSegment(NamedTuple):
    """Half-open window ``[lo, hi)`` with its primality bitmap.

    ``bits[k]`` is True iff ``lo + k`` is prime.
    """

    lo: int
    hi: int
    bits: np.ndarray


class PrimeGap(NamedTuple):
    """A consecutive-prime pair: ``p`` and ``p + g`` are neighbours.

    ``index`` is the 1-based position of ``p`` in the prime sequence
    (p_1 = 2); it is only known for scans anchored at 2.
    """

    p: int
    g: int
    index: int | None = None


def base_primes(limit: int) -> np.ndarray:
    """All primes below ``limit`` by a dense sieve (uint64 array)."""
    if limit <= 2:
        return np.empty(0, dtype=np.uint64)
    mask = np.ones(limit, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit - 1) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.uint64)


def _check_range(lo: int, hi: int) -> None:
    if lo < 0 or hi < 0:
        raise ValueError("range bounds must be non-negative")
    if hi > U64_BOUND:
        raise ValueError("sieve range must stay within 64 bits")
    if lo >= hi:
        raise ValueError(f"empty or inverted range [{lo}, {hi})")


def _segment_primes(lo: int, hi: int, base_odd: np.ndarray) -> np.ndarray:
    """Primes in ``[lo, hi)`` given the odd base primes up to sqrt(hi)."""
    lo_odd = lo | 1
    if lo_odd >= hi:
        out = np.empty(0, dtype=np.uint64)
    else:
        bits = _odd_bitmap(lo, hi, base_odd)
        idx = np.flatnonzero(bits).astype(np.uint64)
        out = (idx << np.uint64(1)) + np.uint64(lo_odd)
    if lo <= 2 < hi:
        out = np.concatenate([np.array([2], dtype=np.uint64), out])
    return out


def _odd_bitmap(lo: int, hi: int, base_odd: np.ndarray) -> np.ndarray:
    """Bitmap over the odd numbers of ``[lo, hi)``; entry k is lo|1 + 2k."""
    lo_odd = lo | 1
    bits = np.ones((hi - lo_odd + 1) // 2, dtype=bool)
    if lo_odd == 1:
        bits[0] = False
    # Start positions are computed in Python ints: near 2**64 the products
    # p*p and the first-multiple arithmetic must not wrap.
    for p in base_odd:
        p = int(p)
        m = ((lo + p - 1) // p) * p
        if m < p * p:
            m = p * p
        if m % 2 == 0:
            m += p
        if m >= hi:
            continue
        bits[(m - lo_odd) >> 1 :: p] = False
    return bits


def sieve_segment(lo: int, hi: int, *, max_size: int = DEFAULT_SEGMENT_SIZE) -> SieveSegment:
    """Sieve one segment and return its full-range primality bitmap."""
    _check_range(lo, hi)
    if hi - lo > max_size:
        raise RangeTooLargeError(
            f"segment [{lo}, {hi}) exceeds max_size={max_size}; "
            "iterate segments instead"
        )
    base = base_primes(math.isqrt(hi - 1) + 1)
    primes = _segment_primes(lo, hi, base[base > 2])
    bits = np.zeros(hi - lo, dtype=bool)
    if len(primes):
        bits[(primes - np.uint64(lo)).astype(np.int64)] = True
    return SieveSegment(lo, hi, bits)


def segment_ranges(lo: int, hi: int, segment_size: int) -> Iterator[tuple[int, int]]:
    """Split ``[lo, hi)`` into consecutive segments of at most segment_size."""
    start = lo
    while start < hi:
        end = min(start + segment_size, hi)
        yield start, end
        start = end


# ---------------------------------------------------------------------------
# Worker-pool plumbing. Task functions live at module level so they pickle;
# each worker process caches the base primes it has already computed.

_BASE_CACHE: dict[int, np.ndarray] = {}


def _cached_base_odd(sqrt_limit: int) -> np.ndarray:
    base = _BASE_CACHE.get(sqrt_limit)
    if base is None:
        full = base_primes(sqrt_limit)
        base = full[full > 2]
        _BASE_CACHE.clear()  # one scan at a time; keep the cache tiny
        _BASE_CACHE[sqrt_limit] = base
    return base


def _primes_task(args: tuple[int, int, int]) -> np.ndarray:
    lo, hi, sqrt_limit = args
    return _segment_primes(lo, hi, _cached_base_odd(sqrt_limit))


def _count_task(args: tuple[int, int, int]) -> int:
    lo, hi, sqrt_limit = args
    n = 0
    if (lo | 1) < hi:
        n = int(np.count_nonzero(_odd_bitmap(lo, hi, _cached_base_odd(sqrt_limit))))
    if lo <= 2 < hi:
        n += 1
    return n


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        return os.cpu_count() or 1
    if threads < 1:
        raise ValueError("threads must be >= 1")
    return threads


def _ordered_map(fn, tasks: Iterable, threads: int) -> Iterator:
    """Apply ``fn`` over ``tasks`` and yield results in task order.

    With ``threads > 1`` the work runs on a process pool with a bounded
    number of in-flight tasks, so memory stays proportional to the pool
    size rather than the scan length.
    """
    if threads <= 1:
        for t in tasks:
            yield fn(t)
        return
    with ProcessPoolExecutor(max_workers=threads) as pool:
        pending: deque = deque()
        for t in tasks:
            pending.append(pool.submit(fn, t))
            if len(pending) >= threads * 3:
                yield pending.popleft().result()
        while pending:
            yield pending.popleft().result()


def iter_prime_arrays(
    lo: int,
    hi: int,
    *,
    segment_size: int | None = None,
    threads: int | None = 1,
) -> Iterator[np.ndarray]:
    """Yield the primes of ``[lo, hi)`` as one ascending uint64 array per segment.

    Concatenating the yielded arrays gives exactly the primes of the window,
    for any segment size and worker count.
    """
    _check_range(lo, hi)
    segment_size = segment_size or DEFAULT_SEGMENT_SIZE
    if segment_size < 2:
        raise ValueError("segment_size must be >= 2")
    sqrt_limit = math.isqrt(hi - 1) + 1
    nthreads = resolve_threads(threads)
    tasks = ((s, e, sqrt_limit) for s, e in segment_ranges(lo, hi, segment_size))
    if nthreads <= 1:
        base_odd = _cached_base_odd(sqrt_limit)
        for s, e, _ in tasks:
            yield _segment_primes(s, e, base_odd)
    else:
        yield from _ordered_map(_primes_task, tasks, nthreads)


def primes_in(
    lo: int,
    hi: int,
    *,
    segment_size: int | None = None,
    threads: int | None = 1,
    max_span: int | None = DEFAULT_MAX_SPAN,
) -> np.ndarray:
    """Exactly the primes in ``[lo, hi)``, ascending, as a uint64 array.

    Raises :class:`RangeTooLargeError` when the window exceeds ``max_span``
    (pass ``max_span=None`` to lift the budget, or stream with
    :func:`iter_prime_arrays`).
    """
    _check_range(lo, hi)
    if max_span is not None and hi - lo > max_span:
        raise RangeTooLargeError(
            f"window of {hi - lo} numbers exceeds the materialization budget "
            f"({max_span}); use iter_prime_arrays for streaming access"
        )
    chunks = list(iter_prime_arrays(lo, hi, segment_size=segment_size, threads=threads))
    if not chunks:
        return np.empty(0, dtype=np.uint64)
    return np.concatenate(chunks)


def count_primes_in(
    lo: int,
    hi: int,
    *,
    segment_size: int | None = None,
    threads: int | None = 1,
) -> int:
    """Number of primes in ``[lo, hi)``; streaming, O(1) extra memory."""
    _check_range(lo, hi)
    segment_size = segment_size or DEFAULT_SEGMENT_SIZE
    sqrt_limit = math.isqrt(hi - 1) + 1
    nthreads = resolve_threads(threads)
    tasks = ((s, e, sqrt_limit) for s, e in segment_ranges(lo, hi, segment_size))
    return sum(_ordered_map(_count_task, tasks, nthreads))


def count_primes_in_bins(
    edges: Sequence[int],
    *,
    segment_size: int | None = None,
    threads: int | None = 1,
) -> np.ndarray:
    """Counts of primes in each ``[edges[i], edges[i+1])``, as one pass.

    ``edges`` must be strictly increasing. Used by the interval-conjecture
    sweeps, where thousands of adjacent windows would otherwise each pay
    their own sieve setup.
    """
    edges_arr = np.asarray(list(edges), dtype=np.uint64)
    if len(edges_arr) < 2 or np.any(edges_arr[1:] <= edges_arr[:-1]):
        raise ValueError("edges must be strictly increasing with >= 2 entries")
    counts = np.zeros(len(edges_arr) - 1, dtype=np.int64)
    lo, hi = int(edges_arr[0]), int(edges_arr[-1])
    for primes in iter_prime_arrays(lo, hi, segment_size=segment_size, threads=threads):
        if not len(primes):
            continue
        idx = np.searchsorted(edges_arr, primes, side="right") - 1
        counts += np.bincount(idx, minlength=len(counts))
    return counts


def iter_gap_arrays(
    lo: int,
    hi: int,
    *,
    segment_size: int | None = None,
    threads: int | None = 1,
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(p, g)`` uint64 array pairs for every gap with ``lo <= p < hi``.

    Gaps are stitched across segment boundaries by carrying the last prime
    of each segment forward, so concatenating the per-segment output equals
    a single-pass scan. The final gap is closed by probing for the first
    prime at or beyond ``hi`` (it is dropped in the pathological case where
    that prime would exceed the 64-bit domain).
    """
    carry: int | None = None
    for primes in iter_prime_arrays(lo, hi, segment_size=segment_size, threads=threads):
        if not len(primes):
            continue
        if carry is not None:
            primes = np.concatenate([np.array([carry], dtype=np.uint64), primes])
        if len(primes) >= 2:
            yield primes[:-1], np.diff(primes)
        carry = int(primes[-1])
    if carry is None:
        return
    nxt = next_prime(hi - 1)  # first prime >= hi; closes the final gap
    if nxt >= U64_BOUND:
        return
    yield (
        np.array([carry], dtype=np.uint64),
        np.array([nxt - carry], dtype=np.uint64),
    )


def gaps_in(
    lo: int,
    hi: int,
    *,
    segment_size: int | None = None,
    threads: int | None = 1,
    max_span: int | None = DEFAULT_MAX_SPAN,
) -> list[PrimeGap]:
    """All gaps whose lower prime lies in ``[lo, hi)``, as PrimeGap objects.

    ``index`` is populated only when the scan is anchored at the start of
    the primes (``lo <= 2``); for a mid-range window the global prime index
    is unknown and left as None.
    """
    _check_range(lo, hi)
    if max_span is not None and hi - lo > max_span:
        raise RangeTooLargeError(
            f"window of {hi - lo} numbers exceeds the materialization budget "
            f"({max_span}); use iter_gap_arrays for streaming access"
        )
    anchored = lo <= 2
    out: list[PrimeGap] = []
    n = 0
    for p_arr, g_arr in iter_gap_arrays(lo, hi, segment_size=segment_size, threads=threads):
        for p, g in zip(p_arr.tolist(), g_arr.tolist()):
            n += 1
            out.append(PrimeGap(p, g, n if anchored else None))
    return out
