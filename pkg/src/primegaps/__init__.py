"""Prime gap toolkit: sieve at scale, find maximal gap records, and certify
Andrica/Oppermann/Legendre/Brocard-type conjectures over explicit ranges
with exact integer arithmetic."""

from .conjectures import (
    BROCARD_FIRST_P,
    ConjectureKind,
    SQRT_CONJECTURE_EXCEPTIONS,
    STRONG_ANDRICA_EXCEPTIONS,
    brocard_count,
    compute_exceptions,
    failure_threshold_after,
    known_exceptions,
    legendre_count,
    oppermann_holds_at,
    sqrt_conjecture_holds,
    sqrt_threshold_gap,
    standard_andrica_holds,
    strong_andrica_holds,
    weak_andrica_holds,
)
from .gap_records import (
    CrossCheckReport,
    MaximalGapRecord,
    RecordTable,
    TableParseError,
    TableValidationError,
    cross_check,
    known_table_path,
    load_known_table,
    scan_records,
    validate_table,
    verify_gap_interiors,
)
from .numerics import MR_WITNESSES_64, is_prime_64, isqrt, next_prime, prev_prime
from .sieve import (
    DEFAULT_SEGMENT_SIZE,
    PrimeGap,
    RangeTooLargeError,
    SieveSegment,
    count_primes_in,
    count_primes_in_bins,
    gaps_in,
    iter_gap_arrays,
    iter_prime_arrays,
    primes_in,
    sieve_segment,
)
from .verify import (
    DEFAULT_BRUTE_FLOOR,
    VerificationResult,
    direct_sweep,
    result_to_json,
    result_to_json_dict,
    verify_by_implication,
    verify_strong_andrica,
)

__version__ = "0.1.0"

__all__ = [
    "BROCARD_FIRST_P",
    "ConjectureKind",
    "CrossCheckReport",
    "DEFAULT_BRUTE_FLOOR",
    "DEFAULT_SEGMENT_SIZE",
    "MR_WITNESSES_64",
    "MaximalGapRecord",
    "PrimeGap",
    "RangeTooLargeError",
    "RecordTable",
    "SQRT_CONJECTURE_EXCEPTIONS",
    "STRONG_ANDRICA_EXCEPTIONS",
    "SieveSegment",
    "TableParseError",
    "TableValidationError",
    "VerificationResult",
    "brocard_count",
    "compute_exceptions",
    "count_primes_in",
    "count_primes_in_bins",
    "cross_check",
    "direct_sweep",
    "failure_threshold_after",
    "gaps_in",
    "is_prime_64",
    "isqrt",
    "iter_gap_arrays",
    "iter_prime_arrays",
    "known_exceptions",
    "known_table_path",
    "legendre_count",
    "load_known_table",
    "next_prime",
    "oppermann_holds_at",
    "prev_prime",
    "primes_in",
    "result_to_json",
    "result_to_json_dict",
    "scan_records",
    "sieve_segment",
    "sqrt_conjecture_holds",
    "sqrt_threshold_gap",
    "standard_andrica_holds",
    "strong_andrica_holds",
    "validate_table",
    "verify_by_implication",
    "verify_gap_interiors",
    "verify_strong_andrica",
    "weak_andrica_holds",
]
