"""Segmented prime sieve and the prime-gap facts the convergence arguments use."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple

import numpy as np

from primewalks.errors import EmptyDomainError, OutOfRangeError

# odd numbers per segment; 512 KiB of mask fits a typical L2
DEFAULT_SEGMENT = 1 << 19

# Baker-Harman-Pintz exponent
BHP_THETA = 0.525


def _simple_sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    mask[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if mask[p]:
            mask[p * p :: 2 * p] = False
    return np.flatnonzero(mask).astype(np.int64)


def _odd_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primes in [lo, hi) for odd lo, using odd base primes."""
    size = (hi - lo + 1) // 2
    mask = np.ones(size, dtype=bool)
    for p in base:
        p = int(p)
        pp = p * p
        if pp >= hi:
            break
        start = max(pp, ((lo + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        if start >= hi:
            continue
        mask[(start - lo) // 2 :: p] = False
    out = lo + 2 * np.flatnonzero(mask).astype(np.int64)
    if lo == 1:
        out = out[1:]  # 1 is not prime
    return out


def iter_prime_segments(
    limit: int, segment: int = DEFAULT_SEGMENT, workers: int = 1
) -> Iterator[np.ndarray]:
    """Yield the primes <= limit as consecutive ascending arrays.

    Memory stays O(segment + sqrt(limit)). With ``workers > 1`` segments are
    sieved concurrently but always yielded in index order, so any reduction
    over the stream is independent of the worker count.
    """
    if limit < 2:
        raise EmptyDomainError(f"sieve limit must be >= 2, got {limit}")
    yield np.array([2], dtype=np.int64)
    if limit < 3:
        return
    base = _simple_sieve(math.isqrt(limit))[1:]
    span = 2 * segment
    bounds = [(lo, min(lo + span, limit + 1)) for lo in range(1, limit + 1, span)]
    if workers <= 1:
        for lo, hi in bounds:
            yield _odd_segment(lo, hi, base)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # bounded look-ahead keeps memory proportional to the worker count
        for i in range(0, len(bounds), workers):
            chunk = bounds[i : i + workers]
            yield from pool.map(lambda b: _odd_segment(b[0], b[1], base), chunk)


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """All primes up to ``limit``, with 1-based access p_1 = 2, p_2 = 3, ..."""

    limit: int
    primes: np.ndarray

    def __post_init__(self):
        self.primes.setflags(write=False)

    def __len__(self) -> int:
        return len(self.primes)

    @cached_property
    def gaps(self) -> np.ndarray:
        """g_n = p_{n+1} - p_n for the stored n (one fewer than the primes)."""
        d = np.diff(self.primes)
        dtype = np.uint16 if (len(d) == 0 or d.max() < 1 << 16) else np.uint32
        out = d.astype(dtype)
        out.setflags(write=False)
        return out

    @cached_property
    def log_primes(self) -> np.ndarray:
        out = np.log(self.primes.astype(np.float64))
        out.setflags(write=False)
        return out

    def pi(self, x: float) -> int:
        """Prime counting function for x <= limit."""
        if x > self.limit:
            raise OutOfRangeError(f"pi({x}) needs a sieve to {x}, table stops at {self.limit}",
                                  required=int(x))
        return int(np.searchsorted(self.primes, x, side="right"))

    def nth(self, n: int) -> int:
        return nth_prime(n, self)

    def head(self, n: int) -> np.ndarray:
        """The first n primes, raising if the table is too short."""
        if n > len(self.primes):
            raise OutOfRangeError(
                f"need {n} primes, table has {len(self.primes)}",
                required=limit_for_count(n),
            )
        return self.primes[:n]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PrimeTable):
            return NotImplemented
        return self.limit == other.limit and np.array_equal(self.primes, other.primes)

    __hash__ = None


def sieve(limit: int, segment: int = DEFAULT_SEGMENT, workers: int = 1) -> PrimeTable:
    """Segmented odd-only sieve of Eratosthenes returning all primes <= limit."""
    parts = list(iter_prime_segments(int(limit), segment=segment, workers=workers))
    return PrimeTable(int(limit), np.concatenate(parts))


def limit_for_count(n: int) -> int:
    """An upper bound for p_n (Rosser: n(log n + log log n) for n >= 6)."""
    if n < 6:
        return 13
    ln = math.log(n)
    return int(n * (ln + math.log(ln))) + 1


def nth_prime(n: int, table: PrimeTable) -> int:
    if n < 1:
        raise ValueError("prime index is 1-based")
    if n > len(table):
        need = limit_for_count(n)
        raise OutOfRangeError(
            f"p_{n} is beyond the table (limit {table.limit}); sieve to at least {need}",
            required=need,
        )
    return int(table.primes[n - 1])


class GapCheck(NamedTuple):
    N: int
    gap_sum: int
    logsq_sum: float
    holds: bool


def gap_inequality_check(N: int, table: PrimeTable) -> GapCheck:
    """Compare sum_{n<=N} g_n against sum_{n<=N} log^2 p_n."""
    if N < 1:
        raise ValueError("N must be >= 1")
    p = table.head(N + 1)
    gap_sum = int(np.sum(np.diff(p)))
    logsq = math.fsum((np.log(p[:N].astype(np.float64)) ** 2).tolist())
    return GapCheck(N, gap_sum, logsq, gap_sum < logsq)


def gap_inequality_scan(N_max: int, table: PrimeTable, N_min: int = 5) -> np.ndarray:
    """Indices N in [N_min, N_max] where the gap inequality fails (empty if none)."""
    p = table.head(N_max + 1)
    gap_sums = p[1:] - 2  # telescoping: sum_{n<=N} g_n = p_{N+1} - 2
    logsq = np.cumsum(table.log_primes[:N_max] ** 2)
    N = np.arange(1, N_max + 1)
    bad = (gap_sums >= logsq) & (N >= N_min)
    return N[bad]


class LogSquareAsymptotic(NamedTuple):
    x: float
    exact_sum: float
    asymptotic: float
    relative_gap: float


def logsq_sum_asymptotic(x: float, table: PrimeTable) -> LogSquareAsymptotic:
    """sum_{p<=x} log^2 p against x log x - x."""
    if x < 2:
        raise ValueError("x must be >= 2")
    n = table.pi(x)
    exact = math.fsum((table.log_primes[:n] ** 2).tolist())
    asym = x * math.log(x) - x
    return LogSquareAsymptotic(x, exact, asym, (exact - asym) / asym)


def bhp_violations(table: PrimeTable, theta: float = BHP_THETA) -> np.ndarray:
    """Primes p_n (with p_{n+1} in the table) where g_n >= p_n**theta."""
    p = table.primes[:-1]
    g = table.gaps.astype(np.float64)
    return p[g >= p.astype(np.float64) ** theta]


def write_csv(table: PrimeTable, path, count: int | None = None) -> None:
    """Rows ``n,p_n,g_n`` for every n whose gap is known."""
    m = len(table) - 1 if count is None else min(count, len(table) - 1)
    n = np.arange(1, m + 1)
    with open(path, "w", newline="\n") as fh:
        fh.write("n,p_n,g_n\n")
        if m > 0:
            np.savetxt(fh, np.column_stack([n, table.primes[:m], table.gaps[:m]]),
                       fmt="%d", delimiter=",")
