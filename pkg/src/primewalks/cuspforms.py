"""Exact Fourier coefficients of the discriminant (Ramanujan tau) and of the
Eisenstein series G4, with Hecke and Deligne checks."""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from primewalks import polymul
from primewalks.errors import (
    DomainError,
    InsufficientCoefficientsError,
    OutOfRangeError,
    ResourceError,
    VanishingCoefficientError,
)
from primewalks.primes import PrimeTable, sieve
from primewalks.walks import WalkSeries

DEFAULT_MEMORY_BUDGET = 4 << 30

CACHE_MAGIC = b"PWCF"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sHHQHB")  # magic, version, weight, limit, width, kind
_KINDS = {"cusp": 0, "eisenstein": 1}


@dataclass(frozen=True, eq=False)
class CuspFormCoefficients:
    """c(0..limit) of a weight-``weight`` form; ``coeffs[n]`` is c(n).

    For ``kind == "eisenstein"`` the table holds the L-series coefficients
    (sigma_3 for G4), with the constant term left at 0.
    """

    weight: int
    limit: int
    coeffs: tuple[int, ...]
    kind: str = "cusp"

    def __getitem__(self, n: int) -> int:
        if not 0 <= n <= self.limit:
            raise OutOfRangeError(f"c({n}) is outside the table (limit {self.limit})",
                                  required=n)
        return self.coeffs[n]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CuspFormCoefficients):
            return NotImplemented
        return (self.weight, self.limit, self.kind, self.coeffs) == (
            other.weight, other.limit, other.kind, other.coeffs)

    __hash__ = None

    def as_float(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs])

    def at_primes(self, primes: np.ndarray) -> list[int]:
        if len(primes) and primes[-1] > self.limit:
            raise InsufficientCoefficientsError(
                f"need c(p) up to p = {int(primes[-1])}, table stops at {self.limit}",
                required=int(primes[-1]))
        return [self.coeffs[int(p)] for p in primes]


def eta_cubed(terms: int) -> list[int]:
    """prod (1-q^n)^3 = sum_j (-1)^j (2j+1) q^{j(j+1)/2}, first ``terms`` coefficients."""
    out = [0] * terms
    j = 0
    while j * (j + 1) // 2 < terms:
        out[j * (j + 1) // 2] = (-1) ** j * (2 * j + 1)
        j += 1
    return out


def estimate_memory(limit: int) -> int:
    """Peak bytes for delta_coefficients(limit), dominated by the last squaring."""
    size = 1 << (2 * limit).bit_length()
    return limit * 120 + size * 8 * 6


def delta_coefficients(limit: int, threshold: int = polymul.NAIVE_THRESHOLD,
                       memory_budget: int = DEFAULT_MEMORY_BUDGET) -> CuspFormCoefficients:
    """tau(1..limit) from q * (eta^3 series)^8, built by three exact squarings."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    need = estimate_memory(limit)
    if need > memory_budget:
        raise ResourceError(
            f"tau up to {limit} needs about {need / 2**30:.1f} GiB "
            f"(budget {memory_budget / 2**30:.1f} GiB)", need)
    f = eta_cubed(limit)
    for _ in range(3):
        f = polymul.multiply(f, f, limit=limit, threshold=threshold)
    f = f + [0] * (limit - len(f))
    return CuspFormCoefficients(12, limit, tuple([0] + f[:limit]), "cusp")


def delta_coefficients_bruteforce(limit: int) -> list[int]:
    """tau(0..limit) by multiplying out q * prod_{n<=limit} (1-q^n)^24 term by term."""
    poly = [1] + [0] * limit
    for n in range(1, limit + 1):
        for _ in range(24):
            for i in range(limit, n - 1, -1):
                poly[i] -= poly[i - n]
    return [0] + poly[:limit]


# -- Hecke relations ----------------------------------------------------------

def hecke_recursion_check(p: int, r_max: int, cf: CuspFormCoefficients) -> bool:
    """c(p^{r+1}) == c(p)c(p^r) - p^{k-1} c(p^{r-1}) for r = 1..r_max, exactly."""
    if p ** (r_max + 1) > cf.limit:
        raise OutOfRangeError(f"{p}^{r_max + 1} exceeds the table limit {cf.limit}",
                              required=p ** (r_max + 1))
    return all(_hecke_step(p, r, cf) for r in range(1, r_max + 1))


def hecke_scan(cf: CuspFormCoefficients, table: PrimeTable | None = None) -> list[tuple[int, int]]:
    """Every (p, r) with p^{r+1} <= limit where the recursion fails."""
    table = table or sieve(max(cf.limit, 2))
    bad = []
    for p in table.primes:
        p = int(p)
        if p * p > cf.limit:
            break
        r = 1
        while p ** (r + 1) <= cf.limit:
            if not _hecke_step(p, r, cf):
                bad.append((p, r))
            r += 1
    return bad


def _hecke_step(p: int, r: int, cf: CuspFormCoefficients) -> bool:
    c = cf.coeffs
    return c[p ** (r + 1)] == c[p] * c[p**r] - p ** (cf.weight - 1) * c[p ** (r - 1)]


def multiplicativity_check(cf: CuspFormCoefficients, pairs: Iterable[tuple[int, int]]) -> bool:
    """c(m)c(n) == sum_{d | (m,n)} d^{k-1} c(mn/d^2) for every pair, exactly."""
    c, k = cf.coeffs, cf.weight
    for m, n in pairs:
        if m * n > cf.limit:
            raise OutOfRangeError(f"{m}*{n} exceeds the table limit {cf.limit}",
                                  required=m * n)
        g = math.gcd(m, n)
        rhs = sum(d ** (k - 1) * c[m * n // (d * d)] for d in range(1, g + 1) if g % d == 0)
        if c[m] * c[n] != rhs:
            return False
    return True


# -- Deligne bound and Frobenius angles ------------------------------------------

@dataclass(frozen=True)
class DeligneScan:
    max_ratio: float
    argmax_prime: int
    within_bound: bool  # exact: c(p)^2 <= 4 p^{k-1} for every prime scanned
    primes_scanned: int


def deligne_ratio_scan(cf: CuspFormCoefficients, table: PrimeTable | None = None) -> DeligneScan:
    """max over primes p <= limit of |c(p)| / (2 p^{(k-1)/2})."""
    table = table or sieve(max(cf.limit, 2))
    primes = table.primes[: table.pi(cf.limit)]
    best, arg, ok = -1.0, 0, True
    k = cf.weight
    for p in primes:
        p = int(p)
        c = cf.coeffs[p]
        if c * c > 4 * p ** (k - 1):
            ok = False
        ratio = abs(c) / (2 * p ** ((k - 1) / 2))
        if ratio > best:
            best, arg = ratio, p
    return DeligneScan(best, arg, ok, len(primes))


def frobenius_angles(cf: CuspFormCoefficients, table: PrimeTable | None = None
                     ) -> tuple[np.ndarray, np.ndarray]:
    """(primes, alpha_p) with c(p) = 2 p^{(k-1)/2} cos(alpha_p), alpha_p in [0, pi]."""
    table = table or sieve(max(cf.limit, 2))
    primes = table.primes[: table.pi(cf.limit)]
    k = cf.weight
    x = np.array([cf.coeffs[int(p)] / (2 * float(p) ** ((k - 1) / 2)) for p in primes])
    if np.any(np.abs(x) > 1 + 1e-12):
        raise DomainError("Deligne bound violated; Frobenius angles are not real")
    return primes, np.arccos(np.clip(x, -1.0, 1.0))


def sato_tate_mass(a: float, b: float) -> float:
    """Integral of (2/pi) sin^2 over [a, b]."""
    F = lambda x: (x - math.sin(2 * x) / 2) / math.pi
    return F(b) - F(a)


@dataclass(frozen=True)
class SatoTateHistogram:
    edges: np.ndarray
    empirical: np.ndarray  # probability mass per bin
    reference: np.ndarray  # Sato-Tate mass per bin
    discrepancy: float  # sup over bins of |empirical - reference|


def sato_tate_histogram(angles: np.ndarray, bins: int) -> SatoTateHistogram:
    if bins < 2:
        raise ValueError("need at least two bins")
    edges = np.linspace(0, math.pi, bins + 1)
    counts, _ = np.histogram(angles, bins=edges)
    emp = counts / max(len(angles), 1)
    ref = np.array([sato_tate_mass(a, b) for a, b in zip(edges[:-1], edges[1:])])
    return SatoTateHistogram(edges, emp, ref, float(np.max(np.abs(emp - ref))))


def tau_sign_walk(N: int, cf: CuspFormCoefficients, table: PrimeTable) -> WalkSeries:
    """Partial sums of sign(c(p_n)); a vanishing c(p) is raised, never skipped."""
    if N == 0:
        return WalkSeries(np.zeros(0), "sign")
    primes = table.head(N)
    vals = cf.at_primes(primes)
    steps = np.empty(N)
    for i, (p, c) in enumerate(zip(primes, vals)):
        if c == 0:
            raise VanishingCoefficientError(f"c({int(p)}) = 0", int(p))
        steps[i] = 1.0 if c > 0 else -1.0
    return WalkSeries(np.cumsum(steps), "sign")


# -- Eisenstein series G4 ---------------------------------------------------------

def sigma_divisor(n: int, m: int) -> int:
    """sigma_m(n) = sum of d^m over divisors d of n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    total = 0
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            total += d**m
            e = n // d
            if e != d:
                total += e**m
    return total


def divisor_sigma_table(limit: int, m: int) -> np.ndarray:
    """sigma_m(0..limit) by a divisor sieve (int64; entry 0 is 0)."""
    if (limit + 1) ** m * 2 >= 2**63:
        raise OverflowError("sigma_m values overflow int64 at this limit")
    out = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        out[d::d] += d**m
    return out


def eisenstein_g4_coefficients(limit: int) -> CuspFormCoefficients:
    """L-series coefficients sigma_3(n) of G4 (weight 4, not a cusp form)."""
    s3 = divisor_sigma_table(limit, 3)
    s3[0] = 0
    return CuspFormCoefficients(4, limit, tuple(s3.tolist()), "eisenstein")


@dataclass(frozen=True)
class ModularDimension:
    weight: int
    dim_modular: int
    dim_cusp: int
    verbatim: bool  # True when the k = 2 (mod 12) branch, [k/2], was used


def modular_space_dimension(k: int) -> ModularDimension:
    """Dimensions of M_k and its cusp subspace by the two-case rule

    dim M_k = [k/2] if k = 2 (mod 12), else [k/12] + 1, and dim cusp = dim M_k - 1.
    The k = 2 (mod 12) branch is recorded literally and flagged; the usual
    textbook value there is [k/12].
    """
    if k % 2 or k < 4:
        raise DomainError(f"weight must be even and >= 4, got {k}")
    if k % 12 == 2:
        dim = k // 2
        verbatim = True
    else:
        dim = k // 12 + 1
        verbatim = False
    return ModularDimension(k, dim, dim - 1, verbatim)


# -- binary cache -----------------------------------------------------------------

def _width_for(coeffs) -> int:
    bits = max((abs(c).bit_length() for c in coeffs), default=0) + 1
    return max(16, -(-bits // 8))


def save_coefficients(cf: CuspFormCoefficients, path) -> None:
    """Header, then c(1..limit) as little-endian signed fixed-width integers,
    then a SHA-256 of everything before it.

    Width is 16 bytes (int128) unless a value needs more.
    """
    width = _width_for(cf.coeffs)
    body = b"".join(c.to_bytes(width, "little", signed=True) for c in cf.coeffs[1:])
    head = _HEADER.pack(CACHE_MAGIC, CACHE_VERSION, cf.weight, cf.limit, width, _KINDS[cf.kind])
    payload = head + body
    with open(path, "wb") as fh:
        fh.write(payload)
        fh.write(hashlib.sha256(payload).digest())


def load_coefficients(path) -> CuspFormCoefficients:
    data = open(path, "rb").read()
    payload, digest = data[:-32], data[-32:]
    if hashlib.sha256(payload).digest() != digest:
        raise ValueError(f"checksum mismatch in {path}")
    magic, version, weight, limit, width, kind = _HEADER.unpack_from(payload)
    if magic != CACHE_MAGIC or version != CACHE_VERSION:
        raise ValueError(f"{path} is not a version-{CACHE_VERSION} coefficient file")
    body = memoryview(payload)[_HEADER.size :]
    if len(body) != limit * width:
        raise ValueError(f"{path} is truncated")
    coeffs = [0] + [
        int.from_bytes(body[i : i + width], "little", signed=True)
        for i in range(0, limit * width, width)
    ]
    kinds = {v: k for k, v in _KINDS.items()}
    return CuspFormCoefficients(weight, limit, tuple(coeffs), kinds[kind])


def write_csv(cf: CuspFormCoefficients, path, name: str = "tau") -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(f"n,{name}(n)\n")
        for n in range(1, cf.limit + 1):
            fh.write(f"{n},{cf.coeffs[n]}\n")
