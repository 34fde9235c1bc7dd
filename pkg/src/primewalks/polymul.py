"""Exact integer polynomial products: schoolbook for short inputs, multi-prime
number-theoretic transform with CRT reconstruction for long ones."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# p = c * 2^m + 1 < 2^31, so residue products fit in int64
NTT_PRIMES = (
    2013265921,  # 15 * 2^27 + 1
    1811939329,  # 27 * 2^26 + 1
    469762049,   # 7 * 2^26 + 1
    2113929217,  # 63 * 2^25 + 1
    1711276033,  # 51 * 2^25 + 1
    167772161,   # 5 * 2^25 + 1
    754974721,   # 45 * 2^24 + 1
    998244353,   # 119 * 2^23 + 1
)

# schoolbook below this many output terms
NAIVE_THRESHOLD = 2048


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    qs = _prime_factors(p - 1)
    return next(g for g in range(2, p) if all(pow(g, (p - 1) // q, p) != 1 for q in qs))


def _two_adicity(p: int) -> int:
    m, q = 0, p - 1
    while q % 2 == 0:
        q //= 2
        m += 1
    return m


@lru_cache(maxsize=64)
def _bitrev(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def _powers(w: int, count: int, p: int) -> np.ndarray:
    out = np.ones(1, dtype=np.int64)
    step = w
    while len(out) < count:
        out = np.concatenate([out, out * step % p])
        step = step * step % p
    return out[:count]


@lru_cache(maxsize=128)
def _twiddles(n: int, p: int, inverse: bool) -> tuple[np.ndarray, ...]:
    g = primitive_root(p)
    out = []
    length = 2
    while length <= n:
        w = pow(g, (p - 1) // length, p)
        if inverse:
            w = pow(w, p - 2, p)
        out.append(_powers(w, length // 2, p))
        length *= 2
    return tuple(out)


def ntt(a: np.ndarray, p: int, inverse: bool = False) -> np.ndarray:
    """Iterative radix-2 transform of length len(a) (a power of two) mod p."""
    n = len(a)
    if n & (n - 1):
        raise ValueError("transform length must be a power of two")
    if n > 1 << _two_adicity(p):
        raise ValueError(f"length {n} exceeds the 2-adic capacity of {p}")
    a = a[_bitrev(n)] % p
    length = 2
    for tw in _twiddles(n, p, inverse):
        half = length // 2
        blocks = a.reshape(-1, length)
        u = blocks[:, :half].copy()
        v = blocks[:, half:] * tw % p
        blocks[:, :half] = u + v
        blocks[:, half:] = u - v
        a = blocks.reshape(-1) % p
        length *= 2
    if inverse:
        a = a * pow(n, p - 2, p) % p
    return a


def _residues(coeffs, p: int) -> np.ndarray:
    return np.array([c % p for c in coeffs], dtype=np.int64)


def _cyclic_product_mod(a, b, p: int, size: int, square: bool) -> np.ndarray:
    fa = np.zeros(size, dtype=np.int64)
    fa[: len(a)] = _residues(a, p)
    fa = ntt(fa, p)
    if square:
        fb = fa
    else:
        fb = np.zeros(size, dtype=np.int64)
        fb[: len(b)] = _residues(b, p)
        fb = ntt(fb, p)
    return ntt(fa * fb % p, p, inverse=True)


def crt_reconstruct(residues: list[np.ndarray], primes: tuple[int, ...]) -> list[int]:
    """Signed integers from residues via Garner's mixed-radix algorithm.

    Mixed-radix digits are computed in int64; only the final Horner
    combination touches Python integers.
    """
    k = len(primes)
    digits = []
    for i in range(k):
        x = residues[i].copy()
        for j in range(i):
            inv = pow(primes[j], -1, primes[i])
            x = (x - digits[j]) % primes[i] * inv % primes[i]
        digits.append(x)
    acc = digits[-1].astype(object)
    for i in range(k - 2, -1, -1):
        acc = acc * primes[i] + digits[i].astype(object)
    M = 1
    for p in primes:
        M *= p
    half = M // 2
    return [int(v) - M if v > half else int(v) for v in acc]


def primes_for_bound(bound: int) -> tuple[int, ...]:
    """Smallest prefix of NTT_PRIMES whose product exceeds 2*bound + 1."""
    M, out = 1, []
    for p in NTT_PRIMES:
        out.append(p)
        M *= p
        if M > 2 * bound + 1:
            return tuple(out)
    raise OverflowError("coefficient bound exceeds the CRT capacity")


def multiply_ntt(a: list[int], b: list[int], limit: int | None = None) -> list[int]:
    """Exact product of integer polynomials via modular transforms."""
    if not a or not b:
        return []
    out_len = len(a) + len(b) - 1
    size = 1 << (out_len - 1).bit_length()
    bound = max(abs(x) for x in a) * max(abs(x) for x in b) * min(len(a), len(b))
    primes = primes_for_bound(bound)
    square = a is b
    res = [_cyclic_product_mod(a, b, p, size, square)[:out_len] for p in primes]
    out = crt_reconstruct(res, primes)
    return out if limit is None else out[:limit]


def multiply_naive(a: list[int], b: list[int], limit: int | None = None) -> list[int]:
    """Schoolbook product, skipping zero coefficients of ``a``."""
    if not a or not b:
        return []
    n = len(a) + len(b) - 1 if limit is None else min(limit, len(a) + len(b) - 1)
    out = [0] * n
    for i, x in enumerate(a):
        if x == 0 or i >= n:
            continue
        for j in range(min(len(b), n - i)):
            out[i + j] += x * b[j]
    return out


def multiply(a: list[int], b: list[int], limit: int | None = None,
             threshold: int = NAIVE_THRESHOLD) -> list[int]:
    """Exact product truncated to ``limit`` terms, choosing the method by size."""
    square = a is b
    if limit is not None:
        a = a[:limit]
        b = a if square else b[:limit]
    n = len(a) + len(b) - 1 if a and b else 0
    if limit is not None:
        n = min(n, limit)
    if n <= threshold:
        return multiply_naive(a, b, limit)
    return multiply_ntt(a, b, limit)
