"""Dirichlet characters stored as exact root-of-unity exponents."""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce

import numpy as np

from primewalks.errors import DomainError

# exponent_table entry for residues sharing a factor with the modulus
ZERO = -1


def factorize(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def euler_phi(n: int) -> int:
    phi = n
    for p, _ in factorize(n):
        phi -= phi // p
    return phi


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _primitive_root_prime_power(p: int, e: int) -> int:
    phi_p = p - 1
    qs = [q for q, _ in factorize(phi_p)]
    g = next(g for g in range(2, p) if all(pow(g, phi_p // q, p) != 1 for q in qs))
    if e > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


def _crt_lift(residue: int, q: int, k: int) -> int:
    """The x mod k with x = residue (mod q) and x = 1 (mod k/q)."""
    r = k // q
    if r == 1:
        return residue % k
    # x = residue + q*t with residue + q*t = 1 mod r
    t = ((1 - residue) * pow(q, -1, r)) % r
    return (residue + q * t) % k


def unit_group(k: int) -> list[tuple[int, int]]:
    """Generators of (Z/kZ)^x with their orders; the group is their direct product.

    One cyclic factor per odd prime power (a primitive root lifted by CRT),
    one factor of order 2 for 4 | k, and an extra factor generated by 5 for 8 | k.
    """
    if k < 1:
        raise ValueError("modulus must be >= 1")
    gens = []
    for p, e in factorize(k):
        q = p**e
        if p == 2:
            if e >= 2:
                gens.append((_crt_lift(q - 1, q, k), 2))
            if e >= 3:
                gens.append((_crt_lift(5, q, k), 2 ** (e - 2)))
        else:
            g = _primitive_root_prime_power(p, e)
            gens.append((_crt_lift(g, q, k), (p - 1) * p ** (e - 1)))
    return gens


def _discrete_logs(k: int, gens: list[tuple[int, int]]) -> dict[int, tuple[int, ...]]:
    """Map every unit mod k to its exponent vector on the generators."""
    logs = {}
    ranges = [range(o) for _, o in gens]
    for exps in itertools.product(*ranges):
        a = 1
        for (g, _), x in zip(gens, exps):
            a = a * pow(g, x, k) % k
        logs[a % k] = exps
    return logs


def _cyclotomic(m: int) -> list[int]:
    """Integer coefficients (low degree first) of the m-th cyclotomic polynomial."""
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divmod(poly, _cyclotomic(d))[0]
    return poly


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    if len(num) - 1 < dd:
        return [0], num
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] // lead  # cyclotomic polynomials are monic
        quot[i - dd] = c
        if c:
            for j, dj in enumerate(den):
                num[i - dd + j] -= c * dj
    return quot, num[:dd] or [0]


def root_of_unity_sum(counts: list[int], m: int) -> complex:
    """Exact evaluation of sum_j counts[j] * exp(2 pi i j / m).

    The sum is reduced modulo the m-th cyclotomic polynomial, so an exact
    zero is returned as ``0j`` rather than a rounding residue.
    """
    rem = _poly_divmod(list(counts), _cyclotomic(m))[1] if m > 1 else [sum(counts)]
    if not any(rem):
        return 0j
    z = cmath.exp(2j * math.pi / m)
    return complex(sum(c * z**j for j, c in enumerate(rem)))


def _root(e: int, m: int) -> complex:
    """exp(2 pi i e/m), exact at multiples of a quarter turn."""
    if (4 * e) % m == 0:
        return (1 + 0j, 1j, -1 + 0j, -1j)[(4 * e // m) % 4]
    return cmath.exp(2j * math.pi * e / m)


@dataclass(frozen=True)
class DirichletCharacter:
    """A character mod ``modulus`` with chi(a) = exp(2 pi i nu(a) / order).

    ``exponent_table[a]`` holds nu(a) for a in [0, modulus), or ``ZERO``
    when gcd(a, modulus) > 1. ``images`` records the exponents on the
    generators returned by :func:`unit_group`, in units of 1/ord(g).
    """

    modulus: int
    order: int
    exponent_table: tuple[int, ...]
    images: tuple[int, ...]

    # -- values ---------------------------------------------------------------
    def exponent(self, n: int) -> int:
        return self.exponent_table[n % self.modulus]

    def __call__(self, n: int) -> complex:
        e = self.exponent(n)
        if e == ZERO:
            return 0j
        return _root(e, self.order)

    def values(self, n) -> np.ndarray:
        """Vectorised chi over an integer array (complex128)."""
        return self._value_lookup[self.exponent_array[np.asarray(n) % self.modulus]]

    @cached_property
    def _value_lookup(self) -> np.ndarray:
        # index -1 (ZERO) maps to the trailing 0
        return np.array([_root(e, self.order) for e in range(self.order)] + [0j])

    @cached_property
    def exponent_array(self) -> np.ndarray:
        a = np.array(self.exponent_table, dtype=np.int64)
        a.setflags(write=False)
        return a

    def phase(self, n: int) -> Fraction | None:
        """Argument of chi(n) as a fraction of a full turn in (-1/2, 1/2]."""
        e = self.exponent(n)
        if e == ZERO:
            return None
        f = Fraction(e, self.order)
        return f - 1 if f > Fraction(1, 2) else f

    # -- structure ------------------------------------------------------------
    @property
    def principal(self) -> bool:
        return self.order == 1

    @property
    def parity(self) -> int:
        """1 if chi(-1) = -1, else 0."""
        e = self.exponent(self.modulus - 1)
        return 1 if 2 * e == self.order else 0

    @property
    def is_real(self) -> bool:
        return self.order <= 2

    @cached_property
    def conductor(self) -> int:
        k = self.modulus
        for d in sorted(d for d in range(1, k + 1) if k % d == 0):
            if all(
                self.exponent_table[a] == 0
                for a in range(1, k)
                if math.gcd(a, k) == 1 and a % d == 1 % d
            ):
                return d
        return k

    @property
    def primitive(self) -> bool:
        return self.conductor == self.modulus

    def conj(self) -> "DirichletCharacter":
        gens = unit_group(self.modulus)
        images = tuple((-x) % o for x, (_, o) in zip(self.images, gens))
        return character_from_images(self.modulus, images)

    def to_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "order": self.order,
            "parity": self.parity,
            "primitive": self.primitive,
            "conductor": self.conductor,
            "images": list(self.images),
            "exponent_table": list(self.exponent_table),
        }


def character_from_images(k: int, images) -> DirichletCharacter:
    """The character with chi(g_i) = exp(2 pi i images[i] / ord(g_i)).

    For k = 7 the generator is 3, so ``images=[1]`` gives chi(3) = e^{i pi/3}.
    """
    gens = unit_group(k)
    images = tuple(int(x) for x in images)
    if len(images) != len(gens):
        raise ValueError(
            f"modulus {k} has {len(gens)} generator(s) "
            f"{[g for g, _ in gens]}, got {len(images)} image(s)"
        )
    for x, (g, o) in zip(images, gens):
        if not 0 <= x < o:
            raise ValueError(f"image {x} for generator {g} must lie in [0, {o})")
    E = reduce(_lcm, (o for _, o in gens), 1)
    logs = _discrete_logs(k, gens)
    raw = [ZERO] * k
    for a, exps in logs.items():
        raw[a] = sum(x * (E // o) * v for x, (_, o), v in zip(images, gens, exps)) % E
    if k == 1:
        raw = [0]
    # reduce to the character's own order
    g = reduce(math.gcd, (e for e in raw if e != ZERO), E)
    order = E // g if g else 1
    table = tuple(ZERO if e == ZERO else (e // g if g else 0) for e in raw)
    return DirichletCharacter(k, order, table, images)


def enumerate_characters(k: int) -> list[DirichletCharacter]:
    """All phi(k) characters mod k, principal first."""
    gens = unit_group(k)
    return [
        character_from_images(k, imgs)
        for imgs in itertools.product(*[range(o) for _, o in gens])
    ]


def principal_character(k: int) -> DirichletCharacter:
    return character_from_images(k, [0] * len(unit_group(k)))


def orthogonality_sum(chi: DirichletCharacter) -> complex:
    """sum_{n=1}^{k} chi(n), evaluated exactly."""
    counts = [0] * chi.order
    for e in chi.exponent_table:
        if e != ZERO:
            counts[e] += 1
    return root_of_unity_sum(counts, chi.order)


def inner_product(chi: DirichletCharacter, psi: DirichletCharacter) -> complex:
    """sum_{n mod k} chi(n) conj(psi(n)), exact; phi(k) if equal else 0."""
    if chi.modulus != psi.modulus:
        raise ValueError("characters must share a modulus")
    m = _lcm(chi.order, psi.order)
    counts = [0] * m
    for a, b in zip(chi.exponent_table, psi.exponent_table):
        if a != ZERO:
            counts[(a * (m // chi.order) - b * (m // psi.order)) % m] += 1
    return root_of_unity_sum(counts, m)


def partial_sum_bound(chi: DirichletCharacter) -> float:
    """c = max_{j <= k-2} |sum_{n<=j} chi(n)|, bounding every partial sum of chi."""
    if chi.principal:
        raise DomainError("partial sums of a principal character are unbounded")
    k = chi.modulus
    vals = chi.values(np.arange(1, max(k - 1, 1)))
    if len(vals) == 0:
        return 0.0
    return float(np.max(np.abs(np.cumsum(vals))))


@dataclass(frozen=True)
class PhaseSet:
    """Distinct arguments of the nonzero values of a character.

    ``turns`` are exact fractions of a full turn in (-1/2, 1/2]; ``phases``
    the matching angles in (-pi, pi]. Sorted ascending.
    """

    turns: tuple[Fraction, ...]

    @property
    def phases(self) -> np.ndarray:
        return np.array([2 * math.pi * float(f) for f in self.turns])

    @property
    def r(self) -> int:
        return len(self.turns)


def phase_set(chi: DirichletCharacter) -> PhaseSet:
    turns = {chi.phase(n) for n in range(chi.modulus)} - {None}
    return PhaseSet(tuple(sorted(turns)))


def phase_order(chi: DirichletCharacter) -> list[Fraction]:
    """Distinct phases in first-occurrence order over n = 1, 2, ..., k-1.

    This is the row order used by the histogram and joint-matrix reports.
    """
    seen = []
    for n in range(1, max(chi.modulus, 2)):
        f = chi.phase(n)
        if f is not None and f not in seen:
            seen.append(f)
    return seen


def format_turn(f: Fraction) -> str:
    """Render a fraction of a turn as a multiple of pi, e.g. '2pi/3'."""
    x = 2 * f
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    x = abs(x)
    num = "" if x.numerator == 1 else str(x.numerator)
    den = "" if x.denominator == 1 else f"/{x.denominator}"
    return f"{sign}{num}pi{den}"
