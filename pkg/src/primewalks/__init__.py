"""Numerical laboratory for prime random walks, truncated Euler products
and zeros of L-functions computed from primes."""

from primewalks.primes import PrimeTable, sieve, nth_prime
from primewalks.characters import (
    DirichletCharacter,
    character_from_images,
    enumerate_characters,
)

__all__ = [
    "PrimeTable",
    "sieve",
    "nth_prime",
    "DirichletCharacter",
    "character_from_images",
    "enumerate_characters",
]

__version__ = "0.1.0"
