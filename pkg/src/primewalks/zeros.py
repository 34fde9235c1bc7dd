"""Individual zeros of Dirichlet L-functions on the critical line from a finite
prime sum, plus an independent reference locator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import loggamma

from primewalks.characters import DirichletCharacter
from primewalks.errors import DomainError, NoRootFoundError
from primewalks.lfunctions import dirichlet_l_reference
from primewalks.primes import PrimeTable

ANCHORS = ("reference", "primes", "none")
MAX_WIDENINGS = 50
WIDEN_FACTOR = 1.5


def theta_k_a(t, modulus: int, parity: int):
    """Im log Gamma(1/4 + a/2 + i t/2) + (t/2) log(k/pi); vectorised over t.

    The principal log Gamma is analytic for Re z > 0, so this is continuous in t.
    """
    t = np.asarray(t, dtype=np.float64)
    out = loggamma(0.25 + parity / 2 + 0.5j * t).imag + 0.5 * t * math.log(modulus / math.pi)
    return float(out) if out.ndim == 0 else out


def theta_derivative(t: float, modulus: int, parity: int, h: float = 1e-5) -> float:
    return (theta_k_a(t + h, modulus, parity) - theta_k_a(t - h, modulus, parity)) / (2 * h)


def _check_character(chi: DirichletCharacter) -> None:
    if chi.principal:
        raise DomainError("principal characters have a pole at s = 1; not supported")
    if not chi.primitive:
        raise DomainError(f"character mod {chi.modulus} is not primitive "
                          f"(conductor {chi.conductor})")


@dataclass(frozen=True)
class _PrimeSum:
    """a_n = chi(p_n) p_n^{-1/2-delta} and log p_n over the first N primes."""

    coeff: np.ndarray
    logp: np.ndarray

    @classmethod
    def build(cls, chi: DirichletCharacter, N: int, table: PrimeTable, delta: float):
        p = table.head(N)
        lp = table.log_primes[:N]
        return cls(chi.values(p) * np.exp(-(0.5 + delta) * lp), lp)

    def __call__(self, t: float) -> float:
        """pi * S_N(t) = -sum angle(1 - a_n e^{-i t log p_n})."""
        z = self.coeff * np.exp(-1j * t * self.logp)
        return -float(np.sum(np.angle(1 - z)))


def s_from_primes(t: float, chi: DirichletCharacter, N: int, table: PrimeTable,
                  delta: float = 0.0) -> float:
    """S_N(t) = -(1/pi) sum_{n<=N} Im log(1 - chi(p_n) p_n^{-1/2-delta-it}).

    Every prime counts towards N, including those dividing the modulus
    (their terms are zero). Each log is taken on its principal branch.
    """
    _check_character(chi)
    if delta < 0:
        raise DomainError("delta must be >= 0")
    return _PrimeSum.build(chi, N, table, delta)(t) / math.pi


def reference_arg(chi: DirichletCharacter, delta: float = 0.0, steps: int = 400) -> float:
    """arg L(1/2 + delta, chi), continued along the real axis from sigma = 3.

    At sigma = 3 the principal argument is the continuous one (|log L| < pi);
    the path is sampled finely enough for unwrapping.
    """
    sig = np.linspace(3.0, 0.5 + delta, steps)
    ang = np.unwrap([np.angle(dirichlet_l_reference(x, chi)) for x in sig])
    return float(ang[-1])


def anchor_value(chi: DirichletCharacter, anchor: str, delta: float,
                 prime_sum: _PrimeSum | None = None) -> float:
    """Offset subtracted from theta + pi S_N so that F vanishes at zeros."""
    if anchor == "reference":
        return reference_arg(chi, delta)
    if anchor == "primes":
        return prime_sum(0.0)
    if anchor == "none":
        return 0.0
    raise ValueError(f"anchor must be one of {ANCHORS}, got {anchor!r}")


@dataclass(frozen=True)
class ZeroSolution:
    index: int
    t_n: float
    N_primes: int
    delta: float
    residual: float
    iterations: int
    anchor: float = 0.0
    bracket: tuple[float, float] = field(default=(0.0, 0.0), compare=False)

    def to_dict(self) -> dict:
        return {"n": self.index, "N": self.N_primes, "t_n": self.t_n, "delta": self.delta,
                "residual": self.residual, "iterations": self.iterations}


class TranscendentalEquation:
    """F(t) = theta(t) + pi S_N(t) - anchor - (n - 1/2) pi for fixed (chi, N, delta)."""

    def __init__(self, chi: DirichletCharacter, N: int, table: PrimeTable,
                 delta: float = 0.0, anchor: str = "reference"):
        _check_character(chi)
        if N < 1:
            raise ValueError("N must be >= 1")
        if delta < 0:
            raise DomainError("delta must be >= 0")
        self.chi, self.N, self.delta = chi, N, delta
        self.k, self.a = chi.modulus, chi.parity
        self.prime_sum = _PrimeSum.build(chi, N, table, delta)
        self.anchor = anchor_value(chi, anchor, delta, self.prime_sum)

    def phase(self, t: float) -> float:
        return theta_k_a(t, self.k, self.a) + self.prime_sum(t) - self.anchor

    def __call__(self, t: float, n: int) -> float:
        return self.phase(t) - (n - 0.5) * math.pi

    def counting_value(self, t: float) -> float:
        """(theta(t) + pi S_N(t) - anchor) / pi."""
        return self.phase(t) / math.pi

    def smooth_guess(self, n: int) -> float:
        """Solve theta(t) - anchor = (n - 1/2) pi on the increasing branch of theta."""
        target = (n - 0.5) * math.pi + self.anchor
        th = lambda t: theta_k_a(t, self.k, self.a)
        grid = np.linspace(0, 10, 201)
        t_min = float(grid[np.argmin(theta_k_a(grid, self.k, self.a))])
        if th(t_min) >= target:
            return max(t_min, 1e-3)
        hi = max(2 * t_min, 1.0)
        while th(hi) < target:
            hi *= 2
        lo = t_min
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if th(mid) < target:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def solve(self, n: int, tol: float = 1e-10) -> ZeroSolution:
        if n < 1:
            raise ValueError("zero index is 1-based")
        if tol <= 0:
            raise ValueError("tol must be > 0")
        t0 = self.smooth_guess(n)
        slope = max(theta_derivative(t0, self.k, self.a), 1e-2)
        w = 0.25 * math.pi / slope
        f = lambda t: self(t, n)
        lo, hi = max(t0 - w, 1e-9), t0 + w
        flo, fhi = f(lo), f(hi)
        widenings = 0
        while flo * fhi > 0:
            if widenings >= MAX_WIDENINGS:
                raise NoRootFoundError(
                    f"no sign change of F for n = {n} in [{lo:.6g}, {hi:.6g}]", (lo, hi))
            w *= WIDEN_FACTOR
            lo, hi = max(t0 - w, 1e-9), t0 + w
            flo, fhi = f(lo), f(hi)
            widenings += 1
        root, info = brentq(f, lo, hi, xtol=tol * 1e-2, rtol=4 * np.finfo(float).eps,
                            maxiter=200, full_output=True)
        return ZeroSolution(n, root, self.N, self.delta, abs(f(root)), info.iterations,
                            self.anchor, (lo, hi))


def solve_zero(n: int, chi: DirichletCharacter, N: int, table: PrimeTable,
               delta: float = 0.0, tol: float = 1e-10, anchor: str = "reference") -> ZeroSolution:
    """t_n from the first N primes: bracket from theta alone, widen by 1.5, then Brent."""
    return TranscendentalEquation(chi, N, table, delta, anchor).solve(n, tol)


# -- independent reference zeros ----------------------------------------------------

def _rotated(chi: DirichletCharacter):
    """t -> Re(e^{i theta(t)} L(1/2 + it) conj(omega)), real on the critical line."""
    k, a = chi.modulus, chi.parity
    z = lambda t: np.exp(1j * theta_k_a(t, k, a)) * dirichlet_l_reference(0.5 + 1j * t, chi)
    # Z(t) = omega * real; fix omega from a point away from zeros
    probe = max(((abs(z(t)), t) for t in np.linspace(0, 2, 9)))[1]
    w = z(probe)
    omega = w / abs(w)
    return lambda t: float((z(t) * np.conj(omega)).real)


def reference_zeros(chi: DirichletCharacter, count: int, step: float = 0.05,
                    t_max: float = 500.0, xtol: float = 1e-12) -> list[float]:
    """First ``count`` positive zeros on the critical line by sign changes of
    the rotated completed L-function, computed from the Hurwitz route only."""
    _check_character(chi)
    Z = _rotated(chi)
    out = []
    t, z = step, Z(step)
    while len(out) < count:
        if t > t_max:
            raise NoRootFoundError(f"found {len(out)} of {count} zeros below t = {t_max}",
                                   (0.0, t_max))
        t2 = t + step
        z2 = Z(t2)
        if z == 0:
            out.append(t)
        elif z * z2 < 0:
            out.append(brentq(Z, t, t2, xtol=xtol))
        t, z = t2, z2
    return out


def reference_zero(chi: DirichletCharacter, n: int = 1, **kw) -> float:
    return reference_zeros(chi, n, **kw)[n - 1]


@dataclass(frozen=True)
class ZeroTableRow:
    n: int
    N: int
    solution: ZeroSolution | None
    t_ref: float
    error: str | None = None

    @property
    def error_pct(self) -> float | None:
        if self.solution is None:
            return None
        return abs(self.solution.t_n - self.t_ref) / self.t_ref * 100

    def to_dict(self) -> dict:
        d = {"n": self.n, "N": self.N, "t_ref": self.t_ref}
        if self.solution is None:
            d["error"] = self.error
        else:
            d.update(t_n=self.solution.t_n, residual=self.solution.residual,
                     error_pct=self.error_pct)
        return d


def zero_table(chi: DirichletCharacter, n_range: Sequence[int], N_values: Sequence[int],
               table: PrimeTable, delta: float = 0.0, tol: float = 1e-10,
               anchor: str = "reference") -> list[ZeroTableRow]:
    """Solve every (n, N) pair; rows fail independently with the error recorded."""
    refs = reference_zeros(chi, max(n_range))
    rows = []
    for N in N_values:
        eq = TranscendentalEquation(chi, N, table, delta, anchor)
        for n in n_range:
            try:
                rows.append(ZeroTableRow(n, N, eq.solve(n, tol), refs[n - 1]))
            except NoRootFoundError as exc:
                rows.append(ZeroTableRow(n, N, None, refs[n - 1], str(exc)))
    return rows
