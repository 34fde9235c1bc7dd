"""Truncated Euler products, their prime-series decomposition, and reference
L-values for Dirichlet characters and cusp forms."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.special import bernoulli, loggamma

from primewalks.characters import DirichletCharacter
from primewalks.cuspforms import CuspFormCoefficients, divisor_sigma_table
from primewalks.errors import (
    DomainError,
    InsufficientCoefficientsError,
    PoleError,
    SingularFactorError,
)
from primewalks.primes import PrimeTable

# floor for the R-series cutoff in m; raised per call until the tail is certified
M_MAX_FLOOR = 40
R_TAIL_TOL = 1e-14

_B2J = bernoulli(40)[2::2]  # B_2, B_4, ..., B_40
_EM_TERMS = 15


@dataclass(frozen=True)
class ComplexPoint:
    sigma: float
    t: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and math.isfinite(self.t)):
            raise DomainError("non-finite evaluation point")

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)

    @classmethod
    def of(cls, s) -> "ComplexPoint":
        s = complex(s)
        return cls(s.real, s.imag)


# -- special functions ---------------------------------------------------------

def complex_log_gamma(z) -> complex:
    """Principal branch of log Gamma(z), continuous off the negative real axis."""
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise PoleError(f"Gamma has a pole at {z.real:g}")
    return complex(loggamma(z))


def _em_sum(s: complex, a: float, M: int) -> tuple[complex, complex]:
    """(head, correction) of the Euler-Maclaurin formula for zeta(s, a) without
    the (M+a)^{1-s}/(s-1) term."""
    n = np.arange(M, dtype=np.float64) + a
    head = complex(np.sum(np.exp(-s * np.log(n))))
    x = M + a
    lx = math.log(x)
    corr = 0.5 * cmath.exp(-s * lx)
    rising = s  # s (s+1) ... (s+2j-2)
    fact = 2.0  # (2j)!
    for j in range(1, _EM_TERMS + 1):
        corr += _B2J[j - 1] / fact * rising * cmath.exp(-(s + 2 * j - 1) * lx)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
    return head, corr


def _em_cutoff(s: complex) -> int:
    return int(abs(s)) + 40


def hurwitz_zeta(s, a: float) -> complex:
    """zeta(s, a) = sum_{n>=0} (n+a)^{-s} for a in (0, 1], by Euler-Maclaurin."""
    s = complex(s)
    if not 0 < a <= 1:
        raise DomainError(f"a must lie in (0, 1], got {a}")
    if s == 1:
        raise PoleError("zeta(s, a) has a pole at s = 1")
    M = _em_cutoff(s)
    head, corr = _em_sum(s, a, M)
    return head + corr + cmath.exp((1 - s) * math.log(M + a)) / (s - 1)


def _hurwitz_regular(s: complex, a: float) -> complex:
    """zeta(s, a) - 1/(s-1), analytic at s = 1."""
    M = _em_cutoff(s)
    head, corr = _em_sum(s, a, M)
    lx = math.log(M + a)
    x = (1 - s) * lx
    if abs(x) < 1e-3:
        # expm1(x)/x by its series
        ratio = 1 + x / 2 + x * x / 6 + x**3 / 24 + x**4 / 120
    else:
        ratio = (cmath.exp(x) - 1) / x
    return head + corr - lx * ratio


def dirichlet_l_reference(s, chi: DirichletCharacter) -> complex:
    """L(s, chi) = k^{-s} sum_a chi(a) zeta(s, a/k) for non-principal chi, sigma > 0."""
    s = complex(s)
    if chi.principal:
        raise DomainError("reference values are only provided for non-principal characters")
    if s.real <= 0:
        raise DomainError(f"need Re(s) > 0, got {s.real}")
    k = chi.modulus
    # sum chi(a) = 0, so the 1/(s-1) parts cancel and s = 1 is regular
    total = sum(chi(a) * _hurwitz_regular(s, a / k) for a in range(1, k + 1) if chi(a) != 0)
    return cmath.exp(-s * math.log(k)) * total


# -- Euler products --------------------------------------------------------------

@dataclass(frozen=True)
class EulerProductEvaluation:
    """P_N with its decomposition log P_N = X_N + R_N.

    ``log_sum`` is the per-factor principal-branch sum of -log(local factor);
    ``remainder_terms`` is R_N truncated at ``m_max`` with the geometric tail
    bound ``tail_bound``.
    """

    point: ComplexPoint
    N: int
    partial_product: complex
    prime_series: complex
    remainder_terms: complex
    log_sum: complex
    m_max: int
    tail_bound: float
    reference: complex | None = None

    @property
    def abs_error(self) -> float | None:
        if self.reference is None:
            return None
        return abs(self.partial_product - self.reference)

    @property
    def identity_residual(self) -> float:
        return abs(self.log_sum - (self.prime_series + self.remainder_terms))


def _certified_m_max(rho: float) -> tuple[int, float]:
    """Smallest m >= M_MAX_FLOOR whose tail sum_{j>m} rho^j/j is below R_TAIL_TOL."""
    if rho >= 1:
        raise DomainError("the prime series diverges: |local root| >= 1")
    m = M_MAX_FLOOR
    bound = rho ** (m + 1) / ((m + 1) * (1 - rho))
    while bound > R_TAIL_TOL:
        m += 1
        bound = rho ** (m + 1) / ((m + 1) * (1 - rho))
    return m, bound


def _power_tail(z: np.ndarray, m_max: int, coeff=None) -> complex:
    """sum over entries of sum_{m=2}^{m_max} w_m z^m / m, where w_m = 1 by default.

    ``coeff(m, state)`` supplies the per-entry weights for the cusp case.
    Entries whose powers fall below 1e-20 in size are dropped early.
    """
    total = 0j
    zm = z.copy()
    active = np.arange(len(z))
    absz = np.abs(z)
    for m in range(2, m_max + 1):
        zm = zm * z[active]
        w = 1.0 if coeff is None else coeff(m, active)
        total += complex(np.sum(w * zm)) / m
        keep = absz[active] ** m > 1e-20
        if not keep.all():
            active, zm = active[keep], zm[keep]
            if coeff is not None:
                coeff(None, keep)
            if len(active) == 0:
                break
    return total


def dirichlet_euler_product(s, chi: DirichletCharacter, N: int, table: PrimeTable,
                            reference: bool = False) -> EulerProductEvaluation:
    """P_N(s) = prod_{n<=N} (1 - chi(p_n) p_n^{-s})^{-1} over the first N primes.

    Primes dividing the modulus count towards N and contribute a factor 1.
    """
    point = ComplexPoint.of(s)
    s = point.s
    if point.sigma <= 0.5:
        raise DomainError(f"need Re(s) > 1/2, got {point.sigma}")
    if N == 0:
        ref = dirichlet_l_reference(s, chi) if reference else None
        return EulerProductEvaluation(point, 0, 1 + 0j, 0j, 0j, 0j, 0, 0.0, ref)
    p = table.head(N)
    z = chi.values(p) * np.exp(-s * table.log_primes[:N])
    f = 1 - z
    bad = np.flatnonzero(f == 0)
    if len(bad):
        raise SingularFactorError(f"Euler factor vanishes at p = {int(p[bad[0]])}",
                                  int(p[bad[0]]))
    m_max, tail = _certified_m_max(float(np.max(np.abs(z))))
    ref = dirichlet_l_reference(s, chi) if reference else None
    return EulerProductEvaluation(
        point, N,
        partial_product=complex(1 / np.prod(f)),
        prime_series=complex(np.sum(z)),
        remainder_terms=_power_tail(z, m_max),
        log_sum=complex(-np.sum(np.log(f))),
        m_max=m_max,
        tail_bound=tail * N,
        reference=ref,
    )


class _HeckeTraces:
    """Running s_m = a s_{m-1} - s_{m-2} (s_0 = 2, s_1 = a) over an active subset."""

    def __init__(self, a: np.ndarray):
        self.a, self.prev, self.cur = a, np.full(len(a), 2.0), a.copy()

    def __call__(self, m, sel):
        if m is None:
            self.a, self.prev, self.cur = self.a[sel], self.prev[sel], self.cur[sel]
            return None
        self.prev, self.cur = self.cur, self.a * self.cur - self.prev
        return self.cur


def cusp_euler_product(s, cf: CuspFormCoefficients, N: int, table: PrimeTable,
                       reference: bool = False) -> EulerProductEvaluation:
    """P_N(s) = prod_{n<=N} (1 - c(p_n) p_n^{-s} + p_n^{k-1-2s})^{-1}.

    With x = p^{(k-1)/2 - s} and a = c(p)/p^{(k-1)/2}, minus the log of a local
    factor is sum_m s_m x^m / m, where s_m are the Hecke traces
    (s_m = 2 cos(m alpha_p) for a cusp form). X_N is the m = 1 part,
    sum c(p) p^{-s}.
    """
    point = ComplexPoint.of(s)
    s = point.s
    k = cf.weight
    if N == 0:
        ref = cusp_l_reference(s, cf) if reference else None
        return EulerProductEvaluation(point, 0, 1 + 0j, 0j, 0j, 0j, 0, 0.0, ref)
    p = table.head(N)
    c = np.array([float(v) for v in cf.at_primes(p)])
    lp = table.log_primes[:N]
    half = (k - 1) / 2
    x = np.exp((half - s) * lp)
    a = c * np.exp(-half * lp)
    f = 1 - a * x + x * x
    bad = np.flatnonzero(f == 0)
    if len(bad):
        raise SingularFactorError(f"Euler factor vanishes at p = {int(p[bad[0]])}",
                                  int(p[bad[0]]))
    log_sum = complex(-np.sum(np.log(f)))
    prime_series = complex(np.sum(a * x))
    rho = float(np.max(np.abs(x)))
    if rho < 1 and np.all(np.abs(a) <= 2 + 1e-12):
        m_max, tail = _certified_m_max(rho)
        remainder = _power_tail(x, m_max, _HeckeTraces(a))
        tail_bound = 2 * tail * N
    else:
        # outside sigma > (k-1)/2, or no Deligne bound: no convergent split
        m_max, remainder, tail_bound = 0, complex("nan"), math.inf
    ref = cusp_l_reference(s, cf) if reference else None
    return EulerProductEvaluation(
        point, N,
        partial_product=complex(1 / np.prod(f)),
        prime_series=prime_series,
        remainder_terms=remainder,
        log_sum=log_sum,
        m_max=m_max,
        tail_bound=tail_bound,
        reference=ref,
    )


def absolute_tail_bound(sigma: float, N: int, table: PrimeTable) -> float:
    """Upper bound T on |log L - log P_N| for a Dirichlet L-function, sigma > 1.

    Primes in the table beyond p_N are summed exactly; the rest use
    sum_{p > y} p^{-sigma} <= 2 y^{1-sigma} / ((sigma - 1) log y).
    """
    if sigma <= 1:
        raise DomainError("absolute tail bound needs sigma > 1")
    r = np.exp(-sigma * table.log_primes[N:])
    y = float(table.limit)
    far = 2 * y ** (1 - sigma) / ((sigma - 1) * math.log(y)) * (1 + 2**-sigma)
    return float(np.sum(-np.log1p(-r))) + far


# -- reference L-values for cusp forms -------------------------------------------

def _afe_terms(A: float, dps: int) -> int:
    return int((dps + 10) / (2.7 * min(A, 1 / A))) + 5


def completed_cusp_l(s, cf: CuspFormCoefficients, A: float = 1.0, dps: int | None = None):
    """Lambda(s) = (2 pi)^{-s} Gamma(s) L(s, f) via the Mellin integral split at y = A.

    Lambda(s) = sum_n c(n) [ (2 pi n)^{-s} Gamma(s, 2 pi n A)
                             + i^k (2 pi n)^{s-k} Gamma(k-s, 2 pi n / A) ].
    Returns an mpmath complex at the working precision.
    """
    s = complex(s)
    k = cf.weight
    if dps is None:
        dps = 25 + int(0.7 * abs(s.imag))
    n_max = _afe_terms(A, dps)
    if n_max > cf.limit:
        raise InsufficientCoefficientsError(
            f"approximate functional equation needs c(n) for n <= {n_max}", required=n_max)
    eps = (-1) ** (k // 2)
    with mpmath.workdps(dps):
        sm = mpmath.mpc(s.real, s.imag)
        A = mpmath.mpf(A)
        total = mpmath.mpc(0)
        for n in range(1, n_max + 1):
            c = cf.coeffs[n]
            if c == 0:
                continue
            x = 2 * mpmath.pi * n
            total += c * (x**-sm * mpmath.gammainc(sm, x * A)
                          + eps * x ** (sm - k) * mpmath.gammainc(k - sm, x / A))
        return +total


def cusp_l_reference(s, cf: CuspFormCoefficients, A: float = 1.0) -> complex:
    """L(s, f) from the completed function: L = Lambda (2 pi)^s / Gamma(s)."""
    s = complex(s)
    if cf.kind != "cusp":
        raise DomainError("the approximate functional equation needs a cusp form")
    dps = 25 + int(0.7 * abs(s.imag))
    lam = completed_cusp_l(s, cf, A, dps)
    with mpmath.workdps(dps):
        sm = mpmath.mpc(s.real, s.imag)
        return complex(lam * (2 * mpmath.pi) ** sm / mpmath.gamma(sm))


def functional_equation_residual(s, cf: CuspFormCoefficients, A: float = 1.2) -> float:
    """|Lambda(s) - (-1)^{k/2} Lambda(k - s)| / |Lambda(s)|, both sides with split A."""
    s = complex(s)
    k = cf.weight
    dps = 25 + int(0.7 * abs(s.imag))
    lhs = completed_cusp_l(s, cf, A, dps)
    rhs = completed_cusp_l(k - s, cf, A, dps)
    with mpmath.workdps(dps):
        return float(abs(lhs - (-1) ** (k // 2) * rhs) / abs(lhs))


# -- checks ---------------------------------------------------------------------------

@dataclass(frozen=True)
class G4Check:
    s: complex
    M: int
    lhs: complex  # sum_{n<=M} sigma_3(n) n^{-s}
    tail: complex  # estimate of the n > M remainder
    rhs: complex  # zeta(s) zeta(s-3)

    @property
    def abs_diff(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def corrected_diff(self) -> float:
        return abs(self.lhs + self.tail - self.rhs)


def g4_identity_check(s, M: int = 10**6, sigma3: np.ndarray | None = None) -> G4Check:
    """Compare the truncated G4 L-series against zeta(s) zeta(s-3), sigma > 4."""
    s = complex(s)
    if s.real <= 4:
        raise DomainError(f"sum sigma_3(n) n^-s diverges for Re(s) <= 4, got {s.real}")
    if sigma3 is None or len(sigma3) <= M:
        sigma3 = divisor_sigma_table(M, 3)
    n = np.arange(1, M + 1, dtype=np.float64)
    lhs = complex(np.sum(sigma3[1 : M + 1].astype(np.float64) * np.exp(-s * np.log(n))))
    z4 = math.pi**4 / 90
    tail = z4 * (M ** (4 - s) / (s - 4) - M ** (3 - s) / 2)
    rhs = hurwitz_zeta(s, 1.0) * hurwitz_zeta(s - 3, 1.0)
    return G4Check(s, M, lhs, tail, rhs)


@dataclass(frozen=True)
class LogDecomposition:
    evaluation: EulerProductEvaluation
    residual: float  # |log_sum - (X_N + R_N)|
    remainder: float  # |R_N|
    remainder_bound: float  # sum_p sum_{m>=2} |root|^m / m, times the degree

    @property
    def holds(self) -> bool:
        return self.residual <= 1e-10


def log_decomposition_check(s, source, N: int, table: PrimeTable) -> LogDecomposition:
    """Check log P_N = X_N + R_N for a character or a cusp-form coefficient table."""
    s = complex(s)
    lp = table.log_primes[:N]
    if isinstance(source, DirichletCharacter):
        ev = dirichlet_euler_product(s, source, N, table)
        r = np.exp(-s.real * lp)
        bound = float(np.sum(-np.log1p(-r) - r))
    else:
        k = source.weight
        if s.real <= (k - 1) / 2:
            raise DomainError(f"the log split needs Re(s) > {(k - 1) / 2}")
        ev = cusp_euler_product(s, source, N, table)
        r = np.exp(((k - 1) / 2 - s.real) * lp)
        bound = float(2 * np.sum(-np.log1p(-r) - r))
    return LogDecomposition(ev, ev.identity_residual, abs(ev.remainder_terms), bound)


def con3_bound(sigma: float) -> float:
    """Closed form 2/(sigma - 1/2)^3 of the integral of log^2 x * x^{-sigma-1/2} on [1, inf)."""
    if sigma <= 0.5:
        raise DomainError("needs sigma > 1/2")
    return 2 / (sigma - 0.5) ** 3


def con3_sum(sigma: float, n_max: int) -> float:
    """sum_{n<=n_max} log^2 n * n^{-sigma-1/2}."""
    ln = np.log(np.arange(1, n_max + 1, dtype=np.float64))
    return float(np.sum(ln**2 * np.exp(-(sigma + 0.5) * ln)))
