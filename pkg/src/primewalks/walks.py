"""Prime-phase walks C_N, their distribution statistics, the iid ensemble
model, and the principal-character walk B_N(t)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.special import ndtr

from primewalks.characters import ZERO, DirichletCharacter, factorize, phase_order
from primewalks.errors import DomainError, OutOfRangeError
from primewalks.primes import PrimeTable, iter_prime_segments

# |B_n| <= CUTOFF_THRESHOLD * sqrt(n), mirroring the K = 5 tail discussion
CUTOFF_THRESHOLD = 5.0

# trials per independent RNG block; fixed so results never depend on workers
ENSEMBLE_BLOCK = 256


@dataclass(frozen=True)
class WalkSeries:
    """Partial sums C_1..C_N (``values[n-1] = C_n``)."""

    values: np.ndarray
    kind: str  # "character" | "sign" | "principal"
    t: float | None = None

    @property
    def N(self) -> int:
        return len(self.values)

    @property
    def steps(self) -> np.ndarray:
        return np.diff(self.values, prepend=0.0)

    def scaled_max(self) -> float:
        """max_n |C_n| / sqrt(n)."""
        if self.N == 0:
            return 0.0
        n = np.arange(1, self.N + 1)
        return float(np.max(np.abs(self.values) / np.sqrt(n)))


def character_walk(chi: DirichletCharacter, N: int, table: PrimeTable) -> WalkSeries:
    """C_N = sum of cos(arg chi(p)) over the first N primes not dividing the modulus.

    Primes dividing the modulus have chi(p) = 0 and are excluded from the
    count, so every step is a genuine cosine.
    """
    if chi.principal:
        raise DomainError("principal character: use principal_walk")
    if N == 0:
        return WalkSeries(np.zeros(0), "character")
    p = _coprime_primes(table, chi.modulus, N)
    e = chi.exponent_array[p % chi.modulus]
    steps = np.cos(2 * np.pi * e / chi.order)
    kind = "sign" if chi.is_real else "character"
    return WalkSeries(np.cumsum(steps), kind)


def _coprime_primes(table: PrimeTable, k: int, N: int) -> np.ndarray:
    p = table.primes[: N + len(factorize(k))]
    p = p[np.gcd(p, k) == 1][:N]
    if len(p) < N:
        raise OutOfRangeError(f"table holds only {len(p)} primes coprime to {k}, need {N}")
    return p


@dataclass(frozen=True)
class PhaseHistogram:
    """Counts of primes p <= x by phase of chi(p), in first-occurrence order."""

    turns: tuple[Fraction, ...]
    counts: np.ndarray
    prime_count: int  # pi(x), including primes dividing the modulus
    x: int

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.prime_count

    @property
    def phases(self) -> np.ndarray:
        return np.array([2 * math.pi * float(f) for f in self.turns])


def _residue_counts(k: int, x: int, table: PrimeTable | None, workers: int) -> tuple[np.ndarray, int]:
    if table is not None and table.limit >= x:
        p = table.primes[: table.pi(x)]
        return np.bincount(p % k, minlength=k), len(p)
    counts = np.zeros(k, dtype=np.int64)
    total = 0
    for seg in iter_prime_segments(int(x), workers=workers):
        counts += np.bincount(seg % k, minlength=k)
        total += len(seg)
    return counts, total


def phase_histogram(
    chi: DirichletCharacter, x: float, table: PrimeTable | None = None, workers: int = 1
) -> PhaseHistogram:
    """Empirical P(theta_p = phi_i) over primes p <= x.

    Uses ``table`` when it reaches x; otherwise streams a segmented sieve,
    so x = 10**9 runs in bounded memory.
    """
    x = int(x)
    k = chi.modulus
    res_counts, total = _residue_counts(k, x, table, workers)
    turns = phase_order(chi)
    index = {f: i for i, f in enumerate(turns)}
    counts = np.zeros(len(turns), dtype=np.int64)
    for a in range(k):
        if chi.exponent_table[a] != ZERO:
            counts[index[chi.phase(a)]] += res_counts[a]
    return PhaseHistogram(tuple(turns), counts, total, x)


@dataclass(frozen=True)
class JointMatrix:
    turns: tuple[Fraction, ...]
    matrix: np.ndarray
    x: int

    def upper_triangle(self) -> list[tuple[int, int, float]]:
        r = len(self.turns)
        return [(i, j, float(self.matrix[i, j])) for i in range(r) for j in range(i, r)]


def joint_phase_matrix(
    chi: DirichletCharacter, x: float, table: PrimeTable | None = None, workers: int = 1
) -> JointMatrix:
    """P(theta_p = phi_i, theta_q = phi_j) over ordered prime pairs p, q <= x.

    The pair count factorises into single counts, so the matrix is the outer
    product of the marginal frequencies.
    """
    h = phase_histogram(chi, x, table, workers)
    f = h.frequencies
    return JointMatrix(h.turns, np.outer(f, f), h.x)


def growth_exponent(series: WalkSeries, window: int | None = None, samples: int = 400) -> float:
    """Least-squares slope of log max_{m<=n} |C_m| against log n over the tail.

    The window is the last ``window`` indices (default: n from sqrt(N) to N).
    Points are sampled geometrically so every decade carries equal weight.
    """
    N = series.N
    if window is None:
        window = N - math.isqrt(N) + 1
    if window < 2 or window > N:
        raise ValueError(f"window must lie in [2, {N}], got {window}")
    env = np.maximum.accumulate(np.abs(series.values))
    lo = N - window + 1
    n = np.unique(np.geomspace(lo, N, samples).round().astype(np.int64))
    y = env[n - 1]
    if np.any(y <= 0):
        if np.all(env == 0):
            raise DomainError("all-zero series has no growth exponent")
        keep = y > 0
        n, y = n[keep], y[keep]
        if len(n) < 2:
            raise DomainError("too few nonzero points in the window")
    slope, _ = np.polyfit(np.log(n), np.log(y), 1)
    return float(slope)


# -- iid ensemble ------------------------------------------------------------

@dataclass(frozen=True)
class EnsembleStats:
    N: int
    trials: int
    seed: int
    phases: np.ndarray
    sigma_x: float
    mean: float
    second_moment_over_N: float
    variance_over_N: float
    K: tuple[float, ...]
    tail_fraction: tuple[float, ...]  # P(|C|/(sigma sqrt N) > K), empirical
    normal_tail: tuple[float, ...]  # 2(1 - Phi(K))
    tail_stderr: tuple[float, ...]
    finals: np.ndarray = field(repr=False)

    def below_fraction(self, K: float) -> float:
        """Empirical P(C / (sigma sqrt N) < K), the one-sided CLT statistic."""
        z = self.finals / (self.sigma_x * math.sqrt(self.N))
        return float(np.mean(z < K))


def model_sigma(phases: np.ndarray) -> float:
    """sigma_X with X = cos(theta), theta uniform over the phases."""
    r = len(phases)
    return math.sqrt(0.5 + np.sum(np.cos(2 * np.asarray(phases))) / (2 * r))


def equally_spaced_phases(r: int) -> np.ndarray:
    return 2 * np.pi * np.arange(r) / r


def ensemble_walk(
    N: int,
    trials: int,
    seed: int,
    r: int | None = None,
    phases: Sequence[float] | None = None,
    complex_values: bool | None = None,
    K: Sequence[float] = (1.0, 2.0, 3.0, 5.0),
) -> EnsembleStats:
    """Monte Carlo of C~_N = sum_n cos(theta_n) with iid uniform phases.

    Trial blocks of ``ENSEMBLE_BLOCK`` draw from Philox generators keyed by
    (seed, block index), so the output depends only on (seed, trials, N).
    """
    if (r is None) == (phases is None):
        raise ValueError("give exactly one of r or phases")
    if phases is None:
        if complex_values and r < 2:
            raise DomainError("a complex character needs at least two phases")
        if r < 1:
            raise ValueError("r must be >= 1")
        ph = equally_spaced_phases(r)
    else:
        ph = np.asarray(phases, dtype=np.float64)
        if complex_values and len(ph) < 2:
            raise DomainError("a complex character needs at least two phases")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    steps = np.cos(ph)
    finals = np.empty(trials, dtype=np.float64)
    for b, start in enumerate(range(0, trials, ENSEMBLE_BLOCK)):
        m = min(ENSEMBLE_BLOCK, trials - start)
        rng = np.random.Generator(np.random.Philox(key=[seed & 0xFFFFFFFFFFFFFFFF, b]))
        acc = np.zeros(m)
        # draw in row slabs to bound memory at ~8 MB
        slab = max(1, (1 << 20) // m)
        for lo in range(0, N, slab):
            idx = rng.integers(0, len(ph), size=(m, min(slab, N - lo)))
            acc += steps[idx].sum(axis=1)
        finals[start : start + m] = acc
    sigma = model_sigma(ph)
    z = np.abs(finals) / (sigma * math.sqrt(N))
    tails = tuple(float(np.mean(z > k)) for k in K)
    normal = tuple(float(2 * (1 - ndtr(k))) for k in K)
    stderr = tuple(math.sqrt(q * (1 - q) / trials) for q in normal)
    return EnsembleStats(
        N=N,
        trials=trials,
        seed=seed,
        phases=ph,
        sigma_x=sigma,
        mean=float(finals.mean()),
        second_moment_over_N=float(np.mean(finals**2) / N),
        variance_over_N=float(finals.var(ddof=1) / N) if trials > 1 else float("nan"),
        K=tuple(float(k) for k in K),
        tail_fraction=tails,
        normal_tail=normal,
        tail_stderr=stderr,
        finals=finals,
    )


def normal_below(K: float) -> float:
    """P(Z < K) for a standard normal Z."""
    return float(ndtr(K))


# -- principal character diagnostics -----------------------------------------

def principal_walk(t: float, N: int, table: PrimeTable) -> WalkSeries:
    """B_N(t) = sum_{n<=N} cos(t log p_n); B_N(0) = N exactly."""
    table.head(N)
    lp = table.log_primes[:N]
    steps = np.cos(t * lp) if t != 0 else np.ones(N)
    return WalkSeries(np.cumsum(steps), "principal", float(t))


def principal_walk_asymptotic(t: float, N: int, table: PrimeTable) -> float:
    """Smooth estimate p_N/log p_N * t/(1+t^2) * sin(t log p_N)."""
    if t == 0:
        raise DomainError("the smooth estimate is meaningless at t = 0")
    return bn_envelope(t, N, table) * math.sin(t * math.log(table.nth(N)))


def bn_envelope(t: float, N: int, table: PrimeTable) -> float:
    """Amplitude p_N/log p_N * t/(1+t^2) of the smooth estimate."""
    if t == 0:
        raise DomainError("the smooth estimate is meaningless at t = 0")
    p = table.nth(N)
    return p / math.log(p) * abs(t) / (1 + t * t)


@dataclass(frozen=True)
class CutoffScan:
    t_values: tuple[float, ...]
    N_c: tuple[int, ...]
    censored: tuple[bool, ...]
    threshold: float
    slope: float | None
    intercept: float | None


def empirical_cutoff(t: float, N_max: int, table: PrimeTable,
                     threshold: float = CUTOFF_THRESHOLD) -> tuple[int, bool]:
    """Largest N <= N_max with max_{n<=N} |B_n|/sqrt(n) <= threshold."""
    B = principal_walk(t, N_max, table).values
    ratio = np.abs(B) / np.sqrt(np.arange(1, N_max + 1))
    over = np.flatnonzero(ratio > threshold)
    if len(over) == 0:
        return N_max, True
    return int(over[0]), False


def cutoff_scan(t_values: Sequence[float], N_max: int, table: PrimeTable,
                threshold: float = CUTOFF_THRESHOLD) -> CutoffScan:
    """Empirical N_c per t, and the slope of log N_c against log t."""
    Ns, cens = [], []
    for t in t_values:
        n, c = empirical_cutoff(t, N_max, table, threshold)
        Ns.append(n)
        cens.append(c)
    use = [(t, n) for t, n, c in zip(t_values, Ns, cens) if t > 0 and not c and n > 0]
    slope = intercept = None
    if len(use) >= 2:
        lt, ln = np.log([u[0] for u in use]), np.log([u[1] for u in use])
        slope, intercept = (float(v) for v in np.polyfit(lt, ln, 1))
    return CutoffScan(tuple(float(t) for t in t_values), tuple(Ns), tuple(cens),
                      threshold, slope, intercept)


def gonek_error_estimate(N: float, sigma: float, t: float) -> float:
    """N^(1/2-sigma) (log t + log t/log N) + N/(t^2 log^2 N), evaluated literally."""
    if sigma <= 0.5:
        raise DomainError("the estimate needs sigma > 1/2")
    if N < 3 or t <= 1:
        raise ValueError("need N >= 3 and t > 1")
    lt, lN = math.log(t), math.log(N)
    return N ** (0.5 - sigma) * (lt + lt / lN) + N / (t * t * lN * lN)
