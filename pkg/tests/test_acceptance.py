"""End-to-end reproduction checks, one printed pass/fail line per criterion."""

import math

import numpy as np
import pytest

from primewalks import character_from_images, sieve
from primewalks import lfunctions, walks, zeros
from primewalks.cli import load_golden, within_printed
from primewalks.cuspforms import (
    deligne_ratio_scan,
    delta_coefficients,
    delta_coefficients_bruteforce,
    eisenstein_g4_coefficients,
    hecke_scan,
)
from primewalks.primes import gap_inequality_scan

GOLD = load_golden()


def test_equidistribution(chi7, acceptance):
    errs = {}
    for x, tol in ((10**7, 2e-3), (10**8, 5e-4)):
        f = walks.phase_histogram(chi7, x).frequencies
        errs[x] = (float(np.max(np.abs(f - 1 / 6))), tol)
    ok = all(e <= tol for e, tol in errs.values())
    acceptance("1", ok, "; ".join(f"x={x:.0e} max|f-1/6|={e:.2e} (tol {t:.0e})"
                                  for x, (e, t) in errs.items()))
    assert ok


@pytest.mark.slow
def test_equidistribution_full_scale(chi7, acceptance):
    g = GOLD["fig1a"]
    h = walks.phase_histogram(chi7, g["x"])
    got = [round(float(v), 10) for v in h.frequencies]
    ok = got == g["frequencies"] and round(float(h.frequencies.sum()), 10) == g["sum"]
    acceptance("1 full", ok, f"x=1e9 frequencies {got}")
    assert ok


def test_joint_matrix(chi7, small_table, acceptance):
    g = GOLD["joint_matrix"]
    m = walks.joint_phase_matrix(chi7, g["x"], small_table).matrix / g["scale"]
    printed = [v for row in g["upper_triangle"] for v in row]
    got = [m[i, j] for i in range(6) for j in range(i, 6)]
    worst = max(abs(a - b) for a, b in zip(got, printed))
    ok = len(printed) == 21 and worst <= 1e-3
    acceptance("2", ok, f"21 entries, max deviation {worst:.2e} on the 1e-2 scale")
    assert ok


def test_walk_envelope(chi7, small_table, acceptance):
    w = walks.character_walk(chi7, 10**5, small_table)
    smax, beta = w.scaled_max(), walks.growth_exponent(w)
    ok = smax < 2.0 and 0.3 <= beta <= 0.7
    acceptance("3", ok, f"max|C_N|/sqrt(N)={smax:.4f}, growth exponent {beta:.3f}")
    assert ok


def test_clt_ensemble(acceptance):
    e = walks.ensemble_walk(10**4, 10**4, seed=12345, r=6, K=(3.0,))
    z = abs(e.tail_fraction[0] - e.normal_tail[0]) / e.tail_stderr[0]
    ok = 0.45 <= e.second_moment_over_N <= 0.55 and z <= 3
    acceptance("4", ok, f"E[C^2]/N={e.second_moment_over_N:.4f}, "
                        f"tail beyond 3 sigma {e.tail_fraction[0]:.4f} vs {e.normal_tail[0]:.4f} "
                        f"({z:.2f} s.e.)")
    assert ok


def test_gap_inequality(small_table, acceptance):
    bad = gap_inequality_scan(10**5, small_table, N_min=5)
    ok = len(bad) == 0
    acceptance("5", ok, f"N in [5, 1e5]: {len(bad)} failures")
    assert ok


def test_tau_correctness(tau_table, acceptance):
    oracle = delta_coefficients_bruteforce(30)
    head_ok = [tau_table[n] for n in range(1, 31)] == oracle[1:31]
    table = sieve(10**5)
    cf = delta_coefficients(10**5)
    hecke_bad = hecke_scan(cf, table)
    d = deligne_ratio_scan(cf, table)
    ok = head_ok and not hecke_bad and d.within_bound
    acceptance("6", ok, f"oracle n<=30 {'exact' if head_ok else 'MISMATCH'}, "
                        f"Hecke failures {len(hecke_bad)}, max Deligne ratio "
                        f"{d.max_ratio:.4f} at p={d.argmax_prime}")
    assert ok


def _fig2_rows(cf, table, Ns):
    g = GOLD["fig2"]
    out = []
    for N in Ns:
        i = g["N"].index(N)
        a = abs(lfunctions.cusp_euler_product(complex(g["sigma"], 100), cf, N, table).partial_product)
        b = abs(lfunctions.cusp_euler_product(complex(g["sigma"], 0), cf, N, table).partial_product)
        out.append((N, round(a, 4) == g["abs_PN_t100"][i] and round(b, 4) == g["abs_PN_t0"][i],
                    a, b))
    return out


def test_fig2(tau_table, small_table, acceptance):
    g = GOLD["fig2"]
    rows = _fig2_rows(tau_table, small_table, [10, 100, 1000, 10000])
    L100 = abs(lfunctions.cusp_l_reference(complex(g["sigma"], 100), tau_table))
    L0 = abs(lfunctions.cusp_l_reference(complex(g["sigma"], 0), tau_table))
    L_ok = round(L100, 4) == g["abs_L_t100"] and round(L0, 4) == g["abs_L_t0"]
    ok = L_ok and all(r[1] for r in rows)
    acceptance("7", ok, ", ".join(f"N={N}: {a:.4f}/{b:.4f}" for N, _, a, b in rows)
               + f"; |L|={L100:.4f}/{L0:.4f}")
    assert ok


KNOWN_FIG2_MISMATCH = 20000


@pytest.fixture(scope="module")
def fig2_large_rows(small_table):
    cf = delta_coefficients(int(small_table.nth(40000)) + 1)
    return _fig2_rows(cf, small_table, [20000, 30000, 40000])


@pytest.mark.slow
def test_fig2_large_N(fig2_large_rows, acceptance):
    failing = [N for N, ok, _, _ in fig2_large_rows if not ok]
    acceptance("7 large N", not failing,
               ", ".join(f"N={N}: {a:.6f}/{b:.6f}" for N, _, a, b in fig2_large_rows)
               + (f"; mismatched N={failing}" if failing else ""))
    assert [N for N in failing if N != KNOWN_FIG2_MISMATCH] == []


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="printed |P_N| at N=20000 is truncated, not rounded; "
                                       "see the decisions ledger")
def test_fig2_row_N20000(fig2_large_rows):
    assert next(ok for N, ok, _, _ in fig2_large_rows if N == KNOWN_FIG2_MISMATCH)


KNOWN_TABLE1_MISMATCH = 10


@pytest.fixture(scope="module")
def table1_rows(chi7, big_table):
    g = GOLD["table1"]
    eq_rows = []
    for N, t_printed, pct_printed in zip(g["N"], g["t1"], g["error_pct"]):
        eq_rows.append((N, zeros.solve_zero(g["n"], chi7, N, big_table).t_n, t_printed, pct_printed))
    return eq_rows


def _row_ok(t, t_printed, pct_printed, t_ref):
    return round(t, 5) == t_printed and within_printed(abs(t - t_ref) / t_ref * 100, pct_printed)


def test_table1(chi7, table1_rows, acceptance):
    t_ref = zeros.reference_zero(chi7, 1)
    ref_ok = abs(t_ref - GOLD["table1"]["t_ref"]) <= 1e-6
    failing = [N for N, t, tp, pp in table1_rows if not _row_ok(t, tp, pp, t_ref)]
    acceptance("8", ref_ok and not failing,
               f"t_ref={t_ref:.7f}; rows " + ", ".join(f"N={N}: {t:.5f}" for N, t, _, _ in table1_rows)
               + (f"; mismatched N={failing}" if failing else ""))
    assert ref_ok
    assert [N for N in failing if N != KNOWN_TABLE1_MISMATCH] == []


@pytest.mark.xfail(strict=True, reason="printed t_1 at N=10 is inconsistent with the other "
                                       "rows; see the decisions ledger")
def test_table1_row_N10(chi7, table1_rows):
    t_ref = zeros.reference_zero(chi7, 1)
    N, t, tp, pp = next(r for r in table1_rows if r[0] == KNOWN_TABLE1_MISMATCH)
    assert _row_ok(t, tp, pp, t_ref)


def test_g4_identity(acceptance):
    checks = [lfunctions.g4_identity_check(s, M=10**6) for s in (6, 5 + 3j)]
    d = deligne_ratio_scan(eisenstein_g4_coefficients(10**4))
    ok = all(c.abs_diff <= 1e-6 for c in checks) and d.max_ratio > 1
    acceptance("9", ok, ", ".join(f"s={c.s}: |diff|={c.abs_diff:.1e} "
                                  f"(tail-corrected {c.corrected_diff:.1e})" for c in checks)
               + f"; sigma_3 Deligne ratio {d.max_ratio:.3g}")
    assert ok


def test_principal_diagnostics(small_table, acceptance):
    b0 = walks.principal_walk(0, 1000, small_table).values[-1]
    table = sieve(60_000_000)
    scan = walks.cutoff_scan([50, 100, 200, 400], len(table), table)
    B = walks.principal_walk(100, 10**5, small_table).values
    run_max = float(np.max(np.abs(B)))
    env = walks.bn_envelope(100, 10**5, small_table)
    ratio = max(run_max / env, env / run_max)
    ok = (b0 == 1000 and not any(scan.censored) and scan.slope is not None
          and abs(scan.slope - 2) <= 0.5 and ratio <= 3)
    acceptance("10", ok, f"B_1000(0)={b0:g}, N_c={scan.N_c}, slope {scan.slope:.3f}, "
                         f"envelope ratio {ratio:.3f}")
    assert ok


def test_analytic_infrastructure(chi7, tau_table, small_table, acceptance):
    rng = np.random.default_rng(2024)
    pts = [complex(s, t) for s, t in zip(rng.uniform(5, 7, 20), rng.uniform(-100, 100, 20))]
    fe = max(lfunctions.functional_equation_residual(s, tau_table) for s in pts)
    logs = [lfunctions.log_decomposition_check(s, chi7, 1000, small_table).residual
            for s in (0.75 + 10j, 1.5, 2 - 30j)]
    logs += [lfunctions.log_decomposition_check(s, tau_table, 1000, small_table).residual
             for s in (6.25 + 100j, 7, 8 - 5j)]
    hz = [abs(lfunctions.hurwitz_zeta(2, 1) - math.pi**2 / 6),
          abs(lfunctions.hurwitz_zeta(4, 1) - math.pi**4 / 90),
          abs(lfunctions.hurwitz_zeta(2, 0.5) - math.pi**2 / 2),
          abs(lfunctions.hurwitz_zeta(0, 0.25) - 0.25),
          abs(lfunctions.hurwitz_zeta(-1, 1) + 1 / 12)]
    ok = fe < 1e-6 and max(logs) <= 1e-10 and max(hz) <= 1e-12
    acceptance("11", ok, f"FE residual {fe:.1e} at 20 points, log identity {max(logs):.1e}, "
                         f"Hurwitz {max(hz):.1e}")
    assert ok
