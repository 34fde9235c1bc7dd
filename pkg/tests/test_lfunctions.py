import cmath
import math
from functools import lru_cache

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from primewalks import character_from_images, enumerate_characters, sieve
from primewalks import lfunctions as lf
from primewalks.characters import principal_character
from primewalks.cuspforms import CuspFormCoefficients
from primewalks.errors import DomainError, InsufficientCoefficientsError, PoleError


def test_hurwitz_classical():
    assert abs(lf.hurwitz_zeta(2, 1) - math.pi**2 / 6) < 1e-12 * math.pi**2 / 6
    assert abs(lf.hurwitz_zeta(2, 0.5) - math.pi**2 / 2) < 1e-12 * math.pi**2 / 2
    assert abs(lf.hurwitz_zeta(4, 1) - math.pi**4 / 90) < 1e-12
    with pytest.raises(PoleError):
        lf.hurwitz_zeta(1, 0.5)
    with pytest.raises(DomainError):
        lf.hurwitz_zeta(2, 0)


@pytest.mark.parametrize("s,a", [(0.5 + 10j, 1 / 3), (0.0 + 3j, 0.9), (1.5 - 150j, 0.25),
                                 (0.2 + 200j, 1.0), (7 + 0j, 0.6)])
def test_hurwitz_against_mpmath(s, a):
    ref = complex(mpmath.zeta(s, a))
    assert abs(lf.hurwitz_zeta(s, a) - ref) <= 1e-12 * abs(ref) + 1e-14


def test_leibniz():
    chi4 = enumerate_characters(4)[1]
    assert abs(lf.dirichlet_l_reference(1, chi4) - math.pi / 4) < 1e-12


def test_near_first_zero(chi7):
    assert abs(lf.dirichlet_l_reference(0.5 + 5.198116j, chi7)) < 1e-4


def test_direct_sum_at_two(chi7):
    n = np.arange(1, 10**6 + 1)
    direct = complex(np.sum(chi7.values(n) / n.astype(float) ** 2))
    assert abs(lf.dirichlet_l_reference(2, chi7) - direct) < 1e-8


def test_reference_domain(chi7):
    with pytest.raises(DomainError):
        lf.dirichlet_l_reference(2, principal_character(7))
    with pytest.raises(DomainError):
        lf.dirichlet_l_reference(-0.5 + 1j, chi7)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=0.05, max_value=3), st.floats(min_value=-60, max_value=60),
       st.sampled_from([5, 7, 8, 9, 12]))
def test_conjugate_reflection(sigma, t, k):
    for chi in enumerate_characters(k)[1:]:
        a = lf.dirichlet_l_reference(complex(sigma, -t), chi.conj())
        b = lf.dirichlet_l_reference(complex(sigma, t), chi).conjugate()
        assert abs(a - b) <= 1e-10 * max(1, abs(b))


def test_euler_product_trend(chi7, big_table):
    errs = [lf.dirichlet_euler_product(0.75 + 2j, chi7, N, big_table, reference=True).abs_error
            for N in (100, 1000, 10_000)]
    assert errs[0] > errs[1] > errs[2]


def test_euler_absolute_regime(chi7, small_table):
    ev = lf.dirichlet_euler_product(2, chi7, 1000, small_table, reference=True)
    assert ev.abs_error < 1e-6
    empty = lf.dirichlet_euler_product(2, chi7, 0, small_table)
    assert empty.partial_product == 1 and empty.prime_series == 0


@pytest.mark.parametrize("sigma", [1.2, 1.5, 2.0, 3.0])
def test_absolute_tail_certificate(chi7, small_table, sigma):
    for N in (10, 100, 1000, 10_000):
        ev = lf.dirichlet_euler_product(sigma + 5j, chi7, N, small_table, reference=True)
        T = lf.absolute_tail_bound(sigma, N, small_table)
        assert ev.abs_error <= abs(ev.partial_product) * math.expm1(T)


def test_single_factor(chi7, small_table):
    s = 0.9 + 2j
    ev = lf.dirichlet_euler_product(s, chi7, 1, small_table)
    z = chi7(2) * 2**-s
    assert ev.log_sum == pytest.approx(-cmath.log(1 - z))
    assert ev.prime_series == pytest.approx(z)
    assert abs(ev.prime_series + ev.remainder_terms - ev.log_sum) < 1e-13


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.51, max_value=4), st.floats(min_value=-300, max_value=300),
       st.integers(min_value=1, max_value=20_000))
def test_log_identity_dirichlet(sigma, t, N):
    chi = character_from_images(7, [1])
    d = lf.log_decomposition_check(complex(sigma, t), chi, N, _table())
    assert d.residual <= 1e-10
    assert d.remainder <= d.remainder_bound + 1e-12


def test_log_identity_example(chi7, small_table):
    d = lf.log_decomposition_check(0.8 + 1j, chi7, 10**4, small_table)
    assert d.holds and d.remainder < d.remainder_bound


def test_euler_domain(chi7, small_table):
    with pytest.raises(DomainError):
        lf.dirichlet_euler_product(0.5 + 1j, chi7, 10, small_table)


def test_cusp_product_direct_sum(tau_table, small_table):
    ev = lf.cusp_euler_product(8, tau_table, 1000, small_table)
    n = np.arange(1, tau_table.limit + 1, dtype=float)
    direct = float(np.sum(tau_table.as_float()[1:] * n**-8))
    assert abs(ev.partial_product - direct) < 1e-4 * direct
    ref = lf.cusp_l_reference(8, tau_table)
    assert abs(ref - direct) < 1e-6 * direct


def test_cusp_log_identity(tau_table, small_table):
    for s in (6.25 + 100j, 6.25, 7 - 30j, 5.6 + 3j):
        d = lf.log_decomposition_check(s, tau_table, 5000, small_table)
        assert d.holds, s
        assert d.remainder <= d.remainder_bound + 1e-12
    with pytest.raises(DomainError):
        lf.log_decomposition_check(5.4, tau_table, 10, small_table)


def test_cusp_reference_needs_coefficients():
    short = CuspFormCoefficients(12, 10, tuple([0] + [1] * 10))
    with pytest.raises(InsufficientCoefficientsError) as info:
        lf.cusp_l_reference(6 + 50j, short)
    assert info.value.required > 10


def test_split_point_invariance(tau_table):
    a = lf.completed_cusp_l(6.3 + 20j, tau_table, A=1.0)
    b = lf.completed_cusp_l(6.3 + 20j, tau_table, A=1.3)
    assert abs(a - b) <= 1e-12 * abs(a)


def test_g4():
    g = lf.g4_identity_check(6)
    assert g.abs_diff < 1e-8
    assert abs(g.rhs - math.pi**6 / 945 * 1.2020569031595942) < 1e-12
    assert lf.g4_identity_check(10, M=1000).abs_diff < 1e-10
    with pytest.raises(DomainError):
        lf.g4_identity_check(4 + 1j)


def test_log_gamma():
    assert lf.complex_log_gamma(1) == 0
    assert lf.complex_log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)))
    ref = mpmath.loggamma(0.25 + 25j)
    assert abs(lf.complex_log_gamma(0.25 + 25j).imag - float(ref.imag)) < 1e-10 * abs(ref)
    for z in (3 - 400j, -2.5 + 0.1j, 700 + 700j):
        r = complex(mpmath.loggamma(z))
        assert abs(lf.complex_log_gamma(z) - r) <= 1e-12 * abs(r)
    with pytest.raises(PoleError):
        lf.complex_log_gamma(-3)
    # continuous up a vertical line
    t = np.linspace(0, 500, 5001)
    im = np.array([lf.complex_log_gamma(0.75 + 0.5j * x).imag for x in t])
    assert np.max(np.abs(np.diff(im))) < 0.5


def test_con3():
    assert lf.con3_bound(1.5) == 2
    assert lf.con3_sum(1.5, 10**5) < lf.con3_bound(1.5) + 1
    with pytest.raises(DomainError):
        lf.con3_bound(0.5)


@lru_cache(maxsize=1)
def _table():
    return sieve(300_000)
