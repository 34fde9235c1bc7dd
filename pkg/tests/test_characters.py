import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from primewalks import characters as ch
from primewalks.errors import DomainError


def test_unit_groups():
    assert ch.unit_group(7) == [(3, 6)]
    assert sorted(o for _, o in ch.unit_group(8)) == [2, 2]
    assert ch.unit_group(1) == []
    assert ch.euler_phi(1) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=400))
def test_unit_group_generates(k):
    gens = ch.unit_group(k)
    assert math.prod(o for _, o in gens) == ch.euler_phi(k)
    for g, o in gens:
        assert pow(g, o, k) == 1 % k
        assert all(pow(g, d, k) != 1 for d in range(1, o) if o % d == 0)
    logs = ch._discrete_logs(k, gens)
    units = {a for a in range(k) if math.gcd(a, k) == 1} if k > 1 else {0}
    assert set(logs) == units


def test_enumeration_counts():
    assert len(ch.enumerate_characters(7)) == 6
    c4 = ch.enumerate_characters(4)
    assert [c.principal for c in c4] == [True, False]
    assert c4[1](3) == -1
    (c1,) = ch.enumerate_characters(1)
    assert c1.principal and c1(5) == 1


def test_canonical_sextic(chi7):
    assert chi7(3) == pytest.approx(cmath.exp(1j * math.pi / 3))
    assert chi7.order == 6 and chi7.parity == 1 and chi7.primitive
    assert [ch.format_turn(f) for f in ch.phase_order(chi7)] == \
        ["0", "2pi/3", "pi/3", "-2pi/3", "-pi/3", "pi"]
    assert ch.character_from_images(7, [0]).principal


def test_quartic_mod5():
    chi = ch.character_from_images(5, [1])
    assert chi(2) == pytest.approx(1j)
    assert chi(4) == pytest.approx(-1)
    assert chi.order == 4


def test_bad_images():
    with pytest.raises(ValueError):
        ch.character_from_images(7, [6])
    with pytest.raises(ValueError):
        ch.character_from_images(8, [1])


def test_orthogonality_sum(chi7):
    assert ch.orthogonality_sum(ch.principal_character(7)) == 6
    assert ch.orthogonality_sum(chi7) == 0
    assert ch.orthogonality_sum(ch.principal_character(1)) == 1


@pytest.mark.parametrize("k", [1, 3, 4, 7, 8, 9, 12, 15, 16, 21, 24, 35])
def test_character_table_orthogonality(k):
    chars = ch.enumerate_characters(k)
    assert len(chars) == ch.euler_phi(k)
    for i, a in enumerate(chars):
        for j, b in enumerate(chars):
            assert ch.inner_product(a, b) == (ch.euler_phi(k) if i == j else 0)


@pytest.mark.parametrize("k", [5, 7, 8, 12, 15, 16, 27, 40])
def test_multiplicativity_and_parity(k):
    rng = random.Random(k)
    for chi in ch.enumerate_characters(k):
        assert chi.exponent(1) == 0
        for _ in range(10_000 // 8):
            m, n = rng.randrange(k), rng.randrange(k)
            em, en, emn = chi.exponent(m), chi.exponent(n), chi.exponent(m * n)
            if ch.ZERO in (em, en):
                assert emn == ch.ZERO
            else:
                assert emn == (em + en) % chi.order
        assert (chi(k - 1) == -1) == (chi.parity == 1)
        for a in range(k):
            assert (chi(a) == 0) == (math.gcd(a, k) > 1)


def test_partial_sum_bound(chi7):
    c = ch.partial_sum_bound(chi7)
    assert c <= 2
    assert ch.partial_sum_bound(ch.enumerate_characters(4)[1]) == 1
    with pytest.raises(DomainError):
        ch.partial_sum_bound(ch.principal_character(7))


@pytest.mark.parametrize("k", [4, 5, 7, 9, 12])
def test_prefix_sums_bounded(k):
    for chi in ch.enumerate_characters(k)[1:]:
        c = ch.partial_sum_bound(chi)
        s = 0
        for n in range(1, 3 * k + 1):
            s += chi(n)
            assert abs(s) <= c + 1e-12
            if n % k == 0:
                assert abs(s) < 1e-12


def test_phase_sets(chi7):
    ps = ch.phase_set(chi7)
    assert ps.r == 6
    assert all(b - a == Fraction(1, 6) for a, b in zip(ps.turns, ps.turns[1:]))
    assert ch.phase_set(ch.enumerate_characters(4)[1]).turns == (0, Fraction(1, 2))
    assert ch.phase_set(ch.principal_character(7)).turns == (0,)


def test_conductor_and_conj():
    chi8 = ch.character_from_images(8, [1, 0])
    assert chi8.conductor == 4 and not chi8.primitive
    chi = ch.character_from_images(7, [1])
    assert chi.conj()(3) == pytest.approx(chi(3).conjugate())


def test_root_of_unity_sum_exact_zero():
    assert ch.root_of_unity_sum([1] * 12, 12) == 0
    assert ch.root_of_unity_sum([2, 0, 0], 3) == 2
