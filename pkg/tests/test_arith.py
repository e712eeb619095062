import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expsum_kit.arith import (LogVector, TableRangeError, build_tables,
                              dirichlet_convolve, mangoldt_table, mobius_table,
                              ramanujan_sum, unit_table)


def test_table_examples(tables_small):
    t = tables_small
    assert t.mobius[6] == 1 and t.mobius[4] == 0 and t.mobius[7] == -1
    assert t.totient[9] == 6 and t.totient[10] == 4
    assert t.mangoldt_base[8] == 2 and t.mangoldt_base[6] == 0


def test_spf_is_prime_divisor(tables_small):
    t = tables_small
    primeset = set(int(p) for p in t.primes)
    for n in range(2, t.n_max + 1):
        p = int(t.spf[n])
        assert p in primeset and n % p == 0


def test_mobius_and_totient_divisor_identities(tables_small):
    t = tables_small
    for n in range(1, 2001):
        divs = t.divisors(n)
        assert sum(int(t.mobius[d]) for d in divs) == (1 if n == 1 else 0)
        assert sum(int(t.totient[d]) for d in divs) == n


def test_mangoldt_base_iff_prime_power(tables_small):
    t = tables_small
    for n in range(2, 2001):
        is_pp = len(t.factorize(n)) == 1
        assert (t.mangoldt_base[n] != 0) == is_pp
        if is_pp:
            assert t.mangoldt_base[n] == t.factorize(n)[0][0]


def test_allocation_cap():
    with pytest.raises(ValueError):
        build_tables(10**10)
    with pytest.raises(ValueError):
        build_tables(0)


def test_ramanujan_examples(tables_small):
    t = tables_small
    assert ramanujan_sum(1, 5, t) == 1
    assert ramanujan_sum(6, 6, t) == t.totient[6] == 2
    assert ramanujan_sum(4, 2, t) == -2


def test_ramanujan_against_brute_force(tables_small):
    t = tables_small
    for r in range(1, 61):
        for n in range(1, 61):
            direct = sum(cmath.exp(2j * cmath.pi * a * n / r)
                         for a in range(1, r + 1) if math.gcd(a, r) == 1)
            assert abs(direct.imag) < 1e-9
            assert ramanujan_sum(r, n, t) == round(direct.real)


def test_ramanujan_multiplicative(tables_small):
    t = tables_small
    for r in range(1, 41):
        for s in range(1, 41):
            if math.gcd(r, s) != 1:
                continue
            for n in (1, 7, 12, 30):
                assert (ramanujan_sum(r * s, n, t)
                        == ramanujan_sum(r, n, t) * ramanujan_sum(s, n, t))


def test_convolution_mobius_inversion_identity(tables_small):
    t = tables_small
    n_max = 500
    conv = dirichlet_convolve(unit_table(n_max), mobius_table(n_max, t), n_max)
    assert conv[1] == 1
    assert all(conv[n] == 0 for n in range(2, n_max + 1))


def test_convolution_log_identity(tables_small):
    # (1 * Lambda)(12) = 2 log 2 + log 3
    t = tables_small
    conv = dirichlet_convolve(unit_table(12), mangoldt_table(12, t), 12)
    assert conv[12] == LogVector({2: 2, 3: 1})
    # brute force over the divisors of 12
    brute = LogVector()
    for d in t.divisors(12):
        brute = brute + LogVector.mangoldt(d, t)
    assert conv[12] == brute


def test_convolution_mu_musq_example(tables_small):
    # mu(1)mu^2(4) + mu(2)mu^2(2) + mu(4)mu^2(1) = 0 - 1 + 0 = -1
    t = tables_small
    n_max = 16
    mu = mobius_table(n_max, t)
    musq = [Fraction(0)] + [Fraction(int(t.mobius[n]) ** 2) for n in range(1, n_max + 1)]
    conv = dirichlet_convolve(mu, musq, n_max)
    brute = sum(Fraction(int(t.mobius[d]) * int(t.mobius[4 // d]) ** 2)
                for d in t.divisors(4))
    assert conv[4] == brute == -1


def test_mobius_inversion_round_trip_full(tables_small):
    # ((f * 1) * mu) = f exactly for a pseudorandom rational f on [1, 2000]
    t = tables_small
    n_max = 2000
    rng = np.random.default_rng(20260810)
    f = [Fraction(0)] + [Fraction(int(rng.integers(-50, 51)),
                                  int(rng.integers(1, 20)))
                         for _ in range(n_max)]
    g = dirichlet_convolve(f, unit_table(n_max), n_max)
    back = dirichlet_convolve(g, mobius_table(n_max, t), n_max)
    assert back[1:] == f[1:]


@settings(max_examples=25, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=30),
                min_size=1, max_size=60))
def test_mobius_inversion_round_trip_property(values):
    t = build_tables(len(values))
    f = [Fraction(0)] + values
    n_max = len(values)
    g = dirichlet_convolve(f, unit_table(n_max), n_max)
    back = dirichlet_convolve(g, mobius_table(n_max, t), n_max)
    assert back[1:] == f[1:]


def test_logvector_arithmetic():
    a = LogVector({2: Fraction(1), 3: Fraction(2)})
    b = LogVector({3: Fraction(2), 5: Fraction(-1)})
    assert (a - b) == LogVector({2: Fraction(1), 5: Fraction(1)})
    assert (a - a).is_zero()
    assert a.scale(Fraction(0)).is_zero()
    assert abs(a.to_float() - (math.log(2) + 2 * math.log(3))) < 1e-12


def test_range_errors(tables_small):
    with pytest.raises(TableRangeError):
        tables_small.factorize(tables_small.n_max + 1)
    with pytest.raises(ValueError):
        ramanujan_sum(0, 1, tables_small)
