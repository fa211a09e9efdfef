from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from wzwfusion.affine import (
    AffineWeight,
    AlgebraLabel,
    WeightError,
    conjugate,
    count_weights,
    enumerate_weights,
    nality,
    parse_algebra,
    parse_weight,
    simple_current,
)


@st.composite
def weights(draw, max_N=6, max_k=7):
    N = draw(st.integers(2, max_N))
    k = draw(st.integers(1, max_k))
    ws = enumerate_weights(N, k)
    return ws[draw(st.integers(0, len(ws) - 1))]


def h_partition(w):
    # h = (sum lam_i^2 - |lam|^2/N + sum (N + 1 - 2i) lam_i) / (2(k + N)), lam from partition
    N, k = w.N, w.level
    lam = list(w.partition) + [0]
    total = sum(lam)
    cas = sum(Fraction(x * x) for x in lam) - Fraction(total * total, N)
    cas += sum((N + 1 - 2 * i) * x for i, x in enumerate(lam, start=1))
    return cas / (2 * (k + N))


def test_counts_are_binomial():
    for N in range(2, 7):
        for k in range(0, 8):
            assert count_weights(N, k) == comb(N - 1 + k, k)
            assert len(enumerate_weights(N, k)) == comb(N - 1 + k, k)


def test_enumeration_sorted_and_starts_at_vacuum():
    ws = enumerate_weights(4, 3)
    assert ws == sorted(ws, key=lambda w: w.dynkin)
    assert ws[0].is_vacuum
    assert len(set(ws)) == len(ws)


def test_views():
    w = AffineWeight(3, 9, (2, 2))
    assert w.partition == (4, 2)
    assert w.a0 == 5
    assert w.extended == (5, 2, 2)
    assert w.shifted == (6, 3, 3)
    assert str(w) == "d[2,2]"
    assert AffineWeight.from_partition(3, 9, (4, 2)) == w
    assert AffineWeight.from_partition(3, 9, (4, 2, 0)) == w
    assert AffineWeight.from_shifted((6, 3, 3)) == w


@given(weights())
def test_round_trips(w):
    assert AffineWeight.from_shifted(w.shifted) == w
    assert AffineWeight.from_partition(w.N, w.level, w.partition) == w
    assert sum(w.shifted) == w.level + w.N


def test_invalid_weights():
    with pytest.raises(WeightError):
        AffineWeight(3, 2, (2, 1))
    with pytest.raises(WeightError):
        AffineWeight(3, 2, (1,))
    with pytest.raises(WeightError):
        AffineWeight(3, 2, (-1, 0))
    with pytest.raises(WeightError):
        AffineWeight.from_partition(3, 2, (1, 2))


def test_simple_current_examples():
    vac = AffineWeight.vacuum(3, 3)
    assert simple_current(vac) == AffineWeight(3, 3, (3, 0))
    assert simple_current(vac, 2) == AffineWeight(3, 3, (0, 3))
    adj = AffineWeight(3, 3, (1, 1))
    assert simple_current(adj) == adj


@given(weights(), st.integers(-5, 5))
def test_simple_current_group(w, j):
    N, k = w.N, w.level
    assert simple_current(w, N) == w
    assert simple_current(simple_current(w, j), -j) == w
    # nality shifts by the level; h shifts by an amount fixed by the orbit
    assert nality(simple_current(w, 1)) == (nality(w) + k) % N
    h = AlgebraLabel.su(N, k).conformal_weight
    jw = simple_current(w)
    shift = Fraction(k * (N - 1), 2 * N) - Fraction(nality(w), N)
    assert (h(jw) - h(w) - shift).denominator == 1


@given(weights())
def test_conjugation(w):
    c = conjugate(w)
    assert conjugate(c) == w
    assert (nality(w) + nality(c)) % w.N == 0
    h = AlgebraLabel.su(w.N, w.level).conformal_weight
    assert h(w) == h(c)


@given(weights())
def test_conformal_weight_oracle(w):
    assert AlgebraLabel.su(w.N, w.level).conformal_weight(w) == h_partition(w)


def test_conformal_weights_known():
    su2 = AlgebraLabel.su(2, 4)
    for j in range(5):
        assert su2.conformal_weight(AffineWeight(2, 4, (j,))) == Fraction(j * (j + 2), 4 * 6)
    assert AlgebraLabel.su(3, 3).conformal_weight(AffineWeight(3, 3, (1, 1))) == Fraction(1, 2)
    # simple currents: k j (N - j) / (2N)
    for N, k in [(3, 9), (4, 2), (5, 3)]:
        vac = AffineWeight.vacuum(N, k)
        for j in range(N):
            assert AlgebraLabel.su(N, k).conformal_weight(simple_current(vac, j)) == Fraction(k * j * (N - j), 2 * N)


def test_catalog_weights():
    so8 = AlgebraLabel.so1(8)
    assert so8.primaries() == ("1", "v", "s", "c")
    assert [so8.conformal_weight(p) for p in so8.primaries()] == [0, Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)]
    so10 = AlgebraLabel.so1(10)
    assert so10.conformal_weight("s") == Fraction(5, 8)
    assert so10.conjugate("s") == "c"
    assert so8.conjugate("s") == "s"
    su6 = AlgebraLabel.su1(6)
    assert su6.conformal_weight("2") == Fraction(2 * 4, 12)
    assert su6.add("4", "5") == "3"
    assert AlgebraLabel.e6().conformal_weight("1") == Fraction(2, 3)
    assert AlgebraLabel.e7().conformal_weight("1") == Fraction(3, 4)


def test_central_charges():
    assert AlgebraLabel.su(3, 9).central_charge() == 6
    assert AlgebraLabel.e6().central_charge() == 6
    assert AlgebraLabel.su(3, 3).central_charge() == 4
    assert AlgebraLabel.so1(8).central_charge() == 4
    # level-rank: c(su(m)_n) + c(su(n)_m) = c(su(mn)_1)
    for m, n in [(2, 3), (3, 4), (2, 5)]:
        total = AlgebraLabel.su(m, n).central_charge() + AlgebraLabel.su(n, m).central_charge()
        assert total == AlgebraLabel.su1(m * n).central_charge() == m * n - 1


def test_parsing():
    assert parse_algebra("su3@9") == AlgebraLabel.su(3, 9)
    assert parse_algebra("su6@1") == AlgebraLabel.su1(6)
    assert parse_algebra("so8@1") == AlgebraLabel.so1(8)
    assert parse_algebra("e6@1") == AlgebraLabel.e6()
    assert str(AlgebraLabel.su(3, 9)) == "su3@9"
    su39 = AlgebraLabel.su(3, 9)
    assert parse_weight("[2,1]", su39) == AffineWeight(3, 9, (1, 1))
    assert parse_weight("d[1,1]", su39) == AffineWeight(3, 9, (1, 1))
    assert parse_weight("[]", su39).is_vacuum
    assert parse_weight("v", AlgebraLabel.so1(8)) == "v"
    for bad in ["su3", "sp4@1", "e8@1", "so8@2"]:
        with pytest.raises(WeightError):
            parse_algebra(bad)
    for bad in ["(2,1)", "d[1,1,1]", "[10,0]"]:
        with pytest.raises(WeightError):
            parse_weight(bad, su39)
    with pytest.raises((WeightError, KeyError)):
        parse_weight("x", AlgebraLabel.so1(8))
