from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from centext.errors import InvalidInputError
from centext.qz import QZVector, common_denominator, format_fraction, from_scaled, parse_fraction, to_scaled_array

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=60)
vectors = st.lists(fractions, min_size=2, max_size=2).map(QZVector)


def test_reduction():
    v = QZVector([Fraction(7, 3), Fraction(-1, 4), 0])
    assert v.coords == (Fraction(1, 3), Fraction(3, 4), Fraction(0))
    assert v.to_strings() == ["1/3", "3/4", "0/1"]
    assert v.order() == 12


def test_parse_and_format():
    assert parse_fraction("2/6") == Fraction(1, 3)
    assert format_fraction(Fraction(0)) == "0/1"
    assert QZVector.parse(["1/2", "5/4"]) == QZVector([Fraction(1, 2), Fraction(1, 4)])
    for bad in ["x", "1/0", ""]:
        with pytest.raises(InvalidInputError):
            parse_fraction(bad)


def test_rank_mismatch():
    with pytest.raises(InvalidInputError):
        QZVector([0]) + QZVector([0, 0])


def test_immutable_and_hashable():
    v = QZVector([Fraction(1, 2)])
    with pytest.raises(AttributeError):
        v.coords = ()
    assert len({v, QZVector([Fraction(3, 2)])}) == 1


def test_canonical_root():
    assert QZVector([Fraction(1, 3)]).root(3) == QZVector([Fraction(1, 9)])
    assert QZVector([0]).root(5).is_zero()
    assert QZVector([Fraction(2, 4)]).root(2) == QZVector([Fraction(1, 4)])
    with pytest.raises(InvalidInputError):
        QZVector([0]).root(0)


@given(vectors, vectors, vectors)
def test_group_laws(u, v, w):
    z = QZVector.zero(2)
    assert (u + v) + w == u + (v + w)
    assert u + v == v + u
    assert u + z == u and u - u == z and u + (-u) == z
    assert u.order() * u == z


@given(vectors, st.integers(1, 12))
def test_root_is_a_root(v, n):
    assert n * v.root(n) == v


@given(st.lists(vectors, min_size=1, max_size=6))
def test_scaled_round_trip(vs):
    N = common_denominator(vs)
    arr = to_scaled_array(vs, N, 2)
    assert [from_scaled(r, N) for r in arr.tolist()] == vs


def test_scaled_rejects_small_denominator():
    with pytest.raises(InvalidInputError):
        QZVector([Fraction(1, 4)]).scaled(2)
