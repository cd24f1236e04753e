from math import comb

import pytest
from hypothesis import given, strategies as st

from momentzeros.multiindex import (
    EQ,
    GT,
    LT,
    GLexBasis,
    MultiIndex,
    degree,
    enumerate_glex,
    fg_leq,
    format_multiindex,
    glex_compare,
    glex_key,
    lcm_max,
    parse_multiindex,
    s,
)


def indices(n, top=4):
    return st.lists(st.integers(0, top), min_size=n, max_size=n).map(tuple)


pairs = st.integers(1, 4).flatmap(lambda n: st.tuples(indices(n), indices(n)))
triples = st.integers(1, 4).flatmap(lambda n: st.tuples(indices(n), indices(n), indices(n)))


@pytest.mark.parametrize("alpha, k", [((2, 1), 3), ((0, 0, 0), 0), ((1, 3, 1), 5)])
def test_degree(alpha, k):
    assert degree(alpha) == k
    assert MultiIndex(alpha).degree == k


def test_glex_same_degree_tie_break_follows_listing():
    # listing order 1, X1, X2, ...: X1 = (1,0) precedes X2 = (0,1)
    assert glex_compare((0, 1), (1, 0)) == GT
    assert glex_compare((1, 0), (0, 1)) == LT
    # dictionary order on exponent vectors under that convention
    assert glex_compare((1, 1, 3), (1, 3, 1)) == GT


def test_glex_degree_first():
    assert glex_compare((3, 0), (0, 4)) == LT
    assert glex_compare((0, 0, 4), (3, 0, 0)) == GT
    assert glex_compare((1, 1), (1, 1)) == EQ


def test_glex_rejects_length_mismatch():
    with pytest.raises(ValueError):
        glex_compare((1, 0), (1, 0, 0))


@pytest.mark.parametrize("a, b, want", [
    ((1, 0), (1, 2), True),
    ((1, 1, 3), (1, 3, 1), False),
    ((2, 2), (2, 2), True),
])
def test_fg_leq(a, b, want):
    assert fg_leq(a, b) is want


@pytest.mark.parametrize("a, b, want", [
    ((0, 1), (2, 0), (2, 1)),
    ((1, 1, 3), (1, 3, 1), (1, 3, 3)),
    ((2, 5), (2, 5), (2, 5)),
])
def test_lcm_max(a, b, want):
    assert lcm_max(a, b) == want


def test_enumerate_examples():
    assert list(enumerate_glex(2, 2)) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert list(enumerate_glex(1, 3)) == [(0,), (1,), (2,), (3,)]
    assert len(enumerate_glex(3, 2)) == 10


@pytest.mark.parametrize("n", range(1, 5))
@pytest.mark.parametrize("d", range(0, 7))
def test_enumerate_sorted_distinct_and_counted(n, d):
    basis = list(enumerate_glex(n, d))
    assert len(basis) == comb(n + d, d) == s(n, d)
    assert len(set(basis)) == len(basis)
    assert all(glex_compare(a, b) == LT for a, b in zip(basis, basis[1:]))


@given(pairs)
def test_glex_antisymmetric_and_total(ab):
    a, b = ab
    assert glex_compare(a, b) == -glex_compare(b, a)
    assert (glex_compare(a, b) == EQ) == (a == b)


@given(triples)
def test_glex_transitive(abc):
    a, b, c = sorted(abc, key=glex_key)
    assert glex_compare(a, b) <= 0 and glex_compare(b, c) <= 0
    assert glex_compare(a, c) <= 0


@given(pairs)
def test_divisibility_refines_glex(ab):
    a, b = ab
    if fg_leq(a, b) and a != b:
        assert glex_compare(a, b) == LT


@given(triples)
def test_fg_partial_order(abc):
    a, b, c = abc
    assert fg_leq(a, a)
    if fg_leq(a, b) and fg_leq(b, a):
        assert a == b
    if fg_leq(a, b) and fg_leq(b, c):
        assert fg_leq(a, c)


@given(triples)
def test_lcm_laws(abc):
    a, b, c = abc
    assert lcm_max(a, b) == lcm_max(b, a)
    assert lcm_max(lcm_max(a, b), c) == lcm_max(a, lcm_max(b, c))
    assert lcm_max(a, a) == a
    assert degree(lcm_max(a, b)) == sum(max(x, y) for x, y in zip(a, b))
    assert fg_leq(a, lcm_max(a, b)) and fg_leq(b, lcm_max(a, b))


def test_multiindex_validation_and_arithmetic():
    with pytest.raises(ValueError):
        MultiIndex((1, -1))
    with pytest.raises(ValueError):
        MultiIndex((1, 0)) + MultiIndex((1, 0, 0))
    assert MultiIndex((1, 2)) + MultiIndex((0, 3)) == (1, 5)
    assert MultiIndex((2, 1)).monomial() == "X1^2X2"
    assert MultiIndex((0, 0)).monomial() == "1"


def test_format_round_trip():
    for alpha in enumerate_glex(3, 3):
        assert parse_multiindex(format_multiindex(alpha)) == alpha
    assert format_multiindex((2, 0, 1)) == "[2,0,1]"


def test_basis_truncation_is_prefix():
    b = GLexBasis(2, 4)
    for r in range(5):
        assert b.truncate(r).indices == b.indices[: b.prefix_size(r)]
    assert b.index((1, 1)) == 4
    with pytest.raises(KeyError):
        b.index((5, 0))
