from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from q2bkss.arith import INF, LocalScalar, reduce_mod, unit_part, val3, val3_int


def local(num, den):
    return LocalScalar(num, den)


local_scalars = st.builds(
    local,
    st.integers(-10**6, 10**6),
    st.integers(1, 10**4).filter(lambda d: d % 3),
)


def test_val3_values():
    assert val3(LocalScalar(0)) == INF
    assert val3(LocalScalar(4**6 - 1)) == 2
    assert val3(LocalScalar(1, 16)) == 0
    assert val3_int(-81 * 5) == 4


def test_unit_part_values():
    assert unit_part(LocalScalar(-4096)) == LocalScalar(-4096)
    assert unit_part(LocalScalar(9, 2)) == LocalScalar(1, 2)
    assert unit_part(LocalScalar(-3008)) == LocalScalar(-3008)


def test_reduce_mod_values():
    assert reduce_mod(LocalScalar(1, 16), 2) == 4
    assert reduce_mod(LocalScalar(9, 2), 2) == 0
    assert reduce_mod(LocalScalar(-3008), 1) == 1


def test_nonlocal_rejected():
    with pytest.raises(ValueError):
        LocalScalar(1, 3)
    with pytest.raises(ValueError):
        LocalScalar(1) / LocalScalar(3)


def test_division_by_unit():
    assert LocalScalar(3) / LocalScalar(2) == LocalScalar(3, 2)
    assert LocalScalar(1, 2).is_unit()
    assert not LocalScalar(6).is_unit()


@given(local_scalars, local_scalars)
def test_field_ops_match_fractions(x, y):
    fx, fy = x.to_fraction(), y.to_fraction()
    assert (x + y).to_fraction() == fx + fy
    assert (x - y).to_fraction() == fx - fy
    assert (x * y).to_fraction() == fx * fy


@given(local_scalars, local_scalars)
def test_valuation_properties(x, y):
    if x and y:
        assert val3(x * y) == val3(x) + val3(y)
    if x + y:
        assert val3(x + y) >= min(val3(x), val3(y))


@given(local_scalars, local_scalars, st.integers(1, 6))
def test_reduce_mod_is_ring_map(x, y, k):
    m = 3**k
    assert reduce_mod(x + y, k) == (reduce_mod(x, k) + reduce_mod(y, k)) % m
    assert reduce_mod(x * y, k) == reduce_mod(x, k) * reduce_mod(y, k) % m


@given(local_scalars, st.integers(1, 6))
def test_reduce_mod_is_residue(x, k):
    r = reduce_mod(x, k)
    assert 0 <= r < 3**k
    # x - r lies in 3^k Z_(3)
    diff = x.to_fraction() - r
    assert diff == 0 or val3(LocalScalar(diff)) >= k


@given(local_scalars)
def test_unit_part_strips_three(x):
    if x:
        u = unit_part(x)
        assert u.is_unit()
        assert x.to_fraction() == u.to_fraction() * Fraction(3) ** val3(x)
