from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_tau.multipoly import InexactDivisionError, MultiPoly, multipoly_exact_divide


def mp(nvars, terms):
    return MultiPoly(nvars, {tuple(e): Fraction(c) for e, c in terms.items()})


def test_difference_of_squares():
    num = mp(2, {(2, 0): 1, (0, 2): -1})
    d = MultiPoly.pair_difference(2, 0, 1)
    q = multipoly_exact_divide(num, d, 10)
    assert q == mp(2, {(1, 0): 1, (0, 1): 1})


def test_not_divisible_raises():
    num = mp(2, {(1, 1): 1})
    d = MultiPoly.pair_difference(2, 0, 1)
    with pytest.raises(InexactDivisionError):
        multipoly_exact_divide(num, d, 2)


def test_junk_above_trusted_degree_is_dropped():
    num = mp(2, {(1, 1): 1})
    d = MultiPoly.pair_difference(2, 0, 1)
    q = multipoly_exact_divide(num, d, 0)  # remainder lives at degree 2 > 0
    assert q.total_degree() <= 1


small_polys = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)),
    st.fractions(min_value=-5, max_value=5, max_denominator=6),
    max_size=6,
)


@given(small_polys, small_polys)
@settings(max_examples=60, deadline=None)
def test_multiply_divide_round_trip(qd, dd):
    q = MultiPoly(2, qd)
    d = MultiPoly(2, dd)
    if d.is_zero():
        return
    prod = q * d
    back = multipoly_exact_divide(prod, d, prod.total_degree() + 1)
    assert back == q


def test_square_factor_round_trip():
    g = mp(2, {(0, 0): 3, (1, 2): Fraction(-5, 2), (2, 1): 7})
    d = MultiPoly.pair_difference(2, 1, 0)
    d2 = d * d
    prod = g * d2
    q = multipoly_exact_divide(prod, d2, prod.total_degree())
    assert q == g


def test_mul_degree_cap():
    f = mp(2, {(2, 0): 1, (0, 0): 1})
    g = mp(2, {(0, 2): 1, (0, 0): 1})
    capped = f.mul(g, max_total_degree=2)
    assert capped == mp(2, {(0, 0): 1, (2, 0): 1, (0, 2): 1})
