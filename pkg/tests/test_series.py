from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_tau.polynomials import Poly
from spectral_tau.rationals import format_rational, parse_rational
from spectral_tau.series import (
    MatrixTailSeries,
    NotInvertibleError,
    TailSeries,
    TruncationError,
    series_inv_sqrt,
    series_invert,
)

fractions = st.fractions(min_value=-10, max_value=10, max_denominator=12)


def tail(lead, coeffs, low=None):
    cs = [Fraction(c) for c in coeffs]
    if low is not None:
        cs += [Fraction(0)] * (lead - low + 1 - len(cs))
    return TailSeries(lead, cs, low)


class TestRationalStrings:
    def test_round_trip_simple(self):
        assert format_rational(parse_rational("-3/4")) == "-3/4"
        assert format_rational(parse_rational("7")) == "7"
        assert parse_rational("−1/2") == Fraction(-1, 2)

    def test_floats_rejected(self):
        with pytest.raises(ValueError):
            parse_rational("0.5")
        with pytest.raises(ValueError):
            parse_rational("1e3")

    @given(fractions)
    def test_round_trip_random(self, x):
        assert parse_rational(format_rational(x)) == x


class TestInvert:
    def test_geometric_series(self):
        s = tail(0, [1, 1], -3)  # 1 + 1/z known through z^-3
        inv = series_invert(s)
        assert [inv.coefficient(-k) for k in range(4)] == [1, -1, 1, -1]

    def test_monomial(self):
        inv = series_invert(TailSeries.monomial(2))
        assert inv.lead == -2 and inv.coefficient(-2) == 1 and inv.low is None

    def test_squared_binomial(self):
        s = tail(0, [1, 2, 1], -2)  # (1 + 1/z)^2
        inv = series_invert(s)
        assert [inv.coefficient(-k) for k in range(3)] == [1, -2, 3]
        assert (inv * s).coefficient(0) == 1
        assert (inv * s).coefficient(-1) == 0

    def test_zero_within_trust_rejected(self):
        with pytest.raises(NotInvertibleError):
            series_invert(tail(0, [0, 0], -1))

    def test_shifted_lead_is_fine(self):
        # stored lead coefficient zero but a trusted nonzero term below: invertible
        inv = series_invert(tail(0, [0, 1], -1))
        assert inv.lead == 1 and inv.coefficient(1) == 1

    @given(st.lists(fractions, min_size=1, max_size=6), fractions.filter(lambda x: x != 0))
    @settings(max_examples=40, deadline=None)
    def test_involution(self, tail_coeffs, lead):
        s = tail(1, [lead] + tail_coeffs, -len(tail_coeffs))
        twice = series_invert(series_invert(s))
        assert twice == s

    @given(st.lists(fractions, min_size=1, max_size=6), fractions.filter(lambda x: x != 0))
    @settings(max_examples=40, deadline=None)
    def test_inverse_identity(self, tail_coeffs, lead):
        s = tail(0, [lead] + tail_coeffs, -len(tail_coeffs))
        prod = s * series_invert(s)
        assert prod.coefficient(0) == 1
        for k in range(1, len(tail_coeffs) + 1):
            assert prod.coefficient(-k) == 0


class TestInvSqrt:
    def test_identity(self):
        assert series_inv_sqrt(TailSeries.constant(1), order=4).coefficient(0) == 1

    def test_binomial(self):
        q = Fraction(3, 2)
        s = tail(0, [1, q], -4)
        r = series_inv_sqrt(s)
        assert r.coefficient(-1) == -q / 2
        assert r.coefficient(-2) == 3 * q * q / 8

    def test_quartic_tail(self):
        s = tail(0, [1, 0, 0, 0, 1], -4)  # 1 + z^-4
        r = series_inv_sqrt(s)
        assert [r.coefficient(-k) for k in range(5)] == [1, 0, 0, 0, Fraction(-1, 2)]

    def test_nonunit_lead_rejected(self):
        with pytest.raises(NotInvertibleError):
            series_inv_sqrt(tail(0, [2, 1], -1))

    @given(st.lists(fractions, min_size=1, max_size=6))
    @settings(max_examples=40, deadline=None)
    def test_square_identity(self, tail_coeffs):
        s = tail(0, [Fraction(1)] + tail_coeffs, -len(tail_coeffs))
        r = series_inv_sqrt(s)
        prod = r * r * s
        assert prod.coefficient(0) == 1
        for k in range(1, len(tail_coeffs) + 1):
            assert prod.coefficient(-k) == 0


class TestTruncationDiscipline:
    def test_reading_past_window_raises(self):
        s = tail(0, [1, 2], -1)
        assert s.coefficient(5) == 0
        with pytest.raises(TruncationError):
            s.coefficient(-2)

    def test_exact_series_reads_zero(self):
        s = TailSeries.from_poly(Poly([1, 0, 2]))
        assert s.coefficient(-100) == 0

    def test_product_trust_window(self):
        s = tail(0, [1, 1], -1)
        t = tail(0, [1, 1, 1], -2)
        prod = s * t
        assert prod.low == -1
        with pytest.raises(TruncationError):
            prod.coefficient(-2)

    def test_all_values_are_fractions(self):
        s = tail(1, [Fraction(2, 3), 5], 0) * tail(0, [Fraction(7, 2)], 0)
        assert all(isinstance(c, Fraction) for c in s.coeffs)


class TestMatrixSeries:
    def test_trace_and_entry(self):
        mats = [((Fraction(1), Fraction(0)), (Fraction(0), Fraction(0))),
                ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0)))]
        m = MatrixTailSeries(2, 0, mats, -1)
        assert m.trace().coefficient(0) == 1
        assert m.entry(0, 1).coefficient(-1) == 1

    def test_matrix_product_window(self):
        mats = [((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))] * 3
        m = MatrixTailSeries(2, 0, mats, -2)
        p = m * m
        assert p.low == -2
        assert p.matrix_at(0)[0][0] == 1
        with pytest.raises(TruncationError):
            p.matrix_at(-3)
