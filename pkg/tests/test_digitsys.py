import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantorcount.digitsys import (
    ONE,
    TERNARY,
    DigitSystem,
    PeriodicExpansion,
    expansion_of_rational,
    is_member,
    is_primitive,
    rational_in_set,
    value_of_expansion,
)
from cantorcount.errors import DomainError


class TestDigitSystem:
    def test_ternary_defaults(self):
        assert TERNARY.base == 3
        assert TERNARY.allowed == frozenset({0, 2})
        assert TERNARY.dimension == pytest.approx(math.log(2) / math.log(3))

    def test_tag_round_trip(self):
        for system in (TERNARY, DigitSystem(5, frozenset({0, 2, 4}))):
            assert DigitSystem.from_tag(system.tag()) == system

    def test_validation(self):
        with pytest.raises(DomainError):
            DigitSystem(2, frozenset({0}))
        with pytest.raises(DomainError):
            DigitSystem(3, frozenset())
        with pytest.raises(DomainError):
            DigitSystem(3, frozenset({0, 1, 2}))  # not a proper subset
        with pytest.raises(DomainError):
            DigitSystem(3, frozenset({0, 3}))


class TestExpansion:
    def test_one_thirteenth(self):
        e = expansion_of_rational(1, 13)
        assert (e.preperiod, e.period) == ("", "002")

    def test_one_half(self):
        e = expansion_of_rational(1, 2)
        assert (e.preperiod, e.period) == ("", "1")

    def test_terminating(self):
        e = expansion_of_rational(1, 3)
        assert (e.preperiod, e.period) == ("1", "0")
        assert e.i0 == 1

    def test_unit(self):
        assert expansion_of_rational(1, 1) is ONE
        assert expansion_of_rational(0, 1).period == "0"

    def test_not_reduced_rejected(self):
        with pytest.raises(DomainError):
            expansion_of_rational(2, 4)

    def test_value_of_expansion(self):
        assert value_of_expansion(PeriodicExpansion("", "02")) == (2, 8, 1, 4)
        assert value_of_expansion(PeriodicExpansion("", "20")) == (6, 8, 3, 4)
        assert value_of_expansion(ONE) == (1, 1, 1, 1)

    @given(st.integers(2, 2000), st.data())
    @settings(max_examples=200, deadline=None)
    def test_round_trip(self, q, data):
        p = data.draw(st.integers(1, q - 1))
        g = math.gcd(p, q)
        p, q = p // g, q // g
        e = expansion_of_rational(p, q)
        assert value_of_expansion(e)[2:] == (p, q)

    @given(st.integers(2, 500))
    @settings(max_examples=100, deadline=None)
    def test_period_length_law(self, q):
        """The period length equals the multiplicative order of 3 modulo the
        3-free part of q."""
        from cantorcount.numtheory import ell

        e = expansion_of_rational(1, q)
        q1 = q
        while q1 % 3 == 0:
            q1 //= 3
        if q1 == 1:
            assert e.period == "0"
        else:
            assert e.ell == ell(q)


class TestPrimitivity:
    def test_examples(self):
        assert is_primitive("002")
        assert not is_primitive("0202")
        assert not is_primitive("22")
        assert is_primitive("0")

    @given(st.text(alphabet="02", min_size=1, max_size=6), st.integers(2, 4))
    def test_repetition_never_primitive(self, word, k):
        assert not is_primitive(word * k)


class TestMembership:
    def test_examples(self):
        assert rational_in_set(1, 4)
        assert not rational_in_set(1, 2)
        assert rational_in_set(1, 3)  # 0.1 = 0.0222... in base 3
        assert rational_in_set(2, 3)
        assert rational_in_set(1, 1)
        assert rational_in_set(0, 1)
        assert not rational_in_set(1, 5)

    def test_base_mismatch_rejected(self):
        e = PeriodicExpansion("", "02", base=5)
        with pytest.raises(DomainError):
            is_member(e, TERNARY)

    @given(st.integers(2, 400), st.data())
    @settings(max_examples=150, deadline=None)
    def test_symmetries(self, q, data):
        """Membership is invariant under x -> 1-x and x -> x/3."""
        p = data.draw(st.integers(1, q - 1))
        g = math.gcd(p, q)
        p, q = p // g, q // g
        if q == 1:
            return
        m = rational_in_set(p, q)
        assert rational_in_set(q - p, q) == m
        g = math.gcd(p, 3)  # x/3 in lowest terms
        assert rational_in_set(p // g, 3 * q // g) == m
