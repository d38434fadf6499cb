import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantorcount.digitsys import is_primitive
from cantorcount.errors import DomainError
from cantorcount.numtheory import (
    ell,
    euler_phi,
    even_primitive_count,
    factorize,
    is_prime,
    mlo,
    mobius,
    mult_order,
    primitive_count,
    round_half_away,
    tau,
)


def _sieve(n):
    flags = [True] * (n + 1)
    flags[0] = flags[1] = False
    for i in range(2, int(n**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = [False] * len(flags[i * i :: i])
    return flags


class TestPrimality:
    def test_against_sieve(self):
        flags = _sieve(10_000)
        for n in range(10_000 + 1):
            assert is_prime(n) == flags[n], n

    def test_known_values(self):
        assert is_prime(3851)
        assert is_prime(2**61 - 1)
        assert not is_prime(3**23 - 1)

    @given(st.integers(2, 10**12))
    @settings(max_examples=100, deadline=None)
    def test_factorization_consistent(self, n):
        f = factorize(n)
        prod = 1
        for p, e in f.pairs:
            assert is_prime(p)
            prod *= p**e
        assert prod == n


class TestArithmeticFunctions:
    def test_phi(self):
        assert euler_phi(757) == 756
        assert euler_phi(1) == 1
        assert [euler_phi(n) for n in range(1, 11)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]

    def test_mobius(self):
        assert [mobius(n) for n in range(1, 13)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]

    def test_divisors_and_tau(self):
        from cantorcount.numtheory import divisors

        assert divisors(26) == [1, 2, 13, 26]
        assert tau(26) == 4

    @given(st.integers(1, 10**6))
    @settings(max_examples=100)
    def test_phi_divisor_sum(self, n):
        from cantorcount.numtheory import divisors

        assert sum(euler_phi(d) for d in divisors(n)) == n


class TestMultOrder:
    def test_examples(self):
        assert mult_order(3, 146) == 12
        assert mult_order(3, 13) == 3
        assert mult_order(2, 7) == 3

    @given(st.integers(2, 5000))
    @settings(max_examples=150, deadline=None)
    def test_order_properties(self, n):
        if math.gcd(3, n) != 1:
            with pytest.raises(DomainError):
                mult_order(3, n)
            return
        d = mult_order(3, n)
        assert pow(3, d, n) == 1
        assert euler_phi(n) % d == 0
        for p in factorize(d).primes():
            assert pow(3, d // p, n) != 1  # minimality

    def test_ell_strips_threes(self):
        assert ell(13) == ell(39) == ell(117) == 3
        assert ell(3) == 1


class TestPrimitiveWordCounts:
    def test_known_values(self):
        assert primitive_count(6, 2) == 54
        assert primitive_count(9, 2) == 504
        assert even_primitive_count(1, 3) == 2
        assert even_primitive_count(2, 3) == 2
        assert even_primitive_count(9, 3) == 9828

    @given(st.integers(1, 40), st.sampled_from([2, 3]))
    def test_mobius_inversion(self, length, a):
        """Summing primitive counts over divisors recovers a^length."""
        from cantorcount.numtheory import divisors

        assert sum(primitive_count(d, a) for d in divisors(length)) == a**length

    @pytest.mark.parametrize("length", range(1, 11))
    def test_even_count_against_enumeration(self, length):
        count = 0
        for v in range(3**length):
            digits = ""
            x = v
            for _ in range(length):
                digits += str(x % 3)
                x //= 3
            if v % 2 == 0 and is_primitive(digits):
                count += 1
        assert even_primitive_count(length, 3) == count

    @pytest.mark.parametrize("length", [11, 13, 17, 19, 23, 29, 31])
    def test_prime_length_ratio(self, length):
        """For prime lengths the coset probability is about 2 * (2/3)^ell."""
        ratio = primitive_count(length, 2) / even_primitive_count(length, 3)
        assert 1.9 < ratio * (3 / 2) ** length < 2.1


class TestRounding:
    def test_half_away_from_zero(self):
        assert round_half_away(Fraction(1, 2)) == 1
        assert round_half_away(Fraction(-1, 2)) == -1
        assert round_half_away(Fraction(7, 3)) == 2
        assert round_half_away(Fraction(5, 2)) == 3


class TestMlo:
    def test_small_values(self):
        assert mlo(4) == 2
        assert mlo(13) == 6  # round(12 * m(3,2)/mbar(3,3)) = round(12 * 6/12)
        assert mlo(82) == 3
        assert mlo(2) == 0  # 2 does not divide (3^1 - 1)/2 = 1

    def test_rounding_edge(self):
        # round(22 * 2046 / 88572) = round(0.508...) = 1
        assert mlo(23) == 1

    def test_domain(self):
        with pytest.raises(DomainError):
            mlo(1)
        with pytest.raises(DomainError):
            mlo(6)

    def test_large_ell_shortcut_is_zero(self):
        # a prime with huge period length: probability mass far below 1/2
        q = 10**9 + 7
        assert mlo(q) == 0
