"""Arithmetic functions and primitive-word counts.

Factorization is trial division below a small bound plus Brent's variant
of Pollard rho, with deterministic Miller-Rabin below 2**64 (probabilistic
above, error < 4**-30 per the witness count).
"""

from __future__ import annotations

import math
import random
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError

_TRIAL_LIMIT = 10**6

# Sufficient for a deterministic test below 3.3e24 (Sorenson & Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_EXTRA_ROUNDS = 30


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as (prime, exponent) pairs, primes increasing."""

    n: int
    pairs: tuple[tuple[int, int], ...]

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for n < 2**64."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES
    if n >= 1 << 64:
        rng = random.Random(n)
        bases = bases + tuple(rng.randrange(2, n - 1) for _ in range(_MR_EXTRA_ROUNDS))
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """Brent's cycle-finding variant; returns a nontrivial factor of composite odd n."""
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


_factor_cache: dict[int, tuple[tuple[int, int], ...]] = {}
_factor_lock = threading.Lock()


def factorize(n: int) -> Factorization:
    """Full prime decomposition of n >= 1."""
    if n < 1:
        raise DomainError(f"factorize: n must be >= 1, got {n}")
    with _factor_lock:
        cached = _factor_cache.get(n)
    if cached is not None:
        return Factorization(n, cached)

    pairs: dict[int, int] = {}
    m = n
    for p in (2, 3, 5):
        while m % p == 0:
            pairs[p] = pairs.get(p, 0) + 1
            m //= p
    p = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p * p <= m and p < _TRIAL_LIMIT:
        while m % p == 0:
            pairs[p] = pairs.get(p, 0) + 1
            m //= p
        p += wheel[i]
        i = (i + 1) % 8

    stack = [m] if m > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            pairs[m] = pairs.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)

    result = tuple(sorted(pairs.items()))
    with _factor_lock:
        _factor_cache[n] = result
    return Factorization(n, result)


def euler_phi(n: int) -> int:
    phi = 1
    for p, e in factorize(n).pairs:
        phi *= (p - 1) * p ** (e - 1)
    return phi


def mobius(n: int) -> int:
    pairs = factorize(n).pairs
    if any(e > 1 for _, e in pairs):
        return 0
    return -1 if len(pairs) % 2 else 1


def tau(n: int) -> int:
    """Number of divisors."""
    t = 1
    for _, e in factorize(n).pairs:
        t *= e + 1
    return t


def divisors(n: int) -> list[int]:
    """All positive divisors of n, sorted."""
    divs = [1]
    for p, e in factorize(n).pairs:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def mult_order(a: int, q: int) -> int:
    """Smallest ell >= 1 with a**ell == 1 mod q.

    Reduces the group order phi(q) prime by prime instead of iterating
    powers, so q around 1e9 stays fast.
    """
    if q < 1:
        raise DomainError(f"mult_order: q must be >= 1, got {q}")
    if q == 1:
        return 1
    if math.gcd(a, q) != 1:
        raise DomainError(f"mult_order: gcd({a},{q}) != 1")
    order = euler_phi(q)
    for p, _ in factorize(order).pairs:
        while order % p == 0 and pow(a, order // p, q) == 1:
            order //= p
    return order


@lru_cache(maxsize=200_000)
def ell(q: int) -> int:
    """Period length of p/q in base 3: order of 3 mod the 3-free part of q."""
    if q < 1:
        raise DomainError(f"ell: q must be >= 1, got {q}")
    while q % 3 == 0:
        q //= 3
    return mult_order(3, q)


def primitive_count(length: int, a: int) -> int:
    """Words of the given length over an a-letter alphabet that are not a
    power of a shorter word (Mobius inversion over the divisor lattice)."""
    if length < 1:
        raise DomainError("primitive_count: length must be >= 1")
    return sum(mobius(length // d) * a**d for d in divisors(length))


def even_primitive_count(length: int, a: int = 3) -> int:
    """Primitive words whose value, read as a base-a number, is even."""
    if length < 1:
        raise DomainError("even_primitive_count: length must be >= 1")
    total = 0
    for d in divisors(length):
        k = length // d
        mu = mobius(k)
        if k % 2 == 0:
            total += mu * a**d
        else:
            total += mu * ((a**d + 1) // 2)
    return total


def round_half_away(x: Fraction) -> int:
    """Round to nearest integer, ties away from zero."""
    num, den = x.numerator, x.denominator
    if num >= 0:
        return (2 * num + den) // (2 * den)
    return -((-2 * num + den) // (2 * den))


def mlo(q: int) -> int:
    """Most likely value of the number of Cantor rationals with denominator q
    under the coset model: round(phi(q) * m(ell,2) / mbar(ell,3)).

    Returns 0 when q does not divide (3**ell - 1)/2, where the coset model
    predicts no Cantor rationals at all.
    """
    if q < 2:
        raise DomainError(f"mlo: q must be >= 2, got {q}")
    if q % 3 == 0:
        raise DomainError(f"mlo: q must not be divisible by 3, got {q}")
    lq = ell(q)
    # q | (3**l - 1)/2  <=>  3**l == 1 mod 2q  (3**l - 1 is always even)
    if pow(3, lq, 2 * q) != 1:
        return 0
    phi = euler_phi(q)
    if lq > 64:
        # m(l,2)/mbar(l,3) <= 2.2*(2/3)**l for l >= 10; far below rounding range.
        if phi * 2.2 * math.exp(lq * math.log(2 / 3)) < 0.499:
            return 0
    return round_half_away(
        Fraction(phi * primitive_count(lq, 2), even_primitive_count(lq, 3))
    )
