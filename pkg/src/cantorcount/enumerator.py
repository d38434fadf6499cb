"""Exact enumeration of Cantor rationals with a fixed denominator.

Two independent routes are provided:

* ``enumerate_by_algorithm1`` walks numerators p and tests the ternary
  digits of the periodic and preperiodic blocks of p/q.  The "mask"
  variant follows the mask/passlist bookkeeping step by step; the
  "simple" variant is the mathematically equivalent loop over p coprime
  to q, vectorized with numpy (three remainder steps per surviving p on
  average, so the cost is about 3q element operations).
* ``enumerate_by_words`` builds every candidate periodic word over the
  allowed digits and keeps the values whose reduced denominator is
  exactly q.  Cost 2**(ell+t), cheap precisely when Algorithm 1 is
  expensive.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .digitsys import TERNARY, DigitSystem
from .errors import BudgetError, DomainError
from .numtheory import ell, euler_phi, factorize, mlo, mult_order

DEFAULT_WORD_BUDGET = 1 << 27
_CHUNK = 1 << 22


@dataclass(frozen=True)
class CantorRational:
    """A reduced rational p/q on the Cantor set."""

    p: int
    q: int
    i0: int
    ell: int
    orbit_rep: int


@dataclass(frozen=True)
class DenominatorRecord:
    q: int
    ell: int
    phi: int
    n_q: int
    mlo: int
    method: str
    numerators: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.numerators is not None and len(self.numerators) != self.n_q:
            raise DomainError("numerator list length does not match n_q")
        if self.q % 3 != 0 and self.n_q > 0 and self.n_q % self.ell != 0:
            raise DomainError(
                f"record for q={self.q} violates ell | n_q ({self.ell} | {self.n_q})"
            )


def _split3(q: int) -> tuple[int, int]:
    t = 0
    while q % 3 == 0:
        q //= 3
        t += 1
    return t, q


def _make_record(q: int, numerators: list[int], method: str) -> DenominatorRecord:
    lq = ell(q)
    m = mlo(q) if q % 3 != 0 else 0
    return DenominatorRecord(
        q=q,
        ell=lq,
        phi=euler_phi(q),
        n_q=len(numerators),
        mlo=m,
        method=method,
        numerators=tuple(sorted(numerators)),
    )


# ---------------------------------------------------------------------------
# digit tests on integers


def _digits_ok(x: int, ndigits: int) -> bool:
    """True iff x, written with exactly ndigits ternary digits, uses only 0 and 2."""
    for _ in range(ndigits):
        if x % 3 == 1:
            return False
        x //= 3
    return x == 0


# ---------------------------------------------------------------------------
# Algorithm 1, mask variant (faithful bookkeeping)


def _orbit_and_reflections(p: int, q: int) -> set[int]:
    out = set()
    x = p
    while x not in out:
        out.add(x)
        out.add(q - x)
        if q % 3 == 0:
            break
        x = 3 * x % q
    return out


def _alg1_mask(q: int, t: int, q1: int, lq: int) -> list[int]:
    big = 3**lq - 1
    mask = bytearray(q)
    for pr in factorize(q).primes():
        for m in range(pr, q, pr):
            mask[m] = 1
    passlist: set[int] = set()
    for p in range(1, q):
        if mask[p] or p in passlist:
            continue
        big_t = p * big * 3**t // q  # integer: q1 | big and 3^t | 3^t
        a = big_t % big
        if a != 0:
            if _digits_ok(a, lq):
                s = (big_t - a) // big
                if _digits_ok(s, t):
                    passlist |= _orbit_and_reflections(p, q)
                else:
                    for m in _orbit_and_reflections(p, q):
                        mask[m % q] = 1
            # a-digit failure: the transcribed algorithm masks nothing here
        else:
            w = big_t // big
            if _digits_ok(w, t) or (w >= 1 and _digits_ok(w - 1, t)):
                passlist |= _orbit_and_reflections(p, q)
            else:
                for m in _orbit_and_reflections(p, q):
                    mask[m % q] = 1
    return sorted(x for x in passlist if 0 < x < q)


# ---------------------------------------------------------------------------
# Algorithm 1, simple variant (vectorized loop over coprime p)


def _coprime_chunk(lo: int, hi: int, primes: tuple[int, ...]) -> np.ndarray:
    p = np.arange(lo, hi, dtype=np.int64)
    keep = np.ones(p.shape, dtype=bool)
    for pr in primes:
        first = ((-lo) % pr + pr) % pr
        keep[first::pr] = False
    return p[keep]


def _alg1_simple(q: int, t: int, q1: int, lq: int) -> list[int]:
    primes = factorize(q).primes()
    members: list[int] = []
    if q1 == 1:
        # q = 3^t: terminating values; member iff digits of p or p-1 are all 0/2
        for p in range(1, q):
            if p % 3 == 0:
                continue
            if _digits_ok(p, t) or _digits_ok(p - 1, t):
                members.append(p)
        return members
    steps = t + lq
    for lo in range(1, q, _CHUNK):
        alive = _coprime_chunk(lo, min(lo + _CHUNK, q), primes)
        r = alive.copy()
        for _ in range(steps):
            if alive.size == 0:
                break
            r = r * 3
            d = r // q
            r = r - d * q
            good = d != 1  # base-3 digit is 0 or 2 iff quotient != 1
            alive = alive[good]
            r = r[good]
        members.extend(int(x) for x in alive)
    return members


def enumerate_by_algorithm1(q: int, variant: str = "simple") -> DenominatorRecord:
    """Enumerate Cantor rationals p/q by scanning numerators (ternary only)."""
    if q < 2:
        raise DomainError(f"enumerate_by_algorithm1: q must be >= 2, got {q}")
    if variant not in ("mask", "simple"):
        raise DomainError(f"unknown variant {variant!r}")
    t, q1 = _split3(q)
    lq = mult_order(3, q1) if q1 > 1 else 1
    if variant == "mask":
        numerators = _alg1_mask(q, t, q1, lq)
    else:
        numerators = _alg1_simple(q, t, q1, lq)
    return _make_record(q, numerators, "algorithm1")


# ---------------------------------------------------------------------------
# word-oracle enumeration


def _subset_sums(weights: list[int]) -> list[int]:
    sums = [0]
    for w in weights:
        sums += [s + w for s in sums]
    return sums


def _words_numpy(q: int, lq: int) -> list[int]:
    """Purely periodic case with 3**lq below int64 range, chunked over words."""
    big = 3**lq - 1
    d = big // q
    lo_bits = min(lq, 16)
    lo = np.array(_subset_sums([2 * 3**i for i in range(lo_bits)]), dtype=np.int64)
    hi = _subset_sums([2 * 3**i for i in range(lo_bits, lq)])
    members: list[int] = []
    for h in hi:
        vals = lo + h
        cand = vals[vals % d == 0] // d
        cand = cand[np.gcd(cand, q) == 1]
        members.extend(int(x) for x in cand)
    return [x for x in members if 0 < x < q]


def enumerate_by_words(
    q: int,
    budget: int = DEFAULT_WORD_BUDGET,
    system: DigitSystem = TERNARY,
) -> DenominatorRecord:
    """Independent oracle: enumerate periodic words over the allowed digits."""
    if q < 2:
        raise DomainError(f"enumerate_by_words: q must be >= 2, got {q}")
    b = system.base
    t = 0
    q1 = q
    while q1 % b == 0:
        q1 //= b
        t += 1
    lq = mult_order(b, q1) if q1 > 1 else 1
    nwords = len(system.allowed) ** (lq + t)
    if nwords > budget:
        raise BudgetError(
            f"word enumeration for q={q} needs {nwords} words, budget {budget}"
        )
    if t == 0 and b == 3 and system.allowed == frozenset({0, 2}) and b**lq < 1 << 62:
        return _make_record(q, _words_numpy(q, lq), "word_oracle")

    big = b**lq - 1
    big_q = b**t * big
    d, rem = divmod(big_q, q)
    if rem:  # cannot happen for a valid (t, lq)
        raise DomainError(f"q={q} does not divide {big_q}")
    digits = sorted(system.allowed)
    members = set()
    period_vals = [
        sum(dig * b**i for i, dig in enumerate(word))
        for word in itertools.product(digits, repeat=lq)
    ]
    pre_vals = [
        sum(dig * b**i for i, dig in enumerate(word))
        for word in itertools.product(digits, repeat=t)
    ]
    for s in pre_vals:
        base_p = s * big
        for a in period_vals:
            big_p = base_p + a
            if big_p % d == 0:
                p = big_p // d
                if 0 < p < q and math.gcd(p, q) == 1:
                    members.add(p)
    return _make_record(q, sorted(members), "word_oracle")


# ---------------------------------------------------------------------------


def enumerate_denominator(
    q: int,
    method: str = "auto",
    budget: int = DEFAULT_WORD_BUDGET,
) -> DenominatorRecord:
    """Enumerate with automatic method selection (words when cheaper)."""
    if method == "alg1":
        return enumerate_by_algorithm1(q)
    if method == "words":
        return enumerate_by_words(q, budget=budget)
    if method != "auto":
        raise DomainError(f"unknown method {method!r}")
    t, q1 = _split3(q)
    lq = mult_order(3, q1) if q1 > 1 else 1
    word_cost = (1 << (lq + t)) * (lq + t)
    if word_cost < q and (1 << (lq + t)) <= budget:
        return enumerate_by_words(q, budget=budget)
    return enumerate_by_algorithm1(q)


def has_cantor_rational(q: int) -> bool:
    """Early-exit test for n_q > 0 (ternary), without full enumeration."""
    if q < 2:
        raise DomainError(f"has_cantor_rational: q must be >= 2, got {q}")
    t, q1 = _split3(q)
    lq = mult_order(3, q1) if q1 > 1 else 1
    if q1 == 1:
        return True  # 1/3^t terminates in digits 0..01, variant 0..0222 works? see below
    primes = factorize(q).primes()
    steps = t + lq
    for lo in range(1, q, _CHUNK):
        alive = _coprime_chunk(lo, min(lo + _CHUNK, q), primes)
        r = alive.copy()
        survived = True
        for _ in range(steps):
            if alive.size == 0:
                survived = False
                break
            r = r * 3
            d = r // q
            r = r - d * q
            good = d != 1
            alive = alive[good]
            r = r[good]
        if survived and alive.size:
            return True
    return False


def orbit_decomposition(record: DenominatorRecord) -> list[tuple[int, ...]]:
    """Partition the numerators into orbits under multiplication by 3 mod q."""
    if record.q % 3 == 0:
        raise DomainError("orbit decomposition requires 3 coprime to q")
    if record.numerators is None:
        raise DomainError("record carries no numerator list")
    q = record.q
    seen: set[int] = set()
    orbits = []
    for p in record.numerators:
        if p in seen:
            continue
        orbit = []
        x = p
        while x not in seen:
            seen.add(x)
            orbit.append(x)
            x = 3 * x % q
        orbits.append(tuple(sorted(orbit)))
    return orbits


def cantor_rationals(record: DenominatorRecord) -> list[CantorRational]:
    """Expand a record into typed Cantor rationals with orbit identifiers."""
    if record.numerators is None:
        raise DomainError("record carries no numerator list")
    t, _ = _split3(record.q)
    rep: dict[int, int] = {}
    if record.q % 3 != 0:
        for orbit in orbit_decomposition(record):
            for p in orbit:
                rep[p] = orbit[0]
    else:
        rep = {p: p for p in record.numerators}
    return [
        CantorRational(p=p, q=record.q, i0=t, ell=record.ell, orbit_rep=rep[p])
        for p in record.numerators
    ]
