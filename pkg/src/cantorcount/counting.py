"""Window counts over the record database and the ell-hat record scan.

The window I_T is the integer interval (1-c)T < q <= T (half-open at the
low end so adjacent geometric windows tile without double counting);
c = 0 degenerates to the single denominator q = T.  Starred variants are
cumulative over 0 < q <= T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .enumerator import DenominatorRecord, has_cantor_rational
from .errors import BudgetError, CoverageError, DomainError
from .numtheory import divisors, ell, factorize, mult_order, tau

LOG3 = math.log(3)

# Counts contributed by the unit denominator (the values 0 and 1, both on
# the set and both purely periodic).  The paper never says whether they are
# counted; both conventions are supported via include_unit.
UNIT_COUNT = 2


@dataclass(frozen=True)
class Window:
    c: float
    t: int

    def __post_init__(self):
        if not (0 <= self.c < 1):
            raise DomainError(f"window parameter c must be in [0,1), got {self.c}")
        if self.t < 1:
            raise DomainError("threshold T must be >= 1")

    def q_range(self) -> range:
        if self.c == 0:
            return range(self.t, self.t + 1)
        lo = math.floor((1 - self.c) * self.t)  # first q is lo+1: (1-c)T < q
        return range(lo + 1, self.t + 1)


def _n_q(q: int, counts: Mapping[int, int], what: str) -> int:
    if q not in counts:
        raise CoverageError(f"{what}: no stored record for q={q}")
    return counts[q]


def _counts(records) -> Mapping[int, int]:
    if records and isinstance(next(iter(records.values())), DenominatorRecord):
        return {q: r.n_q for q, r in records.items()}
    return records


def n_tilde(t: int, c: float, records, include_unit: bool = True) -> int:
    """Purely periodic count over the window: sum of n_q, q in I_T, 3 not | q."""
    counts = _counts(records)
    total = 0
    for q in Window(c, t).q_range():
        if q == 1:
            total += UNIT_COUNT if include_unit else 0
        elif q % 3 != 0:
            total += _n_q(q, counts, "n_tilde")
    return total


def n_full(t: int, c: float, records, include_unit: bool = True) -> int:
    """Window count over all q, preperiodic included."""
    counts = _counts(records)
    total = 0
    for q in Window(c, t).q_range():
        if q == 1:
            total += UNIT_COUNT if include_unit else 0
        else:
            total += _n_q(q, counts, "n_full")
    return total


def n_tilde_star(t: int, records, include_unit: bool = True) -> int:
    counts = _counts(records)
    total = UNIT_COUNT if include_unit else 0
    for q in range(2, t + 1):
        if q % 3 != 0:
            total += _n_q(q, counts, "n_tilde_star")
    return total


def n_star(t: int, records, include_unit: bool = True) -> int:
    counts = _counts(records)
    total = UNIT_COUNT if include_unit else 0
    for q in range(2, t + 1):
        total += _n_q(q, counts, "n_star")
    return total


def l_set(length: int, t: int, c: float, factor_budget_bits: int = 256) -> set[int]:
    """L(ell,T): denominators in the window whose period is exactly `length`,
    found among the divisors of 3**length - 1."""
    if length < 1:
        raise DomainError("l_set: length must be >= 1")
    n = 3**length - 1
    if n.bit_length() > factor_budget_bits:
        raise BudgetError(f"factoring 3^{length}-1 exceeds budget")
    window = Window(c, t).q_range()
    out = set()
    for d in divisors(n):
        if d in window and d > 1 and mult_order(3, d) == length:
            out.add(d)
    assert len(out) <= tau(n)
    return out


# ---------------------------------------------------------------------------
# ell-hat record scan


@dataclass(frozen=True)
class EllHatRecord:
    q: int
    ell_hat: int
    ratio: float


def _repunit_values(q_max: int) -> set[int]:
    out: set[int] = set()
    r = 1
    while 3**r + 1 <= q_max:
        v = 3**r + 1
        k = 2
        while v <= q_max:
            out.add(v)
            k += 1
            v += 3 ** ((k - 1) * r)
        r += 1
    return out


def is_symmetric_denominator(q: int) -> bool:
    """Denominators whose Cantor rationals come from the swap/padded word
    symmetries: exact values (3^{kr}-1)/(3^r-1), and divisors of 3^r + 1 for
    odd r (every member word is then w w~ with w of odd length).  The
    divisor condition is equivalent to ell(q) == 2 mod 4 with
    3^(ell/2) == -1 mod q.  These q are skipped by the published record scan.
    """
    if q in _repunit_values(q):
        return True
    lq = ell(q)
    return lq % 4 == 2 and pow(3, lq // 2, q) == q - 1


def symmetric_denominators(q_max: int) -> set[int]:
    out = _repunit_values(q_max)
    for q in range(2, q_max + 1):
        lq = ell(q)
        if lq % 4 == 2 and pow(3, lq // 2, q) == q - 1:
            out.add(q)
    return out


def ell_hat_scan(
    q_max: int,
    skip_symmetric: bool = True,
    existence=has_cantor_rational,
) -> list[EllHatRecord]:
    """Record-setting denominators for ell_hat(q)/log3(q).

    Emits q whenever the ratio strictly exceeds every prior nonzero ratio;
    existence of a Cantor rational (ell_hat nonzero) is only checked when the
    ratio would set a record.  With skip_symmetric, denominators of the
    repunit families are left out, matching the published table.
    """
    skip = symmetric_denominators(q_max) if skip_symmetric else set()
    best = 0.0
    out: list[EllHatRecord] = []
    for q in range(2, q_max + 1):
        if q in skip:
            continue
        lq = ell(q)
        ratio = lq / (math.log(q) / LOG3)
        if ratio > best and existence(q):
            best = ratio
            out.append(EllHatRecord(q=q, ell_hat=lq, ratio=ratio))
    return out


def max_ratio(q_max: int, skip_symmetric: bool = True) -> float:
    records = ell_hat_scan(q_max, skip_symmetric=skip_symmetric)
    return records[-1].ratio if records else 0.0
