"""Word symmetries that inflate the number of Cantor rationals for special
denominators: the swap concatenation w -> w w~ (denominators dividing 3^r + 1)
and its padded forms w w~ 000..  /  w w~ 222..  (denominators dividing
3^{2r} + 3^r + 1).  Here w~ swaps the digits 0 and 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional

from .errors import BudgetError, DomainError
from .numtheory import euler_phi, mlo, round_half_away

KINDS = ("omega_bar", "omega_bar_padded")


@dataclass(frozen=True)
class SymmetryFamily:
    kind: str  # "omega_bar": words w w~ of length 2r; "omega_bar_padded": w w~ 0^r and w w~ 2^r
    r: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown symmetry kind {self.kind!r}")
        if self.r < 1:
            raise DomainError("r must be >= 1")

    @property
    def target_q(self) -> int:
        if self.kind == "omega_bar":
            return 3**self.r + 1
        return 3 ** (2 * self.r) + 3**self.r + 1

    @property
    def word_length(self) -> int:
        return 2 * self.r if self.kind == "omega_bar" else 3 * self.r


def _swap(word: str) -> str:
    return word.translate(str.maketrans("02", "20"))


def _cyclic_shifts(word: str) -> set[str]:
    return {word[i:] + word[:i] for i in range(len(word))}


def generate_words(family: SymmetryFamily, budget: int = 1 << 24) -> set[str]:
    """All words of the family's shape, closed under cyclic shifts."""
    r = family.r
    raw = (2 ** (r + 1)) * family.word_length
    if raw > budget:
        raise BudgetError(f"symmetry words for r={r} exceed budget {budget}")
    words: set[str] = set()
    for bits in product("02", repeat=r):
        w = "".join(bits)
        if family.kind == "omega_bar":
            base_words = [w + _swap(w)]
        else:
            base_words = [w + _swap(w) + "0" * r, w + _swap(w) + "2" * r]
        for bw in base_words:
            words |= _cyclic_shifts(bw)
    return words


@dataclass(frozen=True)
class SymmetryCensus:
    r: int
    q: int
    n_q: Optional[int]
    x: int  # words of the special shape, shifts included
    y_floor: int  # floor(x * phi(q)/q), the printed convention
    y_round: int
    z: int  # words whose value reduces to denominator exactly q


def census(
    family: SymmetryFamily,
    n_q: Optional[int] = None,
    budget: int = 1 << 24,
) -> SymmetryCensus:
    """Count the family's words and how many land on denominator target_q."""
    q = family.target_q
    words = generate_words(family, budget=budget)
    x = len(words)
    length = family.word_length
    big = 3**length - 1
    z = 0
    for w in words:
        val = int(w, 3)
        g = math.gcd(val, big) if val else big
        if big // g == q:
            z += 1
    phi = euler_phi(q)
    return SymmetryCensus(
        r=family.r,
        q=q,
        n_q=n_q,
        x=x,
        y_floor=x * phi // q,
        y_round=round_half_away(Fraction(x * phi, q)),
        z=z,
    )


@dataclass(frozen=True)
class CorrectedPrediction:
    r: int
    q: int
    n_q: int
    mlo: int
    ratio: Optional[float]  # N_q / MLO(q)
    corrected: Optional[float]  # (2/3)^r * N_q / MLO(q)


def corrected_prediction(r: int, n_q: int) -> CorrectedPrediction:
    """The (3/2)^r correction for q = 3^r + 1 denominators."""
    q = 3**r + 1
    m = mlo(q)
    if m == 0:
        return CorrectedPrediction(r, q, n_q, 0, None, None)
    ratio = n_q / m
    return CorrectedPrediction(r, q, n_q, m, ratio, (2 / 3) ** r * ratio)
