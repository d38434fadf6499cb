"""Base-b digit arithmetic for missing-digit sets.

Digit strings are most-significant-first ASCII digits. The canonical
expansion of a rational in [0,1] is preperiod + repeating period, with the
terminating case written as period "0" (so 1/3 is preperiod "1", period "0").
The value 1 is the reserved expansion ONE (preperiod "1", empty period).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .numtheory import mult_order


@dataclass(frozen=True)
class DigitSystem:
    """Base b with an allowed digit subset defining a missing-digit set."""

    base: int = 3
    allowed: frozenset[int] = frozenset({0, 2})

    def __post_init__(self):
        if self.base < 3:
            raise DomainError(f"base must be >= 3, got {self.base}")
        if not isinstance(self.allowed, frozenset):
            object.__setattr__(self, "allowed", frozenset(self.allowed))
        if not self.allowed or len(self.allowed) >= self.base:
            raise DomainError("allowed digits must be a proper nonempty subset")
        if any(d < 0 or d >= self.base for d in self.allowed):
            raise DomainError("allowed digits out of range")

    @property
    def dimension(self) -> float:
        return math.log(len(self.allowed)) / math.log(self.base)

    def tag(self) -> str:
        return "b=%d,F=%s" % (self.base, ",".join(str(d) for d in sorted(self.allowed)))

    @classmethod
    def from_tag(cls, tag: str) -> "DigitSystem":
        parts = dict(kv.split("=") for kv in tag.split(",", 1))
        base = int(parts["b"])
        digits = frozenset(int(x) for x in parts["F"].split(","))
        return cls(base, digits)


TERNARY = DigitSystem()


@dataclass(frozen=True)
class PeriodicExpansion:
    """Canonical eventually periodic expansion: 0.<preperiod><period><period>..."""

    preperiod: str
    period: str
    base: int = 3

    def __post_init__(self):
        if self is not ONE and not self.period:
            if not (self.preperiod == "1" and self.base == 3):
                raise DomainError("period must be nonempty")

    @property
    def i0(self) -> int:
        return len(self.preperiod)

    @property
    def ell(self) -> int:
        return len(self.period)

    def digits(self) -> str:
        return self.preperiod + self.period

    def __str__(self):
        if not self.period:
            return "1"
        return "0.%s(%s)" % (self.preperiod, self.period)


# The value 1 = 0.(b-1)(b-1)... has no canonical form with period != all-(b-1);
# it is stored as this reserved sentinel.
ONE = PeriodicExpansion.__new__(PeriodicExpansion)
object.__setattr__(ONE, "preperiod", "1")
object.__setattr__(ONE, "period", "")
object.__setattr__(ONE, "base", 3)


def _long_division_digits(p: int, q: int, base: int, count: int) -> str:
    out = []
    r = p
    for _ in range(count):
        r *= base
        out.append(r // q)
        r %= q
    return "".join(str(d) for d in out)


def expansion_of_rational(p: int, q: int, base: int = 3) -> PeriodicExpansion:
    """Canonical eventually periodic base-b expansion of p/q in [0,1]."""
    if q < 1 or p < 0 or p > q:
        raise DomainError(f"expansion_of_rational: need 0 <= p <= q >= 1, got {p}/{q}")
    if math.gcd(p, q) != 1:
        raise DomainError(f"expansion_of_rational: {p}/{q} is not reduced")
    if p == q:
        return ONE
    t = 0
    q1 = q
    while q1 % base == 0:
        q1 //= base
        t += 1
    if q1 == 1:
        # terminating: p/q = 0.d1..dt, canonical period "0"
        return PeriodicExpansion(_long_division_digits(p, q, base, t), "0", base)
    period_len = mult_order(base, q1)
    digits = _long_division_digits(p, q, base, t + period_len)
    return PeriodicExpansion(digits[:t], digits[t:], base)


def value_of_expansion(e: PeriodicExpansion) -> tuple[int, int, int, int]:
    """Return (P, Q, p, q): the unreduced value P/Q with Q = b^i0 (b^ell - 1),
    and its reduced form."""
    if e is ONE:
        return (1, 1, 1, 1)
    b = e.base
    i0, lp = e.i0, e.ell
    s = int(e.preperiod, b) if e.preperiod else 0
    a = int(e.period, b)
    big_q = b**i0 * (b**lp - 1)
    big_p = s * (b**lp - 1) + a
    g = math.gcd(big_p, big_q) if big_p else big_q
    return (big_p, big_q, big_p // g if big_p else 0, big_q // g if big_p else 1)


def is_primitive(word: str) -> bool:
    """True iff word is not a concatenation of >= 2 copies of a shorter block."""
    if not word:
        raise DomainError("is_primitive: empty word")
    n = len(word)
    for k in range(1, n):
        if n % k == 0 and word[: n - k] == word[k:]:
            return False
    return True


def is_member(e: PeriodicExpansion, system: DigitSystem = TERNARY) -> bool:
    """Membership of the expansion's value in the missing-digit set.

    True iff some base-b representation has all digits allowed: the canonical
    one, or for terminating values the trailing-(b-1) variant
    (e.g. 1/3 = 0.1 = 0.0222... is a member of the ternary set).
    """
    allowed = system.allowed
    b = system.base
    if e is ONE:
        return (b - 1) in allowed  # 1 = 0.(b-1)(b-1)...
    if e.base != b:
        raise DomainError("expansion base does not match digit system")
    if all(int(d) in allowed for d in e.digits()):
        return True
    if e.period == "0" and e.preperiod:
        # terminating value: try 0.d1..(dk - 1) followed by repeating b-1
        if (b - 1) not in allowed:
            return False
        digs = [int(d) for d in e.preperiod]
        digs[-1] -= 1
        if digs[-1] < 0:
            return False
        return all(d in allowed for d in digs)
    return False


def rational_in_set(p: int, q: int, system: DigitSystem = TERNARY) -> bool:
    """Convenience: membership test for a reduced rational."""
    return is_member(expansion_of_rational(p, q, system.base), system)
