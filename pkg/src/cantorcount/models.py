"""Deterministic predictors F(T), M(T) and seeded Monte-Carlo simulation of
the two independence models for Cantor rationals.

Model "star" treats every reduced p/q (3 not | q) as independently on the
set with probability (2/3)^ell(q), so N_q ~ Binomial(phi(q), (2/3)^ell).
Model "double_star" keeps the multiply-by-3 orbit structure: each of the
phi(q)/ell(q) cosets is present independently with probability
m(ell,2)/m_bar(ell,3) and contributes ell(q) rationals, and only
denominators with q | (3^ell - 1)/2 can occur at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from .counting import LOG3, Window, l_set, n_tilde
from .errors import BudgetError, DomainError
from .numtheory import (
    ell,
    euler_phi,
    even_primitive_count,
    primitive_count,
    round_half_away,
)

DIMENSION = math.log(2) / LOG3


# ---------------------------------------------------------------------------
# grids


def geometric_grid(c: float, t_max: int, t_min: int = 2) -> list[int]:
    """Thresholds T_k = round((1+c)^k) in [t_min, t_max], deduplicated."""
    if not (0 < c < 1):
        raise DomainError(f"geometric grid needs 0 < c < 1, got {c}")
    out: list[int] = []
    k = 1
    while (t := round((1 + c) ** k)) <= t_max:
        if t >= t_min and (not out or t != out[-1]):
            out.append(t)
        k += 1
    return out


def linear_grid(t_max: int, step: int, t_min: int = 2) -> list[int]:
    if step < 1:
        raise DomainError("grid step must be >= 1")
    return list(range(t_min, t_max + 1, step))


# ---------------------------------------------------------------------------
# deterministic predictors


def f_single(q: int) -> int:
    """round((2/3)^ell(q) * 2 * phi(q)), exactly."""
    if q < 2 or q % 3 == 0:
        raise DomainError(f"f_single needs q >= 2 with 3 not | q, got {q}")
    lq = ell(q)
    phi = euler_phi(q)
    if lq > 64 and 2 * phi * math.exp(lq * math.log(2 / 3)) < 0.499:
        return 0
    return round_half_away(Fraction(2**lq * 2 * phi, 3**lq))


def f_series(grid: Sequence[int], c: float) -> list[int]:
    """F(T) = sum of f_single(q) over q in I_T with 3 not | q."""
    return [
        sum(f_single(q) for q in Window(c, t).q_range() if q > 1 and q % 3 != 0)
        for t in grid
    ]


def m_series(grid: Sequence[int], c: float) -> list[int]:
    """M(T) = sum of MLO(q) over the window (mlo is 0 where inapplicable)."""
    from .numtheory import mlo

    return [
        sum(mlo(q) for q in Window(c, t).q_range() if q > 1 and q % 3 != 0)
        for t in grid
    ]


@dataclass(frozen=True)
class CountSeries:
    c: float
    grid: tuple[int, ...]
    n_tilde: tuple[int, ...]
    f: tuple[int, ...]
    m: tuple[int, ...]
    ratio_f: tuple[Optional[float], ...]
    ratio_m: tuple[Optional[float], ...]

    def rows(self):
        for i, t in enumerate(self.grid):
            yield (t, self.n_tilde[i], self.f[i], self.m[i],
                   self.ratio_m[i], self.ratio_f[i])


def count_series(
    grid: Sequence[int],
    c: float,
    records: Mapping,
    include_unit: bool = True,
) -> CountSeries:
    """True window counts next to both predictors, with ratio columns."""
    nt = [n_tilde(t, c, records, include_unit=include_unit) for t in grid]
    f = f_series(grid, c)
    m = m_series(grid, c)
    ratio_f = [fi / ni if ni else None for fi, ni in zip(f, nt)]
    ratio_m = [mi / ni if ni else None for mi, ni in zip(m, nt)]
    return CountSeries(
        c=c,
        grid=tuple(grid),
        n_tilde=tuple(nt),
        f=tuple(f),
        m=tuple(m),
        ratio_f=tuple(ratio_f),
        ratio_m=tuple(ratio_m),
    )


# ---------------------------------------------------------------------------
# heuristic expectation sums


def lambda_cutoff(d: float = DIMENSION) -> float:
    return (2 - d) / (1 - d)


@dataclass(frozen=True)
class HeuristicExpectation:
    t: int
    c: float
    exact: float  # sum of phi(q) (2/3)^ell(q) over the window
    truncated: float  # T * sum of #L(ell,T) (2/3)^ell over the central ell range
    tau_majorant: float  # same sum with the divisor-count upper bound
    ell_lo: int
    ell_hi: int
    warnings: tuple[str, ...] = ()


def heuristic_expectation(
    t: int,
    c: float,
    factor_budget_bits: int = 512,
) -> HeuristicExpectation:
    """Expected window count under model "star", three ways.

    The exact sum runs over every q in the window.  The truncated form
    groups q by period length ell and keeps only ell between
    log3(T) + log3(1-c) and lambda*log3(T) with lambda = (2-d)/(1-d) --
    periods outside this range contribute o(T^d).  The majorant replaces
    #L(ell,T) by the divisor-count bound 2^(log n / log log n) for
    n = 3^ell - 1.
    """
    if t < 2:
        raise DomainError("heuristic_expectation needs T >= 2")
    exact = 0.0
    for q in Window(c, t).q_range():
        if q > 1 and q % 3 != 0:
            exact += euler_phi(q) * (2 / 3) ** ell(q)

    log3t = math.log(t) / LOG3
    c_prime = math.log(1 - c) / LOG3 if c > 0 else 0.0
    ell_lo = max(1, math.ceil(log3t + c_prime))
    ell_hi = math.floor(lambda_cutoff() * log3t)
    truncated = 0.0
    tau_majorant = 0.0
    warnings: list[str] = []
    for length in range(ell_lo, ell_hi + 1):
        weight = (2 / 3) ** length
        try:
            truncated += len(l_set(length, t, c, factor_budget_bits)) * weight
        except BudgetError:
            warnings.append(f"ell={length}: factoring 3^ell-1 over budget, term dropped")
        logn = length * LOG3  # log(3^ell - 1) up to a negligible error
        tau_majorant += 2 ** (logn / math.log(logn)) * weight
    return HeuristicExpectation(
        t=t,
        c=c,
        exact=exact,
        truncated=t * truncated,
        tau_majorant=t * tau_majorant,
        ell_lo=ell_lo,
        ell_hi=ell_hi,
        warnings=tuple(warnings),
    )


# ---------------------------------------------------------------------------
# simulation

MODELS = ("star", "double_star")


@dataclass(frozen=True)
class SimulationConfig:
    model: str
    seed: int
    trials: int
    q: Optional[int] = None  # single denominator ...
    c: Optional[float] = None  # ... or a window (c, t)
    t: Optional[int] = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise DomainError(f"unknown model {self.model!r}")
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if (self.q is None) == (self.t is None):
            raise DomainError("exactly one of q or (c, t) must be given")
        if self.t is not None and self.c is None:
            raise DomainError("window simulation needs c")

    def denominators(self) -> list[int]:
        if self.q is not None:
            if self.q < 2 or self.q % 3 == 0:
                raise DomainError(f"simulated q must be >= 2 with 3 not | q, got {self.q}")
            return [self.q]
        return [q for q in Window(self.c, self.t).q_range() if q > 1 and q % 3 != 0]


def _star_probability(lq: int) -> float:
    return (2 / 3) ** lq


def _coset_probability(lq: int) -> float:
    return min(1.0, primitive_count(lq, 2) / even_primitive_count(lq, 3))


def simulate(config: SimulationConfig) -> np.ndarray:
    """Draw `trials` samples of N_q (or the window sum) under the model.

    Each denominator gets its own child stream spawned from the seed, so the
    output is independent of the order or chunking of the q loop.
    """
    qs = config.denominators()
    out = np.zeros(config.trials, dtype=np.int64)
    streams = np.random.SeedSequence(config.seed).spawn(len(qs))
    for q, ss in zip(qs, streams):
        rng = np.random.default_rng(ss)
        lq = ell(q)
        phi = euler_phi(q)
        if config.model == "star":
            out += rng.binomial(phi, _star_probability(lq), size=config.trials)
        else:
            if pow(3, lq, 2 * q) != 1:  # q does not divide (3^ell - 1)/2
                continue
            cosets = phi // lq
            out += lq * rng.binomial(
                cosets, _coset_probability(lq), size=config.trials
            )
    return out


def simulated_mean(config: SimulationConfig) -> float:
    """Analytic mean of the simulated distribution (for calibration)."""
    total = 0.0
    for q in config.denominators():
        lq = ell(q)
        phi = euler_phi(q)
        if config.model == "star":
            total += phi * _star_probability(lq)
        elif pow(3, lq, 2 * q) == 1:
            total += lq * (phi // lq) * _coset_probability(lq)
    return total


# ---------------------------------------------------------------------------
# tail check


@dataclass(frozen=True)
class TailCheckRow:
    k: int
    t: int
    threshold: float  # T^(d+eps)
    mean_small_ell: float  # expectation from ell <= lambda*log3(T)
    mean_large_ell: float
    bound: float  # Markov majorant min(1, E[X]/threshold)
    empirical: float
    sigma: float
    within_bound: bool
    skipped: bool = False
    note: str = ""


def tail_check(
    k_max: int,
    c: float = 0.5,
    eps: float = 0.3,
    trials: int = 10_000,
    seed: int = 0,
    d: float = DIMENSION,
) -> list[TailCheckRow]:
    """Empirical exceedance P(X_k >= T_k^(d+eps)) under model "star" against
    the Markov majorant, along the subsequence T_k = round((1+c)^k).

    The expectation is split at ell_0 = lambda*log3(T): short periods carry
    the main term, long periods the tail.
    """
    if trials < 1:
        raise DomainError("tail_check needs trials >= 1")
    if not (0 < c < 1):
        raise DomainError("tail_check needs 0 < c < 1")
    rows: list[TailCheckRow] = []
    for k in range(1, k_max + 1):
        t = round((1 + c) ** k)
        if t < 2:
            continue
        threshold = t ** (d + eps)
        ell_0 = lambda_cutoff(d) * math.log(t) / LOG3
        mean_small = mean_large = 0.0
        for q in Window(c, t).q_range():
            if q > 1 and q % 3 != 0:
                lq = ell(q)
                term = euler_phi(q) * (2 / 3) ** lq
                if lq <= ell_0:
                    mean_small += term
                else:
                    mean_large += term
        bound = min(1.0, (mean_small + mean_large) / threshold)
        if eps <= 0:
            rows.append(TailCheckRow(
                k=k, t=t, threshold=threshold,
                mean_small_ell=mean_small, mean_large_ell=mean_large,
                bound=1.0, empirical=float("nan"), sigma=0.0,
                within_bound=True, skipped=True,
                note="eps <= 0: Markov bound is trivial, check skipped",
            ))
            continue
        samples = simulate(SimulationConfig(
            model="star", seed=seed + k, trials=trials, c=c, t=t,
        ))
        empirical = float(np.mean(samples >= threshold))
        sigma = math.sqrt(max(bound * (1 - bound), 1.0 / trials) / trials)
        rows.append(TailCheckRow(
            k=k, t=t, threshold=threshold,
            mean_small_ell=mean_small, mean_large_ell=mean_large,
            bound=bound, empirical=empirical, sigma=sigma,
            within_bound=empirical <= bound + 3 * sigma,
        ))
    return rows
