"""Large-``n`` Beta law for the fraction of particles left in a level.

After drawing ``N_1, ..., N_k`` bosons from an equal-weight ensemble, the
fraction ``R`` of the remaining particles in level 1 tends to a Beta
distribution with parameters ``nu1 = N_1 + 1`` and
``nu_rest = N_2 + ... + N_k + (k - 1)``.  Both parameters are integers, so
the Beta function and every moment are exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .ensemble import DrawRecord, condition_on_record, level_marginal, prepare_equal_weight
from .fock import BOSE_EINSTEIN


def beta_function(x: int, y: int) -> Fraction:
    """``B(x, y) = (x-1)! (y-1)! / (x+y-1)!`` for positive integers."""
    if x < 1 or y < 1:
        raise ValueError(f"integer Beta parameters must be positive, got ({x}, {y})")
    return Fraction(math.factorial(x - 1) * math.factorial(y - 1), math.factorial(x + y - 1))


@dataclass(frozen=True)
class BetaPosterior:
    nu1: int
    nu_rest: int

    def __post_init__(self):
        if self.nu1 < 1 or self.nu_rest < 1:
            raise ValueError(f"Beta parameters must be >= 1, got ({self.nu1}, {self.nu_rest})")

    @classmethod
    def from_record(cls, record: DrawRecord | Sequence[int], level: int = 0) -> "BetaPosterior":
        """Parameters for the fraction in ``level`` given the observed draws."""
        counts = record.counts if isinstance(record, DrawRecord) else tuple(record)
        k = len(counts)
        if k < 2:
            raise ValueError("the Beta law needs at least two levels")
        nu1 = counts[level] + 1
        nu_rest = sum(counts) - counts[level] + (k - 1)
        return cls(nu1, nu_rest)


def beta_density(bp: BetaPosterior, r: float) -> float:
    """Beta density at ``r``; endpoints follow ``0**0 == 1``."""
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"R={r} outside [0, 1]")
    norm = 1 / beta_function(bp.nu1, bp.nu_rest)
    return float(norm) * r ** (bp.nu1 - 1) * (1.0 - r) ** (bp.nu_rest - 1)


def beta_mean(bp: BetaPosterior) -> Fraction:
    return Fraction(bp.nu1, bp.nu1 + bp.nu_rest)


def beta_moment(bp: BetaPosterior, p: int) -> Fraction:
    """Raw moment ``E[R**p] = prod_{i<p} (nu1+i) / (nu1+nu_rest+i)``."""
    if p < 1:
        raise ValueError(f"moment order must be positive, got {p}")
    out = Fraction(1)
    for i in range(p):
        out *= Fraction(bp.nu1 + i, bp.nu1 + bp.nu_rest + i)
    return out


def exact_remaining_distribution(k: int, n: int, record: DrawRecord | Sequence[int], level: int = 0) -> dict[int, Fraction]:
    """Exact law of the count left in ``level`` after ``record``, bosons, all counts ``0..n-n'``."""
    if not isinstance(record, DrawRecord):
        record = DrawRecord(tuple(record))
    post = condition_on_record(prepare_equal_weight(k, n, BOSE_EINSTEIN), record)
    marginal = level_marginal(post, level)
    return {m: marginal.get(m, Fraction(0)) for m in range(post.n + 1)}


def finite_n_deviation(k: int, n: int, record: DrawRecord | Sequence[int], level: int = 0) -> float:
    """Sup distance between the scaled exact posterior and the Beta density.

    Each exact point mass ``P(m)`` on ``R = m / N`` (``N = n - n'``
    remaining) is spread over a bin of width ``1 / (N + 1)``, giving the
    density estimate ``(N + 1) P(m)``.
    """
    if not isinstance(record, DrawRecord):
        record = DrawRecord(tuple(record))
    remaining = n - record.total
    if remaining < 1:
        raise ValueError("no particles remain after the draws")
    bp = BetaPosterior.from_record(record, level)
    dist = exact_remaining_distribution(k, n, record, level)
    worst = 0.0
    for m, p in dist.items():
        scaled = (remaining + 1) * p
        gap = abs(float(scaled) - beta_density(bp, m / remaining))
        worst = max(worst, gap)
    return worst
