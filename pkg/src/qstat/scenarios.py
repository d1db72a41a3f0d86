"""Named scenarios: coins, crib, day care and dice.

Each answer exists twice, as a closed form and as a run through the generic
ensemble machinery.  The duplication is deliberate; tests check the two
against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .asymptotics import BetaPosterior, beta_function
from .ensemble import (
    DrawRecord,
    condition_on_draw,
    condition_on_presence,
    condition_on_record,
    expectation_fraction,
    fraction_distribution,
    level_marginal,
    prepare_equal_weight,
)
from .fock import BOSE_EINSTEIN, CLASSICAL, FERMI_DIRAC, StatisticsKind

BOY, GIRL = 0, 1


def all_same_state_probability(k: int, n: int, stats: StatisticsKind | str) -> Fraction:
    """Probability that all ``n`` particles share level 1, in closed form."""
    stats = StatisticsKind.parse(stats)
    if k < 1 or n < 0:
        raise ValueError(f"need k >= 1 and n >= 0, got k={k}, n={n}")
    if stats is CLASSICAL:
        return Fraction(1, k**n)
    if stats is FERMI_DIRAC and n > 1:
        return Fraction(0)
    return Fraction(1, math.comb(k + n - 1, n))


def all_same_state_probability_pipeline(k: int, n: int, stats: StatisticsKind | str) -> Fraction:
    stats = StatisticsKind.parse(stats)
    if stats is FERMI_DIRAC and n > k:
        return Fraction(0)
    e = prepare_equal_weight(k, n, stats)
    return e.probability((n,) + (0,) * (k - 1))


def crib_answers(stats: StatisticsKind | str) -> dict[str, Fraction]:
    """Two children, boy/girl levels.

    Question I: one child, picked at random, is a boy; chance the other is
    a boy too.  Question II: at least one is a boy; chance both are.
    Fermionic children make both answers zero rather than an error.
    """
    stats = StatisticsKind.parse(stats)
    prior = prepare_equal_weight(2, 2, stats)
    after_draw, _ = condition_on_draw(prior, BOY)
    q1 = after_draw.probability((1, 0))
    at_least_one = condition_on_presence(prior, BOY, 1)
    q2 = at_least_one.probability((2, 0))
    return {"question_I": q1, "question_II": q2}


def crib_answers_closed_form(stats: StatisticsKind | str) -> dict[str, Fraction]:
    p_bb = all_same_state_probability(2, 2, stats)
    p_bg = 1 - 2 * p_bb
    return {
        "question_I": p_bb / (p_bb + p_bg / 2),
        "question_II": p_bb / (p_bb + p_bg),
    }


def daycare_prior(n: int) -> dict[int, Fraction]:
    """Boson day care before any draw: each boy count ``0..n`` has ``1/(n+1)``."""
    if n < 1:
        raise ValueError(f"need at least one child, got n={n}")
    return dict.fromkeys(range(n + 1), Fraction(1, n + 1))


def daycare_posterior_closed_form(n: int) -> dict[int, Fraction]:
    """Boys left among ``n - 1`` after the first child drawn is a boy: ``2(m+1)/(n(n+1))``."""
    if n < 1:
        raise ValueError(f"need at least one child, got n={n}")
    return {m: Fraction(2 * (m + 1), n * (n + 1)) for m in range(n)}


def daycare_posterior(n: int) -> dict[int, Fraction]:
    if n < 1:
        raise ValueError(f"need at least one child, got n={n}")
    post, _ = condition_on_draw(prepare_equal_weight(2, n, BOSE_EINSTEIN), BOY)
    return level_marginal(post, BOY)


@dataclass(frozen=True)
class DicePosterior:
    k: int
    n: int
    record: DrawRecord
    distribution: list[tuple[Fraction, Fraction]]
    mean: Fraction

    @property
    def remaining(self) -> int:
        return self.n - self.record.total

    @property
    def beta(self) -> BetaPosterior:
        return BetaPosterior.from_record(self.record)


def _as_record(record: DrawRecord | Sequence[int]) -> DrawRecord:
    return record if isinstance(record, DrawRecord) else DrawRecord(tuple(record))


def dice_posterior(k: int, n: int, record: DrawRecord | Sequence[int]) -> DicePosterior:
    """Exact fraction-in-level-1 law for the bosonic dice left after ``record``."""
    record = _as_record(record)
    post = condition_on_record(prepare_equal_weight(k, n, BOSE_EINSTEIN), record)
    return DicePosterior(k, n, record, fraction_distribution(post, 0), expectation_fraction(post, 0))


def dice_posterior_closed_form(k: int, n: int, record: DrawRecord | Sequence[int]) -> DicePosterior:
    """Same law as :func:`dice_posterior` written as a beta-binomial.

    The flat boson prior is a Polya urn seeded with one ball per level, so the
    count left in level 1 among ``N`` remaining dice is
    ``C(N, m) B(m + nu1, N - m + nu_rest) / B(nu1, nu_rest)``.
    """
    record = _as_record(record)
    if record.k != k:
        raise ValueError(f"record has {record.k} levels, expected {k}")
    remaining = n - record.total
    if remaining < 1:
        raise ValueError("no dice remain after the draws")
    bp = BetaPosterior.from_record(record)
    norm = beta_function(bp.nu1, bp.nu_rest)
    dist = []
    for m in range(remaining + 1):
        p = math.comb(remaining, m) * beta_function(m + bp.nu1, remaining - m + bp.nu_rest) / norm
        dist.append((Fraction(m, remaining), p))
    mean = sum((r * p for r, p in dist), Fraction(0))
    return DicePosterior(k, n, record, dist, mean)
