"""Exact answers versus the sampling oracle, scenario by scenario.

Every check is a binomial proportion: a state probability, a crib answer,
or the chance that one further random draw lands in level 1 (whose exact
value is the conditional mean fraction).  A check passes when the exact
rational lies inside the 99% Wilson interval of the observed proportion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import montecarlo as mc
from .ensemble import DrawRecord, draw_probability, prepare_equal_weight, record_probability
from .fock import BOSE_EINSTEIN, CLASSICAL, FERMI_DIRAC
from .scenarios import (
    all_same_state_probability,
    crib_answers_closed_form,
    daycare_posterior_closed_form,
    dice_posterior_closed_form,
)

DEFAULT_MIN_ACCEPTED = 100_000
ALL_STATS = (CLASSICAL, BOSE_EINSTEIN, FERMI_DIRAC)


@dataclass(frozen=True)
class Check:
    scenario: str
    quantity: str
    exact: Fraction
    count: int
    accepted: int
    attempted: int
    ci_low: float
    ci_high: float

    @property
    def estimate(self) -> float:
        return self.count / self.accepted

    @property
    def ok(self) -> bool:
        return self.ci_low <= float(self.exact) <= self.ci_high

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "quantity": self.quantity,
            "exact": str(self.exact),
            "estimate": self.estimate,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "accepted": self.accepted,
            "attempted": self.attempted,
            "ok": self.ok,
        }


def _subseed(seed: int, label: str) -> int:
    # independent stream per check, stable across runs
    ss = np.random.SeedSequence(seed, spawn_key=tuple(label.encode()))
    return int(ss.generate_state(1, np.uint64)[0])


def _sized_run(
    make: Callable[[int], mc.EmpiricalDistribution], acceptance: Fraction, min_accepted: int
) -> mc.EmpiricalDistribution:
    """Grow the trial budget until ``min_accepted`` trials pass the condition.

    Batches are seeded by index, so a larger budget replays the smaller one
    as a prefix and the result stays deterministic.
    """
    trials = math.ceil(min_accepted / float(acceptance) * 1.02) + 1000
    while True:
        emp = make(trials)
        if emp.trials >= min_accepted:
            return emp
        trials = math.ceil(trials * 1.1)


def _check(scenario: str, quantity: str, emp: mc.EmpiricalDistribution, outcome, exact: Fraction) -> Check:
    lo, hi = emp.interval(outcome)
    return Check(scenario, quantity, Fraction(exact), emp.count(outcome), emp.trials, emp.attempted or emp.trials, lo, hi)


def verify_coins(min_accepted: int, seed: int) -> list[Check]:
    out = []
    for stats in ALL_STATS:
        cfg = mc.SimConfig(2, 2, stats, min_accepted, _subseed(seed, f"coins/{stats.value}"))
        emp = mc.estimate_states(cfg)
        name = f"coins k=2 n=2 {stats.value}"
        out.append(_check(name, "P(all heads)", emp, (2, 0), all_same_state_probability(2, 2, stats)))
        p_mixed = 1 - 2 * all_same_state_probability(2, 2, stats)
        out.append(_check(name, "P(one head, one tail)", emp, (1, 1), p_mixed))
    return out


def verify_crib(min_accepted: int, seed: int) -> list[Check]:
    out = []
    for stats in ALL_STATS:
        exact = crib_answers_closed_form(stats)
        prior = prepare_equal_weight(2, 2, stats)
        name = f"crib {stats.value}"

        p_draw = draw_probability(prior, 0)
        s1 = _subseed(seed, f"crib/I/{stats.value}")
        emp = _sized_run(
            lambda t: mc.estimate_conditional(mc.SimConfig(2, 2, stats, t, s1), (1, 0)), p_draw, min_accepted
        )
        out.append(_check(name, "question I: other is B | drawn B", emp, Fraction(1), exact["question_I"]))

        p_present = 1 - prior.probability((0, 2))
        s2 = _subseed(seed, f"crib/II/{stats.value}")
        emp = _sized_run(lambda t: mc.estimate_presence(mc.SimConfig(2, 2, stats, t, s2), 0), p_present, min_accepted)
        out.append(_check(name, "question II: both B | at least one B", emp, (2, 0), exact["question_II"]))
    return out


def _mean_fraction_check(scenario: str, k: int, n: int, record: DrawRecord, min_accepted: int, seed: int) -> Check:
    exact_mean = dice_posterior_closed_form(k, n, record).mean
    acceptance = record_probability(prepare_equal_weight(k, n, BOSE_EINSTEIN), record) * _orderings(record)
    s = _subseed(seed, f"{scenario}/{record}")
    emp = _sized_run(
        lambda t: mc.estimate_next_draw(mc.SimConfig(k, n, BOSE_EINSTEIN, t, s), record), acceptance, min_accepted
    )
    return _check(scenario, f"next draw in level 1 | record {record} (= mean R)", emp, 0, exact_mean)


def _orderings(record: DrawRecord) -> int:
    out = math.factorial(record.total)
    for c in record.counts:
        out //= math.factorial(c)
    return out


def verify_daycare(min_accepted: int, seed: int, n: int = 30) -> list[Check]:
    name = f"daycare n={n}"
    cfg = mc.SimConfig(2, n, BOSE_EINSTEIN, min_accepted, _subseed(seed, "daycare/first"))
    first = mc.estimate_next_draw(cfg, (0, 0))
    checks = [_check(name, "first draw is B", first, 0, Fraction(1, 2))]
    checks.append(_mean_fraction_check(name, 2, n, DrawRecord((1, 0)), min_accepted, seed))

    exact = daycare_posterior_closed_form(n)
    s = _subseed(seed, "daycare/all-boys")
    emp = _sized_run(
        lambda t: mc.estimate_conditional(mc.SimConfig(2, n, BOSE_EINSTEIN, t, s), (1, 0)), Fraction(1, 2), min_accepted
    )
    checks.append(_check(name, "all remaining are B | first B", emp, Fraction(1), exact[n - 1]))
    return checks


def verify_dice(min_accepted: int, seed: int) -> list[Check]:
    checks = []
    for k, n, record in [(3, 30, (1, 0, 0)), (3, 30, (0, 1, 0)), (2, 30, (2, 1)), (3, 20, (1, 1, 1))]:
        checks.append(_mean_fraction_check(f"dice k={k} n={n}", k, n, DrawRecord(record), min_accepted, seed))
    return checks


SCENARIOS: dict[str, Callable[[int, int], list[Check]]] = {
    "coins": verify_coins,
    "crib": verify_crib,
    "daycare": verify_daycare,
    "dice": verify_dice,
}


def run_verification(scenario: str = "all", seed: int = 0, min_accepted: int = DEFAULT_MIN_ACCEPTED) -> list[Check]:
    """Run one named scenario, or ``"all"``, returning every check."""
    if scenario == "all":
        names = list(SCENARIOS)
    elif scenario in SCENARIOS:
        names = [scenario]
    else:
        raise ValueError(f"unknown scenario {scenario!r}; choose from {', '.join(SCENARIOS)} or all")
    checks = []
    for name in names:
        checks.extend(SCENARIOS[name](min_accepted, seed))
    return checks
