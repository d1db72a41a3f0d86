"""Sampling oracle, independent of the exact ensemble code.

States are prepared by drawing a uniform index and unranking it (bosons,
fermions) or by independent level choices (classical).  Conditioning is by
rejection: simulate the draws, keep the trials whose record matches.

Random streams: batch ``b`` of a run with seed ``s`` always uses
``SeedSequence(s, spawn_key=(b,))``, so results do not depend on how batches
are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterator, Mapping, Sequence

import numpy as np
from scipy import stats as sps

from .ensemble import DrawRecord
from .errors import NoAcceptedTrials
from .fock import (
    BOSE_EINSTEIN,
    CLASSICAL,
    OccupationVector,
    StatisticsKind,
    state_count,
    unrank_composition,
    unrank_subset_vector,
)

BATCH_SIZE = 1 << 16
CONFIDENCE = 0.99
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class SimConfig:
    k: int
    n: int
    stats: StatisticsKind
    trials: int
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "stats", StatisticsKind.parse(self.stats))
        if self.trials < 1:
            raise ValueError(f"trials must be positive, got {self.trials}")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        state_count(self.k, self.n, self.stats)  # raises FermionOverfill early


def batch_rng(seed: int, batch: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(batch,))))


def _batches(cfg: SimConfig) -> Iterator[tuple[int, np.random.Generator]]:
    done, b = 0, 0
    while done < cfg.trials:
        size = min(BATCH_SIZE, cfg.trials - done)
        yield size, batch_rng(cfg.seed, b)
        done += size
        b += 1


def _uniform_index(rng: np.random.Generator, total: int) -> int:
    if total < _INT64_SAFE:
        return int(rng.integers(total))
    nbytes = (total.bit_length() + 7) // 8 + 8
    # extra 64 bits make the modulo bias below 2**-64; fine for an oracle
    return int.from_bytes(rng.bytes(nbytes), "little") % total


def sample_state(cfg: SimConfig, rng: np.random.Generator) -> OccupationVector:
    """One prepared state.

    Bosons and fermions: uniform index into the support, unranked.
    Classical: ``n`` independent uniform level choices.
    """
    k, n = cfg.k, cfg.n
    if cfg.stats is CLASSICAL:
        return tuple(int(c) for c in np.bincount(rng.integers(k, size=n), minlength=k))
    total = state_count(k, n, cfg.stats)
    rank = _uniform_index(rng, total)
    if cfg.stats is BOSE_EINSTEIN:
        return unrank_composition(rank, k, n)
    return unrank_subset_vector(rank, k, n)


def _unrank_compositions_vec(ranks: np.ndarray, k: int, n: int) -> np.ndarray:
    # Entry i takes value r - t where t-1 is the largest j with C(j+L, L) <= rank.
    out = np.empty((ranks.size, k), dtype=np.int64)
    remaining = np.full(ranks.size, n, dtype=np.int64)
    ranks = ranks.copy()
    for i in range(k - 1):
        L = k - i - 1
        table = np.array([math.comb(j + L, L) for j in range(n + 1)], dtype=np.int64)
        j = np.searchsorted(table, ranks, side="right") - 1
        ranks -= np.where(j >= 0, table[np.maximum(j, 0)], 0)
        value = remaining - (j + 1)
        out[:, i] = value
        remaining -= value
    out[:, k - 1] = remaining
    return out


def _unrank_subsets_vec(ranks: np.ndarray, k: int, n: int) -> np.ndarray:
    out = np.zeros((ranks.size, k), dtype=np.int64)
    left = np.full(ranks.size, n, dtype=np.int64)
    ranks = ranks.copy()
    comb = np.array([[math.comb(a, b) if b >= 0 else 0 for b in range(-1, n + 1)] for a in range(k + 1)], dtype=np.int64)
    for i in range(k):
        levels_left = k - i - 1
        block = np.where(left > 0, comb[levels_left, left], 0)  # column b+1 holds C(a, b)
        take = (left > 0) & (ranks < block)
        out[take, i] = 1
        ranks -= np.where((left > 0) & ~take, block, 0)
        left -= take
    return out


def sample_states(cfg: SimConfig, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` prepared states as an integer array of shape ``(size, k)``."""
    k, n = cfg.k, cfg.n
    if cfg.stats is CLASSICAL:
        choices = rng.integers(k, size=(size, n))
        return np.stack([(choices == j).sum(axis=1) for j in range(k)], axis=1).astype(np.int64)
    total = state_count(k, n, cfg.stats)
    if total >= _INT64_SAFE:
        return np.array([sample_state(cfg, rng) for _ in range(size)], dtype=np.int64).reshape(size, k)
    ranks = rng.integers(total, size=size, dtype=np.int64)
    if cfg.stats is BOSE_EINSTEIN:
        return _unrank_compositions_vec(ranks, k, n)
    return _unrank_subsets_vec(ranks, k, n)


def sample_draws(state: Sequence[int], n_draws: int, rng: np.random.Generator) -> DrawRecord:
    """Draw ``n_draws`` particles one at a time without replacement."""
    state = [int(c) for c in state]
    if n_draws > sum(state):
        raise ValueError(f"cannot draw {n_draws} of {sum(state)} particles")
    counts = [0] * len(state)
    for _ in range(n_draws):
        u = int(rng.integers(sum(state)))
        j = 0
        while u >= state[j]:
            u -= state[j]
            j += 1
        state[j] -= 1
        counts[j] += 1
    return DrawRecord(tuple(counts))


def draw_batch(states: np.ndarray, n_draws: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`sample_draws`; returns ``(records, remaining_states)``."""
    states = states.copy()
    size, k = states.shape
    records = np.zeros_like(states)
    rows = np.arange(size)
    for _ in range(n_draws):
        u = rng.integers(0, states.sum(axis=1))
        level = (u[:, None] >= np.cumsum(states, axis=1)).sum(axis=1)
        states[rows, level] -= 1
        records[rows, level] += 1
    return records, states


@dataclass
class EmpiricalDistribution:
    """Outcome counts from accepted trials, with Wilson intervals."""

    counts: dict[Hashable, int]
    trials: int
    attempted: int | None = None
    confidence: float = CONFIDENCE
    _ci_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if sum(self.counts.values()) != self.trials:
            raise ValueError("counts must sum to the number of trials")

    @property
    def acceptance_rate(self) -> float:
        return self.trials / self.attempted if self.attempted else 1.0

    def count(self, outcome) -> int:
        return self.counts.get(outcome, 0)

    def frequency(self, outcome) -> float:
        return self.count(outcome) / self.trials

    def interval(self, outcome) -> tuple[float, float]:
        if outcome not in self._ci_cache:
            ci = sps.binomtest(self.count(outcome), self.trials).proportion_ci(
                confidence_level=self.confidence, method="wilson"
            )
            self._ci_cache[outcome] = (float(ci.low), float(ci.high))
        return self._ci_cache[outcome]

    def covers(self, outcome, exact: Fraction | float) -> bool:
        lo, hi = self.interval(outcome)
        return lo <= float(exact) <= hi

    def mean(self) -> float:
        return sum(float(o) * c for o, c in self.counts.items()) / self.trials

    def stderr(self) -> float:
        mu = self.mean()
        var = sum((float(o) - mu) ** 2 * c for o, c in self.counts.items()) / max(self.trials - 1, 1)
        return math.sqrt(var / self.trials)

    def to_records(self) -> list[dict]:
        out = []
        for outcome in sorted(self.counts, key=_sort_key):
            lo, hi = self.interval(outcome)
            out.append(
                {
                    "outcome": _jsonable(outcome),
                    "count": self.counts[outcome],
                    "freq": self.frequency(outcome),
                    "ci_low": lo,
                    "ci_high": hi,
                }
            )
        return out


def _sort_key(outcome):
    return tuple(outcome) if isinstance(outcome, tuple) else (outcome,)


def _jsonable(outcome):
    if isinstance(outcome, tuple):
        return list(outcome)
    if isinstance(outcome, Fraction):
        return str(outcome)
    return outcome


def _tally(rows: np.ndarray) -> dict:
    values, counts = np.unique(rows, axis=0, return_counts=True)
    return {tuple(int(x) for x in v): int(c) for v, c in zip(values, counts)}


def _merge(into: dict, more: Mapping) -> None:
    for key, c in more.items():
        into[key] = into.get(key, 0) + c


def estimate_states(cfg: SimConfig) -> EmpiricalDistribution:
    """Histogram of prepared occupation vectors."""
    counts: dict = {}
    for size, rng in _batches(cfg):
        _merge(counts, _tally(sample_states(cfg, size, rng)))
    return EmpiricalDistribution(counts, cfg.trials)


def estimate_presence(cfg: SimConfig, level: int, minimum: int = 1) -> EmpiricalDistribution:
    """Histogram of states among trials with ``minimum`` or more particles in ``level``."""
    counts: dict = {}
    for size, rng in _batches(cfg):
        states = sample_states(cfg, size, rng)
        _merge(counts, _tally(states[states[:, level] >= minimum]))
    accepted = sum(counts.values())
    if not accepted:
        raise NoAcceptedTrials(f"no trial had {minimum}+ particles in level {level}")
    return EmpiricalDistribution(counts, accepted, attempted=cfg.trials)


def _run_conditioned(cfg: SimConfig, condition: DrawRecord, extra_draw: bool):
    if condition.k != cfg.k:
        raise ValueError(f"condition has {condition.k} levels, config has {cfg.k}")
    if condition.total > cfg.n:
        raise ValueError(f"cannot draw {condition.total} of {cfg.n} particles")
    target = np.array(condition.counts, dtype=np.int64)
    for size, rng in _batches(cfg):
        states = sample_states(cfg, size, rng)
        records, rest = draw_batch(states, condition.total, rng)
        keep = (records == target).all(axis=1)
        nxt = None
        if extra_draw and cfg.n > condition.total:
            nxt, _ = draw_batch(rest, 1, rng)
            nxt = nxt[keep]
        yield rest[keep], nxt


def estimate_posterior_states(cfg: SimConfig, condition: DrawRecord | Sequence[int]) -> EmpiricalDistribution:
    """Histogram of the remaining occupation vectors given the draw record."""
    condition = condition if isinstance(condition, DrawRecord) else DrawRecord(tuple(condition))
    counts: dict = {}
    for rest, _ in _run_conditioned(cfg, condition, extra_draw=False):
        if len(rest):
            _merge(counts, _tally(rest))
    accepted = sum(counts.values())
    if not accepted:
        raise NoAcceptedTrials(f"draw record {condition} never occurred in {cfg.trials} trials")
    return EmpiricalDistribution(counts, accepted, attempted=cfg.trials)


def estimate_conditional(cfg: SimConfig, condition: DrawRecord | Sequence[int], level: int = 0) -> EmpiricalDistribution:
    """Distribution of the remaining fraction in ``level`` given the draw record.

    Outcomes are exact ``Fraction`` values ``m / (n - n')``.

    Raises:
        NoAcceptedTrials: the record never occurred.
    """
    condition = condition if isinstance(condition, DrawRecord) else DrawRecord(tuple(condition))
    remaining = cfg.n - condition.total
    if remaining < 1:
        raise ValueError("no particles remain after the draws")
    tallies: dict[int, int] = {}
    for rest, _ in _run_conditioned(cfg, condition, extra_draw=False):
        if not len(rest):
            continue
        values, counts = np.unique(rest[:, level], return_counts=True)
        _merge(tallies, {int(v): int(c) for v, c in zip(values, counts)})
    accepted = sum(tallies.values())
    if not accepted:
        raise NoAcceptedTrials(f"draw record {condition} never occurred in {cfg.trials} trials")
    counts = {Fraction(m, remaining): c for m, c in tallies.items()}
    return EmpiricalDistribution(counts, accepted, attempted=cfg.trials)


def estimate_next_draw(cfg: SimConfig, condition: DrawRecord | Sequence[int]) -> EmpiricalDistribution:
    """Level of one more random draw after the record; outcomes are level indices.

    Its frequency for a level estimates the conditional mean fraction in
    that level as a plain binomial proportion.
    """
    condition = condition if isinstance(condition, DrawRecord) else DrawRecord(tuple(condition))
    if cfg.n - condition.total < 1:
        raise ValueError("no particles remain after the draws")
    counts: dict[int, int] = {}
    for _, nxt in _run_conditioned(cfg, condition, extra_draw=True):
        if not len(nxt):
            continue
        levels = nxt.argmax(axis=1)
        values, c = np.unique(levels, return_counts=True)
        _merge(counts, {int(v): int(x) for v, x in zip(values, c)})
    accepted = sum(counts.values())
    if not accepted:
        raise NoAcceptedTrials(f"draw record {condition} never occurred in {cfg.trials} trials")
    return EmpiricalDistribution(counts, accepted, attempted=cfg.trials)


def chi_square_pvalue(emp: EmpiricalDistribution, exact: Mapping[Hashable, Fraction]) -> float:
    """Goodness of fit of observed counts to an exact distribution."""
    outcomes = [o for o, p in exact.items() if p > 0]
    stray = sum(c for o, c in emp.counts.items() if o not in outcomes)
    if stray:
        return 0.0
    observed = np.array([emp.count(o) for o in outcomes], dtype=float)
    expected = np.array([float(exact[o]) for o in outcomes]) * emp.trials
    if len(outcomes) < 2:
        return 1.0
    return float(sps.chisquare(observed, expected * observed.sum() / expected.sum()).pvalue)
