"""Diagonal mixed states over occupation vectors and their conditioning.

An :class:`Ensemble` is the diagonal of a density matrix written in the
occupation basis: an exact rational probability for each allowed vector.
Off-diagonal structure never enters any probability asked of it, so it is
not stored.

Two conditioning operations are provided:

* presence projection, which discards vectors with too few particles in a
  level and renormalizes, and
* draw conditioning, the action of an annihilation operator ``a_j``: a vector
  ``m`` contributes to the posterior with weight ``m_j * P(m)`` and loses one
  particle from level ``j``.
"""

from __future__ import annotations

import functools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import EmptyConditioning, ZeroProbabilityDraw
from .fock import (
    CLASSICAL,
    DEFAULT_STATE_CAP,
    FERMI_DIRAC,
    OccupationVector,
    StatisticsKind,
    enumerate_support,
    multinomial_weight,
    state_count,
    validate_vector,
)


@dataclass(frozen=True)
class DrawRecord:
    """Levels observed over ``total`` sequential draws without replacement."""

    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if not counts:
            raise ValueError("draw record needs at least one level")
        if any(c < 0 for c in counts):
            raise ValueError(f"negative draw count in {counts}")
        object.__setattr__(self, "counts", counts)

    @property
    def k(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    @classmethod
    def parse(cls, text: str) -> "DrawRecord":
        """Parse ``"1,0,0"``."""
        try:
            return cls(tuple(int(tok) for tok in text.split(",")))
        except ValueError:
            raise ValueError(f"bad draw record {text!r}; expected e.g. 1,0,0") from None

    @classmethod
    def empty(cls, k: int) -> "DrawRecord":
        return cls((0,) * k)

    def draws(self) -> list[int]:
        """Expand into one level index per draw, level order."""
        return [j for j, c in enumerate(self.counts) for _ in range(c)]

    def __str__(self):
        return ",".join(map(str, self.counts))


@dataclass(frozen=True)
class Ensemble:
    """Exact probability distribution over occupation vectors.

    ``weights`` holds only vectors with positive probability and sums to
    exactly one; the mapping is read-only.
    """

    k: int
    n: int
    stats: StatisticsKind
    weights: Mapping[OccupationVector, Fraction] = field(repr=False)

    def __post_init__(self):
        stats = StatisticsKind.parse(self.stats)
        object.__setattr__(self, "stats", stats)
        weights = {}
        for m, p in self.weights.items():
            m = validate_vector(m, self.k, self.n)
            p = Fraction(p)
            if p <= 0:
                raise ValueError(f"non-positive weight {p} on {m}")
            if stats is FERMI_DIRAC and max(m) > 1:
                raise ValueError(f"fermionic ensemble holds doubly occupied {m}")
            weights[m] = p
        if sum(weights.values()) != 1:
            raise ValueError("ensemble weights must sum to exactly 1")
        object.__setattr__(self, "weights", MappingProxyType(weights))

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights.items())

    def __eq__(self, other):
        if not isinstance(other, Ensemble):
            return NotImplemented
        return (
            self.k == other.k
            and self.n == other.n
            and self.stats is other.stats
            and dict(self.weights) == dict(other.weights)
        )

    def __hash__(self):
        return hash((self.k, self.n, self.stats, frozenset(self.weights.items())))

    def probability(self, m: Sequence[int]) -> Fraction:
        return self.weights.get(tuple(m), Fraction(0))

    def support(self) -> list[OccupationVector]:
        return list(self.weights)

    def to_dict(self) -> dict:
        """Canonical JSON-ready form; probabilities as ``"num/den"`` strings."""
        return {
            "k": self.k,
            "n": self.n,
            "stats": self.stats.value,
            "weights": [{"counts": list(m), "p": str(p)} for m, p in self.weights.items()],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Ensemble":
        weights = {tuple(w["counts"]): Fraction(w["p"]) for w in data["weights"]}
        return cls(int(data["k"]), int(data["n"]), StatisticsKind.parse(data["stats"]), weights)


def _from_raw(k: int, n: int, stats: StatisticsKind, raw: Mapping[OccupationVector, Fraction | int]) -> Ensemble:
    """Normalize non-negative exact weights into an Ensemble."""
    raw = {m: Fraction(w) for m, w in raw.items() if w}
    if not raw:
        raise ZeroProbabilityDraw("conditioning event has probability zero")
    common = math.lcm(*(w.denominator for w in raw.values()))
    return _from_ints(k, n, stats, {m: w.numerator * (common // w.denominator) for m, w in raw.items()})


def _from_ints(k: int, n: int, stats: StatisticsKind, ints: Mapping[OccupationVector, int]) -> Ensemble:
    # one gcd per vector instead of a chain of Fraction additions
    total = sum(ints.values())
    if not total:
        raise ZeroProbabilityDraw("conditioning event has probability zero")
    return _trusted(k, n, stats, {m: Fraction(v, total) for m, v in ints.items() if v})


def _integer_weights(e: Ensemble) -> dict[OccupationVector, int]:
    """Weights of ``e`` scaled by the lcm of their denominators."""
    common = math.lcm(*(p.denominator for p in e.weights.values()))
    return {m: p.numerator * (common // p.denominator) for m, p in e.weights.items()}


def _trusted(k: int, n: int, stats: StatisticsKind, weights: dict) -> Ensemble:
    # skips revalidation; only for weights built by this module
    e = object.__new__(Ensemble)
    object.__setattr__(e, "k", k)
    object.__setattr__(e, "n", n)
    object.__setattr__(e, "stats", stats)
    object.__setattr__(e, "weights", MappingProxyType(weights))
    return e


def prepare_equal_weight(
    k: int, n: int, stats: StatisticsKind | str, cap: int = DEFAULT_STATE_CAP
) -> Ensemble:
    """Prior ensemble with every allowed quantum state equally likely.

    Bosons and fermions get a flat ``1/state_count`` on each occupation
    vector.  Classical particles are independent, which puts multinomial
    weights on the same vectors.
    """
    return _prepare(k, n, StatisticsKind.parse(stats), cap)


@functools.lru_cache(maxsize=32)
def _prepare(k: int, n: int, stats: StatisticsKind, cap: int) -> Ensemble:
    support = enumerate_support(k, n, stats, cap=cap)
    if stats is CLASSICAL:
        weights = {m: multinomial_weight(m) for m in support}
    else:
        p = Fraction(1, state_count(k, n, stats))
        weights = dict.fromkeys(support, p)
    return _trusted(k, n, stats, weights)


def _check_level(e: Ensemble, level: int) -> int:
    if not 0 <= level < e.k:
        raise ValueError(f"level {level} outside 0..{e.k - 1}")
    return level


def condition_on_presence(e: Ensemble, level: int, minimum: int = 1) -> Ensemble:
    """Keep vectors with at least ``minimum`` particles in ``level``; renormalize.

    Raises:
        EmptyConditioning: no vector survives the projection.
    """
    _check_level(e, level)
    if minimum < 1:
        raise ValueError(f"minimum must be positive, got {minimum}")
    kept = {m: p for m, p in e.weights.items() if m[level] >= minimum}
    if not kept:
        raise EmptyConditioning(f"no state has {minimum} or more particles in level {level}")
    return _from_raw(e.k, e.n, e.stats, kept)


def draw_probability(e: Ensemble, level: int) -> Fraction:
    """Chance that one uniformly drawn particle is found in ``level``."""
    _check_level(e, level)
    if e.n < 1:
        raise ValueError("cannot draw from an empty system")
    ints = _integer_weights(e)
    return Fraction(sum(m[level] * w for m, w in ints.items()), sum(ints.values()) * e.n)


def condition_on_draw(e: Ensemble, level: int) -> tuple[Ensemble, Fraction]:
    """Remove one randomly drawn particle that turned out to be in ``level``.

    Returns the ``n - 1`` particle posterior and the prior probability of
    the observation.

    Raises:
        ZeroProbabilityDraw: no state has a particle in ``level``.
    """
    _check_level(e, level)
    if e.n < 1:
        raise ValueError("cannot draw from an empty system")
    base = _integer_weights(e)
    scale = sum(base.values())
    ints = {}
    for m, w in base.items():
        c = m[level]
        if c:
            ints[m[:level] + (c - 1,) + m[level + 1 :]] = w * c
    if not ints:
        raise ZeroProbabilityDraw(f"level {level} is never occupied")
    prob = Fraction(sum(ints.values()), scale * e.n)
    return _from_ints(e.k, e.n - 1, e.stats, ints), prob


def _falling(x: int, r: int) -> int:
    return math.perm(x, r) if x >= r else 0


def record_probability(e: Ensemble, record: DrawRecord) -> Fraction:
    """Probability of observing one specific ordering of ``record``'s draws."""
    _check_record(e, record)
    denom = math.perm(e.n, record.total)
    ints = _integer_weights(e)
    hits = sum(w * math.prod(_falling(c, r) for c, r in zip(m, record.counts)) for m, w in ints.items())
    return Fraction(hits, sum(ints.values()) * denom)


def _check_record(e: Ensemble, record: DrawRecord) -> None:
    if record.k != e.k:
        raise ValueError(f"record has {record.k} levels, ensemble has {e.k}")
    if record.total > e.n:
        raise ValueError(f"cannot draw {record.total} of {e.n} particles")


def condition_on_record(e: Ensemble, record: DrawRecord | Sequence[int]) -> Ensemble:
    """Condition on a whole draw record at once.

    Each vector is weighted by ``prod_j m_j (m_j - 1) ... (m_j - N_j + 1)``,
    the squared norm of ``a_1^N_1 ... a_k^N_k |m>``, which is the same for
    every ordering of the draws.

    Raises:
        ZeroProbabilityDraw: the record cannot occur under ``e``.
    """
    if not isinstance(record, DrawRecord):
        record = DrawRecord(tuple(record))
    _check_record(e, record)
    if record.total == 0:
        return e
    ints = {}
    counts = record.counts
    for m, w in _integer_weights(e).items():
        for c, r in zip(m, counts):
            if r:
                w *= _falling(c, r)
                if not w:
                    break
        if w:
            ints[tuple(c - r for c, r in zip(m, counts))] = w
    if not ints:
        raise ZeroProbabilityDraw(f"draw record {record} is impossible")
    return _from_ints(e.k, e.n - record.total, e.stats, ints)


def condition_sequentially(e: Ensemble, levels: Iterable[int]) -> Ensemble:
    """Apply :func:`condition_on_draw` once per listed level, in order."""
    for level in levels:
        e, _ = condition_on_draw(e, level)
    return e


def level_marginal(e: Ensemble, level: int) -> dict[int, Fraction]:
    """Distribution of the occupation of one level, ascending in count."""
    _check_level(e, level)
    ints = _integer_weights(e)
    scale = sum(ints.values())
    buckets: dict[int, int] = defaultdict(int)
    for m, w in ints.items():
        buckets[m[level]] += w
    return {c: Fraction(buckets[c], scale) for c in sorted(buckets)}


def fraction_distribution(e: Ensemble, level: int) -> list[tuple[Fraction, Fraction]]:
    """``(R, P(R))`` pairs for ``R = m_level / n``, ascending in ``R``."""
    if e.n < 1:
        raise ValueError("fraction undefined for an empty system")
    return [(Fraction(c, e.n), p) for c, p in level_marginal(e, level).items()]


def expectation_fraction(e: Ensemble, level: int) -> Fraction:
    """Mean fraction of particles in ``level``."""
    _check_level(e, level)
    if e.n < 1:
        raise ValueError("fraction undefined for an empty system")
    ints = _integer_weights(e)
    return Fraction(sum(m[level] * w for m, w in ints.items()), sum(ints.values()) * e.n)


def permute_levels(e: Ensemble, perm: Sequence[int]) -> Ensemble:
    """Relabel levels so new level ``i`` is old level ``perm[i]``."""
    if sorted(perm) != list(range(e.k)):
        raise ValueError(f"{perm} is not a permutation of 0..{e.k - 1}")
    weights = {tuple(m[j] for j in perm): p for m, p in e.weights.items()}
    return _trusted(e.k, e.n, e.stats, weights)
