"""Occupation vectors, allowed state spaces and exact counting.

An occupation vector ``(m_1, ..., m_k)`` records how many of the ``n``
identical particles sit in each of ``k`` levels.  Every probability the
engine computes depends only on occupancies, so classical (labeled) particles
share the Bose-Einstein support and differ only in their weights.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import FermionOverfill, StateSpaceTooLarge

OccupationVector = tuple[int, ...]

DEFAULT_STATE_CAP = 10**7


class StatisticsKind(enum.Enum):
    CLASSICAL = "classical"
    BOSE_EINSTEIN = "be"
    FERMI_DIRAC = "fd"

    @classmethod
    def parse(cls, value: "str | StatisticsKind") -> "StatisticsKind":
        """Accept an enum member, its value, or a loose spelling such as ``"bose"``."""
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {
            "classical": cls.CLASSICAL,
            "mb": cls.CLASSICAL,
            "be": cls.BOSE_EINSTEIN,
            "bose": cls.BOSE_EINSTEIN,
            "bose_einstein": cls.BOSE_EINSTEIN,
            "fd": cls.FERMI_DIRAC,
            "fermi": cls.FERMI_DIRAC,
            "fermi_dirac": cls.FERMI_DIRAC,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown statistics {value!r}") from None


CLASSICAL = StatisticsKind.CLASSICAL
BOSE_EINSTEIN = StatisticsKind.BOSE_EINSTEIN
FERMI_DIRAC = StatisticsKind.FERMI_DIRAC


def _check_sizes(k: int, n: int, stats: StatisticsKind) -> None:
    if k < 1:
        raise ValueError(f"need at least one level, got k={k}")
    if n < 0:
        raise ValueError(f"particle number must be non-negative, got n={n}")
    if stats is FERMI_DIRAC and n > k:
        raise FermionOverfill(f"{n} fermions cannot occupy {k} levels")


def validate_vector(m: Sequence[int], k: int | None = None, n: int | None = None) -> OccupationVector:
    """Return ``m`` as a tuple after checking length, sign and total."""
    m = tuple(int(c) for c in m)
    if not m:
        raise ValueError("occupation vector needs at least one level")
    if k is not None and len(m) != k:
        raise ValueError(f"expected {k} levels, got {len(m)}")
    if any(c < 0 for c in m):
        raise ValueError(f"negative occupation in {m}")
    if n is not None and sum(m) != n:
        raise ValueError(f"occupation {m} does not hold {n} particles")
    return m


def state_count(k: int, n: int, stats: StatisticsKind | str) -> int:
    """Number of distinct outcomes.

    Classical counts labeled outcomes (``k**n``); the quantum cases count
    occupation vectors: ``C(k+n-1, n)`` for bosons and ``C(k, n)`` for fermions.
    """
    stats = StatisticsKind.parse(stats)
    _check_sizes(k, n, stats)
    if stats is CLASSICAL:
        return k**n
    if stats is BOSE_EINSTEIN:
        return math.comb(k + n - 1, n)
    return math.comb(k, n)


def _compositions(k: int, n: int) -> Iterator[OccupationVector]:
    # lexicographically descending: (n,0,..) first, (..,0,n) last
    if k == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(k - 1, n - first):
            yield (first,) + rest


def _binary_vectors(k: int, n: int) -> Iterator[OccupationVector]:
    if k == 0:
        if n == 0:
            yield ()
        return
    if n > 0:
        for rest in _binary_vectors(k - 1, n - 1):
            yield (1,) + rest
    if n <= k - 1:
        for rest in _binary_vectors(k - 1, n):
            yield (0,) + rest


def enumerate_support(
    k: int,
    n: int,
    stats: StatisticsKind | str,
    cap: int = DEFAULT_STATE_CAP,
) -> list[OccupationVector]:
    """All allowed occupation vectors, lexicographically descending.

    Classical and Bose-Einstein share the full support of ``k``-part weak
    compositions of ``n``; Fermi-Dirac keeps only the 0/1 vectors.

    Raises:
        FermionOverfill: Fermi-Dirac with ``n > k``.
        StateSpaceTooLarge: the support holds more than ``cap`` vectors.
    """
    stats = StatisticsKind.parse(stats)
    _check_sizes(k, n, stats)
    size = math.comb(k, n) if stats is FERMI_DIRAC else math.comb(k + n - 1, n)
    if size > cap:
        raise StateSpaceTooLarge(f"support of {size} vectors exceeds cap {cap}")
    if stats is FERMI_DIRAC:
        return list(_binary_vectors(k, n))
    return list(_compositions(k, n))


def multinomial_weight(m: Sequence[int]) -> Fraction:
    """Classical probability of occupation class ``m``: ``n!/prod(m_j!) / k**n``."""
    m = validate_vector(m)
    n = sum(m)
    ways = math.factorial(n)
    for c in m:
        ways //= math.factorial(c)
    return Fraction(ways, len(m) ** n)


def rank_composition(m: Sequence[int]) -> int:
    """Index of ``m`` in :func:`enumerate_support` order (Bose-Einstein support)."""
    m = validate_vector(m)
    k, n = len(m), sum(m)
    rank = 0
    remaining = n
    for i, c in enumerate(m[:-1]):
        levels_left = k - i - 1
        # vectors whose entry i is larger than c come first
        for bigger in range(remaining, c, -1):
            rank += math.comb(remaining - bigger + levels_left - 1, levels_left - 1)
        remaining -= c
    return rank


def unrank_composition(rank: int, k: int, n: int) -> OccupationVector:
    """Inverse of :func:`rank_composition`.

    Walks level by level, skipping whole blocks of vectors that share a
    leading entry, so the cost is ``O(k * n)`` big-integer binomials at most.
    """
    total = math.comb(k + n - 1, n)
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} outside [0, {total})")
    out = []
    remaining = n
    for i in range(k - 1):
        levels_left = k - i - 1
        c = remaining
        while True:
            block = math.comb(remaining - c + levels_left - 1, levels_left - 1)
            if rank < block:
                break
            rank -= block
            c -= 1
        out.append(c)
        remaining -= c
    out.append(remaining)
    return tuple(out)


def unrank_subset_vector(rank: int, k: int, n: int) -> OccupationVector:
    """The 0/1 vector of index ``rank`` in Fermi-Dirac support order."""
    total = math.comb(k, n)
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} outside [0, {total})")
    out = []
    for i in range(k):
        levels_left = k - i - 1
        if n > 0:
            block = math.comb(levels_left, n - 1)
            if rank < block:
                out.append(1)
                n -= 1
                continue
            rank -= block
        out.append(0)
    return tuple(out)
