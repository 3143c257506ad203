"""Partial orders on plates and play sequences.

Plates of equal size are compared by pairwise dominance: plate ``a`` is at
most plate ``b`` when some bijection matches every morsel of ``a`` to a
weakly better morsel of ``b``.  The fast path compares rank-sorted vectors
elementwise; the literal bijection search is kept as a test oracle.

On top of that sit the two play-sequence orders.  A knight weakly prefers a
play that treats every *other* player at least as well (strictly better for
someone), or that leaves everyone else untouched and feeds the knight
better.  A lout only compares plays at the first turn of his own where they
diverge.  ``knight_key`` realizes the knight order as an exact integer
utility: lexicographic (others' total enjoyment, own total enjoyment).
"""

from __future__ import annotations

from enum import Enum
from itertools import permutations
from typing import Iterable, NamedTuple

from .model import Game, Plate, Play, Ranking, plates_of


class OrderResult(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


def counts_leq(a: tuple[int, ...], b: tuple[int, ...], ascending: tuple[int, ...]) -> bool:
    """Elementwise ``a <= b`` on rank-sorted vectors, via cumulative counts.

    Walking types from least to most enjoyable, ``a`` must always hold at
    least as many of the worst morsels seen so far as ``b`` does.  Assumes the
    multisets have equal size.
    """
    cum_a = 0
    cum_b = 0
    for t in ascending:
        cum_a += a[t]
        cum_b += b[t]
        if cum_a < cum_b:
            return False
    return True


def plate_compare(a: Plate, b: Plate, r: Ranking) -> OrderResult:
    """Pairwise-dominance comparison of two equal-sized plates under ``r``."""
    if a.size != b.size:
        raise ValueError(f"plates have different sizes ({a.size} vs {b.size})")
    if a.counts == b.counts:
        return OrderResult.EQUAL
    asc = r.ascending_types()
    if counts_leq(a.counts, b.counts, asc):
        return OrderResult.LESS
    if counts_leq(b.counts, a.counts, asc):
        return OrderResult.GREATER
    return OrderResult.INCOMPARABLE


_BIJECTION_CAP = 8


def plate_compare_bijection_oracle(a: Plate, b: Plate, r: Ranking) -> OrderResult:
    """Literal bijection-search definition of plate comparison (test oracle only)."""
    if a.size != b.size:
        raise ValueError(f"plates have different sizes ({a.size} vs {b.size})")
    if a.size + b.size > _BIJECTION_CAP:
        raise ValueError(f"combined size exceeds oracle cap {_BIJECTION_CAP}")
    if a.counts == b.counts:
        return OrderResult.EQUAL

    def ranks(plate: Plate) -> list[int]:
        out = []
        for t, c in enumerate(plate.counts):
            out.extend([r.rank[t]] * c)
        return out

    ra, rb = ranks(a), ranks(b)

    def dominated(lo: list[int], hi: list[int]) -> bool:
        return any(
            all(x <= y for x, y in zip(lo, perm)) for perm in set(permutations(hi))
        )

    if dominated(ra, rb):
        return OrderResult.LESS
    if dominated(rb, ra):
        return OrderResult.GREATER
    return OrderResult.INCOMPARABLE


def pareto_combine(results: Iterable[OrderResult]) -> OrderResult:
    """Combine per-member comparisons into a Pareto order."""
    seen_less = False
    seen_greater = False
    for res in results:
        if res is OrderResult.INCOMPARABLE:
            return OrderResult.INCOMPARABLE
        if res is OrderResult.LESS:
            seen_less = True
        elif res is OrderResult.GREATER:
            seen_greater = True
        if seen_less and seen_greater:
            return OrderResult.INCOMPARABLE
    if seen_less:
        return OrderResult.LESS
    if seen_greater:
        return OrderResult.GREATER
    return OrderResult.EQUAL


def knight_compare(x: Play, y: Play, i: int, game: Game) -> OrderResult:
    """Player ``i``'s knight order on plays.

    Less when every other player's plate weakly improves with one strict
    improvement, or when all other plates are unchanged and ``i``'s own plate
    strictly improves.  Plays with identical per-player plates but different
    pick orders are incomparable; only the identical play is Equal.
    """
    if x == y:
        return OrderResult.EQUAL
    dx = plates_of(x, game)
    dy = plates_of(y, game)
    if _knight_less(dx.plates, dy.plates, i, game):
        return OrderResult.LESS
    if _knight_less(dy.plates, dx.plates, i, game):
        return OrderResult.GREATER
    return OrderResult.INCOMPARABLE


def _knight_less(px: tuple[Plate, ...], py: tuple[Plate, ...], i: int, game: Game) -> bool:
    any_strict = False
    for j in range(game.k):
        if j == i:
            continue
        res = plate_compare(px[j], py[j], game.profile.rankings[j])
        if res is OrderResult.EQUAL:
            continue
        if res is not OrderResult.LESS:
            return False
        any_strict = True
    if any_strict:
        return True
    res = plate_compare(px[i], py[i], game.profile.rankings[i])
    return res is OrderResult.LESS


def lout_compare(x: Play, y: Play, i: int, game: Game) -> OrderResult:
    """Player ``i``'s lout order: compare only the first turn where the plays diverge."""
    plates_of(x, game)
    plates_of(y, game)
    for t, (px, py) in enumerate(zip(x, y)):
        if px == py:
            continue
        if game.turns.turns[t].player != i:
            return OrderResult.INCOMPARABLE
        rank = game.profile.rankings[i].rank
        if px.type_id == py.type_id:
            return OrderResult.INCOMPARABLE
        if rank[px.type_id] < rank[py.type_id]:
            return OrderResult.LESS
        return OrderResult.GREATER
    return OrderResult.EQUAL


class KnightKey(NamedTuple):
    """Integer realization of the knight order; compare lexicographically."""

    others_total: int
    own_total: int


def knight_key(x: Play, i: int, game: Game) -> KnightKey:
    """Total enjoyment of everyone else, then of player ``i``, along ``x``.

    Lexicographic comparison of keys strictly refines the knight order: it is
    what a utility of the form (tiny weight on own plate) + (sum of others')
    computes, made exact by integer enjoyments.
    """
    division = plates_of(x, game)
    totals = []
    for j in range(game.k):
        enjoy = game.profile.rankings[j].enjoyment
        totals.append(
            sum(e * c for e, c in zip(enjoy, division.plates[j].counts))
        )
    own = totals[i]
    return KnightKey(sum(totals) - own, own)


def group_pareto_compare(
    x: Play, y: Play, coalition: Iterable[int], game: Game
) -> OrderResult:
    """Pareto order over coalition members' plates in ``game``."""
    members = tuple(coalition)
    if not members:
        raise ValueError("coalition must be nonempty")
    dx = plates_of(x, game)
    dy = plates_of(y, game)
    return pareto_combine(
        plate_compare(dx.plates[j], dy.plates[j], game.profile.rankings[j])
        for j in members
    )
