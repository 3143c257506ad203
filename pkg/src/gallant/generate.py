"""Seeded random instance generation.

Everything is driven by :class:`random.Random` (CPython's Mersenne Twister),
whose sequence for a given seed is stable across platforms and versions, so
generated corpora are reproducible byte for byte.
"""

from __future__ import annotations

import random
import string

from .group import GroupGame
from .model import (
    Game,
    MorselTable,
    MorselType,
    Nature,
    PreferenceProfile,
    Ranking,
    Turn,
    TurnSequence,
    canonical_spec_text,
)


def type_name(i: int) -> str:
    """Spreadsheet-style names: a..z, aa, ab, ..."""
    letters = string.ascii_lowercase
    out = []
    i += 1
    while i:
        i, rem = divmod(i - 1, 26)
        out.append(letters[rem])
    return "".join(reversed(out))


def random_table(rng: random.Random, items: int, max_mult: int = 1) -> MorselTable:
    """A table of exactly ``items`` instances, multiplicities up to ``max_mult``."""
    if items < 1:
        raise ValueError("need at least one morsel")
    if max_mult < 1:
        raise ValueError("multiplicity bound must be >= 1")
    counts = []
    left = items
    while left:
        c = rng.randint(1, min(max_mult, left))
        counts.append(c)
        left -= c
    return MorselTable(
        tuple(MorselType(i, type_name(i), c) for i, c in enumerate(counts))
    )


def random_profile(rng: random.Random, num_types: int, players: int) -> PreferenceProfile:
    rankings = []
    for _ in range(players):
        perm = list(range(num_types))
        rng.shuffle(perm)
        rankings.append(Ranking.from_ranks(perm))
    return PreferenceProfile(tuple(rankings))


def random_game(
    rng: random.Random,
    *,
    items: int,
    players: int,
    turns: int,
    knight_prob: float = 0.5,
    max_mult: int = 1,
) -> Game:
    """A game with the exact given sizes; rankings and natures are uniform."""
    if not (1 <= turns <= items):
        raise ValueError("turns must satisfy 1 <= m <= n")
    if not (0.0 <= knight_prob <= 1.0):
        raise ValueError("knight probability must be in [0, 1]")
    table = random_table(rng, items, max_mult)
    profile = random_profile(rng, table.num_types, players)
    seq = tuple(
        Turn(
            rng.randrange(players),
            Nature.KNIGHT if rng.random() < knight_prob else Nature.LOUT,
        )
        for _ in range(turns)
    )
    return Game(table, profile, TurnSequence(seq))


def sample_game(
    rng: random.Random,
    *,
    max_items: int,
    max_players: int,
    knight_prob: float = 0.5,
    max_mult: int = 1,
) -> Game:
    """A game with sizes sampled up to the bounds; used by the verify corpus."""
    items = rng.randint(1, max_items)
    players = rng.randint(1, max_players)
    turns = rng.randint(1, items)
    return random_game(
        rng,
        items=items,
        players=players,
        turns=turns,
        knight_prob=knight_prob,
        max_mult=max_mult,
    )


def random_group_game(
    rng: random.Random, *, items: int, players: int, max_mult: int = 1
) -> GroupGame:
    table = random_table(rng, items, max_mult)
    profile = random_profile(rng, table.num_types, players)
    speakers = tuple(rng.randrange(players) for _ in range(table.n))
    return GroupGame(table, profile, speakers)


def generate_spec(
    seed: int,
    items: int,
    players: int,
    turns: int,
    knight_prob: float = 0.5,
    max_mult: int = 1,
) -> str:
    """Deterministic spec text for the given parameters; same args, same bytes."""
    rng = random.Random(seed)
    game = random_game(
        rng,
        items=items,
        players=players,
        turns=turns,
        knight_prob=knight_prob,
        max_mult=max_mult,
    )
    return canonical_spec_text(game.table, game.profile, turns=game.turns)
