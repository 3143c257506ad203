"""Fast division solver.

An all-lout game is deterministic: every turn the mover grabs a copy of
their favourite remaining type, so the whole play falls out of one linear
scan.  Mixed games reduce to that case: push the knight turns to the end of
the sequence, reverse their order, and treat everyone as a lout.  The
resulting division is the division of the original game under any optimal
play, and mapping the transformed picks back through the turn bijection
yields a witness play that is itself optimal in the original game.
"""

from __future__ import annotations

from typing import Sequence

from .model import (
    Division,
    Game,
    Item,
    MorselTable,
    Nature,
    Play,
    PreferenceProfile,
    Ranking,
    Turn,
    TurnSequence,
    plates_of,
)

#: Maps each turn index of the transformed game to its turn in the original.
TurnBijection = tuple[int, ...]


def reverse_knights_transform(turns: TurnSequence) -> tuple[TurnSequence, TurnBijection]:
    """All-lout equivalent of a mixed turn sequence, with provenance.

    Lout turns keep their relative order; knight turns move to the tail in
    reversed order and become lout turns.  The bijection is 0-based.
    """
    louts = [j for j, t in enumerate(turns.turns) if t.nature is Nature.LOUT]
    knights = [j for j, t in enumerate(turns.turns) if t.nature is Nature.KNIGHT]
    bijection = tuple(louts + knights[::-1])
    new_turns = tuple(Turn(turns.turns[j].player, Nature.LOUT) for j in bijection)
    return TurnSequence(new_turns), bijection


def lout_playout(game: Game) -> Play:
    """Deterministic greedy play of an all-lout game.

    Each pick takes the lowest remaining copy of the mover's favourite
    remaining type.  Amortized linear: one preference pointer per player only
    ever moves forward.
    """
    for j, turn in enumerate(game.turns.turns):
        if turn.nature is not Nature.LOUT:
            raise ValueError(f"turn {j + 1} is not a lout turn")
    remaining = list(game.table.counts)
    consumed = [0] * game.table.num_types
    order = [r.descending_types() for r in game.profile.rankings]
    ptr = [0] * game.k
    picks: list[Item] = []
    for turn in game.turns.turns:
        p = turn.player
        prefs = order[p]
        i = ptr[p]
        while remaining[prefs[i]] == 0:
            i += 1
        ptr[p] = i
        t = prefs[i]
        picks.append(Item(t, consumed[t]))
        consumed[t] += 1
        remaining[t] -= 1
    return tuple(picks)


def transformed_game(game: Game) -> tuple[Game, TurnBijection]:
    new_turns, bijection = reverse_knights_transform(game.turns)
    return Game(game.table, game.profile, new_turns), bijection


def solve_division(game: Game) -> Division:
    """Division of ``game`` under any optimal play, via the all-lout reduction.

    Turn ownership survives the transformation, so the transformed lout
    division is already per-player; the leftover is whatever the ``m`` picks
    did not consume.
    """
    lout_game, _ = transformed_game(game)
    return plates_of(lout_playout(lout_game), lout_game)


def witness_play(game: Game) -> Play:
    """An optimal play of ``game``, rebuilt from the transformed lout play.

    Copies of one type are interchangeable, so copy indices are renumbered in
    order of first use; the result is the canonical representative.
    """
    lout_game, bijection = transformed_game(game)
    transformed_play = lout_playout(lout_game)
    types: list[int] = [0] * game.m
    for s, original_turn in enumerate(bijection):
        types[original_turn] = transformed_play[s].type_id
    consumed = [0] * game.table.num_types
    picks = []
    for t in types:
        picks.append(Item(t, consumed[t]))
        consumed[t] += 1
    return tuple(picks)


def selfish_two_player_division(
    table: MorselTable, r1: Ranking, r2: Ranking, order: Sequence[int]
) -> Division:
    """Division when two self-interested players consume the whole table.

    ``order`` lists the mover (0 or 1) of each turn; every morsel must be
    consumed.  Solved as the all-knight game where player 1 carries the
    reverse of ``r2`` and player 2 the reverse of ``r1``: with nothing left
    over, maximizing the opponent's plate under a reversed ranking is the
    same as maximizing one's own plate under one's true ranking.
    """
    players = set(order)
    if not players <= {0, 1}:
        raise ValueError("selfish mode is defined for exactly two players")
    if len(order) != table.n:
        raise ValueError("selfish mode requires every morsel to be consumed (m = n)")
    profile = PreferenceProfile((r2.reversed(), r1.reversed()))
    turns = TurnSequence(tuple(Turn(p, Nature.KNIGHT) for p in order))
    return solve_division(Game(table, profile, turns))
