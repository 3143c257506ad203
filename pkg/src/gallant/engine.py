"""Brute-force equilibrium oracle for small instances.

The oracle enumerates, per game state, the exact set of plays that are the
contingent outcome of some subgame-perfect equilibrium.  A leaf is its own
singleton; at an internal node an outcome coming through child ``c``
survives iff for every sibling ``c'`` some outcome of ``c'`` is not strictly
preferred by the mover.  Sibling subtrees admit independent equilibrium
selections, so this local rule characterizes the full set without ever
materializing strategy profiles.

States that share (remaining multiset, turn index) have identical
continuation sets up to their prefix, and the preference orders used here
depend - on plays sharing a prefix - only on per-player plate counts of the
suffix, so results are memoized by that key and compared through plate-count
signatures.

Everything refuses instances above a configurable morsel cap rather than
truncating; the default is deliberately small because tree sizes grow like
n factorial.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

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
from .orders import counts_leq

DEFAULT_CAP = 7
CAP_ENV_VAR = "GALLANT_ORACLE_CAP"


class OracleCapExceeded(RuntimeError):
    """Instance too large for exhaustive enumeration."""


def resolve_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get(CAP_ENV_VAR)
    return int(env) if env else DEFAULT_CAP


def _require_within_cap(n: int, cap: int | None) -> None:
    limit = resolve_cap(cap)
    if n > limit:
        raise OracleCapExceeded(
            f"instance has {n} morsels, oracle cap is {limit} "
            f"(pass cap= or set {CAP_ENV_VAR} to override)"
        )


@dataclass(frozen=True)
class GameState:
    """A node of the decision tree: what is left, whose turn is next, how we got here."""

    remaining: tuple[int, ...]
    turn_index: int
    history: Play = ()


def initial_state(game: Game) -> GameState:
    return GameState(game.table.counts, 0, ())


def state_after(game: Game, prefix: Play) -> GameState:
    remaining = list(game.table.counts)
    for pick in prefix:
        remaining[pick.type_id] -= 1
        if remaining[pick.type_id] < 0:
            raise ValueError("prefix overdraws the table")
    return GameState(tuple(remaining), len(prefix), tuple(prefix))


#: A restricted move generator, as produced by :func:`remove_edges`.
MoveGenerator = Callable[[GameState, Game], Sequence[Item]]


def legal_moves(state: GameState, game: Game) -> tuple[Item, ...]:
    """Canonical moves at a state: all remaining types, or the forced lout favourite.

    One canonical instance per type (the lowest remaining copy); identical
    copies are interchangeable, so offering more would only duplicate
    subtrees.
    """
    if state.turn_index >= game.m:
        raise ValueError("game over: no turns left")
    turn = game.turns.turns[state.turn_index]
    counts = game.table.counts
    if turn.nature is Nature.LOUT:
        for t in game.profile.rankings[turn.player].descending_types():
            if state.remaining[t] > 0:
                return (Item(t, counts[t] - state.remaining[t]),)
        raise ValueError("no morsels remaining")
    return tuple(
        Item(t, counts[t] - state.remaining[t])
        for t in range(game.table.num_types)
        if state.remaining[t] > 0
    )


def remove_edges(
    should_remove: Callable[[GameState, Item], bool],
    base: MoveGenerator | None = None,
) -> MoveGenerator:
    """Move generator that drops edges flagged by ``should_remove``.

    Predicates are evaluated per (remaining multiset, turn index); the state
    they receive carries no history.  Raises if a restriction would leave a
    reachable node with no moves at all.
    """
    base_moves: MoveGenerator = base if base is not None else legal_moves

    def moves(state: GameState, game: Game) -> tuple[Item, ...]:
        kept = tuple(m for m in base_moves(state, game) if not should_remove(state, m))
        if not kept:
            raise ValueError(
                f"restriction removed every move at turn {state.turn_index + 1}"
            )
        return kept

    return moves


# --- suffix-set solver -------------------------------------------------------

Sig = tuple[tuple[int, ...], ...]  # per-player plate counts of a play suffix
StateKey = tuple[tuple[int, ...], int]


class TurnTreeSolver:
    """Memoized achievable-outcome enumeration over a turn-taking pick game.

    Parameterized per turn by which players' plates the pick lands on, an
    optional greedily-forced mover, and the mover's strict-preference test on
    suffix signatures.  Correct whenever the preference depends on plays that
    share a prefix only through per-player plate counts of the suffix, which
    holds for the knight, selfish-total and coalition-Pareto orders.
    """

    def __init__(
        self,
        counts: tuple[int, ...],
        owners: Sequence[tuple[int, ...]],
        forced: Sequence[int | None],
        less: Sequence[Callable[[Sig, Sig], bool]],
        desc_orders: Sequence[tuple[int, ...]],
        moves: Callable[[tuple[int, ...], int], Sequence[Item]] | None = None,
    ) -> None:
        self.counts = counts
        self.m = len(owners)
        self.owners = owners
        self.forced = forced
        self.less = less
        self.desc_orders = desc_orders
        self.moves = moves
        self.num_players = len(desc_orders)
        self.zero_sig: Sig = ((0,) * len(counts),) * self.num_players
        self.memo: dict[StateKey, dict[Play, Sig]] = {}

    def _legal(self, remaining: tuple[int, ...], t: int) -> Sequence[Item]:
        if self.moves is not None:
            return self.moves(remaining, t)
        p = self.forced[t]
        if p is not None:
            for tid in self.desc_orders[p]:
                if remaining[tid] > 0:
                    return (Item(tid, self.counts[tid] - remaining[tid]),)
            raise ValueError("no morsels remaining")
        return tuple(
            Item(tid, self.counts[tid] - remaining[tid])
            for tid, left in enumerate(remaining)
            if left > 0
        )

    def suffixes(self, remaining: tuple[int, ...], t: int) -> dict[Play, Sig]:
        key = (remaining, t)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if t == self.m:
            result: dict[Play, Sig] = {(): self.zero_sig}
            self.memo[key] = result
            return result

        picks = self._legal(remaining, t)
        owners = self.owners[t]
        children: list[dict[Play, Sig]] = []
        for item in picks:
            nxt = list(remaining)
            nxt[item.type_id] -= 1
            sub = self.suffixes(tuple(nxt), t + 1)
            out: dict[Play, Sig] = {}
            for suffix, sig in sub.items():
                out[(item,) + suffix] = _bump(sig, item.type_id, owners)
            children.append(out)

        if len(children) == 1:
            result = children[0]
        else:
            less = self.less[t]
            sig_sets = [set(out.values()) for out in children]
            survives: dict[tuple[Sig, int], bool] = {}
            result = {}
            for ci, out in enumerate(children):
                for suffix, sig in out.items():
                    ok = True
                    for si, sigs in enumerate(sig_sets):
                        if si == ci:
                            continue
                        cached = survives.get((sig, si))
                        if cached is None:
                            cached = any(not less(sig, other) for other in sigs)
                            survives[(sig, si)] = cached
                        if not cached:
                            ok = False
                            break
                    if ok:
                        result[suffix] = sig
        self.memo[key] = result
        return result

    def root_plays(self) -> frozenset[Play]:
        return frozenset(self.suffixes(self.counts, 0))


def _bump(sig: Sig, type_id: int, owners: tuple[int, ...]) -> Sig:
    rows = list(sig)
    for p in owners:
        row = list(rows[p])
        row[type_id] += 1
        rows[p] = tuple(row)
    return tuple(rows)


def knight_less_fn(
    ascending: Sequence[tuple[int, ...]], i: int, k: int
) -> Callable[[Sig, Sig], bool]:
    """Strict knight preference of player ``i`` on suffix signatures."""

    def less(sa: Sig, sb: Sig) -> bool:
        any_strict = False
        for j in range(k):
            if j == i:
                continue
            a, b = sa[j], sb[j]
            if a == b:
                continue
            if not counts_leq(a, b, ascending[j]):
                return False
            any_strict = True
        if any_strict:
            return True
        a, b = sa[i], sb[i]
        return a != b and counts_leq(a, b, ascending[i])

    return less


def _knight_solver(game: Game, moves: MoveGenerator | None = None) -> TurnTreeSolver:
    asc = [r.ascending_types() for r in game.profile.rankings]
    desc = [r.descending_types() for r in game.profile.rankings]
    per_player = [knight_less_fn(asc, i, game.k) for i in range(game.k)]
    owners = [(t.player,) for t in game.turns.turns]
    forced = [t.player if t.nature is Nature.LOUT else None for t in game.turns.turns]
    less = [per_player[t.player] for t in game.turns.turns]
    low = None
    if moves is not None:
        low = lambda remaining, t: moves(GameState(remaining, t), game)
    return TurnTreeSolver(game.table.counts, owners, forced, less, desc, moves=low)


def optimal_outcome_set(
    state: GameState, game: Game, *, cap: int | None = None, moves: MoveGenerator | None = None
) -> frozenset[Play]:
    """All plays achievable from ``state`` under some subgame-perfect equilibrium."""
    _require_within_cap(game.n, cap)
    if state.turn_index != len(state.history):
        raise ValueError("state turn_index does not match its history")
    solver = _knight_solver(game, moves)
    return frozenset(
        state.history + suffix
        for suffix in solver.suffixes(state.remaining, state.turn_index)
    )


def enumerate_optimal_plays(
    game: Game, *, cap: int | None = None, moves: MoveGenerator | None = None
) -> frozenset[Play]:
    """The optimal plays of the game: the outcome set at the root."""
    _require_within_cap(game.n, cap)
    return _knight_solver(game, moves).root_plays()


def optimal_divisions(
    game: Game, *, cap: int | None = None, moves: MoveGenerator | None = None
) -> frozenset[Division]:
    return frozenset(
        plates_of(play, game) for play in enumerate_optimal_plays(game, cap=cap, moves=moves)
    )


def optimal_move_usage(
    game: Game, *, cap: int | None = None, moves: MoveGenerator | None = None
) -> dict[StateKey, frozenset[Item]]:
    """Per reachable state, the first picks used by some achievable outcome."""
    _require_within_cap(game.n, cap)
    solver = _knight_solver(game, moves)
    solver.root_plays()
    usage: dict[StateKey, frozenset[Item]] = {}
    for key, out in solver.memo.items():
        if key[1] < game.m:
            usage[key] = frozenset(suffix[0] for suffix in out)
    return usage


# --- strategy profiles -------------------------------------------------------


@dataclass(frozen=True)
class StrategyProfile:
    """One arrow per decision node, keyed by the node's history prefix."""

    choice: Mapping[Play, Item]


@dataclass(frozen=True)
class EquilibriumCheck:
    ok: bool
    counterexample: Play | None = None

    def __bool__(self) -> bool:
        return self.ok


def _play_sig(play: Play, game: Game) -> Sig:
    counts = [[0] * game.table.num_types for _ in range(game.k)]
    for pick, turn in zip(play, game.turns.turns):
        counts[turn.player][pick.type_id] += 1
    return tuple(tuple(row) for row in counts)


def is_equilibrium(
    profile: StrategyProfile, game: Game, *, cap: int | None = None
) -> EquilibriumCheck:
    """Check subgame perfection of a profile under the knight partial order.

    At every node the chosen child's contingent outcome must not be strictly
    below any sibling's contingent outcome in the mover's knight order; lout
    turns have a single legal child, so they hold trivially.  Returns the
    first failing node (preorder) as counterexample.  Plays compared at one
    node share its history, so plate-count signatures of full plays decide
    the knight order exactly.
    """
    _require_within_cap(game.n, cap)
    asc = [r.ascending_types() for r in game.profile.rankings]
    less_by_player = [knight_less_fn(asc, i, game.k) for i in range(game.k)]
    contingent_memo: dict[Play, Play] = {}
    sig_memo: dict[Play, Sig] = {}

    def contingent(state: GameState) -> Play:
        hit = contingent_memo.get(state.history)
        if hit is not None:
            return hit
        if state.turn_index == game.m:
            result = state.history
        else:
            chosen = profile.choice.get(state.history)
            if chosen is None:
                raise ValueError(
                    f"incomplete profile: no choice at turn {state.turn_index + 1} "
                    f"history {state.history}"
                )
            if chosen not in legal_moves(state, game):
                raise ValueError(
                    f"profile picks illegal move {chosen} at turn {state.turn_index + 1}"
                )
            result = contingent(_child(state, chosen))
        contingent_memo[state.history] = result
        return result

    def sig_of(play: Play) -> Sig:
        hit = sig_memo.get(play)
        if hit is None:
            hit = sig_memo[play] = _play_sig(play, game)
        return hit

    def walk(state: GameState) -> Play | None:
        if state.turn_index == game.m:
            return None
        less = less_by_player[game.turns.turns[state.turn_index].player]
        items = legal_moves(state, game)
        children = {item: contingent(_child(state, item)) for item in items}
        own = children[profile.choice[state.history]]
        own_sig = sig_of(own)
        for other in children.values():
            if other != own and less(own_sig, sig_of(other)):
                return state.history
        for item in items:
            bad = walk(_child(state, item))
            if bad is not None:
                return bad
        return None

    contingent(initial_state(game))  # surfaces incomplete profiles up front
    bad = walk(initial_state(game))
    return EquilibriumCheck(bad is None, bad)


def _child(state: GameState, item: Item) -> GameState:
    remaining = list(state.remaining)
    remaining[item.type_id] -= 1
    return GameState(tuple(remaining), state.turn_index + 1, state.history + (item,))


def backward_induction_profile(game: Game, *, cap: int | None = None) -> StrategyProfile:
    """Equilibrium built bottom-up under the integer knight-key total refinement.

    Ties on equal keys break toward the lexicographically smallest contingent
    play, so the profile is a deterministic function of the game.
    """
    _require_within_cap(game.n, cap)
    enjoy = [r.enjoyment for r in game.profile.rankings]
    choice: dict[Play, Item] = {}

    def key_of(sig: Sig, i: int) -> tuple[int, int]:
        totals = [
            sum(e * c for e, c in zip(enjoy[j], sig[j]) if c) for j in range(game.k)
        ]
        return (sum(totals) - totals[i], totals[i])

    def best(state: GameState) -> tuple[Play, Sig]:
        if state.turn_index == game.m:
            return state.history, _play_sig(state.history, game)
        mover = game.turns.turns[state.turn_index].player
        best_item: Item | None = None
        best_play: Play | None = None
        best_sig: Sig | None = None
        best_key = None
        for item in legal_moves(state, game):
            play, sig = best(_child(state, item))
            key = key_of(sig, mover)
            if (
                best_key is None
                or key > best_key
                or (key == best_key and play < best_play)  # type: ignore[operator]
            ):
                best_item, best_play, best_sig, best_key = item, play, sig, key
        choice[state.history] = best_item  # type: ignore[assignment]
        return best_play, best_sig  # type: ignore[return-value]

    best(initial_state(game))
    return StrategyProfile(choice)


def extension_equilibrium_check(game: Game, *, cap: int | None = None) -> bool:
    """Backward induction under the total key refinement stays a knight equilibrium.

    Any equilibrium for an extension of the knight order is an equilibrium
    for the knight order itself; this constructs one and asserts it.
    """
    profile = backward_induction_profile(game, cap=cap)
    return is_equilibrium(profile, game, cap=cap).ok


# --- generic play-level enumeration ------------------------------------------


def enumerate_plays_under(
    game: Game,
    play_less: Callable[[Play, Play, int], bool],
    *,
    forced_louts: bool = True,
    cap: int | None = None,
) -> frozenset[Play]:
    """Achievable-outcome enumeration under an arbitrary strict preference on plays.

    ``play_less(x, y, mover)`` must say whether the mover strictly prefers
    ``y``.  No signature shortcut is available for sequence-sensitive orders
    (the lout order, say), so this walks histories directly; keep instances
    small.  ``forced_louts=False`` leaves every turn unrestricted regardless
    of its nature.
    """
    _require_within_cap(game.n, cap)

    def moves(state: GameState) -> tuple[Item, ...]:
        if forced_louts:
            return legal_moves(state, game)
        counts = game.table.counts
        return tuple(
            Item(t, counts[t] - state.remaining[t])
            for t in range(game.table.num_types)
            if state.remaining[t] > 0
        )

    def rec(state: GameState) -> frozenset[Play]:
        if state.turn_index == game.m:
            return frozenset({state.history})
        mover = game.turns.turns[state.turn_index].player
        child_sets = [rec(_child(state, item)) for item in moves(state)]
        if len(child_sets) == 1:
            return child_sets[0]
        out = set()
        for ci, plays in enumerate(child_sets):
            for play in plays:
                if all(
                    any(not play_less(play, other, mover) for other in sibling)
                    for si, sibling in enumerate(child_sets)
                    if si != ci
                ):
                    out.add(play)
        return frozenset(out)

    return rec(initial_state(game))


# --- selfish two-player oracle ------------------------------------------------


def selfish_two_player_plays(
    table: MorselTable,
    r1: Ranking,
    r2: Ranking,
    order: Sequence[int],
    *,
    cap: int | None = None,
) -> frozenset[Play]:
    """Backward-induction outcomes when both players maximize their own total.

    Ties in totals admit multiple equilibria; the full achievable set comes
    out, same sibling rule as the knight oracle but with the (total) own-sum
    preorder.
    """
    _require_within_cap(table.n, cap)
    if not set(order) <= {0, 1}:
        raise ValueError("selfish oracle is defined for exactly two players")
    if len(order) != table.n:
        raise ValueError("selfish oracle requires m = n")
    rankings = (r1, r2)
    desc = [r.descending_types() for r in rankings]

    def own_sum_less(i: int) -> Callable[[Sig, Sig], bool]:
        enjoy = rankings[i].enjoyment

        def less(sa: Sig, sb: Sig) -> bool:
            ta = sum(e * c for e, c in zip(enjoy, sa[i]))
            tb = sum(e * c for e, c in zip(enjoy, sb[i]))
            return ta < tb

        return less

    per_player = [own_sum_less(0), own_sum_less(1)]
    solver = TurnTreeSolver(
        table.counts,
        owners=[(p,) for p in order],
        forced=[None] * len(order),
        less=[per_player[p] for p in order],
        desc_orders=desc,
    )
    return solver.root_plays()


def selfish_two_player_divisions(
    table: MorselTable,
    r1: Ranking,
    r2: Ranking,
    order: Sequence[int],
    *,
    cap: int | None = None,
) -> frozenset[Division]:
    game = Game(
        table,
        PreferenceProfile((r1, r2)),
        TurnSequence(tuple(Turn(p, Nature.KNIGHT) for p in order)),
    )
    plays = selfish_two_player_plays(table, r1, r2, order, cap=cap)
    return frozenset(plates_of(play, game) for play in plays)
