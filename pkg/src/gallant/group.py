"""Group-decision dinners and their knight-game dual.

Players take turns speaking; while one speaks, the other ``k-1`` players
jointly pick a morsel and share it.  Every morsel gets eaten (the number of
turns equals the number of morsels).  Coalitions decide Pareto-efficiently
over their members' shared plates.  Reversing every ranking turns this into
the ordinary all-knight game where the speaker picks for himself: what you
partake of in the group view is exactly what you did not eat in the knight
view.

``conflict_free_check`` verifies the stronger equilibrium property directly
on the group tree, without going through the knight reduction: at every
node some choice is simultaneously a weakly best child for every member of
the deciding coalition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .engine import (
    Sig,
    StateKey,
    TurnTreeSolver,
    _bump,
    _require_within_cap,
)
from .model import (
    Game,
    Item,
    MorselTable,
    Nature,
    Plate,
    Play,
    PreferenceProfile,
    Ranking,
    Turn,
    TurnSequence,
)
from .solver import witness_play


@dataclass(frozen=True)
class GroupGame:
    """A group-decision dinner: per turn one speaker, everyone else shares."""

    table: MorselTable
    profile: PreferenceProfile
    speaking_order: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "speaking_order", tuple(self.speaking_order))
        if len(self.speaking_order) != self.table.n:
            raise ValueError(
                f"speaking order has {len(self.speaking_order)} turns, table has "
                f"{self.table.n} morsels (group games consume everything)"
            )
        t = self.table.num_types
        for i, r in enumerate(self.profile.rankings):
            if len(r.rank) != t:
                raise ValueError(f"player {i + 1}: ranking covers {len(r.rank)} of {t} types")
        for j, p in enumerate(self.speaking_order):
            if not (0 <= p < self.profile.k):
                raise ValueError(f"turn {j + 1}: unknown speaker index {p + 1}")

    @property
    def n(self) -> int:
        return self.table.n

    @property
    def k(self) -> int:
        return self.profile.k

    def coalition(self, turn: int) -> tuple[int, ...]:
        speaker = self.speaking_order[turn]
        return tuple(j for j in range(self.k) if j != speaker)


@dataclass(frozen=True)
class GroupOutcome:
    """Resolved group play: picks per turn, who shared, and what each player partook of."""

    picks: Play
    sharers: tuple[tuple[int, ...], ...]
    partake: tuple[Plate, ...]


def group_to_knight(g: GroupGame) -> Game:
    """The dual all-knight game: speakers pick for themselves, rankings reversed."""
    profile = PreferenceProfile(tuple(r.reversed() for r in g.profile.rankings))
    turns = TurnSequence(tuple(Turn(p, Nature.KNIGHT) for p in g.speaking_order))
    return Game(g.table, profile, turns)


def partake_plates(play: Play, g: GroupGame) -> tuple[Plate, ...]:
    """Per player, the multiset of morsels shared in along ``play``."""
    counts = [[0] * g.table.num_types for _ in range(g.k)]
    for turn, pick in enumerate(play):
        for j in g.coalition(turn):
            counts[j][pick.type_id] += 1
    return tuple(Plate(tuple(c)) for c in counts)


def solve_group(g: GroupGame) -> GroupOutcome:
    """Picks and partake division of the group dinner under optimal play.

    The partake division is the same for every optimal play; the picks are
    the witness play of the dual knight game.
    """
    picks = witness_play(group_to_knight(g))
    sharers = tuple(g.coalition(t) for t in range(g.n))
    return GroupOutcome(picks=picks, sharers=sharers, partake=partake_plates(picks, g))


def _pareto_less_fn(coalition, ascending):
    def less(sa: Sig, sb: Sig) -> bool:
        any_strict = False
        for j in coalition:
            a, b = sa[j], sb[j]
            if a == b:
                continue
            cum_a = 0
            cum_b = 0
            ok = True
            for t in ascending[j]:
                cum_a += a[t]
                cum_b += b[t]
                if cum_a < cum_b:
                    ok = False
                    break
            if not ok:
                return False
            any_strict = True
        return any_strict

    return less


def _group_solver(g: GroupGame, rankings: Sequence[Ranking] | None) -> TurnTreeSolver:
    rankings = tuple(rankings) if rankings is not None else g.profile.rankings
    if len(rankings) != g.k:
        raise ValueError("need one comparison ranking per player")
    asc = [r.ascending_types() for r in rankings]
    desc = [r.descending_types() for r in rankings]
    owners = [g.coalition(t) for t in range(g.n)]
    less = [_pareto_less_fn(g.coalition(t), asc) for t in range(g.n)]
    return TurnTreeSolver(
        g.table.counts,
        owners=owners,
        forced=[None] * g.n,
        less=less,
        desc_orders=desc,
    )


def group_tree_outcomes(
    g: GroupGame, *, cap: int | None = None, rankings: Sequence[Ranking] | None = None
) -> frozenset[Play]:
    """Optimal plays of the group tree itself, under the coalition Pareto order.

    Independent of the knight reduction, so theorem-level tests are not
    circular.  ``rankings`` substitutes the rankings the coalitions compare
    with (the members' own ones by default).
    """
    _require_within_cap(g.n, cap)
    return _group_solver(g, rankings).root_plays()


@dataclass(frozen=True)
class ConflictReport:
    """Result of the conflict-free sweep: per-node witness picks, or the first conflict."""

    ok: bool
    witnesses: Mapping[StateKey, Item]
    conflict: tuple[StateKey, Item, int] | None = None  # (node, rival pick, member)

    def __bool__(self) -> bool:
        return self.ok


def conflict_free_check(
    g: GroupGame,
    *,
    cap: int | None = None,
    coalition_rankings: Sequence[Ranking] | None = None,
) -> ConflictReport:
    """Check that every equilibrium of the group tree is conflict-free.

    Builds the group tree under the coalition Pareto order and verifies, at
    every reachable node, that the equilibrium choice leaves no member
    strictly preferring any sibling's contingent plate, no matter which
    equilibrium the sibling subtrees settle on.  Works per node because all
    achievable outcomes of a subgame share one partake division.

    ``coalition_rankings`` substitutes what the coalitions optimize during
    tree construction while members' true rankings still judge the result;
    with the default (their own rankings) the check is the theorem, with a
    corrupted substitution it can and should fail.
    """
    _require_within_cap(g.n, cap)
    solver = _group_solver(g, coalition_rankings)
    solver.root_plays()
    true_asc = [r.ascending_types() for r in g.profile.rankings]

    def representative(key: StateKey) -> tuple[Play, Sig]:
        out = solver.memo[key]
        sigs = set(out.values())
        if len(sigs) != 1:
            raise RuntimeError(
                f"achievable outcomes at {key} disagree on plates; oracle invariant broken"
            )
        suffix = min(out)
        return suffix, out[suffix]

    witnesses: dict[StateKey, Item] = {}
    for key in list(solver.memo):
        remaining, t = key
        if t >= g.n:
            continue
        suffix, rep_sig = representative(key)
        witnesses[key] = suffix[0]
        owners = g.coalition(t)
        for item in solver._legal(remaining, t):
            nxt = list(remaining)
            nxt[item.type_id] -= 1
            _, child_sig = representative((tuple(nxt), t + 1))
            alt_sig = _bump(child_sig, item.type_id, owners)
            if alt_sig == rep_sig:
                continue
            for j in owners:
                a, b = rep_sig[j], alt_sig[j]
                if a == b:
                    continue
                cum_a = 0
                cum_b = 0
                strictly_better = True
                for tid in true_asc[j]:
                    cum_a += a[tid]
                    cum_b += b[tid]
                    if cum_a < cum_b:
                        strictly_better = False
                        break
                if strictly_better:
                    return ConflictReport(False, witnesses, (key, item, j))
    return ConflictReport(True, witnesses)


def parse_group_spec(text: str) -> GroupGame:
    """Parse a spec with a ``speakers`` line into a :class:`GroupGame`."""
    from .model import SpecError, parse_spec

    doc = parse_spec(text)
    if doc.speakers is None:
        raise SpecError("missing 'speakers' line")
    return GroupGame(doc.table, doc.profile, doc.speakers)
