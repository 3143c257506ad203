"""Domain model for sequential food-selection ("dinner table") games.

A table holds ``n`` indivisible morsels, possibly with identical copies (a
multiset of morsel types).  ``k`` players pick morsels one at a time along a
fixed turn sequence; each turn is played in "knight" mode (the mover weighs
everybody else's plate) or "lout" mode (the mover greedily grabs their own
current favourite).  This module defines the immutable value types for
tables, rankings, turn sequences, plays and divisions, plus parsing and
canonical rendering of the line-oriented game-spec format::

    players 2
    morsels a b c          # "a*2" puts two identical copies of a on the table
    enjoy 1: 1 2 0         # integer enjoyments, one per morsel type
    rank 2: a b c          # alternative form: names, least enjoyable first
    turns 1K 2K 1K         # K = knight turn, L = lout turn
    speakers 1 2 3         # group mode only, replaces "turns"

Players are 1-indexed in files and rendered text, 0-indexed in code.
Enjoyments are integers, pairwise distinct per player, so every comparison
and total is exact.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple


class SpecError(ValueError):
    """Malformed game-spec document, carrying the 1-based source line when known."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class Nature(Enum):
    """How a turn is played: gallant knight or boorish lout."""

    KNIGHT = "K"
    LOUT = "L"


class Item(NamedTuple):
    """A concrete morsel instance: a copy of one morsel type."""

    type_id: int
    copy: int


#: A play is the ordered record of picked instances, one per turn.
Play = tuple[Item, ...]


@dataclass(frozen=True)
class MorselType:
    """One kind of morsel; ``multiplicity`` identical copies sit on the table."""

    id: int
    name: str
    multiplicity: int = 1

    def __post_init__(self) -> None:
        if self.multiplicity < 1:
            raise ValueError(f"morsel {self.name!r}: multiplicity must be >= 1")
        if not self.name or any(ch.isspace() for ch in self.name):
            raise ValueError(f"invalid morsel name {self.name!r}")


@dataclass(frozen=True)
class MorselTable:
    """The food: a dense list of morsel types with multiplicities."""

    types: tuple[MorselType, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "types", tuple(self.types))
        if not self.types:
            raise ValueError("table must hold at least one morsel")
        if [t.id for t in self.types] != list(range(len(self.types))):
            raise ValueError("morsel type ids must be dense 0..T-1 in order")
        names = [t.name for t in self.types]
        if len(set(names)) != len(names):
            raise ValueError("duplicate morsel name")

    @property
    def num_types(self) -> int:
        return len(self.types)

    @property
    def n(self) -> int:
        """Total number of morsel instances on the table."""
        return sum(t.multiplicity for t in self.types)

    @property
    def counts(self) -> tuple[int, ...]:
        cached = getattr(self, "_counts", None)
        if cached is None:
            cached = tuple(t.multiplicity for t in self.types)
            object.__setattr__(self, "_counts", cached)
        return cached

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.types)

    def index(self, name: str) -> int:
        for t in self.types:
            if t.name == name:
                return t.id
        raise KeyError(name)

    @classmethod
    def of(cls, *names: str, counts: dict[str, int] | None = None) -> "MorselTable":
        """Convenience constructor from names, with optional multiplicities."""
        counts = counts or {}
        return cls(
            tuple(
                MorselType(i, name, counts.get(name, 1)) for i, name in enumerate(names)
            )
        )


@dataclass(frozen=True)
class Ranking:
    """One player's strict total order over morsel types.

    ``rank[t]`` is the position of type ``t`` (0 = least enjoyable, higher is
    better).  ``enjoyment[t]`` is an integer value, pairwise distinct and
    order-consistent with ``rank``; identical copies of one type share both.
    """

    rank: tuple[int, ...]
    enjoyment: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rank", tuple(self.rank))
        object.__setattr__(self, "enjoyment", tuple(self.enjoyment))
        if sorted(self.rank) != list(range(len(self.rank))):
            raise ValueError("rank must be a bijection onto 0..T-1")
        if len(self.enjoyment) != len(self.rank):
            raise ValueError("enjoyment and rank must cover the same types")
        if len(set(self.enjoyment)) != len(self.enjoyment):
            raise ValueError("duplicate enjoyment value")
        by_rank = sorted(range(len(self.rank)), key=self.rank.__getitem__)
        values = [self.enjoyment[t] for t in by_rank]
        if values != sorted(values):
            raise ValueError("enjoyments must be order-consistent with rank")

    @classmethod
    def from_enjoyments(cls, values: tuple[int, ...] | list[int]) -> "Ranking":
        values = tuple(values)
        order = sorted(range(len(values)), key=values.__getitem__)
        rank = [0] * len(values)
        for pos, t in enumerate(order):
            rank[t] = pos
        return cls(tuple(rank), values)

    @classmethod
    def from_ranks(cls, rank: tuple[int, ...] | list[int]) -> "Ranking":
        rank = tuple(rank)
        return cls(rank, rank)

    def reversed(self) -> "Ranking":
        """The same types ranked in the opposite order."""
        top = len(self.rank) - 1
        return Ranking(
            tuple(top - r for r in self.rank), tuple(-e for e in self.enjoyment)
        )

    def ascending_types(self) -> tuple[int, ...]:
        """Type ids from least to most enjoyable (cached)."""
        cached = getattr(self, "_asc", None)
        if cached is None:
            out = [0] * len(self.rank)
            for t, r in enumerate(self.rank):
                out[r] = t
            cached = tuple(out)
            object.__setattr__(self, "_asc", cached)
        return cached

    def descending_types(self) -> tuple[int, ...]:
        """Type ids from most to least enjoyable (cached)."""
        cached = getattr(self, "_desc", None)
        if cached is None:
            cached = self.ascending_types()[::-1]
            object.__setattr__(self, "_desc", cached)
        return cached


@dataclass(frozen=True)
class PreferenceProfile:
    """One ranking per player."""

    rankings: tuple[Ranking, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rankings", tuple(self.rankings))
        if not self.rankings:
            raise ValueError("need at least one player")
        sizes = {len(r.rank) for r in self.rankings}
        if len(sizes) != 1:
            raise ValueError("rankings cover different numbers of types")

    @property
    def k(self) -> int:
        return len(self.rankings)


@dataclass(frozen=True)
class Turn:
    player: int
    nature: Nature

    def __post_init__(self) -> None:
        if self.player < 0:
            raise ValueError("player index must be >= 0")


@dataclass(frozen=True)
class TurnSequence:
    turns: tuple[Turn, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "turns", tuple(self.turns))
        if not self.turns:
            raise ValueError("need at least one turn")

    @property
    def m(self) -> int:
        return len(self.turns)

    def all_lout(self) -> bool:
        return all(t.nature is Nature.LOUT for t in self.turns)

    @classmethod
    def of(cls, *player_nature: tuple[int, Nature]) -> "TurnSequence":
        return cls(tuple(Turn(p, nat) for p, nat in player_nature))


@dataclass(frozen=True)
class Game:
    """A full instance: table, preferences and turn protocol."""

    table: MorselTable
    profile: PreferenceProfile
    turns: TurnSequence

    def __post_init__(self) -> None:
        t = self.table.num_types
        for i, r in enumerate(self.profile.rankings):
            if len(r.rank) != t:
                raise ValueError(f"player {i + 1}: ranking covers {len(r.rank)} of {t} types")
        if self.turns.m > self.table.n:
            raise ValueError("m exceeds n")
        for j, turn in enumerate(self.turns.turns):
            if turn.player >= self.profile.k:
                raise ValueError(f"turn {j + 1}: unknown player index {turn.player + 1}")

    @property
    def n(self) -> int:
        return self.table.n

    @property
    def m(self) -> int:
        return self.turns.m

    @property
    def k(self) -> int:
        return self.profile.k


@dataclass(frozen=True)
class Plate:
    """A multiset of morsel types, as a count per type id."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", tuple(self.counts))
        if self.counts and min(self.counts) < 0:
            raise ValueError("plate counts must be >= 0")

    @property
    def size(self) -> int:
        return sum(self.counts)

    def complement(self, table: MorselTable) -> "Plate":
        comp = tuple(m - c for m, c in zip(table.counts, self.counts))
        if any(c < 0 for c in comp):
            raise ValueError("plate exceeds table multiplicities")
        return Plate(comp)

    @classmethod
    def empty(cls, num_types: int) -> "Plate":
        return cls((0,) * num_types)

    @classmethod
    def of(cls, table: MorselTable, *names: str) -> "Plate":
        counts = [0] * table.num_types
        for name in names:
            counts[table.index(name)] += 1
        return cls(tuple(counts))


@dataclass(frozen=True)
class Division:
    """The final partition of consumed morsels: one plate per player, plus leftovers."""

    table: MorselTable
    plates: tuple[Plate, ...]
    leftover: Plate

    def __post_init__(self) -> None:
        object.__setattr__(self, "plates", tuple(self.plates))
        total = list(self.leftover.counts)
        for p in self.plates:
            for t, c in enumerate(p.counts):
                total[t] += c
        if tuple(total) != self.table.counts:
            raise ValueError("plates plus leftover do not reconstitute the table")


def validate_play(play: Play, game: Game) -> None:
    """Check that ``play`` is a legal record of picks for ``game``."""
    if len(play) != game.m:
        raise ValueError(f"play has {len(play)} picks, game has {game.m} turns")
    seen = set()
    counts = game.table.counts
    for pick in play:
        t, c = pick
        if not (0 <= t < game.table.num_types):
            raise ValueError(f"play references unknown morsel type {t}")
        if not (0 <= c < counts[t]):
            raise ValueError(f"play references unknown copy {c} of {game.table.types[t].name}")
        if pick in seen:
            raise ValueError(f"play repeats instance {game.table.types[t].name}#{c}")
        seen.add(pick)


def plates_of(play: Play, game: Game) -> Division:
    """Derive the division from a play: each pick lands on the mover's plate."""
    validate_play(play, game)
    t_count = game.table.num_types
    per_player = [[0] * t_count for _ in range(game.k)]
    for pick, turn in zip(play, game.turns.turns):
        per_player[turn.player][pick.type_id] += 1
    left = list(game.table.counts)
    for pick in play:
        left[pick.type_id] -= 1
    return Division(
        table=game.table,
        plates=tuple(Plate(tuple(c)) for c in per_player),
        leftover=Plate(tuple(left)),
    )


def _plate_tokens(plate: Plate, table: MorselTable) -> list[str]:
    out = []
    for t, c in enumerate(plate.counts):
        if c == 1:
            out.append(table.types[t].name)
        elif c > 1:
            out.extend([table.types[t].name, f"x{c}"])
    return out


def canonical_text(division: Division) -> str:
    """Deterministic rendering: players ascending, types by id, ``x<count>`` for copies."""
    lines = []
    for i, plate in enumerate(division.plates):
        tokens = _plate_tokens(plate, division.table)
        lines.append(f"{i + 1}:" + (" " + " ".join(tokens) if tokens else ""))
    tokens = _plate_tokens(division.leftover, division.table)
    lines.append("leftover:" + (" " + " ".join(tokens) if tokens else ""))
    return "\n".join(lines)


_COUNT_TOKEN = re.compile(r"^x(\d+)$")


def _parse_plate_tokens(tokens: list[str], table: MorselTable, where: str) -> Plate:
    counts = [0] * table.num_types
    last: int | None = None
    for tok in tokens:
        mult = _COUNT_TOKEN.match(tok)
        if mult:
            if last is None:
                raise ValueError(f"{where}: count token {tok!r} without a morsel")
            counts[last] += int(mult.group(1)) - 1
            last = None
            continue
        try:
            last = table.index(tok)
        except KeyError:
            raise ValueError(f"{where}: unknown morsel {tok!r}") from None
        counts[last] += 1
    return Plate(tuple(counts))


def parse_division_text(text: str, table: MorselTable) -> Division:
    """Parse the output of :func:`canonical_text` back into a Division."""
    plates: list[Plate] = []
    leftover: Plate | None = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        tokens = rest.split()
        if head == "leftover":
            leftover = _parse_plate_tokens(tokens, table, "leftover")
            continue
        if not head.isdigit() or int(head) != len(plates) + 1:
            raise ValueError(f"unexpected division line {line!r}")
        plates.append(_parse_plate_tokens(tokens, table, f"player {head}"))
    if leftover is None:
        raise ValueError("missing leftover line")
    return Division(table=table, plates=tuple(plates), leftover=leftover)


# --- game-spec parsing -----------------------------------------------------

_MORSEL_TOKEN = re.compile(r"^([^\s*:#]+)(?:\*(\d+))?$")
_TURN_TOKEN = re.compile(r"^(\d+)([KkLl])?$")


@dataclass(frozen=True)
class SpecDocument:
    """A parsed game-spec file; turns and speakers stay optional at this level."""

    table: MorselTable
    profile: PreferenceProfile
    turn_tokens: tuple[tuple[int, Nature | None], ...] | None
    speakers: tuple[int, ...] | None
    turns_line: int | None = None
    speakers_line: int | None = None


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            yield lineno, tokens


def parse_spec(text: str) -> SpecDocument:
    """Parse a game-spec document; raises :class:`SpecError` with line numbers."""
    players_tok: tuple[int, list[str]] | None = None
    morsels_tok: tuple[int, list[str]] | None = None
    turns_tok: tuple[int, list[str]] | None = None
    speakers_tok: tuple[int, list[str]] | None = None
    pref_tok: dict[int, tuple[str, int, list[str]]] = {}

    for lineno, tokens in _lines(text):
        head = tokens[0]
        if head == "players":
            if players_tok is not None:
                raise SpecError("duplicate 'players' line", lineno)
            players_tok = (lineno, tokens[1:])
        elif head == "morsels":
            if morsels_tok is not None:
                raise SpecError("duplicate 'morsels' line", lineno)
            morsels_tok = (lineno, tokens[1:])
        elif head in ("enjoy", "rank"):
            if len(tokens) < 2 or not tokens[1].endswith(":"):
                raise SpecError(f"expected '{head} <player>:'", lineno)
            who = tokens[1][:-1]
            if not who.isdigit():
                raise SpecError(f"bad player index {who!r}", lineno)
            player = int(who)
            if player in pref_tok:
                raise SpecError(f"duplicate preference line for player {player}", lineno)
            pref_tok[player] = (head, lineno, tokens[2:])
        elif head == "turns":
            if turns_tok is not None:
                raise SpecError("duplicate 'turns' line", lineno)
            turns_tok = (lineno, tokens[1:])
        elif head == "speakers":
            if speakers_tok is not None:
                raise SpecError("duplicate 'speakers' line", lineno)
            speakers_tok = (lineno, tokens[1:])
        else:
            raise SpecError(f"unknown directive {head!r}", lineno)

    if players_tok is None:
        raise SpecError("missing 'players' line")
    lineno, toks = players_tok
    if len(toks) != 1 or not toks[0].isdigit() or int(toks[0]) < 1:
        raise SpecError("players must be a single positive integer", lineno)
    k = int(toks[0])

    if morsels_tok is None:
        raise SpecError("missing 'morsels' line")
    lineno, toks = morsels_tok
    if not toks:
        raise SpecError("morsels line lists no morsels", lineno)
    types: list[MorselType] = []
    seen_names: set[str] = set()
    for tok in toks:
        m = _MORSEL_TOKEN.match(tok)
        if not m:
            raise SpecError(f"bad morsel token {tok!r}", lineno)
        name, mult = m.group(1), int(m.group(2) or 1)
        if name in seen_names:
            raise SpecError(f"duplicate morsel name {name!r}", lineno)
        if mult < 1:
            raise SpecError(f"morsel {name!r}: multiplicity must be >= 1", lineno)
        seen_names.add(name)
        types.append(MorselType(len(types), name, mult))
    table = MorselTable(tuple(types))
    t_count = table.num_types

    rankings: list[Ranking | None] = [None] * k
    for player, (kind, lineno, toks) in sorted(pref_tok.items()):
        if not (1 <= player <= k):
            raise SpecError(f"unknown player index {player}", lineno)
        if len(toks) != t_count:
            raise SpecError(
                f"{kind} {player}: expected {t_count} entries, got {len(toks)}", lineno
            )
        if kind == "enjoy":
            try:
                values = tuple(int(v) for v in toks)
            except ValueError:
                raise SpecError(f"enjoy {player}: values must be integers", lineno) from None
            if len(set(values)) != len(values):
                raise SpecError(f"duplicate enjoyment value for player {player}", lineno)
            rankings[player - 1] = Ranking.from_enjoyments(values)
        else:
            rank = [0] * t_count
            seen: set[int] = set()
            for pos, name in enumerate(toks):
                try:
                    t = table.index(name)
                except KeyError:
                    raise SpecError(
                        f"rank {player}: unknown morsel {name!r}", lineno
                    ) from None
                if t in seen:
                    raise SpecError(
                        f"non-bijective ranking for player {player}: {name!r} repeated",
                        lineno,
                    )
                seen.add(t)
                rank[t] = pos
            rankings[player - 1] = Ranking.from_ranks(rank)
    for i, r in enumerate(rankings):
        if r is None:
            raise SpecError(f"player {i + 1} has no enjoy or rank line")
    profile = PreferenceProfile(tuple(rankings))  # type: ignore[arg-type]

    turn_tokens: tuple[tuple[int, Nature | None], ...] | None = None
    turns_line: int | None = None
    if turns_tok is not None:
        turns_line, toks = turns_tok
        if not toks:
            raise SpecError("turns line lists no turns", turns_line)
        if len(toks) > table.n:
            raise SpecError("m exceeds n", turns_line)
        parsed: list[tuple[int, Nature | None]] = []
        for tok in toks:
            m = _TURN_TOKEN.match(tok)
            if not m:
                raise SpecError(f"bad turn token {tok!r}", turns_line)
            player = int(m.group(1))
            if not (1 <= player <= k):
                raise SpecError(f"unknown player index {player} in turns", turns_line)
            nature = Nature(m.group(2).upper()) if m.group(2) else None
            parsed.append((player - 1, nature))
        turn_tokens = tuple(parsed)

    speakers: tuple[int, ...] | None = None
    speakers_line: int | None = None
    if speakers_tok is not None:
        speakers_line, toks = speakers_tok
        parsed_sp: list[int] = []
        for tok in toks:
            if not tok.isdigit():
                raise SpecError(f"bad speaker token {tok!r}", speakers_line)
            player = int(tok)
            if not (1 <= player <= k):
                raise SpecError(f"unknown player index {player} in speakers", speakers_line)
            parsed_sp.append(player - 1)
        speakers = tuple(parsed_sp)

    return SpecDocument(table, profile, turn_tokens, speakers, turns_line, speakers_line)


def parse_game_spec(text: str) -> Game:
    """Parse a spec with a ``turns`` line into a validated :class:`Game`."""
    doc = parse_spec(text)
    if doc.turn_tokens is None:
        raise SpecError("missing 'turns' line")
    turns = []
    for j, (player, nature) in enumerate(doc.turn_tokens):
        if nature is None:
            raise SpecError(f"turn {j + 1}: missing nature letter (K or L)", doc.turns_line)
        turns.append(Turn(player, nature))
    return Game(doc.table, doc.profile, TurnSequence(tuple(turns)))


def canonical_spec_text(
    table: MorselTable,
    profile: PreferenceProfile,
    turns: TurnSequence | None = None,
    speakers: tuple[int, ...] | None = None,
) -> str:
    """Normalized spec rendering; whitespace and comments never survive a round trip."""
    morsels = " ".join(
        t.name if t.multiplicity == 1 else f"{t.name}*{t.multiplicity}"
        for t in table.types
    )
    lines = [f"players {profile.k}", f"morsels {morsels}"]
    for i, r in enumerate(profile.rankings):
        lines.append(f"enjoy {i + 1}: " + " ".join(str(v) for v in r.enjoyment))
    if turns is not None:
        lines.append(
            "turns " + " ".join(f"{t.player + 1}{t.nature.value}" for t in turns.turns)
        )
    if speakers is not None:
        lines.append("speakers " + " ".join(str(p + 1) for p in speakers))
    return "\n".join(lines) + "\n"


def game_spec_text(game: Game) -> str:
    return canonical_spec_text(game.table, game.profile, turns=game.turns)


def play_names(play: Play, table: MorselTable) -> tuple[str, ...]:
    """Morsel names along a play, for display."""
    return tuple(table.types[p.type_id].name for p in play)


def division_counter(division: Division) -> Counter:
    """Multiset of (player, type) pairs; handy for quick equality in tests."""
    out: Counter = Counter()
    for i, plate in enumerate(division.plates):
        for t, c in enumerate(plate.counts):
            if c:
                out[(i, t)] = c
    return out
