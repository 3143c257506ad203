"""Command-line front end: ``gallant solve|verify|group|kc|gen|bench``.

Results go to stdout, diagnostics to stderr.  ``--json`` wraps results in a
versioned run report (see :data:`REPORT_SCHEMA`).  Exit codes: 0 success,
1 verification failure, 2 parse or usage error, 3 I/O error, 4 oracle cap
exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from typing import Sequence

from . import __version__
from .engine import (
    OracleCapExceeded,
    enumerate_optimal_plays,
    selfish_two_player_divisions,
)
from .generate import generate_spec, random_game, sample_game
from .group import conflict_free_check, parse_group_spec, solve_group
from .model import (
    Division,
    Game,
    Plate,
    SpecError,
    canonical_spec_text,
    canonical_text,
    game_spec_text,
    parse_game_spec,
    parse_spec,
    plates_of,
    play_names,
)
from .solver import selfish_two_player_division, solve_division, witness_play

#: Fixed schema of ``--json`` run reports (versioned via the ``schema`` field).
REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "gallant run report",
    "type": "object",
    "required": ["schema", "command", "digest", "ms", "result"],
    "properties": {
        "schema": {"const": 1},
        "command": {"type": "array", "items": {"type": "string"}},
        "digest": {"type": ["string", "null"]},
        "ms": {"type": "number", "minimum": 0},
        "result": {"type": "object"},
    },
    "additionalProperties": False,
}


def spec_digest(canonical: str) -> str:
    """Stable 12-hex digest of a canonical spec rendering."""
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def _plate_names(plate: Plate, division: Division) -> list[str]:
    out: list[str] = []
    for t, c in enumerate(plate.counts):
        out.extend([division.table.types[t].name] * c)
    return out


def division_json(division: Division) -> dict:
    out = {
        str(i + 1): _plate_names(plate, division)
        for i, plate in enumerate(division.plates)
    }
    out["leftover"] = _plate_names(division.leftover, division)
    return out


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(args: argparse.Namespace, command: list[str], digest: str | None,
          result: dict, started: float, human: str) -> None:
    if args.json:
        report = {
            "schema": 1,
            "command": command,
            "digest": digest,
            "ms": (time.perf_counter() - started) * 1000.0,
            "result": result,
        }
        print(json.dumps(report, indent=2, sort_keys=True))
    elif human:
        print(human)


# --- commands ----------------------------------------------------------------


def cmd_solve(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    game = parse_game_spec(_read(args.spec))
    digest = spec_digest(game_spec_text(game))
    division = solve_division(game)
    result: dict = {"division": division_json(division)}
    human = canonical_text(division)
    if args.witness:
        play = witness_play(game)
        names = list(play_names(play, game.table))
        result["witness"] = names
        human += "\nwitness: " + " ".join(names)
    _emit(args, ["solve", args.spec], digest, result, started, human)
    return 0


def _check_instance(game: Game, cap: int | None):
    """Oracle check of one instance: one division across optimal plays, equal to the fast solve."""
    plays = enumerate_optimal_plays(game, cap=cap)
    divisions = frozenset(plates_of(play, game) for play in plays)
    fast = solve_division(game)
    ok = len(divisions) == 1 and fast in divisions
    return ok, plays, divisions, fast


def _parse_bounds(text: str) -> dict:
    bounds = {"n": 6, "k": 3, "mult": 2, "p": 0.5}
    if text:
        for part in text.split(","):
            key, _, value = part.partition("=")
            key = key.strip()
            if key not in bounds:
                raise SpecError(f"unknown bound {key!r} (use n, k, mult, p)")
            bounds[key] = float(value) if key == "p" else int(value)
    return bounds


def cmd_verify(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    failures: list[dict] = []
    digest = None

    if args.random is not None:
        seed, count = int(args.random[0]), int(args.random[1])
        bounds = _parse_bounds(args.random[2] if len(args.random) > 2 else "")
        rng = random.Random(seed)
        games = (
            sample_game(
                rng,
                max_items=int(bounds["n"]),
                max_players=int(bounds["k"]),
                knight_prob=bounds["p"],
                max_mult=int(bounds["mult"]),
            )
            for _ in range(count)
        )
        total = count
    elif args.spec is not None:
        game = parse_game_spec(_read(args.spec))
        digest = spec_digest(game_spec_text(game))
        games = iter([game])
        total = 1
    else:
        print("verify: need a spec path or --random", file=sys.stderr)
        return 2

    checked = 0
    plays_total = 0
    for index, game in enumerate(games):
        ok, plays, divisions, fast = _check_instance(game, None)
        checked += 1
        plays_total += len(plays)
        if not ok:
            failures.append(
                {
                    "index": index,
                    "spec": game_spec_text(game),
                    "divisions": sorted(canonical_text(d) for d in divisions),
                    "fast": canonical_text(fast),
                }
            )

    ok = not failures
    result = {
        "ok": ok,
        "checked": checked,
        "optimal_plays": plays_total,
        "failures": failures,
    }
    if ok:
        human = f"verify: PASS ({checked} instance{'s' if checked != 1 else ''}, {plays_total} optimal plays)"
    else:
        lines = [f"verify: FAIL ({len(failures)} of {checked} instances)"]
        for f in failures:
            lines.append(f"--- instance {f['index']} ---")
            lines.append(f["spec"].rstrip())
            lines.append("oracle divisions:")
            lines.extend("  " + d.replace("\n", " | ") for d in f["divisions"])
            lines.append("fast solver: " + f["fast"].replace("\n", " | "))
        human = "\n".join(lines)
    _emit(args, _echo(args), digest, result, started, human)
    return 0 if ok else 1


def cmd_group(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    g = parse_group_spec(_read(args.spec))
    digest = spec_digest(
        canonical_spec_text(g.table, g.profile, speakers=g.speaking_order)
    )
    outcome = solve_group(g)
    names = list(play_names(outcome.picks, g.table))
    partake = {
        str(j + 1): sorted(
            name
            for t, c in enumerate(plate.counts)
            for name in [g.table.types[t].name] * c
        )
        for j, plate in enumerate(outcome.partake)
    }
    result: dict = {
        "picks": names,
        "sharers": [[j + 1 for j in coalition] for coalition in outcome.sharers],
        "partake": partake,
    }
    lines = ["picks: " + " ".join(names)]
    lines.append(
        "sharers: " + " ".join("+".join(str(j + 1) for j in c) for c in outcome.sharers)
    )
    for j in range(g.k):
        lines.append(f"{j + 1}: " + " ".join(partake[str(j + 1)]))
    exit_code = 0
    if args.check_conflict_free:
        report = conflict_free_check(g)
        result["conflict_free"] = report.ok
        lines.append(f"conflict-free: {str(report.ok).lower()}")
        if not report.ok:
            exit_code = 1
    _emit(args, _echo(args), digest, result, started, "\n".join(lines))
    return exit_code


def cmd_kc(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    doc = parse_spec(_read(args.spec))
    if doc.turn_tokens is None:
        raise SpecError("missing 'turns' line")
    if any(nature is not None for _, nature in doc.turn_tokens):
        raise SpecError(
            "selfish mode takes bare player turns (no K/L letters)", doc.turns_line
        )
    if doc.profile.k != 2:
        raise SpecError("selfish mode is defined for exactly two players")
    order = [player for player, _ in doc.turn_tokens]
    canonical = canonical_spec_text(doc.table, doc.profile) + "turns " + " ".join(
        str(p + 1) for p in order
    ) + "\n"
    digest = spec_digest(canonical)
    r1, r2 = doc.profile.rankings
    division = selfish_two_player_division(doc.table, r1, r2, order)
    result: dict = {"division": division_json(division)}
    human = canonical_text(division)
    exit_code = 0
    if args.oracle:
        oracle = selfish_two_player_divisions(doc.table, r1, r2, order)
        agree = oracle == frozenset({division})
        result["oracle_agrees"] = agree
        human += f"\noracle agrees: {str(agree).lower()}"
        if not agree:
            exit_code = 1
    _emit(args, _echo(args), digest, result, started, human)
    return exit_code


def cmd_gen(args: argparse.Namespace) -> int:
    text = generate_spec(
        args.seed, args.items, args.players, args.turns,
        knight_prob=args.knight_prob, max_mult=args.max_mult,
    )
    sys.stdout.write(text)
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    started = time.perf_counter()

    def measure(items: int) -> float:
        rng = random.Random(args.seed)
        game = random_game(
            rng, items=items, players=args.players, turns=items, knight_prob=0.5
        )
        best = float("inf")
        for _ in range(args.reps):
            t0 = time.perf_counter()
            solve_division(game)
            best = min(best, time.perf_counter() - t0)
        return best * 1000.0

    base_ms = measure(args.items)
    doubled_ms = measure(args.items * 2)
    ratio = doubled_ms / base_ms if base_ms else float("inf")
    result = {
        "items": args.items,
        "players": args.players,
        "reps": args.reps,
        "ms": base_ms,
        "doubled_ms": doubled_ms,
        "ratio": ratio,
    }
    human = (
        f"n={args.items} k={args.players}: {base_ms:.1f} ms (best of {args.reps})\n"
        f"n={args.items * 2} k={args.players}: {doubled_ms:.1f} ms\n"
        f"ratio: {ratio:.2f}"
    )
    _emit(args, _echo(args), None, result, started, human)
    return 0


def _echo(args: argparse.Namespace) -> list[str]:
    return list(getattr(args, "_argv", []))


# --- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gallant",
        description="Solve and verify dinner-table allocation games of knights and louts.",
    )
    parser.add_argument("--version", action="version", version=f"gallant {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("solve", help="compute the optimal-play division of a spec")
    p.add_argument("spec", help="path to a game-spec file")
    p.add_argument("--witness", action="store_true", help="also print an optimal play")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check solver against the equilibrium oracle")
    p.add_argument("spec", nargs="?", help="path to a game-spec file")
    p.add_argument(
        "--random",
        nargs="+",
        metavar=("SEED", "COUNT"),
        help="SEED COUNT [BOUNDS], bounds like n=5,k=3,mult=2,p=0.5",
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("group", help="solve a group-decision spec (speakers line)")
    p.add_argument("spec")
    p.add_argument("--check-conflict-free", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("kc", help="two-player selfish division (bare turns)")
    p.add_argument("spec")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against backward induction on totals")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_kc)

    p = sub.add_parser("gen", help="emit a seeded random spec")
    p.add_argument("seed", type=int)
    p.add_argument("items", type=int)
    p.add_argument("players", type=int)
    p.add_argument("turns", type=int)
    p.add_argument("--knight-prob", type=float, default=0.5)
    p.add_argument("--max-mult", type=int, default=1)
    p.set_defaults(func=cmd_gen, json=False)

    p = sub.add_parser("bench", help="time the fast solver on generated instances")
    p.add_argument("items", type=int)
    p.add_argument("players", type=int)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(argv) if argv is not None else sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = argv
    try:
        return args.func(args)
    except SpecError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OracleCapExceeded as err:
        print(f"error: {err}", file=sys.stderr)
        return 4
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
