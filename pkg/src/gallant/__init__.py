"""Sequential-allocation dinner games: gallant knights, boorish louts, and
the turn-reversal solver that pins down their food division.

The fast path (:func:`solve_division`) pushes knight turns to the end,
reverses them, plays everyone as a greedy lout, and reads off the division;
the brute-force oracle (:func:`enumerate_optimal_plays`) enumerates every
subgame-perfect outcome on small instances so the reduction can be verified
rather than trusted.
"""

from .engine import (
    DEFAULT_CAP,
    EquilibriumCheck,
    GameState,
    OracleCapExceeded,
    StrategyProfile,
    backward_induction_profile,
    enumerate_optimal_plays,
    enumerate_plays_under,
    extension_equilibrium_check,
    initial_state,
    is_equilibrium,
    legal_moves,
    optimal_divisions,
    optimal_move_usage,
    optimal_outcome_set,
    remove_edges,
    selfish_two_player_divisions,
    selfish_two_player_plays,
    state_after,
)
from .generate import random_game, random_group_game, sample_game
from .group import (
    ConflictReport,
    GroupGame,
    GroupOutcome,
    conflict_free_check,
    group_to_knight,
    group_tree_outcomes,
    parse_group_spec,
    partake_plates,
    solve_group,
)
from .model import (
    Division,
    Game,
    Item,
    MorselTable,
    MorselType,
    Nature,
    Plate,
    Play,
    PreferenceProfile,
    Ranking,
    SpecError,
    Turn,
    TurnSequence,
    canonical_spec_text,
    canonical_text,
    game_spec_text,
    parse_division_text,
    parse_game_spec,
    parse_spec,
    plates_of,
    play_names,
    validate_play,
)
from .orders import (
    KnightKey,
    OrderResult,
    group_pareto_compare,
    knight_compare,
    knight_key,
    lout_compare,
    plate_compare,
    plate_compare_bijection_oracle,
)
from .solver import (
    TurnBijection,
    lout_playout,
    reverse_knights_transform,
    selfish_two_player_division,
    solve_division,
    transformed_game,
    witness_play,
)

__version__ = "0.1.0"
