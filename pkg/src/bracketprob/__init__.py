"""Exact win and round-reach probabilities for group-plus-knockout tournaments.

Instead of Monte Carlo simulation, the tournament is evaluated exactly: every
group's round-robin is enumerated once, and the knockout bracket is folded
block by block over sparse joint distributions of survivors.  A full 32-team
tournament costs less than a few hundred simulated runs while returning exact
probabilities, most-likely brackets, and what-if evaluations under pinned
results.
"""

from .bracket import (
    CombinationCounts,
    MostLikelyBracket,
    PairDistribution,
    RoundReachTable,
    SingleDistribution,
    TournamentResult,
    collapse,
    compute_tournament,
    merge,
    merge_singles,
    most_likely_bracket,
)
from .calibrate import CalibrationResult, calibrate_sigma
from .data_io import (
    SIGMA_PRESETS,
    TournamentConfig,
    bundled_config,
    load_config,
    load_odds_csv,
    odds_probabilities,
    resolve_config,
)
from .errors import (
    BracketProbError,
    CapacityError,
    DataError,
    InvalidParameterError,
    OverrideConflictError,
    ScheduleError,
)
from .group_stage import (
    AdvancePairMatrix,
    RankingTable,
    build_ranking_table,
    decode_sequence,
    digit_pairs,
    group_exit_probabilities,
    group_probabilities,
    num_matches,
    num_sequences,
    points_table,
    ranking_entries,
    ranking_table_csv,
)
from .match_model import (
    MatchMatrices,
    OutcomeDistribution,
    OutcomeOverride,
    apply_overrides,
    build_matrices,
    group_distribution,
    knockout_distribution,
    split_draw,
    team_strength,
)
from .schedule import (
    RoundOp,
    ScheduleDescriptor,
    build_schedule,
    builtin_schedules,
    load_schedule,
    schedule_from_json,
    schedule_to_json,
    validate_schedule,
)
from .simulate import (
    BenchmarkReport,
    ConvergenceSummary,
    ErrorReport,
    SimulationResult,
    benchmark,
    convergence_experiment,
    error_report,
    estimate,
    simulate_once,
)

__version__ = "0.1.0"

__all__ = [
    "AdvancePairMatrix",
    "BenchmarkReport",
    "BracketProbError",
    "CalibrationResult",
    "CapacityError",
    "CombinationCounts",
    "ConvergenceSummary",
    "DataError",
    "ErrorReport",
    "InvalidParameterError",
    "MatchMatrices",
    "MostLikelyBracket",
    "OutcomeDistribution",
    "OutcomeOverride",
    "OverrideConflictError",
    "PairDistribution",
    "RankingTable",
    "RoundOp",
    "RoundReachTable",
    "ScheduleDescriptor",
    "ScheduleError",
    "SIGMA_PRESETS",
    "SimulationResult",
    "SingleDistribution",
    "TournamentConfig",
    "TournamentResult",
    "apply_overrides",
    "benchmark",
    "build_matrices",
    "build_ranking_table",
    "build_schedule",
    "builtin_schedules",
    "bundled_config",
    "calibrate_sigma",
    "collapse",
    "compute_tournament",
    "convergence_experiment",
    "decode_sequence",
    "digit_pairs",
    "error_report",
    "estimate",
    "group_distribution",
    "group_exit_probabilities",
    "group_probabilities",
    "knockout_distribution",
    "load_config",
    "load_odds_csv",
    "load_schedule",
    "merge",
    "merge_singles",
    "most_likely_bracket",
    "num_matches",
    "num_sequences",
    "odds_probabilities",
    "points_table",
    "ranking_entries",
    "ranking_table_csv",
    "resolve_config",
    "schedule_from_json",
    "schedule_to_json",
    "simulate_once",
    "split_draw",
    "team_strength",
    "validate_schedule",
    "__version__",
]
