//! Bayesian paired-comparison engine for sports leagues.
//!
//! Market money lines are converted to win probabilities, fed through a
//! state-space model of weekly team strengths with home advantage, and fit by
//! MCMC. On top of the fitted posteriors the crate builds predictive checks,
//! walk-forward forecast evaluation, and league-level parity summaries, plus
//! a synthetic-league generator for end-to-end validation.

pub mod error;
pub mod eval;
pub mod market;
pub mod parity;
pub mod ppc;
pub mod rng;
pub mod sampler;
pub mod schedule;
pub mod ssm;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use eval::{
    auc, auc_null_se, brier, future_win_r2, predict_from_cut, predict_games, sequential_fit,
    walk_forward, BrierResult, FutureWinPoint, PredictionRecord, PredictionSource, Predictor,
    SequentialFitPlan, TeamGameObs, TeamSeasonSeries,
};
pub use market::{
    boundary_probability, hosmer_lemeshow, hosmer_lemeshow_with, implied_pair, CalibrationBin,
    HosmerLemeshow, ImpliedPair, MoneyLine,
};
pub use parity::{
    build_bracket, expected_finish_bound, post_parity, reg_parity, seeding_strengths,
    simulate_matchups, simulate_tournaments, uniform_finish_constant, CityMap, FinishDistribution,
    HomeRule, MatchupMode, SeededTeam, SimulatedMatchupSet, TournamentSpec,
};
pub use ppc::{
    dic, dic_difference, simulate_replicates, team_discrepancy, DicDifference, DicResult,
    PredictiveReplicate,
};
pub use rng::{stream, Stream};
pub use sampler::{
    diagnostics::{diagnostics, ChainDiagnostics, ScalarDiagnostic},
    fit,
    io::{export_draws, import_draws},
    scalar_parameters, Draw, InitStrategy, ParamId, PosteriorDraws, SamplerConfig, UpdateMask,
};
pub use schedule::{
    load_league, week_slices, write_games_csv, CityRegistry, GameRecord, LeagueConfig,
    LoadedLeague, WeekSlices,
};
pub use ssm::{
    apply_link, game_mean, invert_link, log_likelihood, log_prior, HomeAdvantage, Hyperpriors,
    Link, ModelSpec, ParameterState,
};
pub use synth::{generate, money_lines, read_truth_csv, write_truth_csv, TruthConfig};
