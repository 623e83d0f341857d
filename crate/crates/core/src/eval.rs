//! Walk-forward evaluation: sequential refits, held-out predictions, and
//! scoring metrics for probability forecasts.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::sampler::{fit, PosteriorDraws, SamplerConfig};
use crate::schedule::GameRecord;
use crate::ssm::{game_mean, invert_link, ModelSpec};
use crate::stats::{pearson, std_normal_cdf};

/// Cut points for refitting a season one week at a time.
#[derive(Debug, Clone, PartialEq)]
pub struct SequentialFitPlan {
    /// Season whose weeks are being walked forward.
    pub season: usize,
    /// Cut weeks; the fit at cut k sees this season only through week k.
    pub weeks: Vec<usize>,
    pub config: SamplerConfig,
}

impl SequentialFitPlan {
    pub fn new(season: usize, weeks: Vec<usize>) -> Self {
        let config = SamplerConfig {
            iterations: 2000,
            burn_in: 1000,
            ..SamplerConfig::default()
        };
        Self {
            season,
            weeks,
            config,
        }
    }
}

/// Where a forecast probability came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionSource {
    Model,
    Market,
}

impl PredictionSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            PredictionSource::Model => "model",
            PredictionSource::Market => "market",
        }
    }
}

/// A single home-win forecast.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRecord {
    pub season: usize,
    pub week: usize,
    pub home_team: usize,
    pub away_team: usize,
    pub p_home: f64,
    pub source: PredictionSource,
}

/// Refits the model at every cut week, reusing the same seed so a cut at the
/// final week reproduces the cumulative fit exactly.
pub fn sequential_fit(
    games: &[GameRecord],
    spec: &ModelSpec,
    plan: &SequentialFitPlan,
) -> Result<BTreeMap<usize, PosteriorDraws>> {
    let weeks_per_season = spec.league.weeks;
    if plan.season < 1 || plan.season > spec.league.seasons {
        return Err(Error::Config(format!(
            "plan season {} outside 1..={}",
            plan.season, spec.league.seasons
        )));
    }
    for &k in &plan.weeks {
        if k < 2 || k > weeks_per_season {
            return Err(Error::Config(format!(
                "cut week {k} outside 2..={weeks_per_season}"
            )));
        }
    }
    let priced: Vec<&GameRecord> = games.iter().filter(|g| g.implied_p_home.is_some()).collect();
    if priced.len() < games.len() {
        log::warn!(
            "sequential fit drops {} games without market probabilities",
            games.len() - priced.len()
        );
    }
    let mut fits = BTreeMap::new();
    for &k in &plan.weeks {
        if fits.contains_key(&k) {
            continue;
        }
        let subset: Vec<GameRecord> = priced
            .iter()
            .filter(|g| g.season < plan.season || (g.season == plan.season && g.week <= k))
            .map(|g| (*g).clone())
            .collect();
        fits.insert(k, fit(&subset, spec, &plan.config)?);
    }
    Ok(fits)
}

/// Forecasts each game from a posterior, either at the posterior-mean state
/// (default) or by averaging the implied probability over all draws.
pub fn predict_games(
    draws: &PosteriorDraws,
    games: &[GameRecord],
    average_draws: bool,
) -> Result<Vec<PredictionRecord>> {
    let spec = &draws.spec;
    let plug_in = draws.mean_state()?;
    let mut records = Vec::with_capacity(games.len());
    for game in games {
        let p = if average_draws {
            let mut total = 0.0;
            for state in draws.states() {
                total += invert_link(game_mean(state, spec, game)?, spec.link);
            }
            total / draws.draws.len() as f64
        } else {
            invert_link(game_mean(&plug_in, spec, game)?, spec.link)
        };
        records.push(PredictionRecord {
            season: game.season,
            week: game.week,
            home_team: game.home_team,
            away_team: game.away_team,
            p_home: p.clamp(1e-12, 1.0 - 1e-12),
            source: PredictionSource::Model,
        });
    }
    Ok(records)
}

/// Predicts from the fit stored at cut `k`, failing if that fit is missing.
pub fn predict_from_cut(
    fits: &BTreeMap<usize, PosteriorDraws>,
    k: usize,
    games: &[GameRecord],
    average_draws: bool,
) -> Result<Vec<PredictionRecord>> {
    let draws = fits
        .get(&k)
        .ok_or_else(|| Error::MissingFit(format!("no fit stored at cut week {k}")))?;
    predict_games(draws, games, average_draws)
}

/// Runs the full walk-forward loop: fit through week k, predict week k + 1.
/// Returns each prediction paired with the game it forecasts.
pub fn walk_forward(
    games: &[GameRecord],
    spec: &ModelSpec,
    plan: &SequentialFitPlan,
    average_draws: bool,
) -> Result<Vec<(PredictionRecord, GameRecord)>> {
    let fits = sequential_fit(games, spec, plan)?;
    let mut out = Vec::new();
    for &k in fits.keys() {
        let target = k + 1;
        if target > spec.league.weeks {
            continue;
        }
        let held_out: Vec<GameRecord> = games
            .iter()
            .filter(|g| g.season == plan.season && g.week == target)
            .cloned()
            .collect();
        let predictions = predict_from_cut(&fits, k, &held_out, average_draws)?;
        out.extend(predictions.into_iter().zip(held_out));
    }
    Ok(out)
}

/// Area under the ROC curve via the rank-sum statistic; ties get midranks.
pub fn auc(predictions: &[f64], outcomes: &[bool]) -> Result<f64> {
    if predictions.len() != outcomes.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} predictions for {} outcomes",
            predictions.len(),
            outcomes.len()
        )));
    }
    let n = predictions.len();
    let n1 = outcomes.iter().filter(|&&y| y).count();
    let n0 = n - n1;
    if n1 == 0 || n0 == 0 {
        return Err(Error::SingleClass);
    }
    if predictions.iter().any(|p| !p.is_finite()) {
        return Err(Error::Domain("non-finite prediction".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| predictions[a].total_cmp(&predictions[b]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && predictions[order[j + 1]] == predictions[order[i]] {
            j += 1;
        }
        let midrank = (i + j) as f64 / 2.0 + 1.0;
        for &slot in &order[i..=j] {
            ranks[slot] = midrank;
        }
        i = j + 1;
    }
    let positive_rank_sum: f64 = ranks
        .iter()
        .zip(outcomes)
        .filter(|(_, &y)| y)
        .map(|(r, _)| *r)
        .sum();
    let u = positive_rank_sum - (n1 * (n1 + 1)) as f64 / 2.0;
    Ok(u / (n1 as f64 * n0 as f64))
}

/// Brier score with Spiegelhalter's calibration test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrierResult {
    pub score: f64,
    pub spiegelhalter_z: f64,
    /// Two-sided normal p-value for the calibration statistic.
    pub p_value: f64,
    /// Set when every prediction is uninformative and the test collapses.
    pub degenerate: bool,
}

/// Mean squared probability error plus the Spiegelhalter Z calibration test.
pub fn brier(predictions: &[f64], outcomes: &[bool]) -> Result<BrierResult> {
    if predictions.len() != outcomes.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} predictions for {} outcomes",
            predictions.len(),
            outcomes.len()
        )));
    }
    if predictions.is_empty() {
        return Err(Error::InsufficientData(
            "brier score needs at least one prediction".into(),
        ));
    }
    let mut score_sum = 0.0;
    let mut num = 0.0;
    let mut den_sq = 0.0;
    for (&p, &won) in predictions.iter().zip(outcomes) {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("prediction {p} outside [0, 1]")));
        }
        let y = if won { 1.0 } else { 0.0 };
        score_sum += (y - p) * (y - p);
        num += (y - p) * (1.0 - 2.0 * p);
        den_sq += (1.0 - 2.0 * p) * (1.0 - 2.0 * p) * p * (1.0 - p);
    }
    let score = score_sum / predictions.len() as f64;
    if den_sq <= 0.0 {
        log::warn!("calibration test degenerate: all predictions carry zero test variance");
        return Ok(BrierResult {
            score,
            spiegelhalter_z: 0.0,
            p_value: 1.0,
            degenerate: true,
        });
    }
    let z = num / den_sq.sqrt();
    Ok(BrierResult {
        score,
        spiegelhalter_z: z,
        p_value: 2.0 * std_normal_cdf(-z.abs()),
        degenerate: false,
    })
}

/// Which pre-game summary is being used to predict the rest of the season.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Predictor {
    StrengthEstimate,
    PointDifferential,
    WinPercentage,
}

impl Predictor {
    pub const ALL: [Predictor; 3] = [
        Predictor::StrengthEstimate,
        Predictor::PointDifferential,
        Predictor::WinPercentage,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Predictor::StrengthEstimate => "strength",
            Predictor::PointDifferential => "point_diff",
            Predictor::WinPercentage => "win_pct",
        }
    }
}

/// One game from a team's season, in played order.
#[derive(Debug, Clone, PartialEq)]
pub struct TeamGameObs {
    /// None marks a tie, which never counts toward win percentages.
    pub won: Option<bool>,
    /// Team score minus opponent score for this game.
    pub point_diff: f64,
    /// Strength estimate available when this game was played.
    pub theta: f64,
}

/// A team's full ordered game list for one season.
#[derive(Debug, Clone, PartialEq)]
pub struct TeamSeasonSeries {
    pub season: usize,
    pub team: usize,
    pub games: Vec<TeamGameObs>,
}

/// R² of future win percentage on one predictor at one game number.
#[derive(Debug, Clone, PartialEq)]
pub struct FutureWinPoint {
    pub game_number: usize,
    pub predictor: Predictor,
    pub r2: f64,
    /// Team-seasons contributing to the regression.
    pub points: usize,
}

/// For each game number g, regresses rest-of-season win percentage on each
/// predictor observed through game g, pooling team-seasons. The final game of
/// a series has no future and never forms a cell.
pub fn future_win_r2(series: &[TeamSeasonSeries]) -> Result<Vec<FutureWinPoint>> {
    let max_len = series.iter().map(|s| s.games.len()).max().unwrap_or(0);
    if series.iter().any(|s| s.games.iter().any(|g| g.won.is_none())) {
        log::warn!("tied games are excluded from all win percentages");
    }
    let mut out = Vec::new();
    for g in 1..max_len {
        for predictor in Predictor::ALL {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for s in series.iter().filter(|s| s.games.len() > g) {
                let future = &s.games[g..];
                let decided = future.iter().filter(|o| o.won.is_some()).count();
                if decided == 0 {
                    continue;
                }
                let wins = future.iter().filter(|o| o.won == Some(true)).count();
                let y = wins as f64 / decided as f64;
                let past = &s.games[..g];
                let x = match predictor {
                    Predictor::StrengthEstimate => past[g - 1].theta,
                    Predictor::PointDifferential => past.iter().map(|o| o.point_diff).sum(),
                    Predictor::WinPercentage => {
                        let past_decided = past.iter().filter(|o| o.won.is_some()).count();
                        if past_decided == 0 {
                            continue;
                        }
                        let past_wins = past.iter().filter(|o| o.won == Some(true)).count();
                        past_wins as f64 / past_decided as f64
                    }
                };
                xs.push(x);
                ys.push(y);
            }
            if xs.len() < 3 {
                continue;
            }
            if let Some(r) = pearson(&xs, &ys) {
                out.push(FutureWinPoint {
                    game_number: g,
                    predictor,
                    r2: r * r,
                    points: xs.len(),
                });
            }
        }
    }
    if out.is_empty() {
        return Err(Error::InsufficientTeams(
            "no game number has three or more usable team-seasons".into(),
        ));
    }
    Ok(out)
}

/// Convenience check that a draw-averaged AUC standard error is exceeded;
/// the null standard error of the rank-sum AUC at 0.5.
pub fn auc_null_se(n_positive: usize, n_negative: usize) -> f64 {
    let n1 = n_positive as f64;
    let n0 = n_negative as f64;
    ((n1 + n0 + 1.0) / (12.0 * n1 * n0)).sqrt()
}
