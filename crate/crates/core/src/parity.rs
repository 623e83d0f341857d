//! Competitive-balance summaries: regular-season parity from simulated random
//! matchups and postseason parity from simulated seeded tournaments.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::stream;
use crate::sampler::PosteriorDraws;
use crate::schedule::GameRecord;
use crate::ssm::{invert_link, Link, ModelSpec, ParameterState};
use crate::stats::kahan_sum;

/// Per-season city assignment, indexed `[season − 1][team − 1]` → city.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CityMap(Vec<Vec<usize>>);

impl CityMap {
    pub fn new(per_season: Vec<Vec<usize>>) -> Self {
        Self(per_season)
    }

    /// Every team hosts in its own city, every season.
    pub fn identity(teams: usize, seasons: usize) -> Self {
        Self(vec![(1..=teams).collect(); seasons])
    }

    pub fn city(&self, season: usize, team: usize) -> Result<usize> {
        self.0
            .get(season - 1)
            .and_then(|row| row.get(team - 1))
            .copied()
            .ok_or_else(|| Error::Index(format!("no city for team {team} in season {season}")))
    }
}

/// Whether simulated matchups include the home-advantage terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchupMode {
    WithHomeAdvantage,
    Neutral,
}

impl MatchupMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            MatchupMode::WithHomeAdvantage => "home",
            MatchupMode::Neutral => "neutral",
        }
    }
}

/// Simulated better-team win probabilities for randomly drawn matchups.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedMatchupSet {
    pub league_id: String,
    pub mode: MatchupMode,
    /// Each value is expressed for the a-priori better side, so ≥ 0.5.
    pub probabilities: Vec<f64>,
}

/// Draws `n_sim` hypothetical games: random grid cell, two distinct teams,
/// independent posterior draws per ingredient, game-level noise, then the
/// probability reflected onto the better team's side.
pub fn simulate_matchups(
    draws: &PosteriorDraws,
    city_map: &CityMap,
    n_sim: usize,
    mode: MatchupMode,
    seed: u64,
) -> Result<SimulatedMatchupSet> {
    if draws.draws.is_empty() {
        return Err(Error::EmptyDraws);
    }
    let spec = &draws.spec;
    let teams = spec.league.teams;
    let n_draws = draws.draws.len();
    let probabilities: Vec<Result<f64>> = (0..n_sim)
        .into_par_iter()
        .map(|sim| {
            let mut rng = stream(seed, "matchup", sim as u64);
            let season = rng.random_range(1..=spec.league.seasons);
            let week = rng.random_range(1..=spec.league.weeks);
            let first = rng.random_range(1..=teams);
            let mut second = rng.random_range(1..=teams);
            while second == first {
                second = rng.random_range(1..=teams);
            }
            let draw_first = rng.random_range(0..n_draws);
            let draw_second = rng.random_range(0..n_draws);
            let draw_advantage = rng.random_range(0..n_draws);
            let draw_scale = rng.random_range(0..n_draws);
            let noise: f64 = rng.sample(StandardNormal);
            let theta_first = draws.draws[draw_first]
                .state
                .theta_at(spec, season, week, first);
            let theta_second = draws.draws[draw_second]
                .state
                .theta_at(spec, season, week, second);
            // The a-priori better team is treated as the host.
            let (home, theta_home, theta_away) = if theta_first >= theta_second {
                (first, theta_first, theta_second)
            } else {
                (second, theta_second, theta_first)
            };
            let advantage = match mode {
                MatchupMode::Neutral => 0.0,
                MatchupMode::WithHomeAdvantage => {
                    let state = &draws.draws[draw_advantage].state;
                    let city = city_map.city(season, home)?;
                    let alpha = state.alpha.get(city - 1).ok_or_else(|| {
                        Error::Index(format!("city {city} outside the model's city set"))
                    })?;
                    state.alpha0 + alpha
                }
            };
            let sigma = draws.draws[draw_scale].state.sigma_game;
            let value = theta_home - theta_away + advantage + sigma * noise;
            let p = invert_link(value, spec.link);
            Ok(p.max(1.0 - p))
        })
        .collect();
    Ok(SimulatedMatchupSet {
        league_id: spec.league.league_id.clone(),
        mode,
        probabilities: probabilities.into_iter().collect::<Result<_>>()?,
    })
}

/// Twice the mean excess of each better-team probability above certainty:
/// 1 is a coin-flip league, 0 a fully deterministic one.
pub fn reg_parity(matchups: &SimulatedMatchupSet) -> Result<f64> {
    if matchups.probabilities.is_empty() {
        return Err(Error::EmptySet("no simulated matchups".into()));
    }
    for &p in &matchups.probabilities {
        if !(0.5..=1.0).contains(&p) {
            return Err(Error::Domain(format!(
                "better-team probability {p} outside [0.5, 1]"
            )));
        }
    }
    let total = kahan_sum(matchups.probabilities.iter().map(|p| 1.0 - p));
    Ok(2.0 * total / matchups.probabilities.len() as f64)
}

/// Finish round a seed earns when every favorite wins: the champion's 1,
/// the runner-up's 2, and so on up the bracket.
pub fn expected_finish_bound(d: usize) -> usize {
    if d <= 1 {
        1
    } else {
        (d - 1).ilog2() as usize + 2
    }
}

/// Mean finish bound over all z seeds: the expected finish of every seed in a
/// perfectly balanced league.
pub fn uniform_finish_constant(z: usize) -> f64 {
    let total: usize = (1..=z).map(expected_finish_bound).sum();
    total as f64 / z as f64
}

/// Who hosts each game of a playoff series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomeRule {
    HigherSeedHosts,
    /// Hosts alternate game by game, higher seed first. Not part of the
    /// reference analysis.
    Alternating,
    Neutral,
}

/// Tournament shape and simulation controls.
#[derive(Debug, Clone, PartialEq)]
pub struct TournamentSpec {
    pub z: usize,
    pub series_length: usize,
    pub n_tournaments: usize,
    pub home_rule: HomeRule,
    /// Adds per-game noise on the link scale. Not part of the reference
    /// analysis.
    pub include_game_noise: bool,
    pub sigma_game: f64,
}

impl TournamentSpec {
    pub fn new(z: usize, series_length: usize) -> Self {
        Self {
            z,
            series_length,
            n_tournaments: 1000,
            home_rule: HomeRule::HigherSeedHosts,
            include_game_noise: false,
            sigma_game: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.z < 2 || !self.z.is_power_of_two() {
            return Err(Error::Config(format!(
                "bracket size {} must be a power of two",
                self.z
            )));
        }
        if self.series_length % 2 == 0 || self.series_length == 0 {
            return Err(Error::Config(format!(
                "series length {} must be odd",
                self.series_length
            )));
        }
        if self.n_tournaments == 0 {
            return Err(Error::Config("need at least one tournament".into()));
        }
        if !(self.sigma_game >= 0.0 && self.sigma_game.is_finite()) {
            return Err(Error::Config(format!(
                "game noise scale {} must be finite and nonnegative",
                self.sigma_game
            )));
        }
        Ok(())
    }
}

/// One bracket entrant; slice order defines seeds 1..z.
#[derive(Debug, Clone, PartialEq)]
pub struct SeededTeam {
    pub team: usize,
    pub strength: f64,
    /// Link-scale bump this team gets when hosting.
    pub home_edge: f64,
}

/// Mean finish round per seed over all simulated tournaments.
#[derive(Debug, Clone, PartialEq)]
pub struct FinishDistribution {
    pub expected_finish: Vec<f64>,
}

/// Simulates seeded single-elimination tournaments, re-pairing survivors by
/// seed each round, and averages each seed's finish round.
pub fn simulate_tournaments(
    teams: &[SeededTeam],
    spec: &TournamentSpec,
    link: Link,
    seed: u64,
) -> Result<FinishDistribution> {
    spec.validate()?;
    if teams.len() < spec.z {
        return Err(Error::TooFewTeams {
            need: spec.z,
            found: teams.len(),
        });
    }
    let field = &teams[..spec.z];
    let rounds = spec.z.ilog2();
    let wins_needed = spec.series_length / 2 + 1;
    let totals: Vec<Vec<u32>> = (0..spec.n_tournaments)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, "tournament", t as u64);
            let mut finish = vec![0u32; spec.z];
            let mut survivors: Vec<usize> = (0..spec.z).collect();
            for round in 1..=rounds {
                survivors.sort_unstable();
                let mut next = Vec::with_capacity(survivors.len() / 2);
                let half = survivors.len() / 2;
                for pair in 0..half {
                    let high = survivors[pair];
                    let low = survivors[survivors.len() - 1 - pair];
                    let mut high_wins = 0;
                    let mut low_wins = 0;
                    let mut game = 0;
                    while high_wins < wins_needed && low_wins < wins_needed {
                        let edge = match spec.home_rule {
                            HomeRule::Neutral => 0.0,
                            HomeRule::HigherSeedHosts => field[high].home_edge,
                            HomeRule::Alternating => {
                                if game % 2 == 0 {
                                    field[high].home_edge
                                } else {
                                    -field[low].home_edge
                                }
                            }
                        };
                        let mut value = field[high].strength - field[low].strength + edge;
                        if spec.include_game_noise {
                            let z: f64 = rng.sample(StandardNormal);
                            value += spec.sigma_game * z;
                        }
                        let p_high = invert_link(value, link);
                        if rng.random_range(0.0..1.0) < p_high {
                            high_wins += 1;
                        } else {
                            low_wins += 1;
                        }
                        game += 1;
                    }
                    let (winner, loser) = if high_wins == wins_needed {
                        (high, low)
                    } else {
                        (low, high)
                    };
                    finish[loser] = rounds - round + 2;
                    next.push(winner);
                }
                survivors = next;
            }
            finish[survivors[0]] = 1;
            finish
        })
        .collect();
    let n = spec.n_tournaments as f64;
    let expected_finish = (0..spec.z)
        .map(|d| kahan_sum(totals.iter().map(|f| f[d] as f64)) / n)
        .collect();
    Ok(FinishDistribution { expected_finish })
}

/// Pseudo-R² comparing the simulated finish profile to the two extremes:
/// 1 when seeds do not matter, 0 when the higher seed always wins.
pub fn post_parity(finish: &FinishDistribution, z: usize) -> Result<f64> {
    if finish.expected_finish.len() != z {
        return Err(Error::DimensionMismatch(format!(
            "finish vector length {} does not match bracket size {z}",
            finish.expected_finish.len()
        )));
    }
    let f_z = uniform_finish_constant(z);
    let numerator = kahan_sum(
        finish
            .expected_finish
            .iter()
            .map(|e| (e - f_z) * (e - f_z)),
    );
    let denominator = kahan_sum(
        (1..=z).map(|d| (expected_finish_bound(d) as f64 - f_z) * (expected_finish_bound(d) as f64 - f_z)),
    );
    Ok(1.0 - numerator / denominator)
}

/// Ranks teams by mean strength over the last four weeks of a season that
/// contain games; ties fall back to earlier weeks, then to team index.
pub fn seeding_strengths(
    state: &ParameterState,
    spec: &ModelSpec,
    season: usize,
    games: &[GameRecord],
) -> Result<Vec<(usize, f64)>> {
    if season < 1 || season > spec.league.seasons {
        return Err(Error::Index(format!(
            "season {season} outside 1..={}",
            spec.league.seasons
        )));
    }
    let weeks_with_games: std::collections::BTreeSet<usize> = games
        .iter()
        .filter(|g| g.season == season)
        .map(|g| g.week)
        .collect();
    let window: Vec<usize> = if weeks_with_games.is_empty() {
        let start = spec.league.weeks.saturating_sub(3).max(1);
        (start..=spec.league.weeks).collect()
    } else {
        let mut weeks: Vec<usize> = weeks_with_games.into_iter().collect();
        let keep = weeks.len().saturating_sub(4);
        weeks.split_off(keep)
    };
    let first_window_week = *window.first().expect("window is nonempty");
    let mean_over = |team: usize, weeks: &[usize]| -> f64 {
        let total: f64 = weeks
            .iter()
            .map(|&k| state.theta_at(spec, season, k, team))
            .sum();
        total / weeks.len().max(1) as f64
    };
    let earlier: Vec<usize> = (1..first_window_week).collect();
    let mut ranked = Vec::with_capacity(spec.league.teams);
    for team in 1..=spec.league.teams {
        let primary = mean_over(team, &window);
        let tiebreak = if earlier.is_empty() {
            0.0
        } else {
            mean_over(team, &earlier)
        };
        ranked.push((team, primary, tiebreak));
    }
    ranked.sort_by(|a, b| {
        b.1.total_cmp(&a.1)
            .then(b.2.total_cmp(&a.2))
            .then(a.0.cmp(&b.0))
    });
    Ok(ranked.into_iter().map(|(team, s, _)| (team, s)).collect())
}

/// Builds the top-z bracket field from a fitted state, attaching each team's
/// home edge for its city that season.
pub fn build_bracket(
    state: &ParameterState,
    spec: &ModelSpec,
    season: usize,
    games: &[GameRecord],
    z: usize,
    city_map: &CityMap,
) -> Result<Vec<SeededTeam>> {
    if spec.league.teams < z {
        return Err(Error::TooFewTeams {
            need: z,
            found: spec.league.teams,
        });
    }
    let ranked = seeding_strengths(state, spec, season, games)?;
    ranked
        .into_iter()
        .take(z)
        .map(|(team, strength)| {
            let city = city_map.city(season, team)?;
            let alpha = state
                .alpha
                .get(city - 1)
                .ok_or_else(|| Error::Index(format!("city {city} outside the model's city set")))?;
            Ok(SeededTeam {
                team,
                strength,
                home_edge: state.alpha0 + alpha,
            })
        })
        .collect()
}
