//! Synthetic league generator: forward-simulates the state-space model,
//! schedules random games, and emits market lines plus a ground-truth file.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::market::{implied_pair, MoneyLine};
use crate::rng::stream;
use crate::schedule::{CityRegistry, GameRecord, LeagueConfig, LoadedLeague};
use crate::ssm::{game_mean, invert_link, HomeAdvantage, Link, ModelSpec, ParameterState};

/// True generative settings for a synthetic league.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthConfig {
    pub league_id: String,
    pub teams: usize,
    pub cities: usize,
    pub seasons: usize,
    pub weeks: usize,
    pub link: Link,
    pub gamma_season: f64,
    pub gamma_week: f64,
    pub sigma_season: f64,
    pub sigma_week: f64,
    pub sigma_game: f64,
    pub alpha0: f64,
    /// One entry per city, summing to zero.
    pub alpha: Vec<f64>,
    pub games_per_week: usize,
    pub vig: f64,
    pub seed: u64,
}

impl TruthConfig {
    /// Sensible small-league defaults; callers override what they study.
    pub fn demo(league_id: &str, seed: u64) -> Self {
        Self {
            league_id: league_id.to_string(),
            teams: 8,
            cities: 8,
            seasons: 1,
            weeks: 10,
            link: Link::Logit,
            gamma_season: 0.6,
            gamma_week: 0.98,
            sigma_season: 0.8,
            sigma_week: 0.05,
            sigma_game: 0.25,
            alpha0: 0.3,
            alpha: vec![0.0; 8],
            games_per_week: 16,
            vig: 0.04,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        LeagueConfig::new(
            &self.league_id,
            self.teams,
            self.cities,
            self.seasons,
            self.weeks,
        )?;
        if self.alpha.len() != self.cities {
            return Err(Error::Config(format!(
                "{} home edges for {} cities",
                self.alpha.len(),
                self.cities
            )));
        }
        let alpha_sum: f64 = self.alpha.iter().sum();
        if alpha_sum.abs() > 1e-6 {
            return Err(Error::Config(format!(
                "city home edges must sum to zero, got {alpha_sum}"
            )));
        }
        for (name, value) in [
            ("sigma_season", self.sigma_season),
            ("sigma_week", self.sigma_week),
            ("sigma_game", self.sigma_game),
        ] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::Config(format!(
                    "{name} = {value} must be finite and nonnegative"
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.gamma_season) {
            return Err(Error::Config(format!(
                "gamma_season {} outside [0, 1]",
                self.gamma_season
            )));
        }
        if !(0.0..=1.5).contains(&self.gamma_week) {
            return Err(Error::Config(format!(
                "gamma_week {} outside [0, 1.5]",
                self.gamma_week
            )));
        }
        if !self.alpha0.is_finite() {
            return Err(Error::Config("league home edge must be finite".into()));
        }
        if !(0.0..=0.1).contains(&self.vig) {
            return Err(Error::Config(format!("vig {} outside [0, 0.1]", self.vig)));
        }
        if self.games_per_week == 0 {
            return Err(Error::Config("need at least one game per week".into()));
        }
        Ok(())
    }
}

fn padded_names(prefix: &str, count: usize) -> Vec<String> {
    let width = count.to_string().len();
    (1..=count)
        .map(|i| format!("{prefix}-{i:0width$}"))
        .collect()
}

/// Quantizes a boundary probability to the nearest integer money line.
fn quantize_line(boundary: f64) -> Result<MoneyLine> {
    let b = boundary.clamp(1e-4, 1.0 - 1e-4);
    let line = if b >= 0.5 {
        -((100.0 * b / (1.0 - b)).round().max(100.0) as i32)
    } else {
        (100.0 * (1.0 - b) / b).round().max(100.0) as i32
    };
    MoneyLine::new(line)
}

/// Emits the (home, away) money-line pair that prices probability `p` with
/// the vig split evenly across both sides.
pub fn money_lines(p: f64, vig: f64) -> Result<(MoneyLine, MoneyLine)> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("probability {p} outside (0, 1)")));
    }
    if !(0.0..=0.1).contains(&vig) {
        return Err(Error::Domain(format!("vig {vig} outside [0, 0.1]")));
    }
    Ok((
        quantize_line(p + vig / 2.0)?,
        quantize_line((1.0 - p) + vig / 2.0)?,
    ))
}

/// Forward-simulates the league and returns the priced schedule together
/// with the true parameter trajectory.
pub fn generate(config: &TruthConfig) -> Result<(LoadedLeague, ParameterState)> {
    config.validate()?;
    let league = LeagueConfig::new(
        &config.league_id,
        config.teams,
        config.cities,
        config.seasons,
        config.weeks,
    )?;
    let spec = ModelSpec::new(HomeAdvantage::PerCity, config.link, league.clone());
    let mut rng = stream(config.seed, "synth", 0);
    let rows = config.seasons * config.weeks;
    let mut theta = DMatrix::zeros(rows, config.teams);
    for s in 1..=config.seasons {
        for k in 1..=config.weeks {
            let r = (s - 1) * config.weeks + (k - 1);
            for j in 0..config.teams {
                let z: f64 = rng.sample(StandardNormal);
                theta[(r, j)] = if s == 1 && k == 1 {
                    config.sigma_season * z
                } else if k == 1 {
                    config.gamma_season * theta[(r - config.weeks, j)] + config.sigma_season * z
                } else {
                    config.gamma_week * theta[(r - 1, j)] + config.sigma_week * z
                };
            }
            let row_mean = theta.row(r).mean();
            for j in 0..config.teams {
                theta[(r, j)] -= row_mean;
            }
        }
    }
    let truth = ParameterState {
        theta,
        alpha0: config.alpha0,
        alpha: config.alpha.clone(),
        sigma_game: config.sigma_game,
        sigma_season: config.sigma_season,
        sigma_week: config.sigma_week,
        // The city edges are fixed truth, not drawn from a scale.
        sigma_alpha: 1.0,
        gamma_season: config.gamma_season,
        gamma_week: config.gamma_week,
    };
    let mut games = Vec::with_capacity(rows * config.games_per_week);
    for s in 1..=config.seasons {
        for k in 1..=config.weeks {
            for _ in 0..config.games_per_week {
                let first = rng.random_range(1..=config.teams);
                let mut second = rng.random_range(1..=config.teams);
                while second == first {
                    second = rng.random_range(1..=config.teams);
                }
                let (home, away) = if rng.random_range(0..2) == 0 {
                    (first, second)
                } else {
                    (second, first)
                };
                let mut game = GameRecord {
                    season: s,
                    week: k,
                    home_team: home,
                    away_team: away,
                    home_city: home,
                    home_line: None,
                    away_line: None,
                    implied_p_home: None,
                    home_win: None,
                    home_score: None,
                    away_score: None,
                };
                let mean = game_mean(&truth, &spec, &game)?;
                let z: f64 = rng.sample(StandardNormal);
                let p = invert_link(mean + config.sigma_game * z, config.link);
                let (home_line, away_line) = money_lines(p.clamp(1e-9, 1.0 - 1e-9), config.vig)?;
                let won = rng.random_range(0.0..1.0) < p;
                let losing_score = rng.random_range(0..=3u32);
                let winning_score = losing_score + rng.random_range(1..=3u32);
                game.home_line = Some(home_line);
                game.away_line = Some(away_line);
                game.implied_p_home = Some(implied_pair(home_line, away_line).p_home);
                game.home_win = Some(won);
                game.home_score = Some(if won { winning_score } else { losing_score });
                game.away_score = Some(if won { losing_score } else { winning_score });
                games.push(game);
            }
        }
    }
    let mut registry = CityRegistry::default();
    for team in 1..=config.teams {
        registry.add_span(team, 1, config.seasons, team)?;
    }
    let loaded = LoadedLeague {
        config: league,
        team_names: padded_names("team", config.teams),
        city_names: padded_names("city", config.cities),
        registry,
        games,
    };
    Ok((loaded, truth))
}

pub const TRUTH_SCHEMA: &str = "#schema=truth-v1";
pub const TRUTH_HEADER: [&str; 5] = ["season", "week", "team", "parameter", "value"];

/// Writes the true trajectory: one row per (season, week, team) strength and
/// one row per scalar parameter.
pub fn write_truth_csv(path: &Path, truth: &ParameterState, league: &LeagueConfig) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    writeln!(file, "{TRUTH_SCHEMA}")?;
    let mut writer = csv::Writer::from_writer(file);
    writer.write_record(TRUTH_HEADER)?;
    for s in 1..=league.seasons {
        for k in 1..=league.weeks {
            let row = (s - 1) * league.weeks + (k - 1);
            for team in 1..=league.teams {
                writer.write_record([
                    s.to_string(),
                    k.to_string(),
                    team.to_string(),
                    "theta".to_string(),
                    truth.theta[(row, team - 1)].to_string(),
                ])?;
            }
        }
    }
    let mut scalars: Vec<(String, f64)> = vec![
        ("alpha0".into(), truth.alpha0),
        ("sigma_game".into(), truth.sigma_game),
        ("sigma_season".into(), truth.sigma_season),
        ("sigma_week".into(), truth.sigma_week),
        ("gamma_season".into(), truth.gamma_season),
        ("gamma_week".into(), truth.gamma_week),
    ];
    for (c, a) in truth.alpha.iter().enumerate() {
        scalars.push((format!("alpha[{}]", c + 1), *a));
    }
    for (name, value) in scalars {
        writer.write_record(["", "", "", &name, &value.to_string()])?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a truth file back into a strength map keyed `(season, week, team)`
/// plus a scalar-parameter map.
#[allow(clippy::type_complexity)]
pub fn read_truth_csv(
    path: &Path,
) -> Result<(BTreeMap<(usize, usize, usize), f64>, BTreeMap<String, f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)?;
    {
        let header = reader.headers()?;
        let expected: Vec<&str> = TRUTH_HEADER.to_vec();
        if header.iter().collect::<Vec<_>>() != expected {
            return Err(Error::SchemaVersion(format!(
                "unexpected truth header {header:?}"
            )));
        }
    }
    let mut theta = BTreeMap::new();
    let mut scalars = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let parse = |field: usize, what: &str| -> Result<f64> {
            record
                .get(field)
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(|| Error::Parse {
                    path: path.display().to_string(),
                    line,
                    msg: format!("bad {what}"),
                })
        };
        let name = record.get(3).unwrap_or_default().to_string();
        let value = parse(4, "value")?;
        if record.get(0).is_some_and(|v| !v.is_empty()) {
            let index = |field: usize, what: &str| -> Result<usize> {
                record
                    .get(field)
                    .and_then(|v| v.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse {
                        path: path.display().to_string(),
                        line,
                        msg: format!("bad {what}"),
                    })
            };
            let key = (index(0, "season")?, index(1, "week")?, index(2, "team")?);
            if name != "theta" {
                return Err(Error::Parse {
                    path: path.display().to_string(),
                    line,
                    msg: format!("grid row with parameter {name}"),
                });
            }
            theta.insert(key, value);
        } else {
            scalars.insert(name, value);
        }
    }
    Ok((theta, scalars))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::boundary_probability;
    use crate::schedule::load_league;
    use crate::stats::{mean, sample_variance};

    fn base_config(seed: u64) -> TruthConfig {
        TruthConfig {
            league_id: "synth".into(),
            teams: 6,
            cities: 6,
            seasons: 2,
            weeks: 5,
            link: Link::Logit,
            gamma_season: 0.6,
            gamma_week: 0.95,
            sigma_season: 0.7,
            sigma_week: 0.1,
            sigma_game: 0.3,
            alpha0: 0.2,
            alpha: vec![0.0; 6],
            games_per_week: 8,
            vig: 0.04,
            seed,
        }
    }

    #[test]
    fn generation_is_deterministic_in_the_seed() {
        let (league_a, truth_a) = generate(&base_config(5)).unwrap();
        let (league_b, truth_b) = generate(&base_config(5)).unwrap();
        let (league_c, _) = generate(&base_config(6)).unwrap();
        assert_eq!(league_a, league_b);
        assert_eq!(truth_a, truth_b);
        assert_ne!(league_a.games, league_c.games);
    }

    #[test]
    fn frozen_week_dynamics_keep_strengths_constant_within_seasons() {
        let mut config = base_config(7);
        config.sigma_week = 0.0;
        config.gamma_week = 1.0;
        let (_, truth) = generate(&config).unwrap();
        for s in 0..config.seasons {
            let first = s * config.weeks;
            for k in 1..config.weeks {
                for j in 0..config.teams {
                    let drift =
                        (truth.theta[(first + k, j)] - truth.theta[(first, j)]).abs();
                    assert!(
                        drift < 1e-12,
                        "strengths must be frozen within season {}, drifted {drift}",
                        s + 1
                    );
                }
            }
        }
    }

    #[test]
    fn strength_rows_are_centered() {
        let (_, truth) = generate(&base_config(8)).unwrap();
        for r in 0..truth.theta.nrows() {
            assert!(truth.theta.row(r).sum().abs() < 1e-9);
        }
    }

    #[test]
    fn money_line_values_match_hand_computations() {
        let (h, a) = money_lines(0.6, 0.0).unwrap();
        assert_eq!((h.value(), a.value()), (-150, 150));
        // Even money prices both sides at -100.
        let (h, a) = money_lines(0.5, 0.0).unwrap();
        assert_eq!((h.value(), a.value()), (-100, -100));
        assert_eq!(boundary_probability(h), 0.5);
        let (h, a) = money_lines(0.75, 0.04).unwrap();
        assert_eq!((h.value(), a.value()), (-335, 270));
        let vig = boundary_probability(h) + boundary_probability(a) - 1.0;
        assert!((vig - 0.04).abs() < 0.005, "vig drifted to {vig}");
    }

    #[test]
    fn vig_free_lines_round_trip_to_the_true_probability() {
        let mut p = 0.05;
        while p < 0.951 {
            let (h, a) = money_lines(p, 0.0).unwrap();
            let implied = implied_pair(h, a).p_home;
            assert!(
                (implied - p).abs() < 0.005,
                "p = {p} came back as {implied}"
            );
            p += 0.005;
        }
    }

    #[test]
    fn invalid_probabilities_and_vig_are_rejected() {
        assert!(matches!(money_lines(0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(money_lines(1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(money_lines(0.5, 0.2), Err(Error::Domain(_))));
    }

    #[test]
    fn home_win_rate_tracks_the_emitted_probabilities() {
        let mut config = base_config(11);
        config.teams = 8;
        config.cities = 8;
        config.alpha = vec![0.0; 8];
        config.seasons = 1;
        config.weeks = 50;
        config.games_per_week = 1000;
        config.vig = 0.0;
        let (league, _) = generate(&config).unwrap();
        assert_eq!(league.games.len(), 50_000);
        let rate = league
            .games
            .iter()
            .filter(|g| g.home_win == Some(true))
            .count() as f64
            / league.games.len() as f64;
        let implied: Vec<f64> = league
            .games
            .iter()
            .map(|g| g.implied_p_home.unwrap())
            .collect();
        assert!(
            (rate - mean(&implied)).abs() < 0.01,
            "win rate {rate} vs implied mean {}",
            mean(&implied)
        );
    }

    #[test]
    fn scores_agree_with_the_recorded_winner() {
        let (league, _) = generate(&base_config(13)).unwrap();
        for g in &league.games {
            let home = g.home_score.unwrap();
            let away = g.away_score.unwrap();
            let margin = home.abs_diff(away);
            assert!((1..=3).contains(&margin));
            assert_eq!(g.home_win.unwrap(), home > away);
            assert_eq!(g.home_city, g.home_team);
            assert!(g.implied_p_home.is_some());
        }
    }

    #[test]
    fn generated_league_survives_a_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("games.csv");
        let (league, _) = generate(&base_config(17)).unwrap();
        crate::schedule::write_games_csv(&path, &league).unwrap();
        let reloaded = load_league(&path, None, "synth", None, None).unwrap();
        assert_eq!(reloaded.games, league.games);
        assert_eq!(reloaded.team_names, league.team_names);
        assert_eq!(reloaded.config.teams, league.config.teams);
    }

    #[test]
    fn truth_file_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("truth.csv");
        let mut config = base_config(19);
        config.alpha = vec![0.3, -0.1, -0.2, 0.05, -0.05, 0.0];
        let (league, truth) = generate(&config).unwrap();
        write_truth_csv(&path, &truth, &league.config).unwrap();
        let (theta, scalars) = read_truth_csv(&path).unwrap();
        assert_eq!(theta.len(), 2 * 5 * 6);
        for ((s, k, team), value) in &theta {
            let row = (s - 1) * config.weeks + (k - 1);
            assert_eq!(*value, truth.theta[(row, team - 1)]);
        }
        assert_eq!(scalars["alpha0"], truth.alpha0);
        assert_eq!(scalars["sigma_game"], truth.sigma_game);
        assert_eq!(scalars["gamma_week"], truth.gamma_week);
        assert_eq!(scalars["alpha[1]"], 0.3);
        assert_eq!(scalars.len(), 6 + 6);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut config = base_config(1);
        config.gamma_week = 1.6;
        assert!(matches!(generate(&config), Err(Error::Config(_))));
        let mut config = base_config(1);
        config.vig = 0.2;
        assert!(matches!(generate(&config), Err(Error::Config(_))));
        let mut config = base_config(1);
        config.alpha = vec![0.0; 3];
        assert!(matches!(generate(&config), Err(Error::Config(_))));
        let mut config = base_config(1);
        config.alpha[0] = 0.5;
        assert!(matches!(generate(&config), Err(Error::Config(_))));
        let mut config = base_config(1);
        config.games_per_week = 0;
        assert!(matches!(generate(&config), Err(Error::Config(_))));
        let mut config = base_config(1);
        config.sigma_game = -0.1;
        assert!(matches!(generate(&config), Err(Error::Config(_))));
    }

    #[test]
    fn hockey_like_settings_produce_realistic_strength_spread() {
        let config = TruthConfig {
            league_id: "hockey".into(),
            teams: 30,
            cities: 30,
            seasons: 3,
            weeks: 26,
            link: Link::Logit,
            gamma_season: 0.542,
            gamma_week: 0.996,
            sigma_season: 0.25,
            sigma_week: 0.02,
            sigma_game: 0.105,
            alpha0: 0.1,
            alpha: vec![0.0; 30],
            games_per_week: 15,
            vig: 0.045,
            seed: 23,
        };
        let (_, truth) = generate(&config).unwrap();
        let values: Vec<f64> = truth.theta.iter().copied().collect();
        let spread = sample_variance(&values).sqrt();
        assert!(
            (0.15..=0.35).contains(&spread),
            "weekly strength spread {spread} outside the expected band"
        );
    }
}
