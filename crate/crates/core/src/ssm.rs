//! State-space model of team strength: parameter layout, link functions,
//! likelihood, autoregressive evolution, and priors.
//!
//! Two variants share one parameter state. `PerCity` gives every home city its
//! own additive edge on top of the league-wide one; `Constant` uses the
//! league-wide edge alone and pins the city vector at zero.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule::{GameRecord, LeagueConfig};
use crate::stats::normal_logpdf;

/// Home-advantage structure of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HomeAdvantage {
    /// League-wide edge plus one offset per home city, offsets summing to zero.
    PerCity,
    /// League-wide edge only.
    Constant,
}

/// Transform carrying probabilities onto the unconstrained observation scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Link {
    #[default]
    Logit,
    /// Variance-stabilizing arcsin(sqrt(p)) transform.
    ArcsinSqrt,
}

/// Model variant, link, and league dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub variant: HomeAdvantage,
    pub link: Link,
    pub league: LeagueConfig,
}

impl ModelSpec {
    pub fn new(variant: HomeAdvantage, link: Link, league: LeagueConfig) -> Self {
        Self {
            variant,
            link,
            league,
        }
    }

    /// Number of (season, week) grid rows.
    pub fn grid_rows(&self) -> usize {
        self.league.seasons * self.league.weeks
    }

    /// Row index of (season, week) in the strength matrix, 1-based inputs.
    pub fn row(&self, season: usize, week: usize) -> usize {
        (season - 1) * self.league.weeks + (week - 1)
    }
}

/// Hyperprior constants; defaults match the fitted model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperpriors {
    /// Upper bound of the uniform prior on each precision 1/sigma^2.
    pub tau_sq_upper: f64,
    /// Variance of the zero-mean normal prior on the league home edge.
    pub alpha0_variance: f64,
    pub gamma_season_max: f64,
    pub gamma_week_max: f64,
}

impl Default for Hyperpriors {
    fn default() -> Self {
        Self {
            tau_sq_upper: 1000.0,
            alpha0_variance: 10_000.0,
            gamma_season_max: 1.0,
            gamma_week_max: 1.5,
        }
    }
}

/// One complete parameter configuration of either model variant.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterState {
    /// Strengths, row (season, week) by team; every row sums to zero.
    pub theta: DMatrix<f64>,
    /// League-wide home edge on the link scale.
    pub alpha0: f64,
    /// Per-city home offsets, summing to zero; all zero under `Constant`.
    pub alpha: Vec<f64>,
    pub sigma_game: f64,
    pub sigma_season: f64,
    pub sigma_week: f64,
    /// Scale of the per-city offsets' prior.
    pub sigma_alpha: f64,
    pub gamma_season: f64,
    pub gamma_week: f64,
}

impl ParameterState {
    /// Neutral state: zero strengths and edges, unit scales, mid-range gammas.
    pub fn zeros(league: &LeagueConfig) -> Self {
        Self {
            theta: DMatrix::zeros(league.seasons * league.weeks, league.teams),
            alpha0: 0.0,
            alpha: vec![0.0; league.cities],
            sigma_game: 1.0,
            sigma_season: 1.0,
            sigma_week: 1.0,
            sigma_alpha: 1.0,
            gamma_season: 0.5,
            gamma_week: 0.75,
        }
    }

    /// Strength of `team` in (`season`, `week`), 1-based inputs.
    pub fn theta_at(&self, spec: &ModelSpec, season: usize, week: usize, team: usize) -> f64 {
        self.theta[(spec.row(season, week), team - 1)]
    }

    /// Subtracts each row's mean so strengths stay identifiable.
    pub fn center_theta(&mut self) {
        let cols = self.theta.ncols() as f64;
        for mut row in self.theta.row_iter_mut() {
            let mean = row.sum() / cols;
            row.add_scalar_mut(-mean);
        }
    }

    /// Moves the mean of the city offsets into the league edge.
    pub fn center_alpha(&mut self) {
        if self.alpha.is_empty() {
            return;
        }
        let mean = self.alpha.iter().sum::<f64>() / self.alpha.len() as f64;
        for a in &mut self.alpha {
            *a -= mean;
        }
        self.alpha0 += mean;
    }

    /// Checks dimensions, centering, and support; used on every retained draw.
    pub fn validate(&self, spec: &ModelSpec, hyper: &Hyperpriors) -> Result<()> {
        let league = &spec.league;
        if self.theta.nrows() != spec.grid_rows() || self.theta.ncols() != league.teams {
            return Err(Error::DimensionMismatch(format!(
                "strength grid {}x{} does not match {}x{}",
                self.theta.nrows(),
                self.theta.ncols(),
                spec.grid_rows(),
                league.teams
            )));
        }
        if self.alpha.len() != league.cities {
            return Err(Error::DimensionMismatch(format!(
                "{} city offsets for {} cities",
                self.alpha.len(),
                league.cities
            )));
        }
        for (r, row) in self.theta.row_iter().enumerate() {
            let sum: f64 = row.sum();
            if sum.abs() > 1e-9 {
                return Err(Error::Validation(format!(
                    "strength row {r} sums to {sum:e}, expected 0"
                )));
            }
        }
        match spec.variant {
            HomeAdvantage::PerCity => {
                let sum: f64 = self.alpha.iter().sum();
                if sum.abs() > 1e-9 {
                    return Err(Error::Validation(format!(
                        "city offsets sum to {sum:e}, expected 0"
                    )));
                }
            }
            HomeAdvantage::Constant => {
                if self.alpha.iter().any(|a| *a != 0.0) {
                    return Err(Error::Validation(
                        "city offsets must be zero under the constant-edge model".into(),
                    ));
                }
            }
        }
        for (name, sigma) in [
            ("sigma_game", self.sigma_game),
            ("sigma_season", self.sigma_season),
            ("sigma_week", self.sigma_week),
            ("sigma_alpha", self.sigma_alpha),
        ] {
            if !(sigma.is_finite() && sigma > 0.0) {
                return Err(Error::Validation(format!("{name} = {sigma} not positive")));
            }
        }
        if !(0.0..=hyper.gamma_season_max).contains(&self.gamma_season) {
            return Err(Error::Validation(format!(
                "gamma_season = {} outside [0, {}]",
                self.gamma_season, hyper.gamma_season_max
            )));
        }
        if !(0.0..=hyper.gamma_week_max).contains(&self.gamma_week) {
            return Err(Error::Validation(format!(
                "gamma_week = {} outside [0, {}]",
                self.gamma_week, hyper.gamma_week_max
            )));
        }
        Ok(())
    }
}

/// Probability → link scale; rejects the boundary where the link diverges.
pub fn apply_link(p: f64, link: Link) -> Result<f64> {
    if !(p.is_finite() && p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("probability {p} outside (0, 1)")));
    }
    Ok(match link {
        Link::Logit => (p / (1.0 - p)).ln(),
        Link::ArcsinSqrt => p.sqrt().asin(),
    })
}

/// Link scale → probability; total on the reals.
///
/// The arcsin-sqrt branch clamps to its natural range [0, pi/2] first so that
/// noisy link values still invert to a probability.
pub fn invert_link(x: f64, link: Link) -> f64 {
    match link {
        Link::Logit => 1.0 / (1.0 + (-x).exp()),
        Link::ArcsinSqrt => {
            let s = x.clamp(0.0, std::f64::consts::FRAC_PI_2).sin();
            s * s
        }
    }
}

/// Expected link-scale observation for one game under the given state.
pub fn game_mean(state: &ParameterState, spec: &ModelSpec, game: &GameRecord) -> Result<f64> {
    let league = &spec.league;
    if game.season == 0
        || game.season > league.seasons
        || game.week == 0
        || game.week > league.weeks
    {
        return Err(Error::Index(format!(
            "(season {}, week {}) outside the {}x{} grid",
            game.season, game.week, league.seasons, league.weeks
        )));
    }
    if game.home_team > league.teams || game.away_team > league.teams {
        return Err(Error::Index(format!(
            "team pair ({}, {}) exceeds team count {}",
            game.home_team, game.away_team, league.teams
        )));
    }
    if game.home_city > league.cities {
        return Err(Error::Index(format!(
            "city {} exceeds city count {}",
            game.home_city, league.cities
        )));
    }
    let row = spec.row(game.season, game.week);
    let mut mean = state.theta[(row, game.home_team - 1)]
        - state.theta[(row, game.away_team - 1)]
        + state.alpha0;
    if spec.variant == HomeAdvantage::PerCity {
        mean += state.alpha[game.home_city - 1];
    }
    Ok(mean)
}

/// Gaussian log-likelihood of the market-implied observations.
pub fn log_likelihood(
    state: &ParameterState,
    spec: &ModelSpec,
    games: &[GameRecord],
) -> Result<f64> {
    let mut total = 0.0;
    for game in games {
        let p = game.implied_p_home.ok_or_else(|| {
            Error::MissingProbability(format!(
                "game (season {}, week {}, home {}) has no implied probability",
                game.season, game.week, game.home_team
            ))
        })?;
        let y = apply_link(p, spec.link)?;
        total += normal_logpdf(y, game_mean(state, spec, game)?, state.sigma_game);
    }
    Ok(total)
}

/// Log-density of the strength grid under its autoregressive evolution.
///
/// The first week is anchored at zero with the season scale; within a season
/// each week evolves from the previous one; each season's first week evolves
/// from the last week of the season before.
pub fn log_evolution(state: &ParameterState, spec: &ModelSpec) -> Result<f64> {
    let league = &spec.league;
    if state.theta.nrows() != spec.grid_rows() || state.theta.ncols() != league.teams {
        return Err(Error::DimensionMismatch(format!(
            "strength grid {}x{} does not match {}x{}",
            state.theta.nrows(),
            state.theta.ncols(),
            spec.grid_rows(),
            league.teams
        )));
    }
    let mut total = 0.0;
    for i in 0..league.teams {
        total += normal_logpdf(state.theta[(0, i)], 0.0, state.sigma_season);
    }
    for s in 1..=league.seasons {
        for k in 2..=league.weeks {
            let prev = spec.row(s, k - 1);
            let next = spec.row(s, k);
            for i in 0..league.teams {
                total += normal_logpdf(
                    state.theta[(next, i)],
                    state.gamma_week * state.theta[(prev, i)],
                    state.sigma_week,
                );
            }
        }
        if s < league.seasons {
            let prev = spec.row(s, league.weeks);
            let next = spec.row(s + 1, 1);
            for i in 0..league.teams {
                total += normal_logpdf(
                    state.theta[(next, i)],
                    state.gamma_season * state.theta[(prev, i)],
                    state.sigma_season,
                );
            }
        }
    }
    Ok(total)
}

fn log_uniform(value: f64, lo: f64, hi: f64) -> f64 {
    if (lo..=hi).contains(&value) {
        -(hi - lo).ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// Log-prior over scales, edges, and persistence parameters.
///
/// The uniform priors sit on the precisions 1/sigma^2, evaluated as densities
/// in the precision itself; out-of-support states return negative infinity.
pub fn log_prior(state: &ParameterState, spec: &ModelSpec, hyper: &Hyperpriors) -> f64 {
    let mut total = 0.0;
    for sigma in [
        state.sigma_game,
        state.sigma_season,
        state.sigma_week,
        state.sigma_alpha,
    ] {
        if !(sigma.is_finite() && sigma > 0.0) {
            return f64::NEG_INFINITY;
        }
        total += log_uniform(1.0 / (sigma * sigma), 0.0, hyper.tau_sq_upper);
    }
    total += normal_logpdf(state.alpha0, 0.0, hyper.alpha0_variance.sqrt());
    total += log_uniform(state.gamma_season, 0.0, hyper.gamma_season_max);
    total += log_uniform(state.gamma_week, 0.0, hyper.gamma_week_max);
    if spec.variant == HomeAdvantage::PerCity {
        for a in &state.alpha {
            total += normal_logpdf(*a, 0.0, state.sigma_alpha);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn demo_spec(variant: HomeAdvantage, seasons: usize, weeks: usize) -> ModelSpec {
        let league = LeagueConfig::new("demo", 4, 4, seasons, weeks).unwrap();
        ModelSpec::new(variant, Link::Logit, league)
    }

    fn priced_game(season: usize, week: usize, home: usize, away: usize, p: f64) -> GameRecord {
        GameRecord {
            season,
            week,
            home_team: home,
            away_team: away,
            home_city: home,
            home_line: None,
            away_line: None,
            implied_p_home: Some(p),
            home_win: None,
            home_score: None,
            away_score: None,
        }
    }

    #[test]
    fn logit_of_half_is_zero() {
        assert_eq!(apply_link(0.5, Link::Logit).unwrap(), 0.0);
    }

    #[test]
    fn inverse_logit_of_one_matches_known_value() {
        let p = invert_link(1.0, Link::Logit);
        assert_relative_eq!(p, 0.7310585786300049, max_relative = 1e-14);
        assert!((p - 0.731).abs() < 1e-3);
    }

    #[test]
    fn links_round_trip_to_twelve_digits() {
        for link in [Link::Logit, Link::ArcsinSqrt] {
            for p in [0.01, 0.3, 0.9] {
                let back = invert_link(apply_link(p, link).unwrap(), link);
                assert!(
                    (back - p).abs() < 1e-12,
                    "round trip of {p} through {link:?} gave {back}"
                );
            }
        }
    }

    #[test]
    fn boundary_probabilities_are_rejected_by_links() {
        for p in [0.0, 1.0, -0.1, 1.1] {
            assert!(apply_link(p, Link::Logit).is_err(), "p = {p}");
            assert!(apply_link(p, Link::ArcsinSqrt).is_err(), "p = {p}");
        }
    }

    #[test]
    fn arcsin_inverse_clamps_out_of_range_inputs() {
        assert_eq!(invert_link(-0.5, Link::ArcsinSqrt), 0.0);
        assert_relative_eq!(invert_link(10.0, Link::ArcsinSqrt), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn strong_home_team_mean_inverts_to_known_probability() {
        let spec = demo_spec(HomeAdvantage::PerCity, 1, 1);
        let mut state = ParameterState::zeros(&spec.league);
        state.theta[(0, 0)] = 1.0;
        let game = priced_game(1, 1, 1, 2, 0.5);
        let mean = game_mean(&state, &spec, &game).unwrap();
        assert_eq!(mean, 1.0);
        assert!((invert_link(mean, spec.link) - 0.731).abs() < 1e-3);
    }

    #[test]
    fn neutral_state_gives_even_odds() {
        let spec = demo_spec(HomeAdvantage::Constant, 1, 1);
        let state = ParameterState::zeros(&spec.league);
        let game = priced_game(1, 1, 3, 2, 0.5);
        let mean = game_mean(&state, &spec, &game).unwrap();
        assert_eq!(mean, 0.0);
        assert_eq!(invert_link(mean, spec.link), 0.5);
    }

    #[test]
    fn zero_city_offsets_reduce_to_the_constant_model() {
        let per_city = demo_spec(HomeAdvantage::PerCity, 1, 1);
        let constant = demo_spec(HomeAdvantage::Constant, 1, 1);
        let mut state = ParameterState::zeros(&per_city.league);
        state.theta[(0, 1)] = 0.4;
        state.theta[(0, 2)] = -0.4;
        state.alpha0 = 0.2;
        let game = priced_game(1, 1, 2, 3, 0.6);
        assert_eq!(
            game_mean(&state, &per_city, &game).unwrap(),
            game_mean(&state, &constant, &game).unwrap()
        );
        let games = [game];
        assert_eq!(
            log_likelihood(&state, &per_city, &games).unwrap(),
            log_likelihood(&state, &constant, &games).unwrap()
        );
    }

    #[test]
    fn out_of_grid_game_is_an_index_error() {
        let spec = demo_spec(HomeAdvantage::PerCity, 1, 2);
        let state = ParameterState::zeros(&spec.league);
        let game = priced_game(1, 3, 1, 2, 0.5);
        assert!(matches!(
            game_mean(&state, &spec, &game),
            Err(Error::Index(_))
        ));
    }

    #[test]
    fn single_even_game_log_likelihood_is_standard_normal_at_zero() {
        let spec = demo_spec(HomeAdvantage::PerCity, 1, 1);
        let state = ParameterState::zeros(&spec.league);
        let games = [priced_game(1, 1, 1, 2, 0.5)];
        let ll = log_likelihood(&state, &spec, &games).unwrap();
        assert!((ll - (-0.9189385332046727)).abs() < 1e-6, "ll = {ll}");
    }

    #[test]
    fn duplicate_games_double_the_log_likelihood() {
        let spec = demo_spec(HomeAdvantage::PerCity, 1, 1);
        let mut state = ParameterState::zeros(&spec.league);
        state.theta[(0, 0)] = 0.3;
        state.theta[(0, 1)] = -0.3;
        state.alpha0 = 0.1;
        let game = priced_game(1, 1, 1, 2, 0.62);
        let one = log_likelihood(&state, &spec, &[game.clone()]).unwrap();
        let two = log_likelihood(&state, &spec, &[game.clone(), game]).unwrap();
        assert_relative_eq!(two, 2.0 * one, max_relative = 1e-15);
    }

    #[test]
    fn likelihood_ignores_uniform_strength_shifts() {
        let spec = demo_spec(HomeAdvantage::PerCity, 1, 1);
        let mut state = ParameterState::zeros(&spec.league);
        state.theta[(0, 0)] = 0.5;
        state.theta[(0, 3)] = -0.5;
        let games = [priced_game(1, 1, 1, 4, 0.7), priced_game(1, 1, 2, 3, 0.45)];
        let before = log_likelihood(&state, &spec, &games).unwrap();
        state.theta.add_scalar_mut(2.75);
        let after = log_likelihood(&state, &spec, &games).unwrap();
        assert_relative_eq!(after, before, max_relative = 1e-12);
    }

    #[test]
    fn missing_probability_is_reported() {
        let spec = demo_spec(HomeAdvantage::PerCity, 1, 1);
        let state = ParameterState::zeros(&spec.league);
        let mut game = priced_game(1, 1, 1, 2, 0.5);
        game.implied_p_home = None;
        assert!(matches!(
            log_likelihood(&state, &spec, &[game]),
            Err(Error::MissingProbability(_))
        ));
    }

    #[test]
    fn single_cell_evolution_is_the_initial_anchor_only() {
        let spec = demo_spec(HomeAdvantage::PerCity, 1, 1);
        let state = ParameterState::zeros(&spec.league);
        let expected = 4.0 * -0.9189385332046727;
        assert_relative_eq!(
            log_evolution(&state, &spec).unwrap(),
            expected,
            max_relative = 1e-12
        );
    }

    #[test]
    fn persistent_constant_strengths_have_zero_innovations() {
        let spec = demo_spec(HomeAdvantage::PerCity, 1, 3);
        let mut state = ParameterState::zeros(&spec.league);
        state.gamma_week = 1.0;
        state.sigma_week = 0.25;
        for row in 0..3 {
            state.theta[(row, 0)] = 0.6;
            state.theta[(row, 1)] = -0.6;
        }
        let total = log_evolution(&state, &spec).unwrap();
        let anchors: f64 = (0..4)
            .map(|i| normal_logpdf(state.theta[(0, i)], 0.0, 1.0))
            .sum();
        let per_transition: f64 = (0..4).map(|_| normal_logpdf(0.0, 0.0, 0.25)).sum();
        assert_relative_eq!(total, anchors + 2.0 * per_transition, max_relative = 1e-12);
    }

    #[test]
    fn doubling_week_scale_shifts_by_the_normalization_constant() {
        let spec = demo_spec(HomeAdvantage::PerCity, 2, 3);
        let mut state = ParameterState::zeros(&spec.league);
        state.sigma_week = 0.1;
        let narrow = log_evolution(&state, &spec).unwrap();
        state.sigma_week = 0.2;
        let wide = log_evolution(&state, &spec).unwrap();
        // 4 teams, 2 seasons, 2 week transitions each; innovations are zero.
        let transitions = 4.0 * 2.0 * 2.0;
        assert_relative_eq!(
            narrow - wide,
            transitions * std::f64::consts::LN_2,
            max_relative = 1e-12
        );
    }

    #[test]
    fn out_of_support_parameters_have_no_prior_mass() {
        let spec = demo_spec(HomeAdvantage::PerCity, 1, 1);
        let hyper = Hyperpriors::default();
        let mut state = ParameterState::zeros(&spec.league);
        state.gamma_season = 1.2;
        assert_eq!(log_prior(&state, &spec, &hyper), f64::NEG_INFINITY);

        let mut state = ParameterState::zeros(&spec.league);
        // sigma = 0.03 puts the precision at ~1111, above the uniform bound.
        state.sigma_game = 0.03;
        assert_eq!(log_prior(&state, &spec, &hyper), f64::NEG_INFINITY);

        let mut state = ParameterState::zeros(&spec.league);
        state.gamma_week = 1.6;
        assert_eq!(log_prior(&state, &spec, &hyper), f64::NEG_INFINITY);
    }

    #[test]
    fn interior_prior_matches_term_by_term_sum() {
        let spec = demo_spec(HomeAdvantage::PerCity, 1, 1);
        let hyper = Hyperpriors::default();
        let mut state = ParameterState::zeros(&spec.league);
        state.alpha0 = 0.25;
        state.alpha = vec![0.1, -0.1, 0.05, -0.05];
        state.sigma_alpha = 0.3;
        let expected = 4.0 * -(1000.0f64.ln())
            + normal_logpdf(0.25, 0.0, 100.0)
            + 0.0
            + -(1.5f64.ln())
            + [0.1, -0.1, 0.05, -0.05]
                .iter()
                .map(|a| normal_logpdf(*a, 0.0, 0.3))
                .sum::<f64>();
        assert_relative_eq!(
            log_prior(&state, &spec, &hyper),
            expected,
            max_relative = 1e-12
        );
    }

    #[test]
    fn full_log_density_is_finite_exactly_on_the_support() {
        let spec = demo_spec(HomeAdvantage::PerCity, 2, 2);
        let hyper = Hyperpriors::default();
        let mut state = ParameterState::zeros(&spec.league);
        state.sigma_game = 0.2;
        let games = [priced_game(1, 2, 1, 3, 0.55)];
        let total = log_likelihood(&state, &spec, &games).unwrap()
            + log_evolution(&state, &spec).unwrap()
            + log_prior(&state, &spec, &hyper);
        assert!(total.is_finite());

        state.gamma_week = 2.0;
        let broken = log_likelihood(&state, &spec, &games).unwrap()
            + log_evolution(&state, &spec).unwrap()
            + log_prior(&state, &spec, &hyper);
        assert_eq!(broken, f64::NEG_INFINITY);
    }

    #[test]
    fn centering_moves_city_mean_into_league_edge() {
        let spec = demo_spec(HomeAdvantage::PerCity, 1, 2);
        let mut state = ParameterState::zeros(&spec.league);
        state.theta[(0, 0)] = 1.0;
        state.theta[(1, 1)] = -2.0;
        state.alpha = vec![0.5, 0.1, 0.3, 0.1];
        state.alpha0 = 0.2;
        let game = priced_game(1, 1, 1, 2, 0.6);
        let before = game_mean(&state, &spec, &game).unwrap();
        state.center_theta();
        state.center_alpha();
        let after = game_mean(&state, &spec, &game).unwrap();
        assert_relative_eq!(after, before, max_relative = 1e-12);
        state.validate(&spec, &Hyperpriors::default()).unwrap();
        assert!((state.alpha.iter().sum::<f64>()).abs() < 1e-12);
        assert_relative_eq!(state.alpha0, 0.2 + 0.25, max_relative = 1e-12);
    }

    #[test]
    fn validate_rejects_uncentered_and_off_model_states() {
        let spec = demo_spec(HomeAdvantage::PerCity, 1, 1);
        let hyper = Hyperpriors::default();
        let mut state = ParameterState::zeros(&spec.league);
        state.theta[(0, 0)] = 0.5;
        assert!(state.validate(&spec, &hyper).is_err());

        let constant = demo_spec(HomeAdvantage::Constant, 1, 1);
        let mut state = ParameterState::zeros(&constant.league);
        state.alpha[2] = 0.1;
        assert!(state.validate(&constant, &hyper).is_err());
    }
}
