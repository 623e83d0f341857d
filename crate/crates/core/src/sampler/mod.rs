//! MCMC engine: exact Gaussian block updates for strengths and edges,
//! truncated-Gaussian updates for the persistence parameters, slice updates
//! for the scales, plus multi-chain orchestration and draw retention.

pub mod diagnostics;
pub mod io;
pub mod slice;

use std::collections::BTreeMap;

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{stream, Stream};
use crate::schedule::GameRecord;
use crate::ssm::{apply_link, HomeAdvantage, Hyperpriors, ModelSpec, ParameterState};
use crate::stats::truncated_normal;

/// Which parameter blocks a sweep updates; disabled blocks stay frozen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateMask {
    pub strengths: bool,
    pub league_edge: bool,
    pub city_edges: bool,
    pub persistence: bool,
    pub scales: bool,
}

impl Default for UpdateMask {
    fn default() -> Self {
        Self {
            strengths: true,
            league_edge: true,
            city_edges: true,
            persistence: true,
            scales: true,
        }
    }
}

impl UpdateMask {
    /// Freezes everything except the strength grid.
    pub fn strengths_only() -> Self {
        Self {
            strengths: true,
            league_edge: false,
            city_edges: false,
            persistence: false,
            scales: false,
        }
    }
}

/// Where each chain starts.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum InitStrategy {
    /// Random over-dispersed start, different per chain.
    #[default]
    Dispersed,
    /// Every chain starts from this exact state.
    Fixed(Box<ParameterState>),
}

/// Chain count, sweep counts, retention rule, seed, and update plan.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub chains: usize,
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    pub updates: UpdateMask,
    pub init: InitStrategy,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            chains: 3,
            iterations: 40_000,
            burn_in: 4_000,
            thin: 5,
            seed: 0,
            updates: UpdateMask::default(),
            init: InitStrategy::Dispersed,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.chains == 0 {
            return Err(Error::Config("need at least one chain".into()));
        }
        if self.burn_in >= self.iterations {
            return Err(Error::Config(format!(
                "burn_in {} must be below iterations {}",
                self.burn_in, self.iterations
            )));
        }
        if self.thin == 0 {
            return Err(Error::Config("thin must be at least 1".into()));
        }
        Ok(())
    }

    /// Retained draw count per chain.
    pub fn retained_per_chain(&self) -> usize {
        (self.iterations - self.burn_in).div_ceil(self.thin)
    }

    fn is_retained(&self, sweep: usize) -> bool {
        sweep > self.burn_in && (sweep - self.burn_in - 1) % self.thin == 0
    }
}

/// One retained state with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Draw {
    /// 1-based chain id.
    pub chain: usize,
    /// 1-based sweep number within the chain, burn-in included in the count.
    pub iteration: usize,
    pub state: ParameterState,
}

/// All retained draws of one fit, in (chain, iteration) order.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorDraws {
    pub draws: Vec<Draw>,
    pub config: SamplerConfig,
    pub spec: ModelSpec,
    /// Mean slice-bracket shrinks per scale update, keyed by scale name.
    pub slice_shrinkage: BTreeMap<String, f64>,
}

impl PosteriorDraws {
    pub fn states(&self) -> impl Iterator<Item = &ParameterState> {
        self.draws.iter().map(|d| &d.state)
    }

    /// Per-scalar posterior means assembled into one state, re-centered.
    pub fn mean_state(&self) -> Result<ParameterState> {
        let first = self.draws.first().ok_or(Error::EmptyDraws)?;
        let mut acc = first.state.clone();
        for draw in &self.draws[1..] {
            let s = &draw.state;
            acc.theta += &s.theta;
            acc.alpha0 += s.alpha0;
            for (a, b) in acc.alpha.iter_mut().zip(&s.alpha) {
                *a += b;
            }
            acc.sigma_game += s.sigma_game;
            acc.sigma_season += s.sigma_season;
            acc.sigma_week += s.sigma_week;
            acc.sigma_alpha += s.sigma_alpha;
            acc.gamma_season += s.gamma_season;
            acc.gamma_week += s.gamma_week;
        }
        let n = self.draws.len() as f64;
        acc.theta /= n;
        acc.alpha0 /= n;
        for a in &mut acc.alpha {
            *a /= n;
        }
        acc.sigma_game /= n;
        acc.sigma_season /= n;
        acc.sigma_week /= n;
        acc.sigma_alpha /= n;
        acc.gamma_season /= n;
        acc.gamma_week /= n;
        acc.center_theta();
        if self.spec.variant == HomeAdvantage::PerCity {
            acc.center_alpha();
        }
        Ok(acc)
    }
}

/// Identifier of one scalar parameter in the draw grammar.
///
/// Names follow `theta[s,k,i]`, `alpha0`, `alpha[c]`, `sigma_game`,
/// `sigma_season`, `sigma_week`, `sigma_alpha`, `gamma_season`, `gamma_week`
/// with 1-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamId {
    Strength {
        season: usize,
        week: usize,
        team: usize,
    },
    LeagueEdge,
    CityEdge(usize),
    SigmaGame,
    SigmaSeason,
    SigmaWeek,
    SigmaAlpha,
    GammaSeason,
    GammaWeek,
}

impl ParamId {
    pub fn name(&self) -> String {
        match self {
            ParamId::Strength { season, week, team } => format!("theta[{season},{week},{team}]"),
            ParamId::LeagueEdge => "alpha0".into(),
            ParamId::CityEdge(c) => format!("alpha[{c}]"),
            ParamId::SigmaGame => "sigma_game".into(),
            ParamId::SigmaSeason => "sigma_season".into(),
            ParamId::SigmaWeek => "sigma_week".into(),
            ParamId::SigmaAlpha => "sigma_alpha".into(),
            ParamId::GammaSeason => "gamma_season".into(),
            ParamId::GammaWeek => "gamma_week".into(),
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        let unknown = || Error::SchemaVersion(format!("unknown parameter name `{name}`"));
        match name {
            "alpha0" => return Ok(ParamId::LeagueEdge),
            "sigma_game" => return Ok(ParamId::SigmaGame),
            "sigma_season" => return Ok(ParamId::SigmaSeason),
            "sigma_week" => return Ok(ParamId::SigmaWeek),
            "sigma_alpha" => return Ok(ParamId::SigmaAlpha),
            "gamma_season" => return Ok(ParamId::GammaSeason),
            "gamma_week" => return Ok(ParamId::GammaWeek),
            _ => {}
        }
        let parse_index = |s: &str| s.parse::<usize>().map_err(|_| unknown());
        if let Some(body) = name.strip_prefix("theta[").and_then(|s| s.strip_suffix(']')) {
            let parts: Vec<&str> = body.split(',').collect();
            if parts.len() != 3 {
                return Err(unknown());
            }
            return Ok(ParamId::Strength {
                season: parse_index(parts[0])?,
                week: parse_index(parts[1])?,
                team: parse_index(parts[2])?,
            });
        }
        if let Some(body) = name.strip_prefix("alpha[").and_then(|s| s.strip_suffix(']')) {
            return Ok(ParamId::CityEdge(parse_index(body)?));
        }
        Err(unknown())
    }

    pub fn get(&self, state: &ParameterState, spec: &ModelSpec) -> f64 {
        match *self {
            ParamId::Strength { season, week, team } => state.theta_at(spec, season, week, team),
            ParamId::LeagueEdge => state.alpha0,
            ParamId::CityEdge(c) => state.alpha[c - 1],
            ParamId::SigmaGame => state.sigma_game,
            ParamId::SigmaSeason => state.sigma_season,
            ParamId::SigmaWeek => state.sigma_week,
            ParamId::SigmaAlpha => state.sigma_alpha,
            ParamId::GammaSeason => state.gamma_season,
            ParamId::GammaWeek => state.gamma_week,
        }
    }

    pub fn set(&self, state: &mut ParameterState, spec: &ModelSpec, value: f64) -> Result<()> {
        match *self {
            ParamId::Strength { season, week, team } => {
                let league = &spec.league;
                if season == 0
                    || season > league.seasons
                    || week == 0
                    || week > league.weeks
                    || team == 0
                    || team > league.teams
                {
                    return Err(Error::Index(format!(
                        "theta[{season},{week},{team}] outside the league dimensions"
                    )));
                }
                state.theta[(spec.row(season, week), team - 1)] = value;
            }
            ParamId::CityEdge(c) => {
                if c == 0 || c > state.alpha.len() {
                    return Err(Error::Index(format!(
                        "alpha[{c}] outside the {} cities",
                        state.alpha.len()
                    )));
                }
                state.alpha[c - 1] = value;
            }
            ParamId::LeagueEdge => state.alpha0 = value,
            ParamId::SigmaGame => state.sigma_game = value,
            ParamId::SigmaSeason => state.sigma_season = value,
            ParamId::SigmaWeek => state.sigma_week = value,
            ParamId::SigmaAlpha => state.sigma_alpha = value,
            ParamId::GammaSeason => state.gamma_season = value,
            ParamId::GammaWeek => state.gamma_week = value,
        }
        Ok(())
    }
}

/// Canonical ordering of every scalar parameter the model exposes.
///
/// City edges appear only under the per-city variant; sigma_alpha is always
/// present because it is sampled under both variants.
pub fn scalar_parameters(spec: &ModelSpec) -> Vec<ParamId> {
    let league = &spec.league;
    let mut params = Vec::new();
    for season in 1..=league.seasons {
        for week in 1..=league.weeks {
            for team in 1..=league.teams {
                params.push(ParamId::Strength { season, week, team });
            }
        }
    }
    params.push(ParamId::LeagueEdge);
    if spec.variant == HomeAdvantage::PerCity {
        for c in 1..=league.cities {
            params.push(ParamId::CityEdge(c));
        }
    }
    params.extend([
        ParamId::SigmaGame,
        ParamId::SigmaSeason,
        ParamId::SigmaWeek,
        ParamId::SigmaAlpha,
        ParamId::GammaSeason,
        ParamId::GammaWeek,
    ]);
    params
}

// 0-based game view on the link scale.
struct ObsGame {
    home: usize,
    away: usize,
    city: usize,
    y: f64,
}

struct Observations {
    // grid-row index → games that week
    by_row: Vec<Vec<ObsGame>>,
    total: usize,
}

impl Observations {
    fn build(games: &[GameRecord], spec: &ModelSpec) -> Result<Self> {
        let league = &spec.league;
        let mut by_row = Vec::new();
        by_row.resize_with(spec.grid_rows(), Vec::new);
        for (i, game) in games.iter().enumerate() {
            if game.season == 0
                || game.season > league.seasons
                || game.week == 0
                || game.week > league.weeks
                || game.home_team == 0
                || game.home_team > league.teams
                || game.away_team == 0
                || game.away_team > league.teams
                || game.home_city == 0
                || game.home_city > league.cities
            {
                return Err(Error::DimensionMismatch(format!(
                    "game {i} does not fit the league dimensions"
                )));
            }
            let p = game.implied_p_home.ok_or_else(|| {
                Error::MissingProbability(format!("game {i} has no implied probability"))
            })?;
            by_row[spec.row(game.season, game.week)].push(ObsGame {
                home: game.home_team - 1,
                away: game.away_team - 1,
                city: game.home_city - 1,
                y: apply_link(p, spec.link)?,
            });
        }
        Ok(Self {
            total: games.len(),
            by_row,
        })
    }
}

fn std_normal(rng: &mut Stream) -> f64 {
    rng.sample(StandardNormal)
}

fn dispersed_init(rng: &mut Stream, spec: &ModelSpec) -> ParameterState {
    let league = &spec.league;
    let mut state = ParameterState::zeros(league);
    for r in 0..state.theta.nrows() {
        for c in 0..state.theta.ncols() {
            state.theta[(r, c)] = 0.5 * std_normal(rng);
        }
    }
    state.center_theta();
    state.alpha0 = 0.1 * std_normal(rng);
    if spec.variant == HomeAdvantage::PerCity {
        for a in &mut state.alpha {
            *a = 0.1 * std_normal(rng);
        }
        state.center_alpha();
    }
    state.sigma_game = 0.2;
    state.sigma_season = 0.2;
    state.sigma_week = 0.2;
    state.sigma_alpha = 0.2;
    state.gamma_season = 0.5;
    state.gamma_week = 0.75;
    state
}

fn update_strengths(
    rng: &mut Stream,
    state: &mut ParameterState,
    obs: &Observations,
    spec: &ModelSpec,
) -> Result<()> {
    let league = &spec.league;
    let t = league.teams;
    let per_city = spec.variant == HomeAdvantage::PerCity;
    let w_game = 1.0 / (state.sigma_game * state.sigma_game);
    let p_week = 1.0 / (state.sigma_week * state.sigma_week);
    let p_season = 1.0 / (state.sigma_season * state.sigma_season);
    for s in 1..=league.seasons {
        for k in 1..=league.weeks {
            let row = spec.row(s, k);
            let mut lambda = DMatrix::zeros(t, t);
            let mut b = DVector::zeros(t);
            for g in &obs.by_row[row] {
                let resid =
                    g.y - state.alpha0 - if per_city { state.alpha[g.city] } else { 0.0 };
                lambda[(g.home, g.home)] += w_game;
                lambda[(g.away, g.away)] += w_game;
                lambda[(g.home, g.away)] -= w_game;
                lambda[(g.away, g.home)] -= w_game;
                b[g.home] += w_game * resid;
                b[g.away] -= w_game * resid;
            }
            // Edge from the predecessor state (or the zero anchor).
            if s == 1 && k == 1 {
                for i in 0..t {
                    lambda[(i, i)] += p_season;
                }
            } else {
                let (prev, gamma, prec) = if k == 1 {
                    (spec.row(s - 1, league.weeks), state.gamma_season, p_season)
                } else {
                    (spec.row(s, k - 1), state.gamma_week, p_week)
                };
                for i in 0..t {
                    lambda[(i, i)] += prec;
                    b[i] += prec * gamma * state.theta[(prev, i)];
                }
            }
            // Edge into the successor state, if one exists.
            if k < league.weeks {
                let next = spec.row(s, k + 1);
                for i in 0..t {
                    lambda[(i, i)] += state.gamma_week * state.gamma_week * p_week;
                    b[i] += p_week * state.gamma_week * state.theta[(next, i)];
                }
            } else if s < league.seasons {
                let next = spec.row(s + 1, 1);
                for i in 0..t {
                    lambda[(i, i)] += state.gamma_season * state.gamma_season * p_season;
                    b[i] += p_season * state.gamma_season * state.theta[(next, i)];
                }
            }

            let chol = Cholesky::new(lambda).ok_or_else(|| {
                Error::NonFiniteDensity(format!(
                    "strength precision for (season {s}, week {k}) is not positive definite"
                ))
            })?;
            let mean = chol.solve(&b);
            let z = DVector::from_iterator(t, (0..t).map(|_| std_normal(rng)));
            let noise = chol.l().tr_solve_lower_triangular(&z).ok_or_else(|| {
                Error::NonFiniteDensity(format!(
                    "singular strength factor for (season {s}, week {k})"
                ))
            })?;
            let draw = mean + noise;
            // The precision treats the all-ones direction as an eigenvector,
            // so centering the draw samples exactly the sum-zero conditional.
            let shift = draw.sum() / t as f64;
            for i in 0..t {
                state.theta[(row, i)] = draw[i] - shift;
            }
        }
    }
    Ok(())
}

fn update_league_edge(
    rng: &mut Stream,
    state: &mut ParameterState,
    obs: &Observations,
    spec: &ModelSpec,
    hyper: &Hyperpriors,
) {
    let per_city = spec.variant == HomeAdvantage::PerCity;
    let w_game = 1.0 / (state.sigma_game * state.sigma_game);
    let mut precision = 1.0 / hyper.alpha0_variance;
    let mut weighted = 0.0;
    for (row, games) in obs.by_row.iter().enumerate() {
        for g in games {
            let delta = state.theta[(row, g.home)] - state.theta[(row, g.away)];
            let resid = g.y - delta - if per_city { state.alpha[g.city] } else { 0.0 };
            weighted += w_game * resid;
            precision += w_game;
        }
    }
    let variance = 1.0 / precision;
    state.alpha0 = variance * weighted + variance.sqrt() * std_normal(rng);
}

fn update_city_edges(
    rng: &mut Stream,
    state: &mut ParameterState,
    obs: &Observations,
    spec: &ModelSpec,
) {
    let cities = spec.league.cities;
    let w_game = 1.0 / (state.sigma_game * state.sigma_game);
    let v_alpha = state.sigma_alpha * state.sigma_alpha;
    let mut count = vec![0.0_f64; cities];
    let mut sum = vec![0.0_f64; cities];
    for (row, games) in obs.by_row.iter().enumerate() {
        for g in games {
            let delta = state.theta[(row, g.home)] - state.theta[(row, g.away)];
            sum[g.city] += g.y - delta - state.alpha0;
            count[g.city] += 1.0;
        }
    }
    for c in 0..cities {
        let precision = count[c] * w_game + 1.0 / v_alpha;
        let variance = 1.0 / precision;
        let mean = variance * w_game * sum[c];
        state.alpha[c] = mean + variance.sqrt() * std_normal(rng);
    }
    // Keep game means intact while restoring the sum-zero convention.
    state.center_alpha();
}

fn draw_persistence(rng: &mut Stream, a: f64, c: f64, lo: f64, hi: f64) -> f64 {
    if a > 0.0 {
        truncated_normal(rng, c / a, (1.0 / a).sqrt(), lo, hi)
    } else {
        rng.random_range(lo..hi)
    }
}

fn update_persistence(
    rng: &mut Stream,
    state: &mut ParameterState,
    spec: &ModelSpec,
    hyper: &Hyperpriors,
) {
    let league = &spec.league;
    let t = league.teams;
    let p_week = 1.0 / (state.sigma_week * state.sigma_week);
    let p_season = 1.0 / (state.sigma_season * state.sigma_season);

    let mut a = 0.0;
    let mut c = 0.0;
    for s in 1..=league.seasons {
        for k in 2..=league.weeks {
            let prev = spec.row(s, k - 1);
            let next = spec.row(s, k);
            for i in 0..t {
                a += p_week * state.theta[(prev, i)] * state.theta[(prev, i)];
                c += p_week * state.theta[(prev, i)] * state.theta[(next, i)];
            }
        }
    }
    state.gamma_week = draw_persistence(rng, a, c, 0.0, hyper.gamma_week_max);

    let mut a = 0.0;
    let mut c = 0.0;
    for s in 1..league.seasons {
        let prev = spec.row(s, league.weeks);
        let next = spec.row(s + 1, 1);
        for i in 0..t {
            a += p_season * state.theta[(prev, i)] * state.theta[(prev, i)];
            c += p_season * state.theta[(prev, i)] * state.theta[(next, i)];
        }
    }
    state.gamma_season = draw_persistence(rng, a, c, 0.0, hyper.gamma_season_max);
}

const SCALE_NAMES: [&str; 4] = ["sigma_game", "sigma_season", "sigma_week", "sigma_alpha"];

fn update_scales(
    rng: &mut Stream,
    state: &mut ParameterState,
    obs: &Observations,
    spec: &ModelSpec,
    hyper: &Hyperpriors,
    shrink_sums: &mut [f64; 4],
) -> Result<()> {
    let league = &spec.league;
    let t = league.teams;
    let per_city = spec.variant == HomeAdvantage::PerCity;

    let mut ssr_game = 0.0;
    for (row, games) in obs.by_row.iter().enumerate() {
        for g in games {
            let mean = state.theta[(row, g.home)] - state.theta[(row, g.away)]
                + state.alpha0
                + if per_city { state.alpha[g.city] } else { 0.0 };
            let resid = g.y - mean;
            ssr_game += resid * resid;
        }
    }

    let mut ssr_season = 0.0;
    for i in 0..t {
        ssr_season += state.theta[(0, i)] * state.theta[(0, i)];
    }
    for s in 1..league.seasons {
        let prev = spec.row(s, league.weeks);
        let next = spec.row(s + 1, 1);
        for i in 0..t {
            let innov = state.theta[(next, i)] - state.gamma_season * state.theta[(prev, i)];
            ssr_season += innov * innov;
        }
    }

    let mut ssr_week = 0.0;
    for s in 1..=league.seasons {
        for k in 2..=league.weeks {
            let prev = spec.row(s, k - 1);
            let next = spec.row(s, k);
            for i in 0..t {
                let innov = state.theta[(next, i)] - state.gamma_week * state.theta[(prev, i)];
                ssr_week += innov * innov;
            }
        }
    }

    let (n_alpha, ssr_alpha) = if per_city {
        (league.cities, state.alpha.iter().map(|a| a * a).sum())
    } else {
        (0, 0.0)
    };

    let plan: [(usize, f64); 4] = [
        (obs.total, ssr_game),
        (t * league.seasons, ssr_season),
        (t * league.seasons * (league.weeks - 1), ssr_week),
        (n_alpha, ssr_alpha),
    ];
    for (slot, (n, ssr)) in plan.into_iter().enumerate() {
        let sigma = match slot {
            0 => &mut state.sigma_game,
            1 => &mut state.sigma_season,
            2 => &mut state.sigma_week,
            _ => &mut state.sigma_alpha,
        };
        let tau_sq = 1.0 / (*sigma * *sigma);
        let half_n = n as f64 / 2.0;
        let out = slice::slice_sample(rng, tau_sq, 0.0, hyper.tau_sq_upper, |u| {
            if u <= 0.0 {
                f64::NEG_INFINITY
            } else {
                half_n * u.ln() - 0.5 * ssr * u
            }
        })?;
        *sigma = 1.0 / out.value.sqrt();
        shrink_sums[slot] += f64::from(out.shrinks);
    }
    Ok(())
}

fn sweep_once(
    rng: &mut Stream,
    state: &mut ParameterState,
    obs: &Observations,
    spec: &ModelSpec,
    config: &SamplerConfig,
    hyper: &Hyperpriors,
    shrink_sums: &mut [f64; 4],
) -> Result<()> {
    if config.updates.strengths {
        update_strengths(rng, state, obs, spec)?;
    }
    if config.updates.league_edge {
        update_league_edge(rng, state, obs, spec, hyper);
    }
    if config.updates.city_edges && spec.variant == HomeAdvantage::PerCity {
        update_city_edges(rng, state, obs, spec);
    }
    if config.updates.persistence {
        update_persistence(rng, state, spec, hyper);
    }
    if config.updates.scales {
        update_scales(rng, state, obs, spec, hyper, shrink_sums)?;
    }
    Ok(())
}

struct ChainOutput {
    draws: Vec<Draw>,
    shrink_sums: [f64; 4],
}

fn run_chain(
    chain: usize,
    obs: &Observations,
    spec: &ModelSpec,
    config: &SamplerConfig,
    hyper: &Hyperpriors,
) -> Result<ChainOutput> {
    let mut rng = stream(config.seed, "chain", chain as u64);
    let mut state = match &config.init {
        InitStrategy::Dispersed => dispersed_init(&mut rng, spec),
        InitStrategy::Fixed(s) => (**s).clone(),
    };
    let mut draws = Vec::with_capacity(config.retained_per_chain());
    let mut shrink_sums = [0.0_f64; 4];
    for sweep in 1..=config.iterations {
        sweep_once(&mut rng, &mut state, obs, spec, config, hyper, &mut shrink_sums)?;
        if config.is_retained(sweep) {
            state.validate(spec, hyper)?;
            draws.push(Draw {
                chain: chain + 1,
                iteration: sweep,
                state: state.clone(),
            });
        }
    }
    Ok(ChainOutput { draws, shrink_sums })
}

/// Runs all chains and merges retained draws in chain order.
///
/// Results depend only on (seed, config, input); chains may execute on any
/// number of threads without changing the output.
pub fn fit(games: &[GameRecord], spec: &ModelSpec, config: &SamplerConfig) -> Result<PosteriorDraws> {
    config.validate()?;
    let hyper = Hyperpriors::default();
    let obs = Observations::build(games, spec)?;
    if let InitStrategy::Fixed(init) = &config.init {
        init.validate(spec, &hyper)?;
    }
    let outputs: Vec<Result<ChainOutput>> = (0..config.chains)
        .into_par_iter()
        .map(|c| run_chain(c, &obs, spec, config, &hyper))
        .collect();

    let mut draws = Vec::with_capacity(config.chains * config.retained_per_chain());
    let mut shrink_totals = [0.0_f64; 4];
    for output in outputs {
        let output = output?;
        draws.extend(output.draws);
        for (total, part) in shrink_totals.iter_mut().zip(output.shrink_sums) {
            *total += part;
        }
    }
    let scale_updates = if config.updates.scales {
        (config.chains * config.iterations) as f64
    } else {
        0.0
    };
    let slice_shrinkage = SCALE_NAMES
        .iter()
        .zip(shrink_totals)
        .map(|(name, total)| {
            let mean = if scale_updates > 0.0 {
                total / scale_updates
            } else {
                0.0
            };
            (name.to_string(), mean)
        })
        .collect();

    Ok(PosteriorDraws {
        draws,
        config: config.clone(),
        spec: spec.clone(),
        slice_shrinkage,
    })
}
