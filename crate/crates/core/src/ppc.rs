//! Posterior predictive simulation, per-team discrepancy summaries, and
//! deviance-based model comparison.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::stream;
use crate::sampler::PosteriorDraws;
use crate::schedule::GameRecord;
use crate::ssm::{apply_link, game_mean, invert_link, log_likelihood, Link};
use crate::stats::mean;

/// One simulated data set drawn from the posterior predictive distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictiveReplicate {
    pub replicate_id: usize,
    /// Simulated link-scale observation per game, in game order.
    pub link_values: Vec<f64>,
    /// The same values pushed through the inverse link.
    pub probabilities: Vec<f64>,
}

/// Simulates `n_rep` replicate data sets: each picks one posterior draw
/// uniformly, then draws every game observation from its Gaussian law.
pub fn simulate_replicates(
    draws: &PosteriorDraws,
    games: &[GameRecord],
    n_rep: usize,
    seed: u64,
) -> Result<Vec<PredictiveReplicate>> {
    if n_rep == 0 {
        return Ok(Vec::new());
    }
    if draws.draws.is_empty() {
        return Err(Error::EmptyDraws);
    }
    let spec = &draws.spec;
    let replicates: Vec<Result<PredictiveReplicate>> = (0..n_rep)
        .into_par_iter()
        .map(|rep| {
            let mut rng = stream(seed, "replicate", rep as u64);
            let state = &draws.draws[rng.random_range(0..draws.draws.len())].state;
            let mut link_values = Vec::with_capacity(games.len());
            let mut probabilities = Vec::with_capacity(games.len());
            for game in games {
                let z: f64 = rng.sample(StandardNormal);
                let value = game_mean(state, spec, game)? + state.sigma_game * z;
                link_values.push(value);
                probabilities.push(invert_link(value, spec.link));
            }
            Ok(PredictiveReplicate {
                replicate_id: rep + 1,
                link_values,
                probabilities,
            })
        })
        .collect();
    replicates.into_iter().collect()
}

/// Mean gap between simulated and observed link values, averaged over each
/// home team's games; teams with no home games are absent from the map.
pub fn team_discrepancy(
    replicates: &[PredictiveReplicate],
    games: &[GameRecord],
    link: Link,
) -> Result<BTreeMap<usize, f64>> {
    if replicates.is_empty() {
        return Err(Error::EmptyDraws);
    }
    for rep in replicates {
        if rep.link_values.len() != games.len() {
            return Err(Error::DimensionMismatch(format!(
                "replicate {} has {} values for {} games",
                rep.replicate_id,
                rep.link_values.len(),
                games.len()
            )));
        }
    }
    let mut sums: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for (i, game) in games.iter().enumerate() {
        let p = game.implied_p_home.ok_or_else(|| {
            Error::MissingProbability(format!("game {i} has no implied probability"))
        })?;
        let observed = apply_link(p, link)?;
        let simulated = mean(
            &replicates
                .iter()
                .map(|r| r.link_values[i])
                .collect::<Vec<_>>(),
        );
        let entry = sums.entry(game.home_team).or_insert((0.0, 0));
        entry.0 += simulated - observed;
        entry.1 += 1;
    }
    Ok(sums
        .into_iter()
        .map(|(team, (total, n))| (team, total / n as f64))
        .collect())
}

/// Deviance summary: posterior-mean deviance, plug-in deviance, and their
/// implied effective parameter count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DicResult {
    pub dbar: f64,
    pub d_at_mean: f64,
    pub p_d: f64,
    pub dic: f64,
}

/// Deviance information criterion with the posterior-mean plug-in.
pub fn dic(draws: &PosteriorDraws, games: &[GameRecord]) -> Result<DicResult> {
    if draws.draws.is_empty() {
        return Err(Error::EmptyDraws);
    }
    let spec = &draws.spec;
    let deviances: Vec<f64> = draws
        .states()
        .map(|s| log_likelihood(s, spec, games).map(|ll| -2.0 * ll))
        .collect::<Result<_>>()?;
    let dbar = mean(&deviances);
    if deviances.len() == 1 {
        return Ok(DicResult {
            dbar,
            d_at_mean: dbar,
            p_d: 0.0,
            dic: dbar,
        });
    }
    let plug_in = draws.mean_state()?;
    let d_at_mean = -2.0 * log_likelihood(&plug_in, spec, games)?;
    let p_d = dbar - d_at_mean;
    if p_d < 0.0 {
        log::warn!("negative effective parameter count p_d = {p_d:.3}");
    }
    Ok(DicResult {
        dbar,
        d_at_mean,
        p_d,
        dic: dbar + p_d,
    })
}

/// Model-comparison difference with a paired, draw-matched standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DicDifference {
    pub dic_a: f64,
    pub dic_b: f64,
    /// dic_a − dic_b; negative favors model A.
    pub difference: f64,
    /// Standard error of the mean draw-wise deviance difference.
    pub se: f64,
}

/// Compares two fits of the same games, pairing deviances by draw index.
pub fn dic_difference(
    a: &PosteriorDraws,
    b: &PosteriorDraws,
    games: &[GameRecord],
) -> Result<DicDifference> {
    if a.draws.len() != b.draws.len() {
        return Err(Error::DimensionMismatch(format!(
            "cannot pair {} draws with {}",
            a.draws.len(),
            b.draws.len()
        )));
    }
    if a.draws.is_empty() {
        return Err(Error::EmptyDraws);
    }
    let dic_a = dic(a, games)?;
    let dic_b = dic(b, games)?;
    let diffs: Vec<f64> = a
        .states()
        .zip(b.states())
        .map(|(sa, sb)| {
            let da = -2.0 * log_likelihood(sa, &a.spec, games)?;
            let db = -2.0 * log_likelihood(sb, &b.spec, games)?;
            Ok(da - db)
        })
        .collect::<Result<_>>()?;
    let n = diffs.len() as f64;
    let se = if diffs.len() > 1 {
        (crate::stats::sample_variance(&diffs) / n).sqrt()
    } else {
        0.0
    };
    Ok(DicDifference {
        dic_a: dic_a.dic,
        dic_b: dic_b.dic,
        difference: dic_a.dic - dic_b.dic,
        se,
    })
}
