//! Convergence diagnostics: split potential scale reduction and effective
//! sample size for every scalar parameter.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::sampler::{scalar_parameters, PosteriorDraws};
use crate::stats::{mean, sample_variance};

/// Convergence summary of one scalar parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarDiagnostic {
    pub name: String,
    /// Split potential scale reduction; at most ~1 for mixed chains.
    pub rhat: f64,
    pub ess: f64,
    /// True when the pooled series is exactly constant, where both statistics
    /// are meaningless; rhat is reported as 1 and ess as 0.
    pub degenerate: bool,
}

/// Diagnostics across all chains of a fit.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainDiagnostics {
    pub scalars: Vec<ScalarDiagnostic>,
    /// Names with rhat above the 1.1 warning threshold.
    pub flagged: Vec<String>,
    /// Mean slice-bracket shrinks per scale update; the scale updates have no
    /// accept/reject step, so bracket work stands in for an acceptance rate.
    pub slice_shrinkage: BTreeMap<String, f64>,
}

// Splits each chain in half, skipping the middle element of odd-length chains.
fn split_sequences(chains: &[Vec<f64>]) -> Vec<&[f64]> {
    let mut seqs = Vec::with_capacity(chains.len() * 2);
    for chain in chains {
        let half = chain.len() / 2;
        seqs.push(&chain[..half]);
        seqs.push(&chain[chain.len() - half..]);
    }
    seqs
}

// Biased (denominator n) autocovariance of one sequence at a given lag.
fn autocovariance(seq: &[f64], seq_mean: f64, lag: usize) -> f64 {
    let n = seq.len();
    let mut sum = 0.0;
    for i in 0..n - lag {
        sum += (seq[i] - seq_mean) * (seq[i + lag] - seq_mean);
    }
    sum / n as f64
}

struct SeriesSummary {
    rhat: f64,
    ess: f64,
    degenerate: bool,
}

fn summarize(chains: &[Vec<f64>]) -> SeriesSummary {
    let pooled_min = chains
        .iter()
        .flatten()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let pooled_max = chains
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if pooled_min == pooled_max {
        return SeriesSummary {
            rhat: 1.0,
            ess: 0.0,
            degenerate: true,
        };
    }

    let seqs = split_sequences(chains);
    let half = seqs[0].len();
    let means: Vec<f64> = seqs.iter().map(|s| mean(s)).collect();
    let vars: Vec<f64> = seqs.iter().map(|s| sample_variance(s)).collect();
    let w = mean(&vars);
    let between = sample_variance(&means);
    let var_hat = (half - 1) as f64 / half as f64 * w + between;
    if w <= 0.0 || !var_hat.is_finite() {
        // Constant within sequences but not overall: chains never moved.
        return SeriesSummary {
            rhat: f64::INFINITY,
            ess: 0.0,
            degenerate: true,
        };
    }
    let rhat = (var_hat / w).sqrt();

    // Effective sample size via combined autocorrelations, truncated at the
    // first negative pair and forced monotone.
    let total = (seqs.len() * half) as f64;
    let rho_at = |lag: usize| -> f64 {
        let acov = seqs
            .iter()
            .zip(&means)
            .map(|(s, m)| autocovariance(s, *m, lag))
            .sum::<f64>()
            / seqs.len() as f64;
        1.0 - (w - acov) / var_hat
    };
    let mut tau_pairs = 0.0;
    let mut prev_pair = f64::INFINITY;
    let mut lag = 1usize;
    loop {
        let rho_a = if lag <= half - 1 { rho_at(lag) } else { 0.0 };
        let rho_b = if lag + 1 <= half - 1 { rho_at(lag + 1) } else { 0.0 };
        let pair = if lag == 1 {
            1.0 + rho_a + rho_b
        } else {
            rho_a + rho_b
        };
        if pair < 0.0 || lag > half - 1 {
            break;
        }
        let capped = pair.min(prev_pair);
        tau_pairs += capped;
        prev_pair = capped;
        lag += 2;
    }
    let tau = (2.0 * tau_pairs - 1.0).max(1e-12);
    let ess = (total / tau).min(total);
    SeriesSummary {
        rhat,
        ess,
        degenerate: false,
    }
}

/// Split R-hat and ESS per scalar parameter across the chains of a fit.
pub fn diagnostics(draws: &PosteriorDraws) -> Result<ChainDiagnostics> {
    let mut grouped: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, draw) in draws.draws.iter().enumerate() {
        grouped.entry(draw.chain).or_default().push(i);
    }
    if grouped.len() < 2 {
        return Err(Error::InsufficientDraws(format!(
            "need at least 2 chains, have {}",
            grouped.len()
        )));
    }
    if let Some((chain, indices)) = grouped.iter().find(|(_, idx)| idx.len() < 10) {
        return Err(Error::InsufficientDraws(format!(
            "chain {chain} retained only {} draws, need at least 10",
            indices.len()
        )));
    }

    let mut scalars = Vec::new();
    let mut flagged = Vec::new();
    for param in scalar_parameters(&draws.spec) {
        let chains: Vec<Vec<f64>> = grouped
            .values()
            .map(|indices| {
                indices
                    .iter()
                    .map(|&i| param.get(&draws.draws[i].state, &draws.spec))
                    .collect()
            })
            .collect();
        let summary = summarize(&chains);
        let name = param.name();
        if summary.rhat > 1.1 {
            flagged.push(name.clone());
        }
        scalars.push(ScalarDiagnostic {
            name,
            rhat: summary.rhat,
            ess: summary.ess,
            degenerate: summary.degenerate,
        });
    }
    Ok(ChainDiagnostics {
        scalars,
        flagged,
        slice_shrinkage: draws.slice_shrinkage.clone(),
    })
}
