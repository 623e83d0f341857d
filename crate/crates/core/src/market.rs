//! Money-line arithmetic, vig handling, and market-calibration testing.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// American-odds money line; magnitudes below 100 do not exist and are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MoneyLine(i32);

impl MoneyLine {
    /// Validates `|value| >= 100` and wraps the line.
    pub fn new(value: i32) -> Result<Self> {
        if value.abs() < 100 {
            return Err(Error::Domain(format!(
                "money line {value} lies strictly inside (-100, 100)"
            )));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> i32 {
        self.0
    }
}

impl std::fmt::Display for MoneyLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0 > 0 {
            write!(f, "+{}", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Normalized win probabilities for one game plus the bookmaker margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpliedPair {
    pub p_home: f64,
    pub p_away: f64,
    /// Sum of the two boundary probabilities minus one; negative values are
    /// tolerated (synthetic or stale feeds) and logged instead of rejected.
    pub vig: f64,
}

/// Break-even win probability for a single line.
///
/// Favorites (negative lines) map to `|l|/(100+|l|)`, underdogs to
/// `100/(100+l)`; both branches give exactly 0.5 at `|l| = 100`.
pub fn boundary_probability(line: MoneyLine) -> f64 {
    let l = f64::from(line.value());
    if l >= 100.0 {
        100.0 / (100.0 + l)
    } else {
        -l / (100.0 - l)
    }
}

/// Normalizes the two boundary probabilities so they sum to one.
pub fn implied_pair(home_line: MoneyLine, away_line: MoneyLine) -> ImpliedPair {
    let b_home = boundary_probability(home_line);
    let b_away = boundary_probability(away_line);
    let total = b_home + b_away;
    let vig = total - 1.0;
    if vig < 0.0 {
        log::warn!("negative vig {vig:.4} for lines {home_line}/{away_line}");
    }
    ImpliedPair {
        p_home: b_home / total,
        p_away: b_away / total,
        vig,
    }
}

/// One row of the calibration table behind the goodness-of-fit statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationBin {
    /// 1-based position after sorting by implied probability.
    pub bin_index: usize,
    pub n: usize,
    pub mean_implied_p: f64,
    pub observed_wins: u64,
    pub expected_wins: f64,
}

/// Hosmer-Lemeshow goodness-of-fit result over equal-size probability bins.
#[derive(Debug, Clone, PartialEq)]
pub struct HosmerLemeshow {
    pub statistic: f64,
    pub p_value: f64,
    pub degrees_of_freedom: usize,
    pub bins: Vec<CalibrationBin>,
}

/// Hosmer-Lemeshow test of externally supplied probabilities.
///
/// Uses `bins` degrees of freedom, the calibrated choice when the
/// probabilities were not estimated from the data being tested.
pub fn hosmer_lemeshow(games: &[(f64, bool)], bins: usize) -> Result<HosmerLemeshow> {
    hosmer_lemeshow_with(games, bins, 0)
}

/// Hosmer-Lemeshow test with `bins - fitted_params` degrees of freedom, for
/// probabilities produced by a model with `fitted_params` parameters fitted on
/// the same data.
pub fn hosmer_lemeshow_with(
    games: &[(f64, bool)],
    bins: usize,
    fitted_params: usize,
) -> Result<HosmerLemeshow> {
    if bins < 2 {
        return Err(Error::Domain(format!("need at least 2 bins, got {bins}")));
    }
    if fitted_params >= bins {
        return Err(Error::Domain(format!(
            "fitted_params {fitted_params} must be smaller than bins {bins}"
        )));
    }
    if games.len() < bins {
        return Err(Error::InsufficientData(format!(
            "{} games cannot fill {bins} nonempty bins",
            games.len()
        )));
    }
    for (p, _) in games {
        if !(p.is_finite() && *p > 0.0 && *p < 1.0) {
            return Err(Error::Domain(format!(
                "implied probability {p} outside (0, 1)"
            )));
        }
    }

    let mut sorted: Vec<(f64, bool)> = games.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));

    // n = bins*q + r: the first bins-r bins take q games, the last r take q+1.
    let q = sorted.len() / bins;
    let r = sorted.len() % bins;
    let mut table = Vec::with_capacity(bins);
    let mut statistic = 0.0_f64;
    let mut start = 0usize;
    for b in 0..bins {
        let size = if b < bins - r { q } else { q + 1 };
        let chunk = &sorted[start..start + size];
        start += size;
        let n_b = size as f64;
        let expected: f64 = chunk.iter().map(|(p, _)| *p).sum();
        let observed = chunk.iter().filter(|(_, won)| *won).count() as u64;
        statistic += {
            let diff = observed as f64 - expected;
            diff * diff / (expected * (1.0 - expected / n_b))
        };
        table.push(CalibrationBin {
            bin_index: b + 1,
            n: size,
            mean_implied_p: expected / n_b,
            observed_wins: observed,
            expected_wins: expected,
        });
    }

    let df = bins - fitted_params;
    let p_value = ChiSquared::new(df as f64)
        .map_err(|e| Error::Domain(format!("chi-squared with {df} df: {e}")))?
        .sf(statistic);
    Ok(HosmerLemeshow {
        statistic,
        p_value,
        degrees_of_freedom: df,
        bins: table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;

    #[test]
    fn money_line_rejects_interior_values() {
        for bad in [0, 50, 99, -99, -1] {
            assert!(
                MoneyLine::new(bad).is_err(),
                "line {bad} should be rejected"
            );
        }
        for good in [100, -100, 117, -127, 10_000] {
            assert!(MoneyLine::new(good).is_ok(), "line {good} should be valid");
        }
    }

    #[test]
    fn boundary_probability_matches_published_examples() {
        let favorite = boundary_probability(MoneyLine::new(-127).unwrap());
        assert_relative_eq!(favorite, 127.0 / 227.0, max_relative = 1e-15);
        assert!((favorite - 0.559).abs() < 1e-3);

        let underdog = boundary_probability(MoneyLine::new(117).unwrap());
        assert_relative_eq!(underdog, 100.0 / 217.0, max_relative = 1e-15);
        assert!((underdog - 0.461).abs() < 1e-3);
    }

    #[test]
    fn boundary_probability_is_exactly_half_at_either_hundred() {
        assert_eq!(boundary_probability(MoneyLine::new(100).unwrap()), 0.5);
        assert_eq!(boundary_probability(MoneyLine::new(-100).unwrap()), 0.5);
    }

    #[test]
    fn implied_pair_normalizes_published_example() {
        let pair = implied_pair(MoneyLine::new(-127).unwrap(), MoneyLine::new(117).unwrap());
        assert!((pair.p_home - 0.548).abs() < 1e-3, "p_home = {}", pair.p_home);
        assert!((pair.p_away - 0.452).abs() < 1e-3, "p_away = {}", pair.p_away);
        assert!((pair.vig - 0.02).abs() < 1e-3, "vig = {}", pair.vig);
        assert!((pair.p_home + pair.p_away - 1.0).abs() < 1e-12);
    }

    #[test]
    fn implied_pair_symmetric_lines_split_evenly() {
        let pair = implied_pair(MoneyLine::new(-110).unwrap(), MoneyLine::new(-110).unwrap());
        assert_eq!(pair.p_home, 0.5);
        assert_eq!(pair.p_away, 0.5);
        assert!(pair.vig > 0.0);
    }

    #[test]
    fn implied_pair_matches_hand_arithmetic() {
        // b_home = 200/300, b_away = 100/280, so p_home = 28/43.
        let pair = implied_pair(MoneyLine::new(-200).unwrap(), MoneyLine::new(180).unwrap());
        assert_relative_eq!(pair.p_home, 28.0 / 43.0, max_relative = 1e-14);
        assert!((pair.p_home + pair.p_away - 1.0).abs() < 1e-12);
    }

    #[test]
    fn implied_pair_tolerates_negative_vig() {
        let pair = implied_pair(MoneyLine::new(-102).unwrap(), MoneyLine::new(105).unwrap());
        assert!(pair.vig < 0.0, "vig = {} should be negative", pair.vig);
        assert!((pair.p_home + pair.p_away - 1.0).abs() < 1e-12);
    }

    #[test]
    fn calibrated_half_probabilities_give_zero_statistic() {
        let games: Vec<(f64, bool)> = (0..100).map(|i| (0.5, i % 2 == 0)).collect();
        let hl = hosmer_lemeshow(&games, 10).unwrap();
        assert!(hl.statistic.abs() < 1e-9, "statistic = {}", hl.statistic);
        assert!((hl.p_value - 1.0).abs() < 1e-9);
        assert_eq!(hl.degrees_of_freedom, 10);
    }

    #[test]
    fn certain_wins_at_even_odds_are_rejected_hard() {
        // Each bin contributes (10-5)^2 / (5 * 0.5) = 10, so the statistic is 100.
        let games: Vec<(f64, bool)> = (0..100).map(|_| (0.5, true)).collect();
        let hl = hosmer_lemeshow(&games, 10).unwrap();
        assert_relative_eq!(hl.statistic, 100.0, max_relative = 1e-12);
        assert!(hl.p_value < 1e-12, "p = {}", hl.p_value);
    }

    #[test]
    fn remainder_games_fill_trailing_bins() {
        let games: Vec<(f64, bool)> = (0..23).map(|i| (0.1 + 0.03 * i as f64, false)).collect();
        let hl = hosmer_lemeshow(&games, 10).unwrap();
        let sizes: Vec<usize> = hl.bins.iter().map(|b| b.n).collect();
        assert_eq!(sizes, vec![2, 2, 2, 2, 2, 2, 2, 3, 3, 3]);
        assert_eq!(hl.bins.iter().map(|b| b.n).sum::<usize>(), 23);
        let indices: Vec<usize> = hl.bins.iter().map(|b| b.bin_index).collect();
        assert_eq!(indices, (1..=10).collect::<Vec<_>>());
    }

    #[test]
    fn too_few_games_for_bins_is_insufficient_data() {
        let games: Vec<(f64, bool)> = (0..5).map(|_| (0.4, true)).collect();
        assert!(matches!(
            hosmer_lemeshow(&games, 10),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn probabilities_on_the_boundary_are_rejected() {
        for bad in [0.0, 1.0, -0.2, 1.4, f64::NAN] {
            let games = vec![(bad, true); 20];
            assert!(
                hosmer_lemeshow(&games, 2).is_err(),
                "p = {bad} should be rejected"
            );
        }
    }

    #[test]
    fn fitted_params_shift_degrees_of_freedom() {
        let games: Vec<(f64, bool)> = (0..100).map(|i| (0.5, i % 2 == 0)).collect();
        let hl = hosmer_lemeshow_with(&games, 10, 2).unwrap();
        assert_eq!(hl.degrees_of_freedom, 8);
        assert!(hosmer_lemeshow_with(&games, 10, 10).is_err());
    }

    #[test]
    fn null_rejection_rate_is_near_nominal() {
        // Coarse Monte-Carlo check; the tight 1000-replicate version runs in
        // the acceptance suite.
        let mut rng = crate::rng::stream(11, "market-null", 0);
        let replicates = 200;
        let mut rejections = 0;
        for _ in 0..replicates {
            let games: Vec<(f64, bool)> = (0..500)
                .map(|_| {
                    let p = rng.random_range(0.05..0.95);
                    (p, rng.random_range(0.0..1.0) < p)
                })
                .collect();
            let hl = hosmer_lemeshow(&games, 10).unwrap();
            if hl.p_value < 0.05 {
                rejections += 1;
            }
        }
        let rate = f64::from(rejections) / f64::from(replicates);
        assert!(
            (0.005..=0.12).contains(&rate),
            "null rejection rate {rate} far from 0.05"
        );
    }
}
