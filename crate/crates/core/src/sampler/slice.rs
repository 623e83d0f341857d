//! Univariate slice sampling on a bounded interval.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::Stream;

/// One slice-sampling transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceOutcome {
    pub value: f64,
    /// Interval shrinks needed before acceptance; a mixing indicator, since
    /// slice transitions never reject.
    pub shrinks: u32,
}

/// Draws the next state of a Markov chain targeting `log_density` on
/// (`lo`, `hi`), starting the bracket at the full interval and shrinking
/// toward the current point until a proposal lands inside the slice.
pub fn slice_sample(
    rng: &mut Stream,
    current: f64,
    lo: f64,
    hi: f64,
    log_density: impl Fn(f64) -> f64,
) -> Result<SliceOutcome> {
    if !(lo < hi) || !current.is_finite() || current < lo || current > hi {
        return Err(Error::Domain(format!(
            "slice start {current} outside interval ({lo}, {hi})"
        )));
    }
    let here = log_density(current);
    if !here.is_finite() {
        return Err(Error::NonFiniteDensity(format!(
            "log-density at slice start {current} is {here}"
        )));
    }
    // ln U is never 0, so the slice level sits strictly below the density.
    let level = here + rng.random_range(0.0_f64..1.0).ln();
    let mut left = lo;
    let mut right = hi;
    let mut shrinks = 0u32;
    loop {
        let candidate = rng.random_range(left..right);
        if log_density(candidate) >= level {
            return Ok(SliceOutcome {
                value: candidate,
                shrinks,
            });
        }
        if candidate < current {
            left = candidate;
        } else {
            right = candidate;
        }
        shrinks += 1;
        if shrinks > 10_000 {
            return Err(Error::NonFiniteDensity(format!(
                "slice bracket collapsed around {current} without acceptance"
            )));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::stats::ks_distance;

    #[test]
    fn flat_target_gives_uniform_draws() {
        let mut rng = stream(3, "slice-flat", 0);
        let mut x = 2.0;
        let mut draws = Vec::with_capacity(4000);
        for _ in 0..4000 {
            x = slice_sample(&mut rng, x, 0.0, 5.0, |_| 0.0).unwrap().value;
            draws.push(x);
        }
        let ks = ks_distance(&draws, |v| (v / 5.0).clamp(0.0, 1.0)).unwrap();
        assert!(ks < 0.03, "KS distance {ks} against Uniform(0,5)");
    }

    #[test]
    fn gamma_shaped_target_matches_its_mean() {
        // log f(u) = 3 ln u - 2u on (0, 50) is Gamma(4, rate 2): mean 2.
        let mut rng = stream(4, "slice-gamma", 0);
        let mut x = 1.0;
        let mut sum = 0.0;
        let n = 20_000;
        for _ in 0..n {
            let out = slice_sample(&mut rng, x, 0.0, 50.0, |u| 3.0 * u.ln() - 2.0 * u).unwrap();
            x = out.value;
            assert!(x > 0.0 && x < 50.0);
            sum += x;
        }
        let mean = sum / n as f64;
        assert!((mean - 2.0).abs() < 0.05, "sample mean {mean}, expected 2");
    }

    #[test]
    fn out_of_interval_start_is_rejected() {
        let mut rng = stream(5, "slice-bad", 0);
        assert!(slice_sample(&mut rng, 7.0, 0.0, 5.0, |_| 0.0).is_err());
        assert!(slice_sample(&mut rng, f64::NAN, 0.0, 5.0, |_| 0.0).is_err());
    }

    #[test]
    fn infinite_density_at_start_is_reported() {
        let mut rng = stream(6, "slice-inf", 0);
        let err = slice_sample(&mut rng, 1.0, 0.0, 5.0, |_| f64::NEG_INFINITY).unwrap_err();
        assert!(matches!(err, Error::NonFiniteDensity(_)));
    }
}
