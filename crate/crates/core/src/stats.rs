//! Small numerical helpers shared across modules.

use crate::error::{Error, Result};
use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};

pub const LN_2PI: f64 = 1.8378770664093455;

/// Log-density of N(mu, sigma^2) at x. sigma must be positive.
#[inline]
pub fn normal_logpdf(x: f64, mu: f64, sigma: f64) -> f64 {
    let z = (x - mu) / sigma;
    -0.5 * z * z - sigma.ln() - 0.5 * LN_2PI
}

/// Compensated (Kahan) sum; the result does not depend on how callers chunk
/// the input, which keeps parallel aggregations reproducible.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for x in xs {
        let y = x - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    kahan_sum(xs.iter().copied()) / xs.len() as f64
}

/// Unbiased sample variance; NaN below two observations.
pub fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return f64::NAN;
    }
    let m = mean(xs);
    kahan_sum(xs.iter().map(|x| (x - m) * (x - m))) / (xs.len() - 1) as f64
}

/// Pearson correlation; None when either side has zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// Empirical quantile with linear interpolation between order statistics.
/// `q` in [0,1]; input need not be sorted.
pub fn quantile(xs: &[f64], q: f64) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::EmptySet("quantile of empty sample".into()));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain(format!("quantile level {q} outside [0,1]")));
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("NaN in quantile input"));
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    Ok(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}

/// One-sample Kolmogorov-Smirnov distance between a sample and a CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySet("KS distance of empty sample".into()));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("NaN in KS input"));
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, x) in sorted.iter().enumerate() {
        let f = cdf(*x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// Standard normal CDF.
pub fn std_normal_cdf(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

/// Draws from N(mu, sigma^2) truncated to [lo, hi].
///
/// Central cases go through the inverse CDF; a far-tail case (both bounds beyond
/// ~6 sigma on the same side) uses Robert's exponential rejection so the
/// result stays accurate when the untruncated mass in [lo, hi] underflows.
pub fn truncated_normal<R: Rng>(rng: &mut R, mu: f64, sigma: f64, lo: f64, hi: f64) -> f64 {
    assert!(sigma > 0.0 && lo < hi, "truncated_normal needs sigma > 0 and lo < hi");
    let a = (lo - mu) / sigma;
    let b = (hi - mu) / sigma;
    // Mirror right-tail cases into the left tail so one code path suffices.
    if a > 0.0 {
        return -truncated_normal(rng, -mu, sigma, -hi, -lo) + 0.0;
    }
    let x = if b < -6.0 {
        // Entire interval in the far left tail: sample -X for X in [|b|, |a|].
        -tail_sample(rng, -b, -a)
    } else {
        let n = Normal::standard();
        let fa = n.cdf(a);
        let fb = n.cdf(b);
        if fb - fa < 1e-14 {
            // Numerically point-like slice; fall back to the nearer bound.
            if mu < lo {
                a
            } else {
                b
            }
        } else {
            let u = rng.random_range(fa..fb);
            n.inverse_cdf(u)
        }
    };
    (mu + sigma * x).clamp(lo, hi)
}

/// Standard-normal draw conditioned on [lo, hi] with lo >= 6 (right tail).
fn tail_sample<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    loop {
        let u: f64 = rng.random();
        let z = lo - u.ln() / lo;
        if z > hi {
            continue;
        }
        let d = z - lo;
        let accept: f64 = rng.random();
        if accept.ln() <= -0.5 * d * d {
            return z;
        }
    }
}
