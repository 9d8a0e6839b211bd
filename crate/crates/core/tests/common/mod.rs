#![allow(dead_code)]

use statrs::distribution::{Beta, ChiSquared, ContinuousCDF};

/// Pearson chi-square statistic against equal expected counts.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum()
}

/// Upper `level` quantile of chi-square with `df` degrees of freedom.
pub fn chi_square_critical(df: usize, level: f64) -> f64 {
    ChiSquared::new(df as f64).unwrap().inverse_cdf(level)
}

/// Two-sided Clopper-Pearson interval for `successes` out of `trials`.
pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    let alpha = 1.0 - confidence;
    let (k, n) = (successes as f64, trials as f64);
    let lo = if successes == 0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0).unwrap().inverse_cdf(alpha / 2.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        Beta::new(k + 1.0, n - k).unwrap().inverse_cdf(1.0 - alpha / 2.0)
    };
    (lo, hi)
}
