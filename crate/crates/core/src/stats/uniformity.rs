use super::gamma::ln_chi_square_sf;
use super::NGramDistribution;
use crate::error::{Error, Result};

/// Expected cell count below which the chi-square approximation is flagged.
pub const MIN_EXPECTED_COUNT: f64 = 5.0;

/// Chi-square goodness-of-fit of an n-gram table against the uniform law.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformityReport {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    /// `ln p_value`, finite even where `p_value` underflows to zero.
    pub ln_p_value: f64,
    pub l1: f64,
    pub max_dev: f64,
    pub windows: u64,
    pub expected_count: f64,
}

impl UniformityReport {
    /// True when the expected count per cell is below [`MIN_EXPECTED_COUNT`].
    pub fn sample_too_small(&self) -> bool {
        self.expected_count < MIN_EXPECTED_COUNT
    }

    /// Uniformity is not rejected at significance level `alpha`.
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value >= alpha
    }
}

/// `Σ (O - E)² / E` with `E = N / a^m`, `df = a^m - 1`, and p-value
/// `Q(df/2, statistic/2)`.
pub fn chi_square_uniformity(d: &NGramDistribution) -> Result<UniformityReport> {
    if d.total() == 0 {
        return Err(Error::EmptyDistribution);
    }
    let expected = d.total() as f64 / d.cells() as f64;
    let statistic: f64 = d
        .counts()
        .iter()
        .map(|&o| {
            let diff = o as f64 - expected;
            diff * diff / expected
        })
        .sum();
    let df = d.cells() - 1;
    let ln_p_value = ln_chi_square_sf(statistic, df as f64);
    let (l1, max_dev) = distance_to_uniform(d)?;
    Ok(UniformityReport {
        statistic,
        df,
        p_value: ln_p_value.exp().clamp(0.0, 1.0),
        ln_p_value,
        l1,
        max_dev,
        windows: d.total(),
        expected_count: expected,
    })
}

/// L1 distance and largest absolute deviation between the empirical tuple
/// frequencies and `a^-m`.
pub fn distance_to_uniform(d: &NGramDistribution) -> Result<(f64, f64)> {
    if d.total() == 0 {
        return Err(Error::EmptyDistribution);
    }
    let u = 1.0 / d.cells() as f64;
    Ok(d.probabilities()
        .iter()
        .map(|p| (p - u).abs())
        .fold((0.0, 0.0), |(l1, mx), dev| (l1 + dev, f64::max(mx, dev))))
}
