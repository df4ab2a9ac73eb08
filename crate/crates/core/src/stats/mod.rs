//! Frequency analysis and uniformity testing of symbol strings.

mod classes;
pub mod gamma;
mod ngram;
mod oracle;
mod uniformity;

pub use classes::{detect_classes, expected_class_means, ClassReport, ExpectedClasses, MergedClass, DEFAULT_CLASS_THRESHOLD};
pub use ngram::{count_ngrams, count_ngrams_with, NGramDistribution, MAX_TUPLE_SPACE};
pub use oracle::{exact_output_distribution, exact_window_distributions, exact_window_distributions_with, ENUMERATION_LIMIT};
pub use uniformity::{chi_square_uniformity, distance_to_uniform, UniformityReport, MIN_EXPECTED_COUNT};

use crate::error::{Error, Result};

/// Probabilities `p1..pa` of the letters of a source alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct LetterDistribution {
    probs: Vec<f64>,
}

impl LetterDistribution {
    /// Requires at least two letters, every `p_i > 0`, and `Σ p_i = 1` within `1e-12`.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidDistribution(format!(
                "need at least 2 letters, got {}",
                probs.len()
            )));
        }
        if let Some((i, p)) = probs.iter().enumerate().find(|(_, p)| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::InvalidDistribution(format!(
                "probability of letter {} is {p}, must be positive",
                i + 1
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(LetterDistribution { probs })
    }

    pub fn uniform(order: usize) -> Result<Self> {
        Self::new(vec![1.0 / order as f64; order])
    }

    /// The skewed 4-letter source (0.70, 0.15, 0.10, 0.05) used by the
    /// default experiment.
    pub fn skewed4() -> Self {
        LetterDistribution {
            probs: vec![0.70, 0.15, 0.10, 0.05],
        }
    }

    pub fn order(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}
