//! Detection of the class structure that E-transformed text shows in its
//! `(n+1)`-tuple frequencies: after `n` rounds of E over a source with
//! letter probabilities `p_i`, the tuples fall into `a` classes of `a^n`
//! tuples each, with probability `p_i / a^n` inside class `i`.

use super::{LetterDistribution, NGramDistribution};
use crate::error::{Error, Result};
use crate::quasigroup::Symbol;

/// Separation score at or above which classes are reported as detected.
pub const DEFAULT_CLASS_THRESHOLD: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct MergedClass {
    pub mean: f64,
    /// Source letters (0-based) whose probabilities coincide.
    pub letters: Vec<Symbol>,
    /// Number of tuples in the class, `letters.len() · a^n`.
    pub size: u128,
}

/// Theoretical class means `p_i / a^n`, with equal probabilities merged.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedClasses {
    /// `p_i / a^n` in letter order.
    pub means: Vec<f64>,
    /// Distinct classes, largest mean first.
    pub classes: Vec<MergedClass>,
}

pub fn expected_class_means(p: &LetterDistribution, n: u32) -> ExpectedClasses {
    let a = p.order();
    let scale = (a as f64).powi(n as i32);
    let per_class = (a as u128).saturating_pow(n);
    let means: Vec<f64> = p.probs().iter().map(|&pi| pi / scale).collect();

    let mut order: Vec<usize> = (0..a).collect();
    order.sort_by(|&i, &j| means[j].total_cmp(&means[i]).then(i.cmp(&j)));
    let mut classes: Vec<MergedClass> = Vec::new();
    for i in order {
        match classes.last_mut() {
            Some(c) if (c.mean - means[i]).abs() <= 1e-12 * c.mean => {
                c.letters.push(i as Symbol);
                c.size += per_class;
            }
            _ => classes.push(MergedClass {
                mean: means[i],
                letters: vec![i as Symbol],
                size: per_class,
            }),
        }
    }
    ExpectedClasses { means, classes }
}

/// Result of splitting sorted tuple probabilities into a fixed number of classes.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassReport {
    /// Empirical tuple probabilities, descending.
    pub sorted_probs: Vec<f64>,
    /// A cut after index `i` separates `sorted_probs[i]` and `sorted_probs[i + 1]`.
    pub cut_after: Vec<usize>,
    pub class_means: Vec<f64>,
    pub class_sizes: Vec<usize>,
    pub smallest_cut_gap: f64,
    pub largest_within_gap: f64,
    /// `smallest_cut_gap / max(largest_within_gap, 1 / (10 N))`.
    pub separation_score: f64,
    pub threshold: f64,
    pub classes_detected: bool,
}

impl ClassReport {
    /// Same as [`detect_classes`] on bare probabilities from `total` windows.
    pub fn from_probabilities(probs: &[f64], total: u64, expected_classes: usize, threshold: f64) -> Result<Self> {
        let cells = probs.len();
        if expected_classes < 2 || expected_classes > cells {
            return Err(Error::ClassCountOutOfRange {
                classes: expected_classes,
                cells,
            });
        }
        if total == 0 {
            return Err(Error::EmptyDistribution);
        }
        let mut sorted = probs.to_vec();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let gaps: Vec<f64> = sorted.windows(2).map(|w| w[0] - w[1]).collect();

        let mut by_size: Vec<usize> = (0..gaps.len()).collect();
        by_size.sort_by(|&i, &j| gaps[j].total_cmp(&gaps[i]).then(i.cmp(&j)));
        let mut cut_after: Vec<usize> = by_size[..expected_classes - 1].to_vec();
        cut_after.sort_unstable();

        let smallest_cut_gap = cut_after.iter().map(|&i| gaps[i]).fold(f64::INFINITY, f64::min);
        let largest_within_gap = by_size[expected_classes - 1..]
            .iter()
            .map(|&i| gaps[i])
            .fold(0.0, f64::max);
        let floor = 1.0 / (10.0 * total as f64);
        let separation_score = smallest_cut_gap / largest_within_gap.max(floor);

        let mut class_means = Vec::with_capacity(expected_classes);
        let mut class_sizes = Vec::with_capacity(expected_classes);
        let mut start = 0;
        for end in cut_after.iter().map(|&i| i + 1).chain(std::iter::once(cells)) {
            let members = &sorted[start..end];
            class_means.push(members.iter().sum::<f64>() / members.len() as f64);
            class_sizes.push(members.len());
            start = end;
        }

        Ok(ClassReport {
            sorted_probs: sorted,
            cut_after,
            class_means,
            class_sizes,
            smallest_cut_gap,
            largest_within_gap,
            separation_score,
            threshold,
            classes_detected: separation_score >= threshold,
        })
    }
}

/// Sorts the empirical tuple probabilities in descending order, cuts them at
/// the `expected_classes - 1` largest adjacent gaps, and scores how cleanly
/// those cuts separate the classes.
pub fn detect_classes(d: &NGramDistribution, expected_classes: usize, threshold: f64) -> Result<ClassReport> {
    ClassReport::from_probabilities(&d.probabilities(), d.total(), expected_classes, threshold)
}
