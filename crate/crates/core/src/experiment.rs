//! End-to-end statistical experiment: sample a skewed message, encrypt it
//! with PE^(n), and compare tuple statistics of plaintext and ciphertext.
//! It also contrasts one round of E with one round of PE on the pair
//! (2-tuple) class structure.
//!
//! The defaults: 10^6 letters over `{1,2,3,4}`
//! with probabilities (0.70, 0.15, 0.10, 0.05), the order-4 quasigroup
//! returned by [`reference_quasigroup`], and three PE rounds with leader 4
//! and first block length 3.

use crate::codec::sample_message;
use crate::error::Result;
use crate::exec::Execution;
use crate::quasigroup::OperationTable;
use crate::stats::{
    chi_square_uniformity, count_ngrams, detect_classes, distance_to_uniform, expected_class_means, ClassReport,
    LetterDistribution, NGramDistribution, UniformityReport, DEFAULT_CLASS_THRESHOLD,
};
use crate::transform::{e_transform, pe_round_encrypt, PeKey, RoundParams};

/// The order-4 quasigroup used by the default experiment.
pub fn reference_quasigroup() -> OperationTable {
    OperationTable::from_external_rows(&[[1u32, 2, 4, 3], [3, 4, 2, 1], [4, 3, 1, 2], [2, 1, 3, 4]])
        .expect("reference table is a Latin square")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub quasigroup: OperationTable,
    pub distribution: LetterDistribution,
    pub length: usize,
    pub rounds: Vec<RoundParams>,
    pub seed: u64,
    /// Largest tuple length analysed.
    pub max_tuple: usize,
    /// Significance level of the chi-square uniformity checks.
    pub alpha: f64,
    /// Allowed deviation of each output letter frequency from `1/a`.
    pub letter_tolerance: f64,
    pub class_threshold: f64,
    /// Allowed deviation of the E pair-class means from `p_i / a`.
    pub class_mean_tolerance: f64,
    /// Required ratio between the E and PE separation scores.
    pub score_ratio: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            quasigroup: reference_quasigroup(),
            distribution: LetterDistribution::skewed4(),
            length: 1_000_000,
            rounds: vec![RoundParams { leader: 3, d1: 3 }; 3],
            seed: 0,
            max_tuple: 4,
            alpha: 0.01,
            letter_tolerance: 0.015,
            class_threshold: DEFAULT_CLASS_THRESHOLD,
            class_mean_tolerance: 0.005,
            score_ratio: 5.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// Not evaluated, e.g. because the sample is too small for the test.
    Skipped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: String) -> Self {
        Check {
            name: name.into(),
            outcome: if pass { Outcome::Pass } else { Outcome::Fail },
            detail,
        }
    }
}

/// Input and output statistics for one tuple length.
#[derive(Debug, Clone, PartialEq)]
pub struct TupleComparison {
    pub m: usize,
    /// Overlapping counts of the plaintext.
    pub input: NGramDistribution,
    /// Overlapping counts of the ciphertext.
    pub output: NGramDistribution,
    /// Chi-square on non-overlapping ciphertext tuples.
    pub uniformity: UniformityReport,
    pub input_l1: f64,
    pub output_l1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub seed: u64,
    pub length: usize,
    pub rounds: usize,
    pub letter_frequencies: Vec<f64>,
    pub tuples: Vec<TupleComparison>,
    /// Overlapping pair counts after one E round.
    pub e_pairs: NGramDistribution,
    /// Overlapping pair counts after one PE round.
    pub pe_pairs: NGramDistribution,
    /// `None` when the source letters all share one probability.
    pub e_classes: Option<ClassReport>,
    pub pe_classes: Option<ClassReport>,
    /// Theoretical E pair-class means, largest first.
    pub expected_class_means: Vec<f64>,
    pub checks: Vec<Check>,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome != Outcome::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let order = config.quasigroup.order();
    let key = PeKey::new(config.quasigroup.clone(), config.rounds.clone())?;
    if config.distribution.order() != order {
        return Err(crate::Error::AlphabetMismatch {
            expected: order,
            found: config.distribution.order(),
        });
    }
    let message = sample_message(&config.distribution, config.length, config.seed)?;
    let cipher = key.encrypt(&message)?;
    let first = config.rounds[0];
    let e_once = e_transform(key.quasigroup(), first.leader, &message)?;
    let (pe_once, _) = pe_round_encrypt(key.parastrophes(), first, &message)?;

    let mut checks = Vec::new();

    let letters = count_ngrams(&cipher, 1, true)?;
    let letter_frequencies = letters.probabilities();
    let uniform = 1.0 / order as f64;
    let worst = letter_frequencies
        .iter()
        .map(|f| (f - uniform).abs())
        .fold(0.0, f64::max);
    checks.push(Check::new(
        "letter-frequencies",
        worst <= config.letter_tolerance,
        format!(
            "max |f - 1/{order}| = {worst:.5} (tolerance {})",
            config.letter_tolerance
        ),
    ));

    let mut tuples = Vec::new();
    for m in 1..=config.max_tuple.min(config.length) {
        let input = count_ngrams(&message, m, true)?;
        let output = count_ngrams(&cipher, m, true)?;
        let uniformity = chi_square_uniformity(&count_ngrams(&cipher, m, false)?)?;
        let input_l1 = distance_to_uniform(&input)?.0;
        let output_l1 = distance_to_uniform(&output)?.0;
        let summary = format!(
            "chi2 = {:.3}, df = {}, p = {:.3e}, L1 in = {input_l1:.5}, L1 out = {output_l1:.5}",
            uniformity.statistic, uniformity.df, uniformity.p_value
        );
        if uniformity.sample_too_small() {
            checks.push(Check {
                name: format!("tuples-m{m}"),
                outcome: Outcome::Skipped,
                detail: format!(
                    "sample too small for m={m} analysis (expected count {:.2} < 5)",
                    uniformity.expected_count
                ),
            });
        } else if m <= config.rounds.len() {
            checks.push(Check::new(
                format!("uniform-m{m}"),
                uniformity.passes(config.alpha),
                format!("{summary}; uniformity expected at alpha = {}", config.alpha),
            ));
        } else {
            checks.push(Check::new(
                format!("nonuniform-m{m}"),
                !uniformity.passes(config.alpha) && output_l1 < input_l1,
                format!("{summary}; rejection and L1 out < L1 in expected"),
            ));
        }
        tuples.push(TupleComparison {
            m,
            input,
            output,
            uniformity,
            input_l1,
            output_l1,
        });
    }

    let e_pairs = count_ngrams(&e_once, 2.min(config.length), true)?;
    let pe_pairs = count_ngrams(&pe_once, 2.min(config.length), true)?;
    let expected = expected_class_means(&config.distribution, 1);
    let expected_means: Vec<f64> = expected.classes.iter().map(|c| c.mean).collect();
    let (mut e_classes, mut pe_classes) = (None, None);
    if expected_means.len() >= 2 && e_pairs.tuple_len() == 2 {
        let e = detect_classes(&e_pairs, expected_means.len(), config.class_threshold)?;
        let pe = detect_classes(&pe_pairs, expected_means.len(), config.class_threshold)?;
        let mean_dev = e
            .class_means
            .iter()
            .zip(&expected_means)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        checks.push(Check::new(
            "e-classes",
            e.classes_detected && mean_dev <= config.class_mean_tolerance,
            format!(
                "score = {:.3}, max class-mean deviation = {mean_dev:.5} (tolerance {})",
                e.separation_score, config.class_mean_tolerance
            ),
        ));
        checks.push(Check::new(
            "pe-no-classes",
            !pe.classes_detected,
            format!("score = {:.3}, threshold {}", pe.separation_score, config.class_threshold),
        ));
        checks.push(Check::new(
            "score-ratio",
            e.separation_score >= config.score_ratio * pe.separation_score,
            format!(
                "E/PE = {:.3} (required {})",
                e.separation_score / pe.separation_score,
                config.score_ratio
            ),
        ));
        e_classes = Some(e);
        pe_classes = Some(pe);
    }

    Ok(ExperimentReport {
        seed: config.seed,
        length: config.length,
        rounds: config.rounds.len(),
        letter_frequencies,
        tuples,
        e_pairs,
        pe_pairs,
        e_classes,
        pe_classes,
        expected_class_means: expected_means,
        checks,
    })
}

/// Runs the experiment once per seed, in seed order.
pub fn run_experiments(config: &ExperimentConfig, seeds: &[u64], exec: Execution) -> Result<Vec<ExperimentReport>> {
    exec.map_slice(seeds, |&seed| {
        let cfg = ExperimentConfig {
            seed,
            ..config.clone()
        };
        run_experiment(&cfg)
    })
    .into_iter()
    .collect()
}
