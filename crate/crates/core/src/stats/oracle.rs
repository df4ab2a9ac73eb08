//! Exact output distributions of PE^(n) by brute-force enumeration.
//!
//! Every plaintext of length `k` is weighted by the product of its letter
//! probabilities. Every tuple of round leaders is weighted uniformly and
//! independently of the plaintext. First block lengths are fixed per round.
//! The result is the exact law of each window `(Y_t, …, Y_{t+m-1})` of the
//! ciphertext under that model.

use super::LetterDistribution;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::quasigroup::{ParastropheSet, Symbol};
use crate::transform::{round_forward, RoundParams};

/// Upper bound on `a^k · a^rounds` PE evaluations.
pub const ENUMERATION_LIMIT: u128 = 100_000_000;

fn decode(mut index: usize, order: usize, digits: &mut [Symbol]) {
    for d in digits.iter_mut().rev() {
        *d = (index % order) as Symbol;
        index /= order;
    }
}

/// Exact distribution of every length-`m` window of the ciphertext.
/// Element `t - 1` of the result is the law of the window starting at
/// position `t`, as a vector over lexicographic tuple ranks.
pub fn exact_window_distributions(
    set: &ParastropheSet,
    d1s: &[usize],
    p: &LetterDistribution,
    k: usize,
    m: usize,
) -> Result<Vec<Vec<f64>>> {
    exact_window_distributions_with(set, d1s, p, k, m, Execution::default())
}

pub fn exact_window_distributions_with(
    set: &ParastropheSet,
    d1s: &[usize],
    p: &LetterDistribution,
    k: usize,
    m: usize,
    exec: Execution,
) -> Result<Vec<Vec<f64>>> {
    let order = set.order();
    if p.order() != order {
        return Err(Error::AlphabetMismatch {
            expected: order,
            found: p.order(),
        });
    }
    if d1s.is_empty() {
        return Err(Error::NoRounds);
    }
    if let Some(&d1) = d1s.iter().find(|&&d| d < 2) {
        return Err(Error::FirstBlockTooShort(d1));
    }
    if k == 0 {
        return Err(Error::EmptyInput);
    }
    if m == 0 || m > k {
        return Err(Error::TupleLengthOutOfRange { m, max: k });
    }
    let rounds = d1s.len();
    let needed = (order as u128)
        .checked_pow((k + rounds) as u32)
        .unwrap_or(u128::MAX);
    if needed > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            needed,
            limit: ENUMERATION_LIMIT,
        });
    }

    let positions = k - m + 1;
    let cells = order.pow(m as u32);
    let prefix_len = k.min(2);
    let parts = order.pow(prefix_len as u32);
    let per_part = order.pow((k - prefix_len) as u32);
    let leader_tuples = order.pow(rounds as u32);
    let leader_weight = 1.0 / leader_tuples as f64;
    let probs = p.probs();

    let partials = exec.map_range(0..parts, |part| {
        let mut acc = vec![vec![0.0f64; cells]; positions];
        let mut plain = vec![0 as Symbol; k];
        let mut leaders = vec![0 as Symbol; rounds];
        let mut current = Vec::with_capacity(k);
        let mut next = Vec::with_capacity(k);
        for index in part * per_part..(part + 1) * per_part {
            decode(index, order, &mut plain);
            let weight: f64 = plain.iter().map(|&x| probs[x as usize]).product::<f64>() * leader_weight;
            for leader_index in 0..leader_tuples {
                decode(leader_index, order, &mut leaders);
                current.clear();
                current.extend_from_slice(&plain);
                for (&leader, &d1) in leaders.iter().zip(d1s) {
                    round_forward(set, RoundParams { leader, d1 }, &current, &mut next, None);
                    std::mem::swap(&mut current, &mut next);
                }
                for (t, slot) in acc.iter_mut().enumerate() {
                    let rank = current[t..t + m]
                        .iter()
                        .fold(0usize, |r, &y| r * order + y as usize);
                    slot[rank] += weight;
                }
            }
        }
        acc
    });

    let mut total = vec![vec![0.0f64; cells]; positions];
    for part in partials {
        for (dst, src) in total.iter_mut().zip(part) {
            for (a, b) in dst.iter_mut().zip(src) {
                *a += b;
            }
        }
    }
    Ok(total)
}

/// Exact law of the ciphertext window of length `m` starting at 1-based
/// position `t`.
pub fn exact_output_distribution(
    set: &ParastropheSet,
    d1s: &[usize],
    p: &LetterDistribution,
    k: usize,
    m: usize,
    t: usize,
) -> Result<Vec<f64>> {
    let max = k.saturating_sub(m) + 1;
    if t == 0 || t > max || m > k {
        return Err(Error::PositionOutOfRange { position: t, max });
    }
    let mut all = exact_window_distributions(set, d1s, p, k, m)?;
    Ok(all.swap_remove(t - 1))
}
