use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::quasigroup::Symbol;
use crate::transform::SymbolString;

/// Largest `a^m` table [`count_ngrams`] will allocate.
pub const MAX_TUPLE_SPACE: usize = 1 << 28;

const CHUNK_WINDOWS: usize = 1 << 16;

/// Counts of `m`-tuples over an alphabet of order `a`.
///
/// `counts[r]` is the count of the tuple with lexicographic rank `r`, where
/// the first position is most significant and the lowest symbol ranks first
/// (for `a = 4, m = 2`: `11 → 0, 12 → 1, …, 44 → 15`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGramDistribution {
    order: usize,
    m: usize,
    counts: Vec<u64>,
    total: u64,
    overlapping: bool,
}

fn tuple_space(order: usize, m: usize) -> Result<usize> {
    let mut cells: usize = 1;
    for _ in 0..m {
        cells = cells
            .checked_mul(order)
            .filter(|&c| c <= MAX_TUPLE_SPACE)
            .ok_or(Error::TupleSpaceTooLarge { order, m })?;
    }
    Ok(cells)
}

impl NGramDistribution {
    /// Wraps precomputed counts (length must be `order^m`).
    pub fn from_counts(order: usize, m: usize, counts: Vec<u64>, overlapping: bool) -> Result<Self> {
        crate::quasigroup::check_order(order)?;
        if m == 0 {
            return Err(Error::InvalidDistribution("tuple length must be at least 1".into()));
        }
        let cells = tuple_space(order, m)?;
        if counts.len() != cells {
            return Err(Error::InvalidDistribution(format!(
                "expected {cells} counts for {order}^{m} tuples, got {}",
                counts.len()
            )));
        }
        let total = counts.iter().sum();
        Ok(NGramDistribution {
            order,
            m,
            counts,
            total,
            overlapping,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn tuple_len(&self) -> usize {
        self.m
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of windows counted.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn overlapping(&self) -> bool {
        self.overlapping
    }

    pub fn cells(&self) -> usize {
        self.counts.len()
    }

    /// Relative frequencies; all zero when nothing was counted.
    pub fn probabilities(&self) -> Vec<f64> {
        let n = self.total as f64;
        self.counts
            .iter()
            .map(|&c| if self.total == 0 { 0.0 } else { c as f64 / n })
            .collect()
    }

    pub fn rank(&self, tuple: &[Symbol]) -> usize {
        debug_assert_eq!(tuple.len(), self.m);
        tuple
            .iter()
            .fold(0, |r, &s| r * self.order + s as usize)
    }

    pub fn tuple(&self, mut rank: usize) -> Vec<Symbol> {
        let mut t = vec![0; self.m];
        for slot in t.iter_mut().rev() {
            *slot = (rank % self.order) as Symbol;
            rank /= self.order;
        }
        t
    }
}

/// Counts `m`-tuples of `s`, with stride 1 (`overlapping`) or stride `m`.
pub fn count_ngrams(s: &SymbolString, m: usize, overlapping: bool) -> Result<NGramDistribution> {
    count_ngrams_with(s, m, overlapping, Execution::default())
}

/// [`count_ngrams`] with an explicit execution mode. The windows are split
/// into chunks that are counted independently and summed.
pub fn count_ngrams_with(
    s: &SymbolString,
    m: usize,
    overlapping: bool,
    exec: Execution,
) -> Result<NGramDistribution> {
    let k = s.len();
    if m == 0 || m > k {
        return Err(Error::TupleLengthOutOfRange { m, max: k });
    }
    let order = s.order();
    let cells = tuple_space(order, m)?;
    let (windows, stride) = if overlapping { (k - m + 1, 1) } else { (k / m, m) };
    let chunk = CHUNK_WINDOWS.max(cells);
    let chunks = windows.div_ceil(chunk);
    let symbols = s.symbols();
    let high = cells / order;

    let partials = exec.map_range(0..chunks, |c| {
        let w0 = c * chunk;
        let w1 = (w0 + chunk).min(windows);
        let mut local = vec![0u64; cells];
        let rank_at = |pos: usize| {
            symbols[pos..pos + m]
                .iter()
                .fold(0usize, |r, &x| r * order + x as usize)
        };
        if overlapping {
            let mut r = rank_at(w0);
            local[r] += 1;
            for w in w0 + 1..w1 {
                r = (r % high) * order + symbols[w + m - 1] as usize;
                local[r] += 1;
            }
        } else {
            for w in w0..w1 {
                local[rank_at(w * stride)] += 1;
            }
        }
        local
    });

    let mut counts = vec![0u64; cells];
    for part in partials {
        for (acc, c) in counts.iter_mut().zip(part) {
            *acc += c;
        }
    }
    Ok(NGramDistribution {
        order,
        m,
        counts,
        total: windows as u64,
        overlapping,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(order: usize, v: &[u32]) -> SymbolString {
        SymbolString::from_external(order, v).unwrap()
    }

    fn rank_ext(d: &NGramDistribution, t: &[u32]) -> usize {
        let t: Vec<Symbol> = t.iter().map(|&x| (x - 1) as Symbol).collect();
        d.rank(&t)
    }

    #[test]
    fn spec_examples() {
        let d = count_ngrams(&s(4, &[1, 2, 1, 2, 1]), 2, true).unwrap();
        assert_eq!(d.total(), 4);
        assert_eq!(d.counts()[rank_ext(&d, &[1, 2])], 2);
        assert_eq!(d.counts()[rank_ext(&d, &[2, 1])], 2);
        assert_eq!(d.counts().iter().sum::<u64>(), 4);

        let d = count_ngrams(&s(4, &[1, 2, 1, 2, 1]), 1, true).unwrap();
        assert_eq!(d.counts(), &[3, 2, 0, 0]);

        let d = count_ngrams(&s(4, &[1, 2, 1, 2]), 2, false).unwrap();
        assert_eq!(d.total(), 2);
        assert_eq!(d.counts()[rank_ext(&d, &[1, 2])], 2);
    }

    #[test]
    fn lexicographic_ranks() {
        let d = NGramDistribution::from_counts(4, 2, vec![0; 16], true).unwrap();
        assert_eq!(rank_ext(&d, &[1, 1]), 0);
        assert_eq!(rank_ext(&d, &[1, 2]), 1);
        assert_eq!(rank_ext(&d, &[4, 4]), 15);
        assert_eq!(d.tuple(6), vec![1, 2]);
    }

    #[test]
    fn errors() {
        let x = s(4, &[1, 2, 3]);
        assert!(matches!(count_ngrams(&x, 0, true), Err(Error::TupleLengthOutOfRange { .. })));
        assert!(matches!(count_ngrams(&x, 4, true), Err(Error::TupleLengthOutOfRange { .. })));
        let big = SymbolString::new(256, vec![0; 10]).unwrap();
        assert!(matches!(count_ngrams(&big, 4, true), Err(Error::TupleSpaceTooLarge { .. })));
    }

    #[test]
    fn chunked_counts_match_across_modes() {
        let syms: Vec<Symbol> = (0..300_000u64).map(|i| ((i * 2654435761) >> 7 & 3) as Symbol).collect();
        let x = SymbolString::new(4, syms).unwrap();
        for m in 1..=4 {
            for ov in [true, false] {
                let a = count_ngrams_with(&x, m, ov, Execution::Sequential).unwrap();
                let b = count_ngrams_with(&x, m, ov, Execution::Parallel).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    proptest! {
        #[test]
        fn totals_and_naive_agreement(syms in prop::collection::vec(0u16..3, 1..300), m in 1usize..4, ov: bool) {
            prop_assume!(m <= syms.len());
            let x = SymbolString::new(3, syms.clone()).unwrap();
            let d = count_ngrams(&x, m, ov).unwrap();
            let expected_n = if ov { syms.len() - m + 1 } else { syms.len() / m };
            prop_assert_eq!(d.total() as usize, expected_n);
            prop_assert_eq!(d.counts().iter().sum::<u64>() as usize, expected_n);
            let mut naive = vec![0u64; d.cells()];
            let step = if ov { 1 } else { m };
            let mut p = 0;
            while p + m <= syms.len() {
                naive[d.rank(&syms[p..p + m])] += 1;
                p += step;
            }
            prop_assert_eq!(d.counts(), &naive[..]);
        }

        #[test]
        fn relabeling_permutes_counts(syms in prop::collection::vec(0u16..4, 2..200), ov: bool) {
            let perm = [2u16, 0, 3, 1];
            let x = SymbolString::new(4, syms.clone()).unwrap();
            let y = SymbolString::new(4, syms.iter().map(|&s| perm[s as usize]).collect()).unwrap();
            let dx = count_ngrams(&x, 2, ov).unwrap();
            let dy = count_ngrams(&y, 2, ov).unwrap();
            for r in 0..dx.cells() {
                let t = dx.tuple(r);
                let relabeled: Vec<Symbol> = t.iter().map(|&s| perm[s as usize]).collect();
                prop_assert_eq!(dx.counts()[r], dy.counts()[dy.rank(&relabeled)]);
            }
        }
    }
}
