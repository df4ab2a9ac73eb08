//! Conversions between external data and symbol strings.
//!
//! * Bytes: for orders 2, 4, 16 and 256 each byte is split big-endian into
//!   `8 / log2(a)` groups of bits, and group `g` becomes the 1-based symbol
//!   `g + 1` (0-based symbol `g`). For `a = 4`, `0x1B = 00|01|10|11` gives
//!   `1 2 3 4`.
//! * Text: whitespace-separated 1-based integers.
//! * Sampling: i.i.d. letters from a [`LetterDistribution`], drawn by
//!   inverse CDF from a ChaCha8 generator seeded with a `u64`.

mod keyfile;

pub use keyfile::{parse_key, serialize_key, KEY_FILE_MAGIC};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quasigroup::{check_order, Symbol};
use crate::stats::LetterDistribution;
use crate::transform::SymbolString;

/// Bits per symbol for the orders the byte codec supports.
fn bits_per_symbol(order: usize) -> Result<usize> {
    match order {
        2 => Ok(1),
        4 => Ok(2),
        16 => Ok(4),
        256 => Ok(8),
        _ => Err(Error::UnsupportedByteOrder(order)),
    }
}

/// Number of symbols one byte expands to.
pub fn symbols_per_byte(order: usize) -> Result<usize> {
    Ok(8 / bits_per_symbol(order)?)
}

pub fn bytes_to_symbols(data: &[u8], order: usize) -> Result<SymbolString> {
    let bits = bits_per_symbol(order)?;
    let per_byte = 8 / bits;
    let mask = (order - 1) as u8;
    let mut symbols = Vec::with_capacity(data.len() * per_byte);
    for &byte in data {
        for i in (0..per_byte).rev() {
            symbols.push(((byte >> (i * bits)) & mask) as Symbol);
        }
    }
    SymbolString::new(order, symbols)
}

pub fn symbols_to_bytes(s: &SymbolString, order: usize) -> Result<Vec<u8>> {
    let bits = bits_per_symbol(order)?;
    let per_byte = 8 / bits;
    if s.order() != order {
        return Err(Error::AlphabetMismatch {
            expected: order,
            found: s.order(),
        });
    }
    if !s.len().is_multiple_of(per_byte) {
        return Err(Error::LengthNotDivisible {
            len: s.len(),
            group: per_byte,
        });
    }
    Ok(s.symbols()
        .chunks(per_byte)
        .map(|group| group.iter().fold(0u8, |b, &x| (((b as u16) << bits) | x) as u8))
        .collect())
}

/// Parses whitespace-separated 1-based symbols. Token indices in errors are 1-based.
pub fn parse_symbol_text(text: &str, order: usize) -> Result<SymbolString> {
    check_order(order)?;
    let mut symbols = Vec::new();
    for (i, token) in text.split_whitespace().enumerate() {
        let value: u64 = token.parse().map_err(|_| Error::InvalidToken {
            index: i + 1,
            token: token.to_string(),
        })?;
        if value == 0 || value > order as u64 {
            return Err(Error::TokenOutOfRange {
                index: i + 1,
                value,
                order,
            });
        }
        symbols.push((value - 1) as Symbol);
    }
    SymbolString::new(order, symbols)
}

/// Renders symbols as 1-based values separated by single spaces, with a
/// trailing newline (empty string for an empty input).
pub fn format_symbol_text(s: &SymbolString) -> String {
    if s.is_empty() {
        return String::new();
    }
    let mut out = String::with_capacity(s.len() * 3);
    for (i, &x) in s.symbols().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&(x as u32 + 1).to_string());
    }
    out.push('\n');
    out
}

/// `k` independent letters drawn from `p`.
pub fn sample_message(p: &LetterDistribution, k: usize, seed: u64) -> Result<SymbolString> {
    let p = LetterDistribution::new(p.probs().to_vec())?;
    let order = p.order();
    let mut cumulative: Vec<f64> = p
        .probs()
        .iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    // Guard the last bucket against rounding in the running sum.
    *cumulative.last_mut().expect("at least two letters") = f64::INFINITY;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let symbols = (0..k)
        .map(|_| {
            let u: f64 = rng.random();
            cumulative.partition_point(|&c| c <= u) as Symbol
        })
        .collect();
    SymbolString::new(order, symbols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn byte_examples() {
        assert_eq!(bytes_to_symbols(&[0x1B], 4).unwrap().to_external(), vec![1, 2, 3, 4]);
        assert_eq!(bytes_to_symbols(&[0xFF], 16).unwrap().to_external(), vec![16, 16]);
        assert_eq!(
            bytes_to_symbols(&[0xA5], 2).unwrap().to_external(),
            vec![2, 1, 2, 1, 1, 2, 1, 2]
        );
        for b in [0u8, 1, 77, 255] {
            let s = bytes_to_symbols(&[b], 256).unwrap();
            assert_eq!(s.to_external(), vec![b as u32 + 1]);
            assert_eq!(symbols_to_bytes(&s, 256).unwrap(), vec![b]);
        }
        assert_eq!(
            symbols_to_bytes(&SymbolString::from_external(4, &[1, 2, 3, 4]).unwrap(), 4).unwrap(),
            vec![0x1B]
        );
        assert_eq!(
            symbols_to_bytes(&SymbolString::from_external(16, &[16, 16]).unwrap(), 16).unwrap(),
            vec![0xFF]
        );
    }

    #[test]
    fn byte_errors() {
        assert_eq!(bytes_to_symbols(&[1], 3).unwrap_err(), Error::UnsupportedByteOrder(3));
        let err = symbols_to_bytes(&SymbolString::from_external(4, &[1, 2, 3]).unwrap(), 4).unwrap_err();
        assert_eq!(err.to_string(), "length 3 not divisible by 4");
        assert!(matches!(
            symbols_to_bytes(&SymbolString::from_external(4, &[1, 2, 3, 4]).unwrap(), 16),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn text_parsing() {
        assert_eq!(parse_symbol_text("1 2 3 1 2", 4).unwrap().to_external(), vec![1, 2, 3, 1, 2]);
        assert_eq!(
            parse_symbol_text("5", 4).unwrap_err(),
            Error::TokenOutOfRange { index: 1, value: 5, order: 4 }
        );
        assert!(parse_symbol_text("", 4).unwrap().is_empty());
        assert!(parse_symbol_text(" \n\t", 4).unwrap().is_empty());
        assert!(matches!(
            parse_symbol_text("1 x 2", 4),
            Err(Error::InvalidToken { index: 2, .. })
        ));
        assert!(matches!(parse_symbol_text("1 -2", 4), Err(Error::InvalidToken { .. })));
        let s = parse_symbol_text("3\n2  3\t4 2\n", 4).unwrap();
        assert_eq!(format_symbol_text(&s), "3 2 3 4 2\n");
    }

    #[test]
    fn sampling_contract() {
        let p = LetterDistribution::skewed4();
        let m = sample_message(&p, 100_000, 17).unwrap();
        assert_eq!(m, sample_message(&p, 100_000, 17).unwrap());
        assert_ne!(m, sample_message(&p, 100_000, 18).unwrap());
        let ones = m.symbols().iter().filter(|&&x| x == 0).count() as f64 / 1e5;
        // 3σ binomial bound: 3 sqrt(0.7 · 0.3 / 1e5) ≈ 0.0043
        assert!((ones - 0.700).abs() <= 0.0043, "{ones}");
        assert!(m.symbols().iter().all(|&x| x < 4));
        assert!(sample_message(&p, 0, 1).unwrap().is_empty());
    }

    #[test]
    fn sampling_converges_in_kolmogorov_distance() {
        let p = LetterDistribution::new(vec![0.05, 0.5, 0.2, 0.25]).unwrap();
        for k in [1_000usize, 10_000, 100_000] {
            for seed in 0..5 {
                let m = sample_message(&p, k, seed).unwrap();
                let mut counts = [0usize; 4];
                for &x in m.symbols() {
                    counts[x as usize] += 1;
                }
                let (mut emp, mut theo, mut ks) = (0.0, 0.0, 0.0f64);
                for (c, q) in counts.iter().zip(p.probs()) {
                    emp += *c as f64 / k as f64;
                    theo += q;
                    ks = ks.max((emp - theo).abs());
                }
                assert!(ks < 3.0 / (k as f64).sqrt(), "k={k} seed={seed} ks={ks}");
            }
        }
    }

    proptest! {
        #[test]
        fn byte_codec_round_trip(data in prop::collection::vec(any::<u8>(), 0..200), which in 0usize..4) {
            let order = [2usize, 4, 16, 256][which];
            let s = bytes_to_symbols(&data, order).unwrap();
            prop_assert_eq!(s.len(), data.len() * symbols_per_byte(order).unwrap());
            prop_assert_eq!(symbols_to_bytes(&s, order).unwrap(), data);
        }

        #[test]
        fn text_round_trip(syms in prop::collection::vec(0u16..16, 0..100)) {
            let s = SymbolString::new(16, syms).unwrap();
            prop_assert_eq!(parse_symbol_text(&format_symbol_text(&s), 16).unwrap(), s);
        }
    }
}
