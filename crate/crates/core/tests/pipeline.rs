use qgcipher::codec::{bytes_to_symbols, parse_key, sample_message, serialize_key, symbols_to_bytes};
use qgcipher::experiment::{run_experiment, ExperimentConfig};
use qgcipher::stats::{chi_square_uniformity, count_ngrams, count_ngrams_with, LetterDistribution};
use qgcipher::{Execution, PeKey};

#[test]
fn key_file_to_bytes_and_back() {
    let key = parse_key(&serialize_key(&PeKey::random(16, 4, 99).unwrap())).unwrap();
    let data: Vec<u8> = (0..4096u32).map(|i| (i * 37 % 251) as u8).collect();
    let plain = bytes_to_symbols(&data, 16).unwrap();
    let cipher = key.encrypt(&plain).unwrap();
    assert_ne!(cipher, plain);
    assert_eq!(symbols_to_bytes(&key.decrypt(&cipher).unwrap(), 16).unwrap(), data);
}

#[test]
fn uniform_pairs_pass_at_one_percent() {
    // A calibrated test rejects a true null about 1% of the time.
    let p = LetterDistribution::uniform(4).unwrap();
    let passes = (1..=100)
        .filter(|&seed| {
            let s = sample_message(&p, 100_000, seed).unwrap();
            chi_square_uniformity(&count_ngrams(&s, 2, false).unwrap()).unwrap().passes(0.01)
        })
        .count();
    assert!(passes >= 95, "{passes}/100");
}

#[test]
fn counting_modes_agree() {
    let s = sample_message(&LetterDistribution::skewed4(), 300_000, 4).unwrap();
    for m in 1..=4 {
        for overlapping in [true, false] {
            assert_eq!(
                count_ngrams_with(&s, m, overlapping, Execution::Sequential).unwrap(),
                count_ngrams_with(&s, m, overlapping, Execution::Parallel).unwrap()
            );
        }
    }
}

#[test]
fn ciphertext_letters_flatten_skewed_source() {
    let r = run_experiment(&ExperimentConfig {
        length: 200_000,
        seed: 8,
        ..ExperimentConfig::default()
    })
    .unwrap();
    assert!(r.letter_frequencies.iter().all(|f| (f - 0.25).abs() < 0.015), "{:?}", r.letter_frequencies);
    let m4 = &r.tuples[3];
    assert!(m4.output_l1 < m4.input_l1);
}
