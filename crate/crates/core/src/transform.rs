//! E- and PE-transformations and their inverses.
//!
//! A PE round splits the message into blocks. The first block has the key's
//! length `d1`; block `i + 1` has planned length `a·u + v`, where `u` and `v`
//! are the 1-based values of the last two ciphertext symbols of block `i`.
//! A block of planned length `d` is E-transformed with parastrophe
//! `(d mod 6) + 1`. The first block's leader is the key leader, and every
//! later block uses the last ciphertext symbol of the block before it. The
//! final block is truncated to whatever input remains.
//!
//! Block boundaries depend only on the key and on ciphertext symbols, so the
//! receiver can rebuild the schedule while decrypting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::quasigroup::{check_order, random_quasigroup, OperationTable, Parastrophe, ParastropheSet, Symbol};

/// A string over the alphabet `0..order` (0-based internally).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolString {
    order: usize,
    symbols: Vec<Symbol>,
}

impl SymbolString {
    pub fn new(order: usize, symbols: Vec<Symbol>) -> Result<Self> {
        check_order(order)?;
        if let Some(pos) = symbols.iter().position(|&s| s as usize >= order) {
            return Err(Error::SymbolOutOfRange {
                position: pos + 1,
                value: symbols[pos] as u64 + 1,
                order,
            });
        }
        Ok(SymbolString { order, symbols })
    }

    /// Builds a string from external 1-based values.
    pub fn from_external(order: usize, values: &[u32]) -> Result<Self> {
        check_order(order)?;
        let mut symbols = Vec::with_capacity(values.len());
        for (i, &v) in values.iter().enumerate() {
            if v == 0 || v as usize > order {
                return Err(Error::SymbolOutOfRange {
                    position: i + 1,
                    value: v as u64,
                    order,
                });
            }
            symbols.push((v - 1) as Symbol);
        }
        Ok(SymbolString { order, symbols })
    }

    pub(crate) fn from_trusted(order: usize, symbols: Vec<Symbol>) -> Self {
        debug_assert!(symbols.iter().all(|&s| (s as usize) < order));
        SymbolString { order, symbols }
    }

    pub fn empty(order: usize) -> Result<Self> {
        Self::new(order, Vec::new())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }

    pub fn to_external(&self) -> Vec<u32> {
        self.symbols.iter().map(|&s| s as u32 + 1).collect()
    }
}

/// Per-round secret parameters: the leader `l` and the first block length `d1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RoundParams {
    pub leader: Symbol,
    pub d1: usize,
}

impl RoundParams {
    /// `leader` is 0-based; it is range-checked when used with a key.
    pub fn new(leader: Symbol, d1: usize) -> Result<Self> {
        if d1 < 2 {
            return Err(Error::FirstBlockTooShort(d1));
        }
        Ok(RoundParams { leader, d1 })
    }

    /// Same as [`RoundParams::new`] with a 1-based leader.
    pub fn from_external(leader: u32, d1: usize) -> Result<Self> {
        if leader == 0 || leader > Symbol::MAX as u32 + 1 {
            return Err(Error::LeaderOutOfRange {
                value: leader as u64,
                order: Symbol::MAX as usize + 1,
            });
        }
        Self::new((leader - 1) as Symbol, d1)
    }

    fn check(&self, order: usize) -> Result<()> {
        if self.d1 < 2 {
            return Err(Error::FirstBlockTooShort(self.d1));
        }
        if self.leader as usize >= order {
            return Err(Error::LeaderOutOfRange {
                value: self.leader as u64 + 1,
                order,
            });
        }
        Ok(())
    }
}

/// One block of a PE round's schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockRecord {
    /// 1-based position of the block's first symbol.
    pub start: usize,
    pub planned_length: usize,
    /// `min(planned_length, remaining input)`.
    pub actual_length: usize,
    pub parastrophe: Parastrophe,
    pub leader: Symbol,
}

/// Which side of a PE round a schedule is reconstructed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleSource {
    /// The input is plaintext; the round is simulated to learn block lengths.
    Plaintext,
    /// The input is ciphertext; block lengths are read directly from it.
    Ciphertext,
}

/// A PE key: one quasigroup (with its parastrophes) shared by all rounds,
/// plus per-round leader and first block length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeKey {
    set: ParastropheSet,
    rounds: Vec<RoundParams>,
}

impl PeKey {
    pub fn new(quasigroup: OperationTable, rounds: Vec<RoundParams>) -> Result<Self> {
        if rounds.is_empty() {
            return Err(Error::NoRounds);
        }
        let order = quasigroup.order();
        for r in &rounds {
            r.check(order)?;
        }
        Ok(PeKey {
            set: ParastropheSet::new(quasigroup),
            rounds,
        })
    }

    /// Random key: [`random_quasigroup`], uniform leaders, and `d1` uniform in
    /// `2..=order²+order`, all drawn from ChaCha8 seeded with `seed`.
    pub fn random(order: usize, rounds: usize, seed: u64) -> Result<Self> {
        if rounds == 0 {
            return Err(Error::NoRounds);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = random_quasigroup(order, rng.random())?;
        let max_d1 = order * order + order;
        let params = (0..rounds)
            .map(|_| RoundParams {
                leader: rng.random_range(0..order) as Symbol,
                d1: rng.random_range(2..=max_d1),
            })
            .collect();
        Self::new(table, params)
    }

    pub fn quasigroup(&self) -> &OperationTable {
        self.set.base()
    }

    pub fn parastrophes(&self) -> &ParastropheSet {
        &self.set
    }

    pub fn rounds(&self) -> &[RoundParams] {
        &self.rounds
    }

    pub fn order(&self) -> usize {
        self.set.order()
    }

    pub fn encrypt(&self, message: &SymbolString) -> Result<SymbolString> {
        pe_encrypt(self, message)
    }

    pub fn decrypt(&self, cipher: &SymbolString) -> Result<SymbolString> {
        pe_decrypt(self, cipher)
    }

    /// Encrypts many independent messages, in order.
    pub fn encrypt_batch(
        &self,
        messages: &[SymbolString],
        exec: Execution,
    ) -> Result<Vec<SymbolString>> {
        exec.map_slice(messages, |m| pe_encrypt(self, m))
            .into_iter()
            .collect()
    }

    pub fn decrypt_batch(
        &self,
        ciphers: &[SymbolString],
        exec: Execution,
    ) -> Result<Vec<SymbolString>> {
        exec.map_slice(ciphers, |c| pe_decrypt(self, c))
            .into_iter()
            .collect()
    }
}

fn check_alphabet(expected: usize, s: &SymbolString) -> Result<()> {
    if s.order != expected {
        return Err(Error::AlphabetMismatch {
            expected,
            found: s.order,
        });
    }
    Ok(())
}

fn check_leader(leader: Symbol, order: usize) -> Result<()> {
    if leader as usize >= order {
        return Err(Error::LeaderOutOfRange {
            value: leader as u64 + 1,
            order,
        });
    }
    Ok(())
}

#[inline]
fn e_forward_into(op: &OperationTable, leader: Symbol, input: &[Symbol], out: &mut Vec<Symbol>) {
    let mut prev = leader;
    out.extend(input.iter().map(|&x| {
        prev = op.op(prev, x);
        prev
    }));
}

#[inline]
fn e_backward_into(op: &OperationTable, leader: Symbol, input: &[Symbol], out: &mut Vec<Symbol>) {
    let mut prev = leader;
    out.extend(input.iter().map(|&y| {
        let x = op.rdiv(prev, y);
        prev = y;
        x
    }));
}

/// `y1 = l * x1`, `yi = y(i-1) * xi`.
pub fn e_transform(op: &OperationTable, leader: Symbol, input: &SymbolString) -> Result<SymbolString> {
    check_alphabet(op.order(), input)?;
    check_leader(leader, op.order())?;
    let mut out = Vec::with_capacity(input.len());
    e_forward_into(op, leader, &input.symbols, &mut out);
    Ok(SymbolString::from_trusted(input.order, out))
}

/// Inverse of [`e_transform`]: `xi` is the unique solution of `y(i-1) * xi = yi`.
pub fn e_inverse(op: &OperationTable, leader: Symbol, output: &SymbolString) -> Result<SymbolString> {
    check_alphabet(op.order(), output)?;
    check_leader(leader, op.order())?;
    let mut out = Vec::with_capacity(output.len());
    e_backward_into(op, leader, &output.symbols, &mut out);
    Ok(SymbolString::from_trusted(output.order, out))
}

/// Applies `e_transform` once per `(operation, leader)` pair, first pair first.
pub fn e_chain(steps: &[(&OperationTable, Symbol)], input: &SymbolString) -> Result<SymbolString> {
    let (first, rest) = steps.split_first().ok_or(Error::EmptyChain)?;
    let mut current = e_transform(first.0, first.1, input)?;
    for &(op, leader) in rest {
        current = e_transform(op, leader, &current)?;
    }
    Ok(current)
}

/// Inverse of [`e_chain`] for the same step list.
pub fn e_chain_inverse(steps: &[(&OperationTable, Symbol)], output: &SymbolString) -> Result<SymbolString> {
    if steps.is_empty() {
        return Err(Error::EmptyChain);
    }
    let mut current = output.clone();
    for &(op, leader) in steps.iter().rev() {
        current = e_inverse(op, leader, &current)?;
    }
    Ok(current)
}

#[inline]
fn next_block_length(order: usize, u: Symbol, v: Symbol) -> usize {
    order * (u as usize + 1) + (v as usize + 1)
}

/// Encrypts one PE round from `input` into `out` (which is cleared first),
/// optionally recording the schedule.
pub(crate) fn round_forward(
    set: &ParastropheSet,
    params: RoundParams,
    input: &[Symbol],
    out: &mut Vec<Symbol>,
    mut schedule: Option<&mut Vec<BlockRecord>>,
) {
    let order = set.order();
    let k = input.len();
    out.clear();
    out.reserve(k);
    let mut start = 0;
    let mut planned = params.d1;
    let mut leader = params.leader;
    while start < k {
        let parastrophe = Parastrophe::for_block_length(planned);
        let len = planned.min(k - start);
        if let Some(s) = schedule.as_deref_mut() {
            s.push(BlockRecord {
                start: start + 1,
                planned_length: planned,
                actual_length: len,
                parastrophe,
                leader,
            });
        }
        e_forward_into(set.get(parastrophe), leader, &input[start..start + len], out);
        start += len;
        if start < k {
            // Only a final block can be shorter than 2.
            debug_assert!(len >= 2);
            let (u, v) = (out[start - 2], out[start - 1]);
            planned = next_block_length(order, u, v);
            leader = v;
        }
    }
}

pub(crate) fn round_backward(
    set: &ParastropheSet,
    params: RoundParams,
    cipher: &[Symbol],
    out: &mut Vec<Symbol>,
) {
    let order = set.order();
    let k = cipher.len();
    out.clear();
    out.reserve(k);
    let mut start = 0;
    let mut planned = params.d1;
    let mut leader = params.leader;
    while start < k {
        let len = planned.min(k - start);
        let table = set.get(Parastrophe::for_block_length(planned));
        e_backward_into(table, leader, &cipher[start..start + len], out);
        start += len;
        if start < k {
            let (u, v) = (cipher[start - 2], cipher[start - 1]);
            planned = next_block_length(order, u, v);
            leader = v;
        }
    }
}

fn check_round_input(set: &ParastropheSet, params: &RoundParams, s: &SymbolString) -> Result<()> {
    check_alphabet(set.order(), s)?;
    params.check(set.order())?;
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

/// One PE round. Returns the ciphertext and the block schedule.
pub fn pe_round_encrypt(
    set: &ParastropheSet,
    params: RoundParams,
    message: &SymbolString,
) -> Result<(SymbolString, Vec<BlockRecord>)> {
    check_round_input(set, &params, message)?;
    let mut out = Vec::new();
    let mut schedule = Vec::new();
    round_forward(set, params, &message.symbols, &mut out, Some(&mut schedule));
    Ok((SymbolString::from_trusted(message.order, out), schedule))
}

/// Inverts one PE round, rebuilding the schedule from the ciphertext.
pub fn pe_round_decrypt(set: &ParastropheSet, params: RoundParams, cipher: &SymbolString) -> Result<SymbolString> {
    check_round_input(set, &params, cipher)?;
    let mut out = Vec::new();
    round_backward(set, params, &cipher.symbols, &mut out);
    Ok(SymbolString::from_trusted(cipher.order, out))
}

/// The block schedule of one PE round, without producing output text.
pub fn pe_trace_schedule(
    set: &ParastropheSet,
    params: RoundParams,
    input: &SymbolString,
    source: ScheduleSource,
) -> Result<Vec<BlockRecord>> {
    check_round_input(set, &params, input)?;
    match source {
        ScheduleSource::Plaintext => {
            let mut scratch = Vec::new();
            let mut schedule = Vec::new();
            round_forward(set, params, &input.symbols, &mut scratch, Some(&mut schedule));
            Ok(schedule)
        }
        ScheduleSource::Ciphertext => {
            let order = set.order();
            let cipher = &input.symbols;
            let k = cipher.len();
            let mut schedule = Vec::new();
            let (mut start, mut planned, mut leader) = (0, params.d1, params.leader);
            while start < k {
                let len = planned.min(k - start);
                schedule.push(BlockRecord {
                    start: start + 1,
                    planned_length: planned,
                    actual_length: len,
                    parastrophe: Parastrophe::for_block_length(planned),
                    leader,
                });
                start += len;
                if start < k {
                    planned = next_block_length(order, cipher[start - 2], cipher[start - 1]);
                    leader = cipher[start - 1];
                }
            }
            Ok(schedule)
        }
    }
}

/// PE^(n): the key's rounds applied in order, round 1 first.
pub fn pe_encrypt(key: &PeKey, message: &SymbolString) -> Result<SymbolString> {
    check_alphabet(key.order(), message)?;
    if message.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut current = message.symbols.clone();
    let mut next = Vec::with_capacity(current.len());
    for &params in &key.rounds {
        round_forward(&key.set, params, &current, &mut next, None);
        std::mem::swap(&mut current, &mut next);
    }
    Ok(SymbolString::from_trusted(message.order, current))
}

/// Inverse of [`pe_encrypt`]: rounds are undone last round first.
pub fn pe_decrypt(key: &PeKey, cipher: &SymbolString) -> Result<SymbolString> {
    check_alphabet(key.order(), cipher)?;
    if cipher.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut current = cipher.symbols.clone();
    let mut next = Vec::with_capacity(current.len());
    for &params in key.rounds.iter().rev() {
        round_backward(&key.set, params, &current, &mut next);
        std::mem::swap(&mut current, &mut next);
    }
    Ok(SymbolString::from_trusted(cipher.order, current))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn eq4() -> OperationTable {
        OperationTable::from_external_rows(&[
            [1u32, 2, 4, 3],
            [3, 4, 2, 1],
            [4, 3, 1, 2],
            [2, 1, 3, 4],
        ])
        .unwrap()
    }

    fn s4(values: &[u32]) -> SymbolString {
        SymbolString::from_external(4, values).unwrap()
    }

    fn params(leader: u32, d1: usize) -> RoundParams {
        RoundParams::from_external(leader, d1).unwrap()
    }

    /// The single flat recurrence over the whole round, driving the operation
    /// choice per position rather than per block.
    fn flat_recurrence(set: &ParastropheSet, p: RoundParams, x: &[Symbol]) -> Vec<Symbol> {
        let a = set.order();
        let mut y: Vec<Symbol> = Vec::with_capacity(x.len());
        let mut q = 0; // end of the previous block
        let mut d = p.d1;
        for t in 0..x.len() {
            if t == q + d {
                q = t;
                d = a * (y[t - 2] as usize + 1) + (y[t - 1] as usize + 1);
            }
            let f = set.get(Parastrophe::for_block_length(d));
            let prev = if t == 0 { p.leader } else { y[t - 1] };
            y.push(f.op(prev, x[t]));
        }
        y
    }

    #[test]
    fn e_transform_examples() {
        let op = eq4();
        assert_eq!(e_transform(&op, 3, &s4(&[1, 2, 3])).unwrap().to_external(), vec![2, 4, 3]);
        assert!(e_transform(&op, 0, &s4(&[])).unwrap().is_empty());
        for l in 0..4 {
            for x in 0..4 {
                let one = SymbolString::new(4, vec![x]).unwrap();
                assert_eq!(e_transform(&op, l, &one).unwrap().symbols(), &[op.op(l, x)]);
            }
        }
        assert!(matches!(
            e_transform(&op, 4, &s4(&[1])),
            Err(Error::LeaderOutOfRange { .. })
        ));
        let wrong = SymbolString::from_external(2, &[1]).unwrap();
        assert!(matches!(e_transform(&op, 0, &wrong), Err(Error::AlphabetMismatch { .. })));
    }

    #[test]
    fn e_inverse_examples() {
        let op = eq4();
        assert_eq!(e_inverse(&op, 3, &s4(&[2, 4, 3])).unwrap().to_external(), vec![1, 2, 3]);
        assert!(e_inverse(&op, 2, &s4(&[])).unwrap().is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let msg = SymbolString::new(4, (0..1000).map(|_| rng.random_range(0..4)).collect()).unwrap();
        for l in 0..4 {
            assert_eq!(e_inverse(&op, l, &e_transform(&op, l, &msg).unwrap()).unwrap(), msg);
        }
    }

    #[test]
    fn e_chain_examples() {
        let op = eq4();
        let m = s4(&[1, 2, 3]);
        assert_eq!(e_chain(&[(&op, 3), (&op, 0)], &m).unwrap().to_external(), vec![2, 1, 4]);
        assert_eq!(e_chain(&[(&op, 2)], &m).unwrap(), e_transform(&op, 2, &m).unwrap());
        assert_eq!(e_chain(&[], &m).unwrap_err(), Error::EmptyChain);
        let other = random_quasigroup(4, 3).unwrap();
        let steps = [(&op, 1), (&other, 2), (&op, 3)];
        let c = e_chain(&steps, &m).unwrap();
        assert_eq!(e_chain_inverse(&steps, &c).unwrap(), m);
        let mismatched = random_quasigroup(5, 1).unwrap();
        assert!(matches!(
            e_chain(&[(&op, 0), (&mismatched, 0)], &m),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn pe_round_worked_example() {
        let set = ParastropheSet::new(eq4());
        let (c, schedule) = pe_round_encrypt(&set, params(4, 3), &s4(&[1, 2, 3, 1, 2])).unwrap();
        assert_eq!(c.to_external(), vec![3, 2, 3, 4, 2]);
        let ds: Vec<_> = schedule
            .iter()
            .map(|b| (b.planned_length, b.parastrophe.index(), b.leader + 1, b.actual_length, b.start))
            .collect();
        assert_eq!(ds, vec![(3, 4, 4, 3, 1), (11, 6, 3, 2, 4)]);
        assert_eq!(
            pe_round_decrypt(&set, params(4, 3), &c).unwrap().to_external(),
            vec![1, 2, 3, 1, 2]
        );
        let from_cipher = pe_trace_schedule(&set, params(4, 3), &c, ScheduleSource::Ciphertext).unwrap();
        assert_eq!(from_cipher, schedule);
        let from_plain =
            pe_trace_schedule(&set, params(4, 3), &s4(&[1, 2, 3, 1, 2]), ScheduleSource::Plaintext).unwrap();
        assert_eq!(from_plain, schedule);
    }

    #[test]
    fn pe_degenerate_and_error_cases() {
        let set = ParastropheSet::new(eq4());
        for l in 0..4 {
            for x in 0..4 {
                for d1 in [2, 3, 7, 100] {
                    let m = SymbolString::new(4, vec![x]).unwrap();
                    let (c, sched) = pe_round_encrypt(&set, RoundParams::new(l, d1).unwrap(), &m).unwrap();
                    let f = set.get(Parastrophe::for_block_length(d1));
                    assert_eq!(c.symbols(), &[f.op(l, x)]);
                    assert_eq!(sched.len(), 1);
                    assert_eq!(sched[0].actual_length, 1);
                }
            }
        }
        let short = s4(&[4, 4, 1]);
        let sched = pe_trace_schedule(&set, params(2, 10), &short, ScheduleSource::Plaintext).unwrap();
        assert_eq!(sched.len(), 1);
        assert_eq!(sched[0].actual_length, 3);

        assert_eq!(
            pe_round_encrypt(&set, params(1, 3), &s4(&[])).unwrap_err(),
            Error::EmptyInput
        );
        assert_eq!(RoundParams::new(0, 1).unwrap_err(), Error::FirstBlockTooShort(1));
        assert!(matches!(
            pe_round_encrypt(&set, RoundParams { leader: 9, d1: 3 }, &short),
            Err(Error::LeaderOutOfRange { .. })
        ));
        assert_eq!(PeKey::new(eq4(), vec![]).unwrap_err(), Error::NoRounds);
        let key = PeKey::new(eq4(), vec![params(4, 3)]).unwrap();
        assert_eq!(key.decrypt(&s4(&[])).unwrap_err(), Error::EmptyInput);
    }

    #[test]
    fn single_round_key_matches_round_function() {
        let set = ParastropheSet::new(eq4());
        let key = PeKey::new(eq4(), vec![params(4, 3)]).unwrap();
        let m = s4(&[1, 1, 1, 2, 4, 3, 3, 1, 2, 2, 4, 4, 1, 1, 1, 1, 1, 1, 1, 3]);
        let (c, _) = pe_round_encrypt(&set, params(4, 3), &m).unwrap();
        assert_eq!(key.encrypt(&m).unwrap(), c);
        assert_eq!(key.decrypt(&c).unwrap(), pe_round_decrypt(&set, params(4, 3), &c).unwrap());
    }

    #[test]
    fn exhaustive_round_trip_small_messages() {
        let key = PeKey::new(eq4(), vec![params(4, 3), params(2, 2)]).unwrap();
        for k in 1..=8u32 {
            for idx in 0..4u32.pow(k) {
                let syms: Vec<Symbol> = (0..k).map(|i| ((idx >> (2 * i)) & 3) as Symbol).collect();
                let m = SymbolString::new(4, syms).unwrap();
                let c = key.encrypt(&m).unwrap();
                assert_eq!(c.len(), m.len());
                assert_eq!(key.decrypt(&c).unwrap(), m);
            }
        }
    }

    #[test]
    fn random_key_is_deterministic_and_in_range() {
        let a = PeKey::random(16, 4, 7).unwrap();
        assert_eq!(a, PeKey::random(16, 4, 7).unwrap());
        assert_eq!(a.rounds().len(), 4);
        for r in a.rounds() {
            assert!((2..=16 * 16 + 16).contains(&r.d1));
            assert!((r.leader as usize) < 16);
        }
        assert_eq!(PeKey::random(4, 0, 1).unwrap_err(), Error::NoRounds);
    }

    #[test]
    fn batch_matches_single() {
        let key = PeKey::random(4, 3, 11).unwrap();
        let msgs: Vec<_> = (0..20)
            .map(|i| SymbolString::new(4, (0..50 + i).map(|j| ((j * 7 + i) % 4) as Symbol).collect()).unwrap())
            .collect();
        let seq = key.encrypt_batch(&msgs, Execution::Sequential).unwrap();
        let par = key.encrypt_batch(&msgs, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        assert_eq!(key.decrypt_batch(&par, Execution::default()).unwrap(), msgs);
    }

    fn message_strategy() -> impl Strategy<Value = (usize, Vec<u16>)> {
        prop::sample::select(vec![2usize, 3, 4, 7, 16]).prop_flat_map(|a| {
            (Just(a), prop::collection::vec(0..a as u16, 1..400))
        })
    }

    proptest! {
        #[test]
        fn pe_round_trip_and_length((a, syms) in message_strategy(), seed in any::<u64>(), rounds in 1usize..5) {
            let key = PeKey::random(a, rounds, seed).unwrap();
            let m = SymbolString::new(a, syms).unwrap();
            let c = key.encrypt(&m).unwrap();
            prop_assert_eq!(c.len(), m.len());
            prop_assert_eq!(key.decrypt(&c).unwrap(), m);
        }

        #[test]
        fn flat_recurrence_matches_blockwise((a, syms) in message_strategy(), seed in any::<u64>()) {
            let key = PeKey::random(a, 1, seed).unwrap();
            let p = key.rounds()[0];
            let m = SymbolString::new(a, syms).unwrap();
            let (c, _) = pe_round_encrypt(key.parastrophes(), p, &m).unwrap();
            prop_assert_eq!(c.symbols(), &flat_recurrence(key.parastrophes(), p, m.symbols())[..]);
        }

        #[test]
        fn schedule_invariants((a, syms) in message_strategy(), seed in any::<u64>()) {
            let key = PeKey::random(a, 1, seed).unwrap();
            let p = key.rounds()[0];
            let m = SymbolString::new(a, syms).unwrap();
            let (c, sched) = pe_round_encrypt(key.parastrophes(), p, &m).unwrap();
            let total: usize = sched.iter().map(|b| b.actual_length).sum();
            prop_assert_eq!(total, m.len());
            prop_assert_eq!(sched[0].planned_length, p.d1);
            prop_assert_eq!(sched[0].leader, p.leader);
            for (i, b) in sched.iter().enumerate() {
                prop_assert!(b.actual_length >= 1);
                prop_assert_eq!(b.parastrophe, Parastrophe::for_block_length(b.planned_length));
                if i > 0 {
                    let prev_end = b.start - 1;
                    let (u, v) = (c.symbols()[prev_end - 2] as usize + 1, c.symbols()[prev_end - 1] as usize + 1);
                    prop_assert!((a + 1..=a * a + a).contains(&b.planned_length));
                    prop_assert_eq!(b.planned_length, a * u + v);
                    prop_assert_eq!(b.leader as usize + 1, v);
                }
                if i + 1 < sched.len() {
                    prop_assert_eq!(b.actual_length, b.planned_length);
                }
            }
            let traced = pe_trace_schedule(key.parastrophes(), p, &c, ScheduleSource::Ciphertext).unwrap();
            prop_assert_eq!(traced, sched);
        }

        #[test]
        fn prefix_streamability((a, syms) in message_strategy(), seed in any::<u64>(), cut in 1usize..400) {
            let key = PeKey::random(a, 1, seed).unwrap();
            let p = key.rounds()[0];
            let m = SymbolString::new(a, syms.clone()).unwrap();
            let (c, sched) = pe_round_encrypt(key.parastrophes(), p, &m).unwrap();
            // Every block boundary q_i: the first q_i outputs depend only on the first q_i inputs.
            for b in &sched {
                let q = b.start - 1 + b.actual_length;
                let prefix = SymbolString::new(a, syms[..q].to_vec()).unwrap();
                let (cp, _) = pe_round_encrypt(key.parastrophes(), p, &prefix).unwrap();
                prop_assert_eq!(cp.symbols(), &c.symbols()[..q]);
            }
            // And in fact any prefix, since each output only looks backwards.
            let cut = cut.min(syms.len());
            let prefix = SymbolString::new(a, syms[..cut].to_vec()).unwrap();
            let (cp, _) = pe_round_encrypt(key.parastrophes(), p, &prefix).unwrap();
            prop_assert_eq!(cp.symbols(), &c.symbols()[..cut]);
        }
    }
}
