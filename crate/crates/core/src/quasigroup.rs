//! Finite quasigroups stored as Latin-square operation tables, and their
//! six parastrophes.
//!
//! For a quasigroup operation `*` the parastrophes are
//!
//! | index | operation | defined by            |
//! |-------|-----------|-----------------------|
//! | 1     | `x * y`   | the base operation    |
//! | 2     | `x \ y`   | `z` with `x * z = y`  |
//! | 3     | `x / y`   | `z` with `z * y = x`  |
//! | 4     | `x · y`   | `y * x`               |
//! | 5     | `x // y`  | `z` with `z * x = y`  |
//! | 6     | `x \\ y`  | `z` with `y * z = x`  |
//!
//! Nothing here assumes the six tables are pairwise distinct; for some
//! quasigroups several of them coincide.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A 0-based alphabet symbol. The external (file/CLI) value is `symbol + 1`.
pub type Symbol = u16;

/// Largest order representable with [`Symbol`].
pub const MAX_ORDER: usize = Symbol::MAX as usize + 1;

pub(crate) fn check_order(order: usize) -> Result<()> {
    if order < 2 {
        return Err(Error::OrderTooSmall(order));
    }
    if order > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order,
            max: MAX_ORDER,
        });
    }
    Ok(())
}

/// A validated Latin square of order `a`, read as a binary operation:
/// the entry at row `x`, column `y` is `x * y`.
///
/// The table also carries its right-division table, so the unique `x` with
/// `u * x = v` is a single lookup.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OperationTable {
    order: usize,
    cells: Vec<Symbol>,
    right_div: Vec<Symbol>,
}

impl std::fmt::Debug for OperationTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<Vec<u32>> = self.external_rows();
        f.debug_struct("OperationTable")
            .field("order", &self.order)
            .field("rows", &rows)
            .finish()
    }
}

impl OperationTable {
    /// Validates a table given with the external 1-based symbol values.
    pub fn from_external_rows<R: AsRef<[u32]>>(rows: &[R]) -> Result<Self> {
        validate_table(rows, rows.len())
    }

    /// Validates a row-major table of 0-based symbols.
    pub fn from_cells(order: usize, cells: Vec<Symbol>) -> Result<Self> {
        check_order(order)?;
        if cells.len() != order * order {
            return Err(Error::RowCount {
                found: cells.len() / order,
                expected: order,
            });
        }
        for (i, &c) in cells.iter().enumerate() {
            if c as usize >= order {
                return Err(Error::EntryOutOfRange {
                    row: i / order + 1,
                    column: i % order + 1,
                    value: c as u64 + 1,
                    order,
                });
            }
        }
        check_latin(order, &cells)?;
        Ok(Self::build(order, cells))
    }

    fn build(order: usize, cells: Vec<Symbol>) -> Self {
        let mut right_div = vec![0; order * order];
        for u in 0..order {
            for x in 0..order {
                let v = cells[u * order + x] as usize;
                right_div[u * order + v] = x as Symbol;
            }
        }
        OperationTable {
            order,
            cells,
            right_div,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Row-major cells, 0-based.
    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }

    pub fn external_rows(&self) -> Vec<Vec<u32>> {
        self.cells
            .chunks(self.order)
            .map(|row| row.iter().map(|&c| c as u32 + 1).collect())
            .collect()
    }

    /// `x * y`, with range checking.
    pub fn apply(&self, x: Symbol, y: Symbol) -> Result<Symbol> {
        self.check_symbol(x, 1)?;
        self.check_symbol(y, 2)?;
        Ok(self.op(x, y))
    }

    /// The unique `x` with `u * x = v`, with range checking.
    pub fn solve_right_operand(&self, u: Symbol, v: Symbol) -> Result<Symbol> {
        self.check_symbol(u, 1)?;
        self.check_symbol(v, 2)?;
        Ok(self.rdiv(u, v))
    }

    #[inline]
    pub(crate) fn op(&self, x: Symbol, y: Symbol) -> Symbol {
        self.cells[x as usize * self.order + y as usize]
    }

    #[inline]
    pub(crate) fn rdiv(&self, u: Symbol, v: Symbol) -> Symbol {
        self.right_div[u as usize * self.order + v as usize]
    }

    fn check_symbol(&self, s: Symbol, position: usize) -> Result<()> {
        if (s as usize) < self.order {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange {
                position,
                value: s as u64 + 1,
                order: self.order,
            })
        }
    }

    pub fn transpose(&self) -> Self {
        let a = self.order;
        let mut cells = vec![0; a * a];
        for x in 0..a {
            for y in 0..a {
                cells[x * a + y] = self.cells[y * a + x];
            }
        }
        Self::build(a, cells)
    }
}

fn check_latin(order: usize, cells: &[Symbol]) -> Result<()> {
    let mut seen = vec![false; order];
    for row in 0..order {
        seen.fill(false);
        for col in 0..order {
            let s = cells[row * order + col] as usize;
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::DuplicateInRow {
                    row: row + 1,
                    symbol: s as u64 + 1,
                });
            }
        }
    }
    for col in 0..order {
        seen.fill(false);
        for row in 0..order {
            let s = cells[row * order + col] as usize;
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::DuplicateInColumn {
                    column: col + 1,
                    symbol: s as u64 + 1,
                });
            }
        }
    }
    Ok(())
}

/// Validates an `order × order` table of external (1-based) values and
/// returns it as an [`OperationTable`].
pub fn validate_table<R: AsRef<[u32]>>(raw: &[R], order: usize) -> Result<OperationTable> {
    check_order(order)?;
    if raw.len() != order {
        return Err(Error::RowCount {
            found: raw.len(),
            expected: order,
        });
    }
    let mut cells = Vec::with_capacity(order * order);
    for (r, row) in raw.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != order {
            return Err(Error::RowLength {
                row: r + 1,
                found: row.len(),
                expected: order,
            });
        }
        for (c, &v) in row.iter().enumerate() {
            if v == 0 || v as usize > order {
                return Err(Error::EntryOutOfRange {
                    row: r + 1,
                    column: c + 1,
                    value: v as u64,
                    order,
                });
            }
            cells.push((v - 1) as Symbol);
        }
    }
    check_latin(order, &cells)?;
    Ok(OperationTable::build(order, cells))
}

/// Index of one of the six parastrophes, `1..=6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Parastrophe(u8);

impl Parastrophe {
    pub const ALL: [Parastrophe; 6] = [
        Parastrophe(1),
        Parastrophe(2),
        Parastrophe(3),
        Parastrophe(4),
        Parastrophe(5),
        Parastrophe(6),
    ];

    pub fn new(index: usize) -> Result<Self> {
        if (1..=6).contains(&index) {
            Ok(Parastrophe(index as u8))
        } else {
            Err(Error::ParastropheOutOfRange(index))
        }
    }

    /// The selector used by PE for a block of planned length `d`: `(d mod 6) + 1`.
    pub fn for_block_length(d: usize) -> Self {
        Parastrophe((d % 6) as u8 + 1)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Builds the table of parastrophe `s` of `base`.
pub fn derive_parastrophe(base: &OperationTable, s: Parastrophe) -> OperationTable {
    let a = base.order;
    let mut cells = vec![0 as Symbol; a * a];
    // Each arm walks (p, q) over the base table, r = p * q, and writes the
    // parastrophe entry that this product determines.
    for p in 0..a {
        for q in 0..a {
            let r = base.cells[p * a + q] as usize;
            let (x, y, z) = match s.0 {
                1 => (p, q, r),
                // x * z = y
                2 => (p, r, q),
                // z * y = x
                3 => (r, q, p),
                // y * x = z
                4 => (q, p, r),
                // z * x = y
                5 => (q, r, p),
                // y * z = x
                6 => (r, p, q),
                _ => unreachable!("parastrophe index is validated on construction"),
            };
            cells[x * a + y] = z as Symbol;
        }
    }
    OperationTable::build(a, cells)
}

/// All six parastrophes of one quasigroup, precomputed (with their division
/// tables) for constant-time lookups during encryption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParastropheSet {
    tables: [OperationTable; 6],
}

impl ParastropheSet {
    pub fn new(base: OperationTable) -> Self {
        let tables = std::array::from_fn(|i| {
            if i == 0 {
                base.clone()
            } else {
                derive_parastrophe(&base, Parastrophe::ALL[i])
            }
        });
        ParastropheSet { tables }
    }

    pub fn base(&self) -> &OperationTable {
        &self.tables[0]
    }

    pub fn get(&self, s: Parastrophe) -> &OperationTable {
        &self.tables[s.index() - 1]
    }

    pub fn order(&self) -> usize {
        self.tables[0].order
    }
}

/// A deterministic pseudo-random quasigroup of order `order`.
///
/// The cyclic table `x + y mod a` is shuffled by independent uniform row,
/// column and symbol permutations drawn from ChaCha8 seeded with `seed`.
/// The result is uniform over the isotopes of the cyclic group, not over all
/// Latin squares of that order.
pub fn random_quasigroup(order: usize, seed: u64) -> Result<OperationTable> {
    check_order(order)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<usize> = (0..order).collect();
    let mut cols = rows.clone();
    let mut syms = rows.clone();
    rows.shuffle(&mut rng);
    cols.shuffle(&mut rng);
    syms.shuffle(&mut rng);
    let mut cells = vec![0 as Symbol; order * order];
    for x in 0..order {
        for y in 0..order {
            cells[rows[x] * order + cols[y]] = syms[(x + y) % order] as Symbol;
        }
    }
    Ok(OperationTable::build(order, cells))
}
