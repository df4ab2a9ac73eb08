//! Quasigroup string transformations for stream encryption.
//!
//! The crate implements the classic E-transformation over a quasigroup
//! (a Latin square used as a binary operation), its parastrophic variant PE
//! whose block lengths and operations are driven by the ciphertext itself,
//! exact inverses for both, and a statistical toolkit for checking how
//! uniform the produced ciphertext is.
//!
//! Symbols are stored 0-based internally (`0..order`). Every textual format
//! (key files, symbol text, CSV reports) uses the 1-based convention
//! `1..=order`, i.e. `external = internal + 1`.
//!
//! ```
//! use qgcipher::{OperationTable, PeKey, RoundParams, SymbolString};
//!
//! let table = OperationTable::from_external_rows(&[
//!     vec![1, 2, 4, 3],
//!     vec![3, 4, 2, 1],
//!     vec![4, 3, 1, 2],
//!     vec![2, 1, 3, 4],
//! ])
//! .unwrap();
//! let key = PeKey::new(table, vec![RoundParams::from_external(4, 3).unwrap()]).unwrap();
//! let message = SymbolString::from_external(4, &[1, 2, 3, 1, 2]).unwrap();
//!
//! let cipher = key.encrypt(&message).unwrap();
//! assert_eq!(cipher.to_external(), vec![3, 2, 3, 4, 2]);
//! assert_eq!(key.decrypt(&cipher).unwrap(), message);
//! ```

pub mod codec;
mod error;
mod exec;
pub mod experiment;
pub mod quasigroup;
pub mod stats;
pub mod transform;

pub use error::{Error, Result};
pub use exec::Execution;
pub use quasigroup::{
    derive_parastrophe, random_quasigroup, validate_table, OperationTable, Parastrophe,
    ParastropheSet, Symbol,
};
pub use transform::{
    e_chain, e_chain_inverse, e_inverse, e_transform, pe_decrypt, pe_encrypt, pe_round_decrypt, pe_round_encrypt,
    pe_trace_schedule, BlockRecord, PeKey, RoundParams, ScheduleSource, SymbolString,
};
