//! Purely automated click-order attacks.
//!
//! An attack dictionary is the set of five-point sequences over an
//! [`Alphabet`](crate::Alphabet) that follow one click-order pattern:
//!
//! - **LINE**: a horizontal or vertical line. The coordinate along the line is
//!   monotone; each step may drift at most `tau` pixels across it.
//! - **DIAG**: both coordinates keep a consistent direction, each step
//!   allowed to break that direction by at most `tau` pixels.
//! - **LOD**: each point is within `lod_base + tau` pixels of its predecessor.
//!
//! Because alphabet centers tile the image exactly, a password is cracked by a
//! dictionary iff its snapped sequence is a dictionary entry.

mod crack;
mod dictionary;
mod predicates;
mod spec;

pub use crack::{crack_table, crack_test, merge_groups, CrackEntry, CrackReport, CrackTable};
pub use dictionary::{Dictionary, DictionaryIter};
pub use predicates::{is_diag, is_line, is_lod, tau_monotone};
pub use spec::{AttackFamily, AttackSpec, LodMetric, DEFAULT_LOD_BASE, STANDARD_TAUS};
