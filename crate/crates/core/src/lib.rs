//! Exact computations around Malle's conjecture for Frobenius-type groups.

pub mod bounds;
pub mod census;
pub mod error;
pub mod field;
pub mod malle;
pub mod ntheory;
pub mod perm;
pub mod quadclass;
pub mod structure;

pub use error::{Error, ErrorKind, Result};
pub use perm::{CycleType, ElementSet, GroupDescriptor, PermGroup, Permutation};

/// Exact rational exponent.
pub type Rational = num_rational::BigRational;

/// Shorthand for the exact rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
