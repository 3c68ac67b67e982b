//! Benchmark fixtures shared by the criterion targets.

use malle_core::field::IntegerPolynomial;

/// Irreducible quartic used by the field benchmarks.
pub fn sample_quartic() -> IntegerPolynomial {
    IntegerPolynomial::from_descending(&[1, 7, -3, 11, 5]).expect("valid coefficients")
}
