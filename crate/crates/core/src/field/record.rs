//! Field records: canonical polynomial plus the invariants the census reports.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ntheory::is_square_big;
use crate::perm::TransitiveLabel;

use super::canonical::canonical_generator;
use super::galois::{galois_label, Confidence};
use super::order::{maximal_order_disc, MaximalOrder};
use super::poly::IntegerPolynomial;
use super::roots::real_root_count;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberFieldRecord {
    pub defining_poly: IntegerPolynomial,
    pub degree: usize,
    pub field_disc: BigInt,
    pub poly_disc: BigInt,
    pub index_squared: BigInt,
    pub galois_label: TransitiveLabel,
    pub confidence: Confidence,
    /// (real embeddings, complex pairs)
    pub signature: (usize, usize),
}

#[derive(Serialize)]
struct RecordJson<'a> {
    degree: usize,
    field_disc: String,
    poly_disc: String,
    index_squared: String,
    galois_label: &'a str,
    canonical_poly: String,
    signature: [usize; 2],
    confidence: Confidence,
}

/// Minkowski's lower bound for |d_K| in degree n with r2 complex pairs.
pub fn minkowski_lower_bound(n: usize, r2: usize) -> f64 {
    let nf = n as f64;
    let log_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
    let log = 2.0 * r2 as f64 * (std::f64::consts::PI / 4.0).ln() + 2.0 * (nf * nf.ln() - log_fact);
    log.exp()
}

impl NumberFieldRecord {
    /// Canonicalizes f, then computes every invariant for the canonical polynomial.
    pub fn from_poly(f: &IntegerPolynomial, seed: u64) -> Result<Self> {
        let g = canonical_generator(f)?;
        Self::from_canonical(&g, seed)
    }

    /// Builds the record for a polynomial already known to be canonical.
    pub fn from_canonical(g: &IntegerPolynomial, seed: u64) -> Result<Self> {
        let mo = maximal_order_disc(g)?;
        Self::assemble(g, mo, seed)
    }

    pub(crate) fn assemble(g: &IntegerPolynomial, mo: MaximalOrder, seed: u64) -> Result<Self> {
        let n = g.degree();
        let r1 = real_root_count(g);
        let r2 = (n - r1) / 2;
        let gl = if n == 1 {
            (crate::perm::label(1, 1).expect("trivial group"), Confidence::Certified)
        } else {
            let l = galois_label(g, seed)?;
            (l.label, l.confidence)
        };
        let rec = NumberFieldRecord {
            defining_poly: g.clone(),
            degree: n,
            index_squared: &mo.index * &mo.index,
            field_disc: mo.field_disc,
            poly_disc: mo.poly_disc,
            galois_label: gl.0,
            confidence: gl.1,
            signature: (r1, r2),
        };
        rec.check()?;
        Ok(rec)
    }

    /// Record invariants: divisibility with square quotient, sign and Minkowski.
    pub fn check(&self) -> Result<()> {
        let (q, r) = self.poly_disc.div_rem(&self.field_disc);
        if !r.is_zero() || q != self.index_squared || !is_square_big(&q) {
            return Err(Error::Invariant(format!(
                "poly_disc {} is not field_disc {} times a square",
                self.poly_disc, self.field_disc
            )));
        }
        if self.field_disc.is_negative() != (self.signature.1 % 2 == 1) {
            return Err(Error::Invariant(format!(
                "field_disc {} has the wrong sign for signature {:?}",
                self.field_disc, self.signature
            )));
        }
        if self.degree > 1 {
            let abs = self.field_disc.abs().to_f64().unwrap_or(f64::INFINITY);
            if abs <= 1.0 || abs < minkowski_lower_bound(self.degree, self.signature.1) * (1.0 - 1e-9) {
                return Err(Error::Invariant(format!(
                    "|field_disc| = {abs} is below the Minkowski bound"
                )));
            }
        }
        Ok(())
    }

    pub fn abs_disc(&self) -> BigInt {
        self.field_disc.abs()
    }

    pub fn signature_string(&self) -> String {
        format!("{},{}", self.signature.0, self.signature.1)
    }

    pub const CSV_HEADER: [&'static str; 6] = [
        "degree",
        "field_disc",
        "galois_label",
        "canonical_poly",
        "signature",
        "confidence",
    ];

    pub fn csv_fields(&self) -> [String; 6] {
        [
            self.degree.to_string(),
            self.field_disc.to_string(),
            self.galois_label.name.to_string(),
            self.defining_poly.to_string(),
            self.signature_string(),
            self.confidence.to_string(),
        ]
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RecordJson {
            degree: self.degree,
            field_disc: self.field_disc.to_string(),
            poly_disc: self.poly_disc.to_string(),
            index_squared: self.index_squared.to_string(),
            galois_label: self.galois_label.name,
            canonical_poly: self.defining_poly.to_string(),
            signature: [self.signature.0, self.signature.1],
            confidence: self.confidence,
        })
        .expect("plain data")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_record() {
        let r = NumberFieldRecord::from_poly(&"x^3 - x - 1".parse().unwrap(), 0).unwrap();
        assert_eq!(r.field_disc, BigInt::from(-23));
        assert_eq!(r.signature, (1, 1));
        assert_eq!(r.galois_label.name, "S3");
        assert_eq!(r.csv_fields()[4], "1,1");
    }

    #[test]
    fn golden_field() {
        let r = NumberFieldRecord::from_poly(&"x^2 - 5".parse().unwrap(), 0).unwrap();
        assert_eq!(r.defining_poly.to_string(), "[1,-1,-1]");
        assert_eq!(r.field_disc, BigInt::from(5));
        assert_eq!(r.index_squared, BigInt::from(1));
    }

    #[test]
    fn minkowski_values() {
        // quadratic imaginary: (pi/4)^2 * 4 = pi^2/4 ~ 2.47
        assert!((minkowski_lower_bound(2, 1) - std::f64::consts::PI.powi(2) / 4.0).abs() < 1e-12);
        assert!(minkowski_lower_bound(3, 1) < 23.0);
    }
}
