//! Galois group identification for irreducible polynomials of degree 2 to 6.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ntheory::{self, is_square_big};
use crate::perm::{label, labels, transitive_group, CycleType, TransitiveLabel};

use super::fp;
use super::irreducible::is_irreducible;
use super::poly::IntegerPolynomial;
use super::roots::complex_roots;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Confidence {
    Certified,
    Sampled,
}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Confidence::Certified => "certified",
            Confidence::Sampled => "sampled",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisLabel {
    pub label: TransitiveLabel,
    pub confidence: Confidence,
}

impl fmt::Display for GaloisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.label.name, self.confidence)
    }
}

/// Number of good primes whose Frobenius cycle types are sampled.
pub const SAMPLE_PRIMES: usize = 200;
/// Samples are drawn from this many of the smallest good primes.
const PRIME_POOL: usize = 1000;

fn certified(degree: usize, name: &str) -> GaloisLabel {
    GaloisLabel {
        label: crate::perm::label_by_name(degree, name).expect("library name"),
        confidence: Confidence::Certified,
    }
}

fn integer_roots(coeffs_asc: &[BigInt]) -> Vec<BigInt> {
    let f = IntegerPolynomial::from_ascending(coeffs_asc.to_vec()).expect("monic");
    let mut out: Vec<BigInt> = Vec::new();
    for z in complex_roots(&f) {
        if z.im.abs() > 0.5 {
            continue;
        }
        let base = z.re.round();
        for delta in [-1.0, 0.0, 1.0] {
            let cand = BigInt::from((base + delta) as i64);
            if f.eval(&cand).is_zero() && !out.contains(&cand) {
                out.push(cand);
            }
        }
    }
    out.sort();
    out
}

/// Identifies Gal(f) for irreducible f of degree 2..6; degrees up to 4 are certified.
pub fn galois_label(f: &IntegerPolynomial, seed: u64) -> Result<GaloisLabel> {
    let n = f.degree();
    if !(2..=6).contains(&n) {
        return Err(Error::pre(format!(
            "Galois labels are implemented for degrees 2 to 6, got {n}"
        )));
    }
    if !is_irreducible(f)? {
        return Err(Error::pre(format!("{} is not irreducible", f.to_expr())));
    }
    let disc = f.discriminant();
    match n {
        2 => Ok(certified(2, "C2")),
        3 => Ok(certified(3, if is_square_big(&disc) { "C3" } else { "S3" })),
        4 => Ok(quartic_label(f, &disc)),
        _ => sample_label(f, seed),
    }
}

fn quartic_label(f: &IntegerPolynomial, disc: &BigInt) -> GaloisLabel {
    let (a, b, c, d) = (f.coeff(3), f.coeff(2), f.coeff(1), f.coeff(0));
    let four = BigInt::from(4);
    // x^3 - b x^2 + (ac - 4d) x - (a^2 d - 4 b d + c^2)
    let resolvent = vec![
        -(a * a * d - &four * b * d + c * c),
        a * c - &four * d,
        -b.clone(),
        BigInt::from(1),
    ];
    let roots = integer_roots(&resolvent);
    let square = is_square_big(disc);
    match roots.len() {
        0 => certified(4, if square { "A4" } else { "S4" }),
        1 => {
            let r = &roots[0];
            let splits = |delta: BigInt| delta.is_zero() || is_square_big(&delta) || is_square_big(&(delta * disc));
            let d1 = r * r - &four * d;
            let d2 = a * a - &four * (b - r);
            certified(4, if splits(d1) && splits(d2) { "C4" } else { "D4" })
        }
        _ => certified(4, "V4"),
    }
}

type Distribution = BTreeMap<CycleType, f64>;

fn distributions(degree: usize) -> &'static Vec<(TransitiveLabel, Distribution, bool)> {
    static CACHE: OnceLock<Vec<Vec<(TransitiveLabel, Distribution, bool)>>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        (0..=6)
            .map(|n| {
                labels(n)
                    .into_iter()
                    .map(|l| {
                        let g = transitive_group(l.degree, l.number).expect("library group");
                        let mut dist = Distribution::new();
                        for e in g.elements() {
                            *dist.entry(e.cycle_type()).or_insert(0.0) += 1.0;
                        }
                        let total = g.order() as f64;
                        dist.values_mut().for_each(|v| *v /= total);
                        let even = g.elements().iter().all(|e| e.is_even());
                        (l, dist, even)
                    })
                    .collect()
            })
            .collect()
    })[degree]
}

/// Frobenius cycle types at `SAMPLE_PRIMES` good primes chosen by `seed`.
pub fn frobenius_cycle_types(f: &IntegerPolynomial, seed: u64) -> Result<BTreeMap<CycleType, usize>> {
    let disc = f.discriminant();
    let mut pool: Vec<u64> = Vec::with_capacity(PRIME_POOL);
    for p in ntheory::primes_up_to(200_000) {
        if !(&disc % BigInt::from(p)).is_zero() {
            pool.push(p);
            if pool.len() == PRIME_POOL {
                break;
            }
        }
    }
    if pool.len() < SAMPLE_PRIMES {
        return Err(Error::Inconclusive(
            "too few primes of good reduction in the sampling window".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen: Vec<u64> = pool.choose_multiple(&mut rng, SAMPLE_PRIMES).copied().collect();
    let mut counts = BTreeMap::new();
    for p in chosen {
        let ct = CycleType::new(fp::factor_degrees(&fp::reduce(f.coeffs(), p), p));
        *counts.entry(ct).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Maximum-likelihood match of sampled cycle types against the transitive groups,
/// restricted by the parity of the discriminant.
pub fn sample_label(f: &IntegerPolynomial, seed: u64) -> Result<GaloisLabel> {
    let n = f.degree();
    let counts = frobenius_cycle_types(f, seed)?;
    let square = is_square_big(&f.discriminant());
    let mut best: Option<(f64, TransitiveLabel)> = None;
    for (lbl, dist, even) in distributions(n) {
        if *even != square {
            continue;
        }
        let mut ll = 0.0;
        let mut possible = true;
        for (ct, &k) in &counts {
            match dist.get(ct) {
                Some(&q) => ll += k as f64 * q.ln(),
                None => {
                    possible = false;
                    break;
                }
            }
        }
        if possible && best.as_ref().is_none_or(|(b, _)| ll > *b) {
            best = Some((ll, *lbl));
        }
    }
    let (_, lbl) = best.ok_or_else(|| {
        Error::Inconclusive(format!(
            "no transitive group of degree {n} fits the sampled cycle types"
        ))
    })?;
    Ok(GaloisLabel {
        label: lbl,
        confidence: Confidence::Sampled,
    })
}

/// The label named `name` in degree `n`, e.g. for CLI filters.
pub fn parse_label(n: usize, name: &str) -> Option<TransitiveLabel> {
    crate::perm::label_by_name(n, name).or_else(|| {
        name.strip_prefix(&format!("{n}T"))
            .and_then(|k| k.parse().ok())
            .and_then(|k| label(n, k))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(s: &str) -> (&'static str, Confidence) {
        let l = galois_label(&s.parse().unwrap(), 1).unwrap();
        (l.label.name, l.confidence)
    }

    #[test]
    fn certified_small_degrees() {
        assert_eq!(name("x^3 - x - 1"), ("S3", Confidence::Certified));
        assert_eq!(name("x^3 - 3x - 1"), ("C3", Confidence::Certified));
        assert_eq!(name("x^4 + x^3 + x^2 + x + 1"), ("C4", Confidence::Certified));
        assert_eq!(name("x^4 + 1").0, "V4");
        assert_eq!(name("x^4 - 2").0, "D4");
        assert_eq!(name("x^4 + 8x + 12").0, "A4");
        assert_eq!(name("x^4 - x - 1").0, "S4");
        assert_eq!(name("x^2 + 1").0, "C2");
    }

    #[test]
    fn sampled_degrees() {
        assert_eq!(name("x^5 - 2"), ("F20", Confidence::Sampled));
        assert_eq!(name("x^5 - x - 1").0, "S5");
        assert_eq!(name("x^5 + x^4 - 4x^3 - 3x^2 + 3x + 1").0, "C5");
        assert_eq!(name("x^6 + x^3 + 1").0, "C6");
        assert_eq!(name("x^6 - 2").0, "D6");
        assert_eq!(name("x^6 + 108").0, "S3(6)");
    }

    #[test]
    fn sampling_agrees_with_cubic_certificate() {
        for s in [
            "x^3 - x - 1",
            "x^3 - 3x - 1",
            "x^3 - 2",
            "x^3 + x^2 - 2x - 1",
            "x^3 - 4x^2 + 3x - 1",
        ] {
            let f: IntegerPolynomial = s.parse().unwrap();
            let c = galois_label(&f, 0).unwrap();
            let s = sample_label(&f, 7).unwrap();
            assert_eq!(c.label, s.label);
        }
    }
}
