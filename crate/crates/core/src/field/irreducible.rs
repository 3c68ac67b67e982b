//! Irreducibility over Q for small degree.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ntheory;

use super::fp;
use super::poly::IntegerPolynomial;
use super::roots::complex_roots;

pub const MAX_IRREDUCIBLE_DEGREE: usize = 8;

/// Degrees d in 1..n that some subset of `parts` sums to.
fn subset_sums(parts: &[usize], n: usize) -> Vec<bool> {
    let mut ok = vec![false; n + 1];
    ok[0] = true;
    for &d in parts {
        for s in (d..=n).rev() {
            if ok[s - d] {
                ok[s] = true;
            }
        }
    }
    ok
}

/// Remainder of a by the monic b over Z, or `None` if b does not divide a.
pub(crate) fn exact_quotient(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= db {
        return None;
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone();
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    r[..db].iter().all(Zero::is_zero).then_some(q)
}

/// Exact irreducibility of a monic integer polynomial of degree at most 8.
pub fn is_irreducible(f: &IntegerPolynomial) -> Result<bool> {
    if let Some(v) = f.irreducible_flag() {
        return Ok(v);
    }
    let n = f.degree();
    if n > MAX_IRREDUCIBLE_DEGREE {
        return Err(Error::pre(format!(
            "irreducibility is implemented up to degree {MAX_IRREDUCIBLE_DEGREE}, got {n}"
        )));
    }
    let v = decide(f)?;
    f.set_irreducible(v);
    Ok(v)
}

fn decide(f: &IntegerPolynomial) -> Result<bool> {
    let n = f.degree();
    if n == 1 {
        return Ok(true);
    }
    let disc = f.discriminant();
    if disc.is_zero() {
        return Ok(false);
    }
    // degrees a rational factor could have, intersected over good primes
    let mut possible = vec![true; n + 1];
    let mut used = 0;
    for p in ntheory::primes_up_to(2000) {
        if (&disc % BigInt::from(p)).is_zero() {
            continue;
        }
        let pattern = fp::factor_degrees(&fp::reduce(f.coeffs(), p), p);
        let sums = subset_sums(&pattern, n);
        for d in 1..n {
            possible[d] &= sums[d];
        }
        if !(1..n).any(|d| possible[d]) {
            return Ok(true);
        }
        used += 1;
        if used >= 25 {
            break;
        }
    }
    // a linear factor is a rational root, hence an integer dividing a_0
    if possible[1] {
        let c0 = f.coeff(0);
        if c0.is_zero() {
            return Ok(false);
        }
        if let Some(c) = c0.to_i64() {
            for d in divisors(c.unsigned_abs()) {
                for s in [d as i64, -(d as i64)] {
                    if f.eval(&BigInt::from(s)).is_zero() {
                        return Ok(false);
                    }
                }
            }
            possible[1] = false;
            possible[n - 1] = false;
        }
    }
    let roots = complex_roots(f);
    for d in 1..=n / 2 {
        if !possible[d] {
            continue;
        }
        let mut idx: Vec<usize> = (0..d).collect();
        loop {
            let mut prod = vec![num_complex::Complex64::new(1.0, 0.0)];
            for &i in &idx {
                let mut next = vec![num_complex::Complex64::new(0.0, 0.0); prod.len() + 1];
                for (k, c) in prod.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * roots[i];
                }
                prod = next;
            }
            if prod.iter().any(|c| c.norm() > 1e13) {
                return Err(Error::Inconclusive(
                    "factor coefficients exceed double precision".into(),
                ));
            }
            let near = prod
                .iter()
                .all(|c| c.im.abs() < 1e-6 && (c.re - c.re.round()).abs() < 1e-6);
            if near {
                let g: Vec<BigInt> = prod.iter().map(|c| BigInt::from(c.re.round() as i64)).collect();
                if exact_quotient(f.coeffs(), &g).is_some() {
                    return Ok(false);
                }
            }
            // next d-subset of 0..n
            let mut i = d;
            while i > 0 && idx[i - 1] == n - d + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..d {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Ok(true)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in ntheory::factor(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn irr(s: &str) -> bool {
        is_irreducible(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        assert!(irr("x^3 - x - 1"));
        assert!(!irr("x^4 - 1"));
        assert!(irr("x^6 + x^3 + 1"));
        assert!(irr("x^2 - 5"));
        assert!(!irr("x^2 - 4"));
        // x^4 + 1 is reducible mod every prime but irreducible over Q
        assert!(irr("x^4 + 1"));
        // (x^2+1)(x^2+x+1)
        assert!(!irr("x^4 + x^3 + 2x^2 + x + 1"));
        // (x^3 - 2)(x^3 - 3)
        assert!(!irr("x^6 - 5x^3 + 6"));
        assert!(!irr("x^3"));
        assert!(!irr("x^2 + 2x + 1"));
    }

    #[test]
    fn flag_is_recorded() {
        let f: IntegerPolynomial = "x^3 - 2".parse().unwrap();
        assert_eq!(f.irreducible_flag(), None);
        assert!(is_irreducible(&f).unwrap());
        assert_eq!(f.irreducible_flag(), Some(true));
    }

    #[test]
    fn degree_cap() {
        assert!(is_irreducible(&"x^9 + 1".parse().unwrap()).is_err());
    }
}
