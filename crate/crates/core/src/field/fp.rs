//! Dense polynomials over F_p, constant term first, always trimmed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::ntheory::{inv_mod, mul_mod};

pub type FpPoly = Vec<u64>;

fn trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn reduce(coeffs: &[BigInt], p: u64) -> FpPoly {
    let bp = BigInt::from(p);
    trim(
        coeffs
            .iter()
            .map(|c| c.mod_floor(&bp).to_u64().expect("reduced"))
            .collect(),
    )
}

pub fn degree(a: &FpPoly) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn add(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

/// (quotient, remainder) of a by a nonzero b.
pub fn divrem(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let inv = inv_mod(b[db], p).expect("p prime");
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = mul_mod(r[k + db], inv, p);
        q[k] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mul_mod(c, bj, p)) % p;
            }
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn rem(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    divrem(a, b, p).1
}

pub fn monic(a: &FpPoly, p: u64) -> FpPoly {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = inv_mod(lc, p).expect("p prime");
            a.iter().map(|&c| mul_mod(c, inv, p)).collect()
        }
    }
}

pub fn gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let (mut x, mut y) = (trim(a.clone()), trim(b.clone()));
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

pub fn derivative(a: &FpPoly, p: u64) -> FpPoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| mul_mod(c, k as u64 % p, p))
            .collect(),
    )
}

pub fn mulmod(a: &FpPoly, b: &FpPoly, m: &FpPoly, p: u64) -> FpPoly {
    rem(&mul(a, b, p), m, p)
}

pub fn powmod(base: &FpPoly, mut e: u64, m: &FpPoly, p: u64) -> FpPoly {
    let mut acc: FpPoly = vec![1];
    acc = rem(&acc, m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

pub fn is_squarefree(f: &FpPoly, p: u64) -> bool {
    let d = derivative(f, p);
    if d.is_empty() {
        return false;
    }
    gcd(f, &d, p).len() == 1
}

/// Degrees of the irreducible factors of a squarefree monic f, sorted ascending.
pub fn factor_degrees(f: &FpPoly, p: u64) -> Vec<usize> {
    let mut out = Vec::new();
    let mut f = monic(f, p);
    let x: FpPoly = vec![0, 1];
    let mut h = rem(&x, &f, p);
    let mut d = 0;
    while degree(&f).unwrap_or(0) > 0 {
        d += 1;
        if 2 * d > degree(&f).unwrap() {
            out.push(degree(&f).unwrap());
            break;
        }
        h = powmod(&h, p, &f, p);
        let g = gcd(&sub(&h, &x, p), &f, p);
        let k = degree(&g).unwrap_or(0);
        if k > 0 {
            for _ in 0..k / d {
                out.push(d);
            }
            f = divrem(&f, &g, p).0;
            h = rem(&h, &f, p);
        }
    }
    out.sort_unstable();
    out
}

/// Squarefree part rad(f) = f / gcd(f, f'), valid when p exceeds deg f.
pub fn radical(f: &FpPoly, p: u64) -> FpPoly {
    let g = gcd(f, &derivative(f, p), p);
    monic(&divrem(f, &g, p).0, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn degree_patterns() {
        // x^3 - x - 1 is irreducible mod 2 and mod 3
        let f = b(&[-1, -1, 0, 1]);
        assert_eq!(factor_degrees(&reduce(&f, 2), 2), vec![3]);
        assert_eq!(factor_degrees(&reduce(&f, 3), 3), vec![3]);
        // mod 5 the root 2 splits off a linear factor
        assert_eq!(factor_degrees(&reduce(&f, 5), 5), vec![1, 2]);
        // x^4 - 1 mod 5 splits completely
        assert_eq!(factor_degrees(&reduce(&b(&[-1, 0, 0, 0, 1]), 5), 5), vec![1, 1, 1, 1]);
        // x^4 + 1 mod 3: two quadratics
        assert_eq!(factor_degrees(&reduce(&b(&[1, 0, 0, 0, 1]), 3), 3), vec![2, 2]);
    }

    #[test]
    fn gcd_and_radical() {
        let p = 7;
        let (a, c): (FpPoly, FpPoly) = (vec![1, 1], vec![2, 1]);
        let f = mul(&a, &mul(&a, &c, p), p);
        assert!(!is_squarefree(&f, p));
        assert_eq!(radical(&f, p), mul(&a, &c, p));
        assert_eq!(gcd(&f, &a, p), vec![1, 1]);
    }
}
