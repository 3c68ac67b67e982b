//! Class groups of imaginary quadratic fields via reduced binary quadratic forms.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ntheory;

/// Largest |D| accepted by [`class_group`].
pub const MAX_ABS_DISC: i64 = 10_000_000;

/// ax^2 + bxy + cy^2 with b^2 - 4ac = D < 0 and a > 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// (g, x, y) with x a + y b = g >= 0.
fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

impl QuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadraticForm { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// The principal form of discriminant d.
    pub fn identity(d: i64) -> Self {
        let b = d.rem_euclid(2);
        QuadraticForm::new(1, b, (b * b - d) / 4)
    }

    pub fn inverse(&self) -> Self {
        QuadraticForm::new(self.a, -self.b, self.c).reduce()
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    pub fn reduce(&self) -> Self {
        let d = self.disc() as i128;
        let (mut a, b0) = (self.a as i128, self.b as i128);
        let normalize = |a: i128, b: i128| -> (i128, i128) {
            // b into (-a, a]
            let k = (a - b).div_euclid(2 * a);
            let nb = b + 2 * a * k;
            (nb, (nb * nb - d) / (4 * a))
        };
        let (mut b, mut c) = normalize(a, b0);
        while a > c {
            a = c;
            b = -b;
            (b, c) = normalize(a, b);
        }
        if a == c && b < 0 {
            b = -b;
        }
        QuadraticForm::new(a as i64, b as i64, c as i64)
    }

    /// Dirichlet composition followed by reduction.
    pub fn compose(&self, other: &Self) -> Self {
        let d = self.disc() as i128;
        let (a1, b1) = (self.a as i128, self.b as i128);
        let (a2, b2) = (other.a as i128, other.b as i128);
        let s = (b1 + b2) / 2;
        // g = u a1 + v a2 + w s
        let (g1, x1, y1) = xgcd(a1, a2);
        let (g, x2, w) = xgcd(g1, s);
        let (u, v) = (x2 * x1, x2 * y1);
        let a3 = a1 / g * (a2 / g);
        let big = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + d) / 2) / g;
        let b3 = big.rem_euclid(2 * a3);
        let c3 = (b3 * b3 - d) / (4 * a3);
        QuadraticForm::new(a3 as i64, b3 as i64, c3 as i64).reduce()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = QuadraticForm::identity(self.disc());
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }
}

/// All reduced forms of discriminant d < 0, in (a, b) order.
pub fn reduced_forms(d: i64) -> Vec<QuadraticForm> {
    let mut out = Vec::new();
    let amax = ((-d as f64) / 3.0).sqrt().floor() as i64 + 1;
    for a in 1..=amax {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = QuadraticForm::new(a, b, c);
            if f.is_reduced() {
                out.push(f);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct FormClassGroup {
    pub d: i64,
    pub reduced_forms: Vec<QuadraticForm>,
    /// d_1 | d_2 | ... with product h; empty for the trivial group
    pub invariant_factors: Vec<u64>,
    pub h: u64,
}

fn check_disc(d: i64) -> Result<()> {
    if d >= 0 || !ntheory::is_fundamental_discriminant(d) {
        return Err(Error::pre(format!("{d} is not a negative fundamental discriminant")));
    }
    if -d > MAX_ABS_DISC {
        return Err(Error::pre(format!("|D| = {} exceeds {MAX_ABS_DISC}", -d)));
    }
    Ok(())
}

fn order_of(f: &QuadraticForm, h: u64, primes: &[u64]) -> u64 {
    let one = QuadraticForm::identity(f.disc());
    let mut ord = h;
    for &q in primes {
        while ord % q == 0 && f.pow(ord / q) == one {
            ord /= q;
        }
    }
    ord
}

/// Class group with its invariant factors, from element orders: the number of
/// elements killed by p^k fixes the p-primary part.
pub fn class_group(d: i64) -> Result<FormClassGroup> {
    check_disc(d)?;
    let forms = reduced_forms(d);
    let h = forms.len() as u64;
    let primes: Vec<u64> = ntheory::prime_divisors(h);
    let orders: Vec<u64> = forms.iter().map(|f| order_of(f, h, &primes)).collect();
    // p-primary parts as partitions (exponents, descending)
    let mut parts: Vec<(u64, Vec<u32>)> = Vec::new();
    for &p in &primes {
        let vp = |n: u64| {
            let mut n = n;
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            e
        };
        let emax = orders.iter().map(|&o| vp(o)).max().unwrap_or(0);
        // log_p #{x : x^(p^k) = 1} = sum_i min(k, e_i)
        let logs: Vec<u32> = (0..=emax)
            .map(|k| {
                let cnt = orders.iter().filter(|&&o| vp(o) <= k).count() as u64;
                let mut l = 0;
                let mut c = cnt;
                while c > 1 {
                    c /= p;
                    l += 1;
                }
                l
            })
            .collect();
        // number of cyclic factors of order >= p^k is logs[k] - logs[k-1]
        let mut exps = Vec::new();
        for k in 1..=emax as usize {
            let ge_k = logs[k] - logs[k - 1];
            let ge_next = if k < emax as usize { logs[k + 1] - logs[k] } else { 0 };
            for _ in 0..ge_k - ge_next {
                exps.push(k as u32);
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        parts.push((p, exps));
    }
    let rank = parts.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut factors = vec![1u64; rank];
    for (p, exps) in &parts {
        // the i-th largest factor takes the i-th largest p-power
        for (i, &e) in exps.iter().enumerate() {
            factors[rank - 1 - i] *= p.pow(e);
        }
    }
    let prod: u64 = factors.iter().product();
    if prod != h {
        return Err(Error::Invariant(format!(
            "invariant factors {factors:?} of D = {d} do not multiply to h = {h}"
        )));
    }
    Ok(FormClassGroup {
        d,
        reduced_forms: forms,
        invariant_factors: factors,
        h,
    })
}

impl FormClassGroup {
    pub fn index_of(&self) -> HashMap<QuadraticForm, usize> {
        self.reduced_forms.iter().enumerate().map(|(i, f)| (*f, i)).collect()
    }

    pub fn factors_string(&self) -> String {
        let v: Vec<String> = self.invariant_factors.iter().map(|d| d.to_string()).collect();
        format!("[{}]", v.join(","))
    }
}

/// prod gcd(m, d_i) over the invariant factors.
pub fn torsion_size(g: &FormClassGroup, m: u64) -> u64 {
    g.invariant_factors.iter().map(|&d| m.gcd(&d)).product()
}

/// |Cl_D[m]| by direct count of reduced forms with f^m = 1.
pub fn torsion_count(d: i64, m: u64) -> Result<u64> {
    check_disc(d)?;
    let one = QuadraticForm::identity(d);
    Ok(reduced_forms(d).iter().filter(|f| f.pow(m) == one).count() as u64)
}

/// Negative fundamental discriminants with |D| <= x, in order of |D|.
pub fn negative_fundamentals(x: i64) -> Vec<i64> {
    (3..=x)
        .map(|n| -n)
        .filter(|&d| ntheory::is_fundamental_discriminant(d))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct TorsionRow {
    pub d: i64,
    pub h: u64,
    pub invariant_factors: Vec<u64>,
    pub torsion: u64,
    pub ratio: f64,
}

/// Per-discriminant class number, structure and m-torsion for -x <= D < 0.
pub fn torsion_table(m: u64, x: i64) -> Result<Vec<TorsionRow>> {
    negative_fundamentals(x)
        .into_par_iter()
        .map(|d| {
            let g = class_group(d)?;
            let t = torsion_size(&g, m);
            Ok(TorsionRow {
                d,
                h: g.h,
                invariant_factors: g.invariant_factors,
                torsion: t,
                ratio: (t as f64).ln() / ((-d) as f64).ln(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TorsionExponent {
    pub m: u64,
    pub x: i64,
    pub max_ratio: f64,
    pub attained_at: i64,
    pub torsion: u64,
}

/// max over fundamental -x <= D < 0 of log|Cl_D[m]| / log|D|; ties go to the smallest |D|.
pub fn empirical_torsion_exponent(m: u64, x: i64) -> Result<TorsionExponent> {
    if x < 3 {
        return Err(Error::pre("the torsion exponent scan needs X >= 3"));
    }
    let rows: Vec<(i64, u64)> = negative_fundamentals(x)
        .into_par_iter()
        .map(|d| torsion_count(d, m).map(|t| (d, t)))
        .collect::<Result<_>>()?;
    let mut best = TorsionExponent {
        m,
        x,
        max_ratio: 0.0,
        attained_at: rows[0].0,
        torsion: 1,
    };
    for (d, t) in rows {
        let r = (t as f64).ln() / ((-d) as f64).ln();
        if r > best.max_ratio + 1e-15 {
            best = TorsionExponent {
                m,
                x,
                max_ratio: r,
                attained_at: d,
                torsion: t,
            };
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_groups() {
        let g = class_group(-23).unwrap();
        assert_eq!(g.h, 3);
        assert_eq!(g.invariant_factors, vec![3]);
        assert_eq!(
            g.reduced_forms,
            vec![
                QuadraticForm::new(1, 1, 6),
                QuadraticForm::new(2, -1, 3),
                QuadraticForm::new(2, 1, 3)
            ]
        );
        assert_eq!(class_group(-4).unwrap().h, 1);
        assert!(class_group(-4).unwrap().invariant_factors.is_empty());
        assert_eq!(class_group(-47).unwrap().h, 5);
        // Cl(-84) = C2 x C2
        assert_eq!(class_group(-84).unwrap().invariant_factors, vec![2, 2]);
        // Cl(-3299) = C3 x C9
        assert_eq!(class_group(-3299).unwrap().invariant_factors, vec![3, 9]);
        assert!(class_group(-12).is_err());
        assert!(class_group(5).is_err());
    }

    #[test]
    fn torsion() {
        let g = class_group(-23).unwrap();
        assert_eq!(torsion_size(&g, 3), 3);
        assert_eq!(torsion_size(&g, 2), 1);
        assert_eq!(torsion_size(&g, 1), 1);
        assert_eq!(torsion_count(-3299, 3).unwrap(), 9);
    }

    #[test]
    fn exponents() {
        let e = empirical_torsion_exponent(3, 23).unwrap();
        assert_eq!(e.attained_at, -23);
        assert!((e.max_ratio - 3f64.ln() / 23f64.ln()).abs() < 1e-12);
        let e = empirical_torsion_exponent(2, 20).unwrap();
        assert_eq!(e.attained_at, -15);
        assert!((e.max_ratio - 0.2560).abs() < 1e-4);
        let e = empirical_torsion_exponent(5, 47).unwrap();
        assert_eq!(e.attained_at, -47);
        assert!((e.max_ratio - 0.41801).abs() < 1e-5);
    }
}
