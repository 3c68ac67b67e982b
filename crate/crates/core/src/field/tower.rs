//! S3 towers K / M / N for cubic fields K: the quadratic resolvent M and the
//! Galois closure N, with the discriminant relations between them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ntheory;
use crate::perm::named_group;
use crate::structure::GroupAnalysis;

use super::canonical::canonical_generator_from;
use super::galois::galois_label;
use super::order::{maximal_order_at, valuation};
use super::poly::{resultant, IntegerPolynomial};
use super::record::NumberFieldRecord;

/// Lagrange interpolation through (x_i, y_i) with integer nodes; returns
/// ascending coefficients, failing if any is not integral.
fn interpolate(xs: &[i64], ys: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = xs.len();
    let mut coeffs = vec![BigRational::zero(); n];
    for i in 0..n {
        // basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigInt::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * BigRational::from_integer(BigInt::from(xs[j]));
            }
            basis = next;
            denom *= BigInt::from(xs[i] - xs[j]);
        }
        let scale = BigRational::new(ys[i].clone(), denom);
        for (k, c) in basis.iter().enumerate() {
            coeffs[k] += c * &scale;
        }
    }
    coeffs
        .into_iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}

/// prod_{i != j} (x - (theta_i - theta_j)) via Res_y(f(y), f(x + y)) / x^3.
fn difference_sextic(f: &IntegerPolynomial) -> Option<IntegerPolynomial> {
    let xs: Vec<i64> = (1..=7).collect();
    let ys: Vec<BigInt> = xs
        .iter()
        .map(|&k| {
            let r = resultant(f.coeffs(), f.shift(&BigInt::from(k)).coeffs());
            r / BigInt::from(k * k * k)
        })
        .collect();
    IntegerPolynomial::from_ascending(interpolate(&xs, &ys)?).ok()
}

/// prod_{i != j} (x - theta_i - 2 theta_j) via Res_y(f(y), 8 f((x - y)/2)) / (27 f(x/3)).
fn sum_sextic(f: &IntegerPolynomial) -> Option<IntegerPolynomial> {
    let c = f.coeffs();
    let xs: Vec<i64> = (1..=10).collect();
    let ys: Vec<BigInt> = xs
        .iter()
        .map(|&k| {
            // 8 f((k - y)/2) as a polynomial in y
            let mut g = vec![BigInt::zero(); 4];
            let lin = [BigInt::from(k), BigInt::from(-1)];
            let mut pw = vec![BigInt::one()];
            for (d, cd) in c.iter().enumerate() {
                let w = BigInt::from(1i64 << (3 - d));
                for (e, pe) in pw.iter().enumerate() {
                    g[e] += cd * pe * &w;
                }
                let mut next = vec![BigInt::zero(); pw.len() + 1];
                for (e, pe) in pw.iter().enumerate() {
                    next[e] += pe * &lin[0];
                    next[e + 1] += pe * &lin[1];
                }
                pw = next;
            }
            resultant(c, &g)
        })
        .collect();
    let nine = interpolate(&xs, &ys)?;
    // 27 f(x/3) = x^3 + 3 a2 x^2 + 9 a1 x + 27 a0
    let div: Vec<BigInt> = (0..4).map(|d| &c[d] * BigInt::from(3i64.pow(3 - d as u32))).collect();
    let q = super::irreducible::exact_quotient(&nine, &div)?;
    IntegerPolynomial::from_ascending(q).ok()
}

/// A degree-6 polynomial defining the Galois closure of an S3 cubic.
pub fn splitting_sextic(f: &IntegerPolynomial) -> Result<IntegerPolynomial> {
    if f.degree() != 3 {
        return Err(Error::pre("splitting_sextic needs a cubic"));
    }
    if galois_label(f, 0)?.label.name != "S3" {
        return Err(Error::pre(format!("{} does not have Galois group S3", f.to_expr())));
    }
    for s in [difference_sextic(f), sum_sextic(f)].into_iter().flatten() {
        if !s.discriminant().is_zero() && super::irreducible::is_irreducible(&s)? {
            return Ok(s);
        }
    }
    Err(Error::Invariant(format!(
        "both sextic constructions degenerate for {}",
        f.to_expr()
    )))
}

/// |d_K|^{|H|} = |d_M|^{|F|-1} |d_N| / |d_M|^{|F|}, checked in integers.
pub fn brauer_check(abs_k: &BigInt, abs_m: &BigInt, abs_n: &BigInt, f_order: u32, h_order: u32) -> Result<bool> {
    let m_f: BigInt = Pow::pow(abs_m, f_order);
    let (relnorm, r) = abs_n.div_rem(&m_f);
    if !r.is_zero() || m_f.is_zero() {
        return Err(Error::Invariant(format!(
            "tower inconsistency: |d_M|^{f_order} = {m_f} does not divide |d_N| = {abs_n}"
        )));
    }
    let lhs: BigInt = Pow::pow(abs_k, h_order);
    let rhs: BigInt = Pow::pow(abs_m, f_order - 1) * relnorm;
    Ok(lhs == rhs)
}

/// |d_N| = |d_M|^m * relnorm.
pub fn tower_check(abs_m: &BigInt, abs_n: &BigInt, m: u32, relnorm: &BigInt) -> bool {
    let lhs: BigInt = Pow::pow(abs_m, m) * relnorm;
    &lhs == abs_n
}

#[derive(Debug, Clone)]
pub struct TowerRecord {
    pub k: NumberFieldRecord,
    pub m: NumberFieldRecord,
    pub n: NumberFieldRecord,
    pub group: GroupAnalysis,
    /// |d_N| / |d_M|^3
    pub relnorm: BigInt,
}

impl TowerRecord {
    pub fn brauer_holds(&self) -> Result<bool> {
        brauer_check(&self.k.abs_disc(), &self.m.abs_disc(), &self.n.abs_disc(), 3, 2)
    }

    pub fn tower_holds(&self) -> bool {
        tower_check(&self.m.abs_disc(), &self.n.abs_disc(), 3, &self.relnorm)
    }
}

/// Builds K / M / N for an S3 cubic K and checks both relations; a failure is an
/// invariant violation.
pub fn build_s3_tower(k: &NumberFieldRecord, seed: u64) -> Result<TowerRecord> {
    if k.degree != 3 || k.galois_label.name != "S3" {
        return Err(Error::pre("towers are built for S3 cubic fields"));
    }
    let dk = k.field_disc.clone();
    let fund = ntheory::fundamental_part(
        dk.to_i64()
            .ok_or_else(|| Error::pre("cubic discriminant exceeds 64 bits"))?,
    );
    // Q(sqrt(d_K)) by x^2 - x + (1 - D)/4 or x^2 - D/4
    let mpoly = if fund.rem_euclid(4) == 1 {
        IntegerPolynomial::from_descending(&[1, -1, (1 - fund) / 4])?
    } else {
        IntegerPolynomial::from_descending(&[1, 0, -fund / 4])?
    };
    let m = NumberFieldRecord::from_poly(&mpoly, seed)?;

    let sextic = splitting_sextic(&k.defining_poly)?;
    let ram: Vec<u64> = ntheory::factor(
        dk.abs()
            .to_u64()
            .ok_or_else(|| Error::pre("cubic discriminant exceeds 64 bits"))?,
    )
    .into_iter()
    .map(|(p, _)| p)
    .collect();
    // N is unramified outside the primes of d_K: keep only their part of disc / index^2
    let partial = maximal_order_at(&sextic, &ram)?;
    let mut abs_n = BigInt::one();
    for &p in &ram {
        abs_n *= Pow::pow(BigInt::from(p), valuation(&partial.field_disc, p));
    }
    // d_N < 0 exactly when N has an odd number of complex pairs, i.e. when d_K < 0
    let dn = if dk.is_negative() {
        -abs_n.clone()
    } else {
        abs_n.clone()
    };
    let index2 = &partial.poly_disc / &dn;
    let index = index2.sqrt();
    if &index * &index != index2 || !(&partial.poly_disc % &dn).is_zero() {
        return Err(Error::Invariant(format!(
            "sextic discriminant {} is not d_N = {dn} times a square",
            partial.poly_disc
        )));
    }
    // finish maximizing at the index primes outside d_K to get a full maximal order
    let mut extra: Vec<u64> = Vec::new();
    for (p, _) in ntheory::factor_big(&index) {
        let p = p
            .to_u64()
            .ok_or_else(|| Error::pre(format!("index prime {p} exceeds 64 bits")))?;
        if !ram.contains(&p) {
            extra.push(p);
        }
    }
    let mut all = ram.clone();
    all.extend(extra);
    let full = maximal_order_at(&sextic, &all)?;
    if full.field_disc != dn {
        return Err(Error::Invariant(format!(
            "sextic maximal order has disc {} but the tower forces {dn}",
            full.field_disc
        )));
    }
    let g = canonical_generator_from(&full.order)?;
    let n = NumberFieldRecord::from_canonical(&g, seed)?;
    if n.field_disc != dn {
        return Err(Error::Invariant(format!(
            "canonical sextic disc {} differs from {dn}",
            n.field_disc
        )));
    }

    let m_abs = m.abs_disc();
    let m3: BigInt = Pow::pow(&m_abs, 3u32);
    let relnorm = &abs_n / &m3;
    let group = GroupAnalysis::analyze(&named_group("dihedral(3)")?)?;
    let tower = TowerRecord {
        k: k.clone(),
        m,
        n,
        group,
        relnorm,
    };
    if !tower.tower_holds() || !tower.brauer_holds()? {
        return Err(Error::Invariant(format!(
            "discriminant relations fail for the tower of {}",
            k.defining_poly.to_expr()
        )));
    }
    Ok(tower)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn sextics() {
        let f: IntegerPolynomial = "x^3 - x - 1".parse().unwrap();
        assert_eq!(difference_sextic(&f).unwrap().to_expr(), "x^6 - 6x^4 + 9x^2 + 23");
        let g: IntegerPolynomial = "x^3 - 2".parse().unwrap();
        assert_eq!(difference_sextic(&g).unwrap().to_expr(), "x^6 + 108");
        // the fallback has the right degree and defines the same closure
        let s = sum_sextic(&f).unwrap();
        assert_eq!(s.degree(), 6);
        assert!(super::super::irreducible::is_irreducible(&s).unwrap());
        assert!(splitting_sextic(&"x^3 - 3x - 1".parse().unwrap()).is_err());
    }

    #[test]
    fn relations() {
        assert!(brauer_check(&b(23), &b(23), &b(12167), 3, 2).unwrap());
        assert!(brauer_check(&b(1), &b(1), &b(1), 3, 2).unwrap());
        // a consistent D7-shaped triple, then the same with |d_N| off by a factor 7
        let k7: BigInt = Pow::pow(b(49), 3u32);
        let n7: BigInt = Pow::pow(b(49), 7u32);
        assert!(brauer_check(&k7, &b(49), &n7, 7, 2).unwrap());
        assert!(!brauer_check(&k7, &b(49), &(n7 * b(7)), 7, 2).unwrap());
        assert!(brauer_check(&b(23), &b(23), &b(23 * 23), 3, 2).is_err());
        assert!(tower_check(&b(23), &b(12167), 3, &b(1)));
        assert!(tower_check(&b(5), &b(125), 3, &b(1)));
        assert!(tower_check(&b(8), &b(4096), 3, &b(8)));
    }

    #[test]
    fn plastic_tower() {
        let k = NumberFieldRecord::from_poly(&"x^3 - x - 1".parse().unwrap(), 0).unwrap();
        let t = build_s3_tower(&k, 0).unwrap();
        assert_eq!(t.m.field_disc, b(-23));
        assert_eq!(t.n.field_disc, b(-12167));
        assert_eq!(t.relnorm, b(1));
    }

    #[test]
    fn cube_root_two_tower() {
        let k = NumberFieldRecord::from_poly(&"x^3 - 2".parse().unwrap(), 0).unwrap();
        assert_eq!(k.field_disc, b(-108));
        let t = build_s3_tower(&k, 0).unwrap();
        assert_eq!(t.m.field_disc, b(-3));
        assert_eq!(t.n.field_disc, b(-34992));
    }
}
