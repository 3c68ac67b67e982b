//! Maximal orders by Round 2 (Pohst-Zassenhaus), with a Dedekind shortcut.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ntheory;

use super::fp;
use super::irreducible::is_irreducible;
use super::linalg::{hnf, left_kernel_mod_p, rat_inverse, vec_mat_rat, IntMatrix, RatMatrix};
use super::poly::IntegerPolynomial;

pub const MAX_ORDER_DEGREE: usize = 6;

/// An order given by a Z-basis in power-basis coordinates, with its
/// multiplication table.
#[derive(Debug, Clone)]
pub struct Order {
    pub f: IntegerPolynomial,
    /// Row i holds omega_i in the basis 1, theta, ..., theta^(n-1).
    pub basis: RatMatrix,
    inverse: RatMatrix,
    /// omega_i omega_j = sum_k table[i][j][k] omega_k
    pub table: Vec<Vec<Vec<BigInt>>>,
    /// [O : Z[theta]]
    pub index: BigInt,
}

/// Multiplies two power-basis vectors modulo the monic f.
fn mul_power(a: &[BigRational], b: &[BigRational], f: &IntegerPolynomial) -> Vec<BigRational> {
    let n = f.degree();
    let mut prod = vec![BigRational::zero(); 2 * n - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    for k in (n..2 * n - 1).rev() {
        let c = std::mem::take(&mut prod[k]);
        if c.is_zero() {
            continue;
        }
        for j in 0..n {
            let t = &c * BigRational::from_integer(f.coeff(j).clone());
            prod[k - n + j] -= t;
        }
    }
    prod.truncate(n);
    prod
}

impl Order {
    pub fn equation_order(f: &IntegerPolynomial) -> Result<Order> {
        let n = f.degree();
        let id: RatMatrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Order::from_basis(f, id, BigInt::one())
    }

    fn from_basis(f: &IntegerPolynomial, basis: RatMatrix, index: BigInt) -> Result<Order> {
        let n = f.degree();
        let inverse = rat_inverse(&basis)?;
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in i..n {
                let prod = mul_power(&basis[i], &basis[j], f);
                let coords = vec_mat_rat(&prod, &inverse);
                let ints: Option<Vec<BigInt>> = coords.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect();
                let ints = ints.ok_or_else(|| Error::Invariant("basis is not closed under multiplication".into()))?;
                table[i][j] = ints.clone();
                table[j][i] = ints;
            }
        }
        Ok(Order {
            f: f.clone(),
            basis,
            inverse,
            table,
            index,
        })
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    /// Product of two elements in order coordinates.
    pub fn mul(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let n = self.degree();
        let mut out = vec![BigInt::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let t = &self.table[i][j][k];
                    if !t.is_zero() {
                        *o += &c * t;
                    }
                }
            }
        }
        out
    }

    fn mul_mod_p(&self, x: &[u64], y: &[u64], p: u64) -> Vec<u64> {
        let n = self.degree();
        let bp = BigInt::from(p);
        let mut out = vec![0u64; n];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0 {
                    continue;
                }
                let c = ntheory::mul_mod(x[i], y[j], p);
                for (k, o) in out.iter_mut().enumerate() {
                    let t = self.table[i][j][k].mod_floor(&bp).to_u64().expect("reduced");
                    *o = (*o + ntheory::mul_mod(c, t, p)) % p;
                }
            }
        }
        out
    }

    fn pow_mod_p(&self, x: &[u64], mut e: u128, p: u64) -> Vec<u64> {
        let n = self.degree();
        let mut acc = self.one_mod_p(p);
        let mut b = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_mod_p(&acc, &b, p);
            }
            b = self.mul_mod_p(&b, &b, p);
            e >>= 1;
        }
        debug_assert_eq!(acc.len(), n);
        acc
    }

    fn one_mod_p(&self, p: u64) -> Vec<u64> {
        let one: Vec<BigRational> = (0..self.degree())
            .map(|i| {
                if i == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        let bp = BigInt::from(p);
        vec_mat_rat(&one, &self.inverse)
            .iter()
            .map(|c| c.to_integer().mod_floor(&bp).to_u64().expect("reduced"))
            .collect()
    }

    /// Power-basis coordinates of an element given in order coordinates.
    pub fn to_power_basis(&self, x: &[BigInt]) -> Vec<BigRational> {
        let xr: Vec<BigRational> = x.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        vec_mat_rat(&xr, &self.basis)
    }

    /// Order coordinates of a power-basis element (rational if it lies outside the order).
    pub fn from_power_basis(&self, x: &[BigInt]) -> Vec<BigRational> {
        let xr: Vec<BigRational> = x.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        vec_mat_rat(&xr, &self.inverse)
    }

    /// Multiplication-by-x matrix on the order basis (row i = x omega_i).
    pub fn mul_matrix(&self, x: &[BigInt]) -> IntMatrix {
        let n = self.degree();
        (0..n)
            .map(|i| {
                let mut e = vec![BigInt::zero(); n];
                e[i] = BigInt::one();
                self.mul(x, &e)
            })
            .collect()
    }

    /// One Round-2 enlargement at p, or `None` when the order is p-maximal.
    fn enlarge_at(&self, p: u64) -> Result<Option<Order>> {
        let n = self.degree();
        let bp = BigInt::from(p);
        // p-radical: kernel of x -> x^(p^j) on O/pO with p^j >= n
        let mut q: u128 = p as u128;
        while q < n as u128 {
            q *= p as u128;
        }
        let frob: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut e = vec![0u64; n];
                e[i] = 1;
                self.pow_mod_p(&e, q, p)
            })
            .collect();
        let ker = left_kernel_mod_p(&frob, p);
        let mut gens: Vec<Vec<BigInt>> = ker
            .iter()
            .map(|v| v.iter().map(|&c| BigInt::from(c)).collect())
            .collect();
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = bp.clone();
            gens.push(e);
        }
        let radical = hnf(&gens, n)?;
        let rad_inv = rat_inverse(&super::linalg::to_rat(&radical))?;
        // U = { x in O : x I subset p I }
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut e = vec![BigInt::zero(); n];
                e[i] = BigInt::one();
                let mut row = Vec::with_capacity(n * n);
                for beta in &radical {
                    let prod = self.mul(&e, beta);
                    let pr: Vec<BigRational> = prod.iter().map(|c| BigRational::from_integer(c.clone())).collect();
                    for c in vec_mat_rat(&pr, &rad_inv) {
                        let c = c.to_integer();
                        row.push(c.mod_floor(&bp).to_u64().expect("reduced"));
                    }
                }
                row
            })
            .collect();
        let ker2 = left_kernel_mod_p(&rows, p);
        if ker2.is_empty() {
            return Ok(None);
        }
        let mut gens: Vec<Vec<BigInt>> = ker2
            .iter()
            .map(|v| v.iter().map(|&c| BigInt::from(c)).collect())
            .collect();
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = bp.clone();
            gens.push(e);
        }
        let u = hnf(&gens, n)?;
        let pr = BigRational::from_integer(bp.clone());
        let new_basis: RatMatrix = u
            .iter()
            .map(|row| {
                let r: Vec<BigRational> = row.iter().map(|c| BigRational::from_integer(c.clone())).collect();
                vec_mat_rat(&r, &self.basis).into_iter().map(|c| c / &pr).collect()
            })
            .collect();
        let growth = bp.pow(ker2.len() as u32);
        Ok(Some(Order::from_basis(&self.f, new_basis, &self.index * growth)?))
    }
}

/// Dedekind's criterion: is Z[theta] maximal at p? Valid for p > deg f.
fn dedekind_maximal(f: &IntegerPolynomial, p: u64) -> bool {
    let fbar = fp::reduce(f.coeffs(), p);
    let g = fp::radical(&fbar, p);
    let h = fp::divrem(&fbar, &g, p).0;
    let lift = |v: &fp::FpPoly| -> Vec<BigInt> { v.iter().map(|&c| BigInt::from(c)).collect() };
    let (gz, hz) = (lift(&g), lift(&h));
    let mut gh = vec![BigInt::zero(); gz.len() + hz.len() - 1];
    for (i, a) in gz.iter().enumerate() {
        for (j, b) in hz.iter().enumerate() {
            gh[i + j] += a * b;
        }
    }
    let bp = BigInt::from(p);
    let big_f: Vec<BigInt> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| (c - gh.get(k).cloned().unwrap_or_default()) / &bp)
        .collect();
    let fb = fp::reduce(&big_f, p);
    let d = fp::gcd(&fp::gcd(&fb, &g, p), &h, p);
    d.len() == 1
}

/// Maximal order of Q[x]/(f), field discriminant and index.
#[derive(Debug, Clone)]
pub struct MaximalOrder {
    pub order: Order,
    pub field_disc: BigInt,
    pub poly_disc: BigInt,
    pub index: BigInt,
}

fn maximize(f: &IntegerPolynomial, primes: &[u64]) -> Result<Order> {
    let mut order = Order::equation_order(f)?;
    let n = f.degree();
    for &p in primes {
        if p as usize > n && dedekind_maximal(f, p) {
            continue;
        }
        let mut rounds = 0;
        while let Some(next) = order.enlarge_at(p)? {
            order = next;
            rounds += 1;
            if rounds > 64 {
                return Err(Error::Invariant(format!("Round 2 at p = {p} did not converge")));
            }
        }
    }
    Ok(order)
}

/// Exact field discriminant and index [O_K : Z[theta]] of an irreducible f of degree <= 6.
pub fn maximal_order_disc(f: &IntegerPolynomial) -> Result<MaximalOrder> {
    let n = f.degree();
    if n > MAX_ORDER_DEGREE {
        return Err(Error::pre(format!(
            "maximal orders are implemented up to degree {MAX_ORDER_DEGREE}"
        )));
    }
    if !is_irreducible(f)? {
        return Err(Error::pre(format!("{} is not irreducible", f.to_expr())));
    }
    let disc = f.discriminant();
    let primes: Vec<u64> = ntheory::factor_big(&disc)
        .into_iter()
        .filter(|(_, e)| *e >= 2)
        .map(|(p, _)| {
            p.to_u64()
                .ok_or_else(|| Error::pre(format!("index prime {p} exceeds 64 bits")))
        })
        .collect::<Result<_>>()?;
    finish(f, disc, maximize(f, &primes)?)
}

/// As [`maximal_order_disc`], but maximizes only at the given primes; the caller
/// asserts no other prime divides the index.
pub fn maximal_order_at(f: &IntegerPolynomial, primes: &[u64]) -> Result<MaximalOrder> {
    let disc = f.discriminant();
    finish(f, disc, maximize(f, primes)?)
}

fn finish(f: &IntegerPolynomial, disc: BigInt, order: Order) -> Result<MaximalOrder> {
    let idx2 = &order.index * &order.index;
    let (q, r) = disc.div_rem(&idx2);
    if !r.is_zero() {
        return Err(Error::Invariant(format!(
            "index^2 = {idx2} does not divide disc(f) = {disc} for {}",
            f.to_expr()
        )));
    }
    Ok(MaximalOrder {
        index: order.index.clone(),
        order,
        field_disc: q,
        poly_disc: disc,
    })
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    let bp = BigUint::from(p);
    let mut m = n.magnitude().clone();
    let mut v = 0;
    while !m.is_zero() && (&m % &bp).is_zero() {
        m /= &bp;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(s: &str) -> (i64, i64) {
        let m = maximal_order_disc(&s.parse().unwrap()).unwrap();
        (m.field_disc.to_i64().unwrap(), m.index.to_i64().unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(fd("x^3 - x - 1"), (-23, 1));
        assert_eq!(fd("x^3 + x^2 - 2x + 8"), (-503, 2));
        assert_eq!(fd("x^2 - 5"), (5, 2));
        assert_eq!(fd("x^2 + 1"), (-4, 1));
        assert_eq!(fd("x^4 + x^3 + x^2 + x + 1"), (125, 1));
        assert_eq!(fd("x^3 - 2"), (-108, 1));
        assert_eq!(fd("x^6 + x^3 + 1"), (-19683, 1));
        assert_eq!(fd("x^3 - 4x^2 + 3x - 1"), (-31, 1));
        // index 3 at 3: Q(cbrt 10), disc -300
        assert_eq!(fd("x^3 - 10"), (-300, 3));
        // x^2 - 12 = 4 * 3 gives Q(sqrt 3), disc 12
        assert_eq!(fd("x^2 - 12"), (12, 2));
    }

    #[test]
    fn reducible_rejected() {
        assert!(maximal_order_disc(&"x^2 - 4".parse().unwrap()).is_err());
    }
}
