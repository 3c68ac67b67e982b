//! Small dense linear algebra over Z, Q, F_p and the reals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ntheory::{inv_mod, mul_mod};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

/// Upper-triangular Hermite normal form basis of the row lattice, assumed full rank `n`.
pub fn hnf(rows: &[Vec<BigInt>], n: usize) -> Result<IntMatrix> {
    let mut m: IntMatrix = rows.to_vec();
    let mut out: IntMatrix = Vec::with_capacity(n);
    for col in 0..n {
        // gcd-combine every row into the pivot row for this column
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::with_capacity(m.len());
        for row in m.drain(..) {
            if row[col].is_zero() {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(pv) => {
                    let (a, b) = (&pv[col], &row[col]);
                    let e = a.extended_gcd(b);
                    let (ua, ub) = (a / &e.gcd, b / &e.gcd);
                    let new_pivot: Vec<BigInt> = pv.iter().zip(&row).map(|(x, y)| &e.x * x + &e.y * y).collect();
                    let reduced: Vec<BigInt> = pv.iter().zip(&row).map(|(x, y)| &ub * x - &ua * y).collect();
                    rest.push(reduced);
                    pivot = Some(new_pivot);
                }
            }
        }
        let mut pv = pivot.ok_or_else(|| Error::Invariant("lattice is not of full rank".into()))?;
        if pv[col].is_negative() {
            pv.iter_mut().for_each(|x| *x = -x.clone());
        }
        m = rest;
        out.push(pv);
    }
    // reduce entries above each pivot
    for i in 0..n {
        for k in 0..i {
            let q = out[k][i].div_floor(&out[i][i]);
            if !q.is_zero() {
                let row_i = out[i].clone();
                for (x, y) in out[k].iter_mut().zip(&row_i) {
                    *x -= &q * y;
                }
            }
        }
    }
    Ok(out)
}

/// Basis of { x : sum_i x_i M[i] = 0 } over F_p.
pub fn left_kernel_mod_p(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    // eliminate on the transpose: right kernel of M^T
    let mut a: Vec<Vec<u64>> = (0..cols).map(|j| (0..rows).map(|i| m[i][j] % p).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..rows {
        let Some(piv) = (r..cols).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = inv_mod(a[r][c], p).expect("p prime");
        for x in a[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..cols {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..rows {
                    a[i][j] = (a[i][j] + p - mul_mod(f, a[r][j], p)) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == cols {
            break;
        }
    }
    let free: Vec<usize> = (0..rows).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; rows];
            v[fc] = 1;
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[ri][fc]) % p;
            }
            v
        })
        .collect()
}

pub fn to_rat(m: &IntMatrix) -> RatMatrix {
    m.iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

pub fn rat_inverse(m: &RatMatrix) -> Result<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m.to_vec();
    let mut inv: RatMatrix = (0..n)
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
    for c in 0..n {
        let piv = (c..n)
            .find(|&i| !a[i][c].is_zero())
            .ok_or_else(|| Error::Invariant("singular basis matrix".into()))?;
        a.swap(c, piv);
        inv.swap(c, piv);
        let d = a[c][c].clone();
        for j in 0..n {
            a[c][j] = &a[c][j] / &d;
            inv[c][j] = &inv[c][j] / &d;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                    let t = &f * &inv[c][j];
                    inv[i][j] -= t;
                }
            }
        }
    }
    Ok(inv)
}

/// Row vector times matrix.
pub fn vec_mat_rat(v: &[BigRational], m: &RatMatrix) -> Vec<BigRational> {
    let n = m[0].len();
    (0..n)
        .map(|j| {
            v.iter()
                .zip(m)
                .fold(BigRational::zero(), |acc, (x, row)| acc + x * &row[j])
        })
        .collect()
}

pub fn rat_det(m: &RatMatrix) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if piv != c {
            a.swap(c, piv);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    det
}

/// Characteristic polynomial det(xI - M), constant term first, by Berkowitz's
/// division-free algorithm.
pub fn charpoly(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.len();
    // c holds the coefficients leading first
    let mut c: Vec<BigInt> = vec![BigInt::one(), -m[0][0].clone()];
    for r in 1..n {
        // partition: A = m[..r][..r], R = m[r][..r], C = m[..r][r], a = m[r][r]
        let mut powers: Vec<Vec<BigInt>> = Vec::with_capacity(r + 1);
        let col: Vec<BigInt> = (0..r).map(|i| m[i][r].clone()).collect();
        powers.push(col);
        for _ in 1..r {
            let prev = powers.last().unwrap();
            let next: Vec<BigInt> = (0..r)
                .map(|i| (0..r).fold(BigInt::zero(), |acc, k| acc + &m[i][k] * &prev[k]))
                .collect();
            powers.push(next);
        }
        // toeplitz column: 1, -a, -R C, -R A C, ...
        let mut t = vec![BigInt::one(), -m[r][r].clone()];
        for pw in powers.iter().take(r) {
            let v = (0..r).fold(BigInt::zero(), |acc, k| acc + &m[r][k] * &pw[k]);
            t.push(-v);
        }
        let mut next = vec![BigInt::zero(); r + 2];
        for (i, ni) in next.iter_mut().enumerate() {
            for j in 0..=i.min(r) {
                if i - j < t.len() {
                    *ni += &t[i - j] * &c[j];
                }
            }
        }
        c = next;
    }
    c.reverse();
    c
}

/// LLL reduction (delta = 0.99) of a positive definite Gram matrix.
/// Returns the unimodular transform T; reduced basis vectors are the rows of T.
pub fn lll_gram(gram: &[Vec<f64>]) -> Vec<Vec<i64>> {
    let n = gram.len();
    let mut t: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let g = |t: &Vec<Vec<i64>>, i: usize, j: usize| -> f64 {
        let mut s = 0.0;
        for a in 0..n {
            if t[i][a] == 0 {
                continue;
            }
            for b in 0..n {
                s += t[i][a] as f64 * gram[a][b] * t[j][b] as f64;
            }
        }
        s
    };
    let mut k = 1;
    let mut guard = 0;
    while k < n && guard < 10_000 {
        guard += 1;
        // Gram-Schmidt on the current basis
        let mut mu = vec![vec![0.0; n]; n];
        let mut bstar = vec![0.0; n];
        for i in 0..=k {
            for j in 0..i {
                let mut v = g(&t, i, j);
                for l in 0..j {
                    v -= mu[j][l] * mu[i][l] * bstar[l];
                }
                mu[i][j] = v / bstar[j];
            }
            let mut v = g(&t, i, i);
            for l in 0..i {
                v -= mu[i][l] * mu[i][l] * bstar[l];
            }
            bstar[i] = v;
        }
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let qi = q as i64;
                let row_j = t[j].clone();
                for (x, y) in t[k].iter_mut().zip(&row_j) {
                    *x -= qi * y;
                }
                for l in 0..=j {
                    let mjl = if l == j { 1.0 } else { mu[j][l] };
                    mu[k][l] -= q * mjl;
                }
            }
        }
        if bstar[k] < (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            t.swap(k, k - 1);
            k = k.saturating_sub(1).max(1);
        } else {
            k += 1;
        }
    }
    t
}

/// All nonzero integer vectors x (up to sign) with x^T G x <= bound.
/// `visit` sees each vector with its norm; the node cap guards the search.
pub fn fincke_pohst(gram: &[Vec<f64>], bound: f64, node_cap: u64, mut visit: impl FnMut(&[i64], f64)) -> Result<()> {
    let n = gram.len();
    // Cholesky-style decomposition q with x^T G x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
    let mut q = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            q[i][j] = gram[i][j];
        }
    }
    for i in 0..n {
        if q[i][i] <= 0.0 {
            return Err(Error::Invariant("Gram matrix is not positive definite".into()));
        }
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let mut x = vec![0i64; n];
    let mut nodes = 0u64;
    let eps = 1e-9 * (1.0 + bound);
    fn rec(
        i: usize,
        remaining: f64,
        q: &[Vec<f64>],
        x: &mut Vec<i64>,
        nodes: &mut u64,
        cap: u64,
        eps: f64,
        bound: f64,
        visit: &mut dyn FnMut(&[i64], f64),
    ) -> Result<()> {
        let n = q.len();
        *nodes += 1;
        if *nodes > cap {
            return Err(Error::SearchBound(format!(
                "more than {cap} lattice nodes below T2 = {bound:.3}"
            )));
        }
        let c: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
        let half = ((remaining + eps).max(0.0) / q[i][i]).sqrt();
        let lo = (c - half).ceil() as i64;
        let hi = (c + half).floor() as i64;
        for v in lo..=hi {
            x[i] = v;
            let d = v as f64 - c;
            let rem = remaining - q[i][i] * d * d;
            if rem < -eps {
                continue;
            }
            if i == 0 {
                // keep one of +-x: first nonzero coordinate from the top is positive
                if let Some(&top) = x.iter().rev().find(|&&t| t != 0) {
                    if top > 0 {
                        visit(x, bound - rem);
                    }
                }
            } else {
                rec(i - 1, rem, q, x, nodes, cap, eps, bound, visit)?;
            }
        }
        x[i] = 0;
        Ok(())
    }
    rec(n - 1, bound, &q, &mut x, &mut nodes, node_cap, eps, bound, &mut visit)
}

pub fn int_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(v: &[&[i64]]) -> IntMatrix {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_of_sublattice() {
        let h = hnf(&im(&[&[2, 0], &[1, 1], &[0, 2]]), 2).unwrap();
        assert_eq!(h, im(&[&[1, 1], &[0, 2]]));
        let h = hnf(&im(&[&[4, 6], &[6, 4]]), 2).unwrap();
        assert_eq!(h, im(&[&[2, 8], &[0, 10]]));
    }

    #[test]
    fn kernel_mod_p() {
        let m = vec![vec![1, 2], vec![2, 4], vec![0, 1]];
        let k = left_kernel_mod_p(&m, 5);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        for c in 0..2 {
            let s: u64 = (0..3).map(|i| v[i] * m[i][c]).sum();
            assert_eq!(s % 5, 0);
        }
    }

    #[test]
    fn berkowitz() {
        // companion of x^3 - x - 1
        let m = im(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]);
        let c = charpoly(&m);
        assert_eq!(c, im(&[&[-1, -1, 0, 1]])[0]);
        let m = im(&[&[2, 1], &[1, 3]]);
        assert_eq!(charpoly(&m), im(&[&[5, -5, 1]])[0]);
    }

    #[test]
    fn short_vectors() {
        let g = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let mut found = Vec::new();
        fincke_pohst(&g, 2.0, 1000, |x, n| found.push((x.to_vec(), n))).unwrap();
        assert_eq!(found.len(), 3);
        assert!(found.iter().all(|(_, n)| (n - 2.0).abs() < 1e-9));
        let t = lll_gram(&[vec![1.0, 10.0], vec![10.0, 101.0]]);
        // reduced basis is {e1, e2 - 10 e1}
        assert_eq!(t[1], vec![-10, 1]);
    }
}
