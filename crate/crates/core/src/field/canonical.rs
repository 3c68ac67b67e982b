//! Canonical defining polynomials: the T2-smallest generator of the maximal order,
//! ties broken by the lexicographically smallest characteristic polynomial.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

use super::linalg::{charpoly, fincke_pohst, lll_gram};
use super::order::{maximal_order_disc, Order};
use super::poly::IntegerPolynomial;
use super::roots::complex_roots;

/// Default cap on Fincke-Pohst nodes per field.
pub const DEFAULT_NODE_CAP: u64 = 5_000_000;
/// Relative tolerance under which two T2 values count as equal.
pub const T2_TIE_TOLERANCE: f64 = 1e-7;

struct Embedded {
    /// sigma_k(omega_i)
    values: Vec<Vec<Complex64>>,
}

impl Embedded {
    /// Embeddings of elements given by power-basis rows.
    fn new(rows: &[Vec<BigRational>], roots: &[Complex64]) -> Self {
        let values = rows
            .iter()
            .map(|row| {
                roots
                    .iter()
                    .map(|&r| {
                        let mut acc = Complex64::new(0.0, 0.0);
                        let mut pw = Complex64::new(1.0, 0.0);
                        for c in row {
                            acc += pw * c.to_f64().unwrap_or(f64::NAN);
                            pw *= r;
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Embedded { values }
    }

    fn embed(&self, x: &[i64]) -> Vec<Complex64> {
        let n = self.values[0].len();
        (0..n)
            .map(|k| x.iter().zip(&self.values).map(|(&c, row)| row[k] * c as f64).sum())
            .collect()
    }

    fn gram(&self) -> Vec<Vec<f64>> {
        let n = self.values.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.values[i]
                            .iter()
                            .zip(&self.values[j])
                            .map(|(a, b)| (a * b.conj()).re)
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }
}

fn t2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn distinct(v: &[Complex64]) -> bool {
    let scale = 1.0 + v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    (0..v.len()).all(|i| (i + 1..v.len()).all(|j| (v[i] - v[j]).norm() > 1e-6 * scale))
}

/// Exact characteristic polynomial of x, if x generates the field.
fn generator_poly(order: &Order, x: &[BigInt]) -> Option<IntegerPolynomial> {
    let cp = charpoly(&order.mul_matrix(x));
    let g = IntegerPolynomial::from_ascending(cp).ok()?;
    (!g.discriminant().is_zero()).then_some(g)
}

/// Descending coefficients below the leading one, the lexicographic key.
fn lex_key(g: &IntegerPolynomial) -> Vec<BigInt> {
    g.coeffs()[..g.degree()].iter().rev().cloned().collect()
}

pub fn canonical_generator(f: &IntegerPolynomial) -> Result<IntegerPolynomial> {
    canonical_generator_with_cap(f, DEFAULT_NODE_CAP)
}

pub fn canonical_generator_with_cap(f: &IntegerPolynomial, node_cap: u64) -> Result<IntegerPolynomial> {
    let n = f.degree();
    if n == 1 {
        return IntegerPolynomial::from_descending(&[1, 0]);
    }
    let order = maximal_order_disc(f)?.order;
    canonical_from_order(&order, node_cap)
}

/// Canonical generator of the field whose maximal order is `order`.
pub fn canonical_generator_from(order: &Order) -> Result<IntegerPolynomial> {
    canonical_from_order(order, DEFAULT_NODE_CAP)
}

fn canonical_from_order(order: &Order, node_cap: u64) -> Result<IntegerPolynomial> {
    let n = order.degree();
    let roots = complex_roots(&order.f);
    // reduce until LLL is stable; each round re-embeds the exact reduced basis so
    // the Gram matrix stays well conditioned even for large indices
    let mut rows: Vec<Vec<BigRational>> = order.basis.clone();
    let mut total: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    let mut emb = Embedded::new(&rows, &roots);
    for _ in 0..8 {
        let t = lll_gram(&emb.gram());
        let identity = (0..n).all(|i| (0..n).all(|j| t[i][j] == i64::from(i == j)));
        if identity {
            break;
        }
        let apply_rat = |m: &Vec<Vec<BigRational>>| -> Vec<Vec<BigRational>> {
            t.iter()
                .map(|ti| {
                    (0..n)
                        .map(|j| {
                            ti.iter()
                                .zip(m)
                                .fold(BigRational::zero(), |acc, (&c, row)| acc + &row[j] * BigInt::from(c))
                        })
                        .collect()
                })
                .collect()
        };
        rows = apply_rat(&rows);
        total = t
            .iter()
            .map(|ti| {
                (0..n)
                    .map(|j| {
                        ti.iter()
                            .zip(&total)
                            .fold(BigInt::zero(), |acc, (&c, row)| acc + &row[j] * c)
                    })
                    .collect()
            })
            .collect();
        emb = Embedded::new(&rows, &roots);
    }
    let gram = emb.gram();
    let to_order = |y: &[i64]| -> Vec<BigInt> {
        (0..n)
            .map(|j| (0..n).fold(BigInt::zero(), |acc, i| acc + &total[i][j] * y[i]))
            .collect()
    };

    // an initial generator among short combinations of the reduced basis,
    // falling back to theta itself
    let mut bound: f64 = roots.iter().map(|r| r.norm_sqr()).sum();
    for i in 0..n {
        for j in i..n {
            for s in [1i64, -1] {
                let mut y = vec![0i64; n];
                y[i] += 1;
                if j != i {
                    y[j] += s;
                }
                let v = emb.embed(&y);
                if t2(&v) < bound && distinct(&v) && generator_poly(order, &to_order(&y)).is_some() {
                    bound = t2(&v);
                }
            }
        }
    }

    let limit = bound * (1.0 + T2_TIE_TOLERANCE);
    let mut best_t2 = f64::INFINITY;
    let mut cands: Vec<(Vec<i64>, f64)> = Vec::new();
    fincke_pohst(&gram, limit, node_cap, |y, _| {
        let v = emb.embed(y);
        let norm = t2(&v);
        if norm > best_t2 * (1.0 + T2_TIE_TOLERANCE) || !distinct(&v) {
            return;
        }
        if norm < best_t2 {
            best_t2 = norm;
            cands.retain(|c| c.1 <= norm * (1.0 + T2_TIE_TOLERANCE));
        }
        cands.push((y.to_vec(), norm));
    })?;

    let mut best: Option<IntegerPolynomial> = None;
    for (y, _) in cands {
        let Some(g) = generator_poly(order, &to_order(&y)) else {
            continue;
        };
        // the search keeps one of +-x; -x has char poly (-1)^n g(-x)
        for h in [g.negate_root(), g] {
            if best.as_ref().is_none_or(|b| lex_key(&h) < lex_key(b)) {
                best = Some(h);
            }
        }
    }
    let g = best.ok_or_else(|| Error::SearchBound(format!("no generator found below T2 = {limit:.6}")))?;
    g.set_irreducible(true);
    Ok(g)
}
