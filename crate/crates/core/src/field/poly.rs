//! Monic integer polynomials, resultants and discriminants.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A monic polynomial with integer coefficients, degree at least 1.
///
/// Coefficients are stored constant term first; the textual form lists them
/// leading term first, e.g. `[1,0,-1,-1]` for x^3 - x - 1.
#[derive(Clone)]
pub struct IntegerPolynomial {
    coeffs: Vec<BigInt>,
    irreducible: OnceLock<bool>,
}

impl PartialEq for IntegerPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for IntegerPolynomial {}

impl std::hash::Hash for IntegerPolynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for IntegerPolynomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from a_{n-1} down to a_0.
impl Ord for IntegerPolynomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Debug for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl IntegerPolynomial {
    /// From coefficients constant term first.
    pub fn from_ascending(coeffs: Vec<BigInt>) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::pre("polynomial must have degree >= 1"));
        }
        if !coeffs.last().expect("nonempty").is_one() {
            return Err(Error::pre("polynomial must be monic"));
        }
        Ok(IntegerPolynomial {
            coeffs,
            irreducible: OnceLock::new(),
        })
    }

    /// From coefficients leading term first.
    pub fn from_descending(coeffs: &[i64]) -> Result<Self> {
        Self::from_ascending(coeffs.iter().rev().map(|&c| BigInt::from(c)).collect())
    }

    pub(crate) fn from_ascending_unchecked(coeffs: Vec<BigInt>) -> Self {
        debug_assert!(coeffs.len() >= 2 && coeffs.last().is_some_and(One::is_one));
        IntegerPolynomial {
            coeffs,
            irreducible: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients constant term first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of x^k.
    pub fn coeff(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    pub fn coeffs_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }

    /// The result of a completed irreducibility test, if one ran.
    pub fn irreducible_flag(&self) -> Option<bool> {
        self.irreducible.get().copied()
    }

    pub(crate) fn set_irreducible(&self, value: bool) {
        let _ = self.irreducible.set(value);
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// f(x + a).
    pub fn shift(&self, a: &BigInt) -> IntegerPolynomial {
        let n = self.degree();
        let mut c = self.coeffs.clone();
        // repeated synthetic division
        for i in 0..n {
            for j in (i..n).rev() {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
        IntegerPolynomial::from_ascending_unchecked(c)
    }

    /// (-1)^n f(-x), the polynomial of -theta.
    pub fn negate_root(&self) -> IntegerPolynomial {
        let n = self.degree();
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| if (n - k) % 2 == 1 { -a } else { a.clone() })
            .collect();
        IntegerPolynomial::from_ascending_unchecked(c)
    }

    pub fn derivative(&self) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect()
    }

    /// disc(f) = (-1)^(n(n-1)/2) Res(f, f').
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree();
        if let Some(d) = self.small_discriminant() {
            return d;
        }
        let r = resultant(&self.coeffs, &self.derivative());
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    fn small_discriminant(&self) -> Option<BigInt> {
        let c = &self.coeffs;
        match self.degree() {
            1 => Some(BigInt::one()),
            2 => Some(&c[1] * &c[1] - BigInt::from(4) * &c[0]),
            3 => Some(BigInt::from(cubic_disc(
                c[2].to_i128()?,
                c[1].to_i128()?,
                c[0].to_i128()?,
            )?)),
            _ => None,
        }
    }

    pub fn to_expr(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coef = if mag.is_one() && k > 0 {
                String::new()
            } else {
                mag.to_string()
            };
            out.push_str(&coef);
            match k {
                0 => {}
                1 => out.push('x'),
                _ => out.push_str(&format!("x^{k}")),
            }
        }
        out
    }
}

/// x^3 + a x^2 + b x + c, or `None` on overflow.
pub fn cubic_disc(a: i128, b: i128, c: i128) -> Option<i128> {
    let t1 = a.checked_mul(a)?.checked_mul(b)?.checked_mul(b)?;
    let t2 = b.checked_mul(b)?.checked_mul(b)?.checked_mul(4)?;
    let t3 = a.checked_mul(a)?.checked_mul(a)?.checked_mul(c)?.checked_mul(4)?;
    let t4 = c.checked_mul(c)?.checked_mul(27)?;
    let t5 = a.checked_mul(b)?.checked_mul(c)?.checked_mul(18)?;
    t1.checked_sub(t2)?.checked_sub(t3)?.checked_sub(t4)?.checked_add(t5)
}

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v.div_floor(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Res(a, b) of two integer polynomials given constant term first.
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let trim = |v: &[BigInt]| {
        let mut v = v.to_vec();
        while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    };
    let (a, b) = (trim(a), trim(b));
    let (m, n) = (a.len() - 1, b.len() - 1);
    if m == 0 && n == 0 {
        return BigInt::one();
    }
    if (m == 0 && a[0].is_zero()) || (n == 0 && b[0].is_zero()) {
        return BigInt::zero();
    }
    let size = m + n;
    let mut s = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            s[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            s[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(s)
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coeffs.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for IntegerPolynomial {
    type Err = Error;

    /// Accepts `[1,0,-1,-1]`, `1,0,-1,-1` (leading first) or `x^3 - x - 1`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.contains('x') {
            return parse_expr(t);
        }
        let inner = t.trim_start_matches('[').trim_end_matches(']');
        let mut coeffs = Vec::new();
        let mut col = s.find(inner).unwrap_or(0) + 1;
        for part in inner.split(',') {
            let v: BigInt = part
                .trim()
                .parse()
                .map_err(|_| Error::parse(col, format!("bad coefficient `{}`", part.trim())))?;
            coeffs.push(v);
            col += part.len() + 1;
        }
        coeffs.reverse();
        Self::from_ascending(coeffs).map_err(|e| Error::parse(1, e.to_string()))
    }
}

fn parse_expr(s: &str) -> Result<IntegerPolynomial> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut terms: Vec<(usize, BigInt)> = Vec::new();
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    let number = |i: &mut usize| -> Option<BigInt> {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        (start < *i).then(|| chars[start..*i].iter().collect::<String>().parse().unwrap())
    };
    skip_ws(&mut i);
    while i < chars.len() {
        let mut sign = BigInt::one();
        if chars[i] == '+' || chars[i] == '-' {
            if chars[i] == '-' {
                sign = -sign;
            }
            i += 1;
            skip_ws(&mut i);
        } else if !terms.is_empty() {
            return Err(Error::parse(i + 1, "expected `+` or `-`"));
        }
        let coef = number(&mut i);
        skip_ws(&mut i);
        if i < chars.len() && chars[i] == '*' {
            i += 1;
            skip_ws(&mut i);
        }
        let mut power = 0usize;
        if i < chars.len() && chars[i] == 'x' {
            i += 1;
            power = 1;
            skip_ws(&mut i);
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                skip_ws(&mut i);
                let col = i + 1;
                power = number(&mut i)
                    .and_then(|n| n.to_usize())
                    .ok_or_else(|| Error::parse(col, "expected an exponent"))?;
            }
        } else if coef.is_none() {
            return Err(Error::parse(i + 1, "expected a coefficient or `x`"));
        }
        terms.push((power, sign * coef.unwrap_or_else(BigInt::one)));
        skip_ws(&mut i);
    }
    let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    for (k, c) in terms {
        coeffs[k] += c;
    }
    IntegerPolynomial::from_ascending(coeffs).map_err(|e| Error::parse(1, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntegerPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn discriminants() {
        assert_eq!(p("x^3 - x - 1").discriminant(), BigInt::from(-23));
        assert_eq!(p("x^2 + 1").discriminant(), BigInt::from(-4));
        assert_eq!(p("x^3 - 3x - 1").discriminant(), BigInt::from(81));
        assert_eq!(p("x^3+x^2-2x+8").discriminant(), BigInt::from(-2012));
        assert_eq!(p("x^4+x^3+x^2+x+1").discriminant(), BigInt::from(125));
        assert_eq!(p("x^6+x^3+1").discriminant(), BigInt::from(-19683));
    }

    #[test]
    fn general_path_matches_cubic_formula() {
        let f = p("x^3 + 2x^2 - 7x + 5");
        let r = resultant(f.coeffs(), &f.derivative());
        assert_eq!(-r, f.discriminant());
    }

    #[test]
    fn parse_and_print() {
        let f = p("[1,0,-1,-1]");
        assert_eq!(f, p("x^3 - x - 1"));
        assert_eq!(f.to_string(), "[1,0,-1,-1]");
        assert_eq!(f.to_expr(), "x^3 - x - 1");
        assert_eq!(p("1, 0, 1"), p("x^2+1"));
        assert!("2x^2 + 1".parse::<IntegerPolynomial>().is_err());
        assert!("[1,a]".parse::<IntegerPolynomial>().is_err());
        assert!("7".parse::<IntegerPolynomial>().is_err());
    }

    #[test]
    fn shifts() {
        let f = p("x^3 - x - 1");
        assert_eq!(f.shift(&BigInt::from(1)), p("x^3 + 3x^2 + 2x - 1"));
        assert_eq!(f.negate_root(), p("x^3 - x + 1"));
        assert_eq!(f.shift(&BigInt::from(5)).discriminant(), f.discriminant());
    }
}
