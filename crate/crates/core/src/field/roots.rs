//! Complex roots of monic integer polynomials in double precision.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::IntegerPolynomial;

fn qrem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() / b.last().unwrap();
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            r[k + j] -= t;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

/// Number of distinct real roots, by the signs of a Sturm sequence at plus and minus infinity.
pub fn real_root_count(f: &IntegerPolynomial) -> usize {
    let to_q = |v: &[BigInt]| -> Vec<BigRational> { v.iter().map(|c| BigRational::from_integer(c.clone())).collect() };
    let mut seq = vec![to_q(f.coeffs()), to_q(&f.derivative())];
    loop {
        let n = seq.len();
        let r = qrem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let changes = |signs: Vec<bool>| signs.windows(2).filter(|w| w[0] != w[1]).count();
    let plus: Vec<bool> = seq.iter().map(|p| p.last().unwrap().is_positive()).collect();
    let minus: Vec<bool> = seq
        .iter()
        .map(|p| p.last().unwrap().is_positive() ^ ((p.len() - 1) % 2 == 1))
        .collect();
    changes(minus) - changes(plus)
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        d = d * z + v;
        v = v * z + a;
    }
    (v, d)
}

/// All complex roots, real roots first (ascending), then complex pairs by real part
/// with the positive imaginary member first.
pub fn complex_roots(f: &IntegerPolynomial) -> Vec<Complex64> {
    let c = f.to_f64();
    let n = f.degree();
    // Cauchy bound for the initial circle
    let radius = 1.0 + c[..n].iter().map(|a| a.abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(radius.min(1e6).max(1.0) * 0.7, ang)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = horner(&c, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (v, d) = horner(&c, *r);
            if d.norm() > 0.0 {
                let step = v / d;
                if step.is_finite() {
                    *r -= step;
                }
            }
        }
    }
    // the exact real-root count decides which approximations are real
    let r1 = real_root_count(f);
    z.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
    let mut real: Vec<f64> = z[..r1].iter().map(|r| r.re).collect();
    let mut cplx: Vec<Complex64> = z[r1..].iter().filter(|r| r.im > 0.0).copied().collect();
    if cplx.len() * 2 != n - r1 {
        // a conjugate pair landed on the same side; pair by real part instead
        let mut rest: Vec<Complex64> = z[r1..].to_vec();
        rest.sort_by(|a, b| a.re.total_cmp(&b.re));
        cplx = rest
            .chunks(2)
            .map(|w| Complex64::new((w[0].re + w[1].re) / 2.0, w[0].im.abs().max(w[1].im.abs())))
            .collect();
    }
    real.sort_by(|a, b| a.total_cmp(b));
    cplx.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut out: Vec<Complex64> = real.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    for r in cplx {
        out.push(r);
        out.push(r.conj());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plastic_number() {
        let f: IntegerPolynomial = "x^3 - x - 1".parse().unwrap();
        let r = complex_roots(&f);
        assert_eq!(r.len(), 3);
        assert!((r[0].re - 1.324717957244746).abs() < 1e-12);
        assert!(r[0].im == 0.0);
        assert_eq!(real_root_count(&f), 1);
        assert_eq!(real_root_count(&"x^3 - 3x - 1".parse().unwrap()), 3);
        assert_eq!(real_root_count(&"x^4 - 2".parse().unwrap()), 2);
        assert!((r[1] - r[2].conj()).norm() < 1e-12);
    }

    #[test]
    fn cyclotomic_roots_on_circle() {
        let f: IntegerPolynomial = "x^6 + x^3 + 1".parse().unwrap();
        for z in complex_roots(&f) {
            assert!((z.norm() - 1.0).abs() < 1e-10);
        }
    }
}
