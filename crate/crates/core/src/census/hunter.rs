//! Coefficient boxes from Hunter's theorem, refined by power-sum bounds.

use serde::{Deserialize, Serialize};

/// Hermite constants gamma_1 .. gamma_5.
pub fn hermite(k: usize) -> f64 {
    match k {
        1 => 1.0,
        2 => (4.0f64 / 3.0).sqrt(),
        3 => 2f64.powf(1.0 / 3.0),
        4 => 2f64.sqrt(),
        5 => 8f64.powf(0.2),
        _ => panic!("Hermite constant gamma_{k} is not tabulated"),
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Hunter's T2 bound for trace coefficient a_{n-1} = a1 and |d| <= x.
pub fn t2_bound(n: usize, a1: i64, x: u64) -> f64 {
    let nf = n as f64;
    (a1 * a1) as f64 / nf + hermite(n - 1) * (x as f64 / nf).powf(1.0 / (nf - 1.0))
}

/// Coefficient search region: a_{n-1} range and a T2 bound per a_{n-1}.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub enum CoefficientBox {
    /// 0 <= a_{n-1} <= n/2 with Hunter's bound.
    Hunter,
    /// |a_{n-1}| <= trace and T2 <= scale * (Hunter bound at a_{n-1} = n/2); a
    /// strictly larger region used to cross-check completeness.
    Naive { trace: i64, scale: f64 },
}

impl CoefficientBox {
    pub fn describe(&self, n: usize, x: u64) -> String {
        match self {
            CoefficientBox::Hunter => format!(
                "Hunter box: 0 <= a_{{n-1}} <= {}, T2 <= a_{{n-1}}^2/{n} + gamma_{}*(X/{n})^(1/{}) with X = {x}; \
                 |s_k| <= T2^(k/2) and |a_{{n-k}}| <= C({n},k)(T2/{n})^(k/2). Every field of degree {n} without a \
                 proper intermediate subfield has a generator in this box",
                n / 2,
                n - 1,
                n - 1
            ),
            CoefficientBox::Naive { trace, scale } => {
                format!("naive box: |a_{{n-1}}| <= {trace}, T2 <= {scale} * Hunter bound, X = {x}")
            }
        }
    }

    fn traces(&self, n: usize) -> Vec<i64> {
        match self {
            CoefficientBox::Hunter => (0..=(n as i64) / 2).collect(),
            CoefficientBox::Naive { trace, .. } => (-trace..=*trace).collect(),
        }
    }

    fn bound(&self, n: usize, a1: i64, x: u64) -> f64 {
        match self {
            CoefficientBox::Hunter => t2_bound(n, a1, x),
            CoefficientBox::Naive { scale, .. } => scale * t2_bound(n, a1.abs().max(n as i64 / 2), x),
        }
    }
}

/// Fixed leading coefficients (a_{n-1}, a_{n-2}) plus the T2 bound; one unit of
/// parallel work.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prefix {
    pub a1: i64,
    pub a2: i64,
    pub t2: f64,
}

/// Newton: p_k + c_1 p_{k-1} + ... + c_{k-1} p_1 + k c_k = 0, with c_i = a_{n-i}.
fn coefficient_range(n: usize, k: usize, c: &[i64], s: &[i128], t2: f64) -> Option<(i64, i64)> {
    let partial: i128 = (1..k).map(|i| c[i] as i128 * s[k - i]).sum();
    let sk = t2.powf(k as f64 / 2.0) * (1.0 + 1e-9) + 1e-9;
    let lo_newton = (-sk - partial as f64) / k as f64;
    let hi_newton = (sk - partial as f64) / k as f64;
    let mac = binomial(n, k) * (t2 / n as f64).powf(k as f64 / 2.0) * (1.0 + 1e-9) + 1e-9;
    let lo = lo_newton.max(-mac).ceil();
    let hi = hi_newton.min(mac).floor();
    if lo > hi {
        return None;
    }
    Some((lo as i64, hi as i64))
}

/// Power sum p_k from c_1..c_k and p_1..p_{k-1}.
fn power_sum(k: usize, c: &[i64], s: &[i128]) -> i128 {
    let partial: i128 = (1..k).map(|i| c[i] as i128 * s[k - i]).sum();
    -partial - k as i128 * c[k] as i128
}

pub fn prefixes(n: usize, x: u64, region: &CoefficientBox) -> Vec<Prefix> {
    let mut out = Vec::new();
    for a1 in region.traces(n) {
        let t2 = region.bound(n, a1, x);
        let c = [0, a1, 0];
        let s = [n as i128, -(a1 as i128)];
        if let Some((lo, hi)) = coefficient_range(n, 2, &c, &s, t2) {
            for a2 in lo..=hi {
                out.push(Prefix { a1, a2, t2 });
            }
        }
    }
    out
}

/// Calls `visit` with the descending coefficient list [1, a_{n-1}, ..., a_0] of
/// every polynomial in the prefix's box with a_0 != 0. Returns the count visited.
pub fn for_each_in_prefix(n: usize, pre: &Prefix, mut visit: impl FnMut(&[i64])) -> u64 {
    let mut c = vec![0i64; n + 1];
    let mut s = vec![0i128; n + 1];
    c[0] = 1;
    s[0] = n as i128;
    c[1] = pre.a1;
    s[1] = power_sum(1, &c, &s);
    c[2] = pre.a2;
    s[2] = power_sum(2, &c, &s);
    if n == 2 {
        if c[2] != 0 {
            visit(&c);
            return 1;
        }
        return 0;
    }
    let mut count = 0;
    fn rec(
        k: usize,
        n: usize,
        t2: f64,
        c: &mut Vec<i64>,
        s: &mut Vec<i128>,
        count: &mut u64,
        visit: &mut dyn FnMut(&[i64]),
    ) {
        let Some((lo, hi)) = coefficient_range(n, k, c, s, t2) else {
            return;
        };
        for v in lo..=hi {
            c[k] = v;
            s[k] = power_sum(k, c, s);
            if k == n {
                if v != 0 {
                    *count += 1;
                    visit(c);
                }
            } else {
                rec(k + 1, n, t2, c, s, count, visit);
            }
        }
    }
    rec(3, n, pre.t2, &mut c, &mut s, &mut count, &mut visit);
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_box_contains_small_fields() {
        // x^3 - x - 1 (disc -23) has a_{n-1} = 0 and must appear for X = 23
        let mut seen = false;
        for pre in prefixes(3, 23, &CoefficientBox::Hunter) {
            for_each_in_prefix(3, &pre, |c| seen |= c == [1, 0, -1, -1]);
        }
        assert!(seen);
    }

    #[test]
    fn power_sums_match_roots() {
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6: p_1 = 6, p_2 = 14, p_3 = 36
        let c = [1, -6, 11, -6];
        let mut s = vec![3i128, 0, 0, 0];
        for k in 1..=3 {
            s[k] = power_sum(k, &c, &s);
        }
        assert_eq!(s, vec![3, 6, 14, 36]);
    }
}
