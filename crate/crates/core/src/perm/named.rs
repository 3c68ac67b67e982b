//! Constructors for the concrete groups used throughout the crate.

use crate::error::{Error, Result};
use crate::ntheory;

use super::gf::FiniteField;
use super::group::{group_closure, PermGroup, DEFAULT_CAP};
use super::permutation::Permutation;

fn cycle(n: usize) -> Permutation {
    Permutation::from_raw((0..n as u32).map(|i| (i + 1) % n as u32).collect())
}

/// C_n acting regularly on n points.
pub fn cyclic(n: usize) -> Result<PermGroup> {
    if n == 0 {
        return Err(Error::pre("cyclic(n) needs n >= 1"));
    }
    group_closure(&[cycle(n)], DEFAULT_CAP)
}

/// D_m on the vertices of an m-gon: rotation `i -> i+1` and reflection `i -> 2-i` (mod m).
pub fn dihedral(m: usize) -> Result<PermGroup> {
    if m < 3 {
        return Err(Error::pre("dihedral(m) needs m >= 3"));
    }
    // 1-based i -> 2 - i is x -> -x on the 0-based labels
    let refl = Permutation::from_raw((0..m).map(|x| ((m - x) % m) as u32).collect());
    group_closure(&[cycle(m), refl], DEFAULT_CAP)
}

/// Smallest `v` in `1..m` whose multiplicative order mod `m` is `t`.
pub fn default_multiplier(m: u64, t: u64) -> Option<u64> {
    (1..m.max(2)).find(|&v| ntheory::multiplicative_order(v, m) == Some(t))
}

/// C_m ⋊ C_t on Z/m: sigma is `x -> x+1`, psi is `x -> v*x`.
pub fn semidirect_cyclic(m: u64, t: u64, v: Option<u64>) -> Result<PermGroup> {
    if m < 2 {
        return Err(Error::pre("semidirect needs m >= 2"));
    }
    let v = match v {
        Some(v) => v % m,
        None => default_multiplier(m, t).ok_or_else(|| Error::pre(format!("no unit of order {t} modulo {m}")))?,
    };
    if ntheory::multiplicative_order(v, m) != Some(t) {
        return Err(Error::pre(format!("{v} does not have order {t} modulo {m}")));
    }
    let sigma = cycle(m as usize);
    let psi = Permutation::from_raw((0..m).map(|x| ((v * x) % m) as u32).collect());
    let gens = if t == 1 { vec![sigma] } else { vec![sigma, psi] };
    group_closure(&gens, DEFAULT_CAP)
}

/// Affine maps `x -> a x^(p^j) + b` on GF(q) with `a` in the subgroup generated
/// by `g^power` (g the smallest primitive element) and, if `frobenius`, the
/// field automorphisms. Points are element codes plus one.
pub fn affine_gf(q: u64, power: u64, frobenius: bool) -> Result<PermGroup> {
    let field = FiniteField::new(q)?;
    if power == 0 || (q - 1) % power != 0 {
        return Err(Error::pre(format!("exponent {power} must divide {}", q - 1)));
    }
    let p = field.characteristic();
    let mut gens = Vec::new();
    for i in 0..field.extension_degree() {
        let b = p.pow(i) as u32;
        gens.push(Permutation::from_raw((0..q as u32).map(|x| field.add(x, b)).collect()));
    }
    let a = field.pow(field.primitive_element(), power);
    if a != 1 {
        gens.push(Permutation::from_raw((0..q as u32).map(|x| field.mul(a, x)).collect()));
    }
    if frobenius && field.extension_degree() > 1 {
        gens.push(Permutation::from_raw((0..q as u32).map(|x| field.pow(x, p)).collect()));
    }
    group_closure(&gens, DEFAULT_CAP)
}

/// S_n on n points.
pub fn symmetric(n: usize) -> Result<PermGroup> {
    match n {
        0 => Err(Error::pre("sym(n) needs n >= 1")),
        1 => Ok(PermGroup::trivial(1)),
        2 => cyclic(2),
        _ => {
            let t = Permutation::from_cycles(n, &[vec![1, 2]])?;
            group_closure(&[t, cycle(n)], DEFAULT_CAP)
        }
    }
}

/// A_n on n points.
pub fn alternating(n: usize) -> Result<PermGroup> {
    match n {
        0 => Err(Error::pre("alt(n) needs n >= 1")),
        1 | 2 => Ok(PermGroup::trivial(n)),
        _ => {
            let a = Permutation::from_cycles(n, &[vec![1, 2, 3]])?;
            let b = if n % 2 == 1 {
                cycle(n)
            } else {
                Permutation::from_cycles(n, &[(2..=n).collect()])?
            };
            group_closure(&[a, b], DEFAULT_CAP)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_reflection_is_two_minus_i() {
        let d5 = dihedral(5).unwrap();
        let s = Permutation::parse_cycles("(2 5)(3 4)", 5).unwrap();
        assert!(d5.contains(&s));
        assert_eq!(d5.order(), 10);
        assert_eq!(dihedral(7).unwrap().order(), 14);
    }

    #[test]
    fn semidirect_relation_holds() {
        for (m, t) in [(5u64, 4u64), (7, 3), (13, 4), (11, 5)] {
            let g = semidirect_cyclic(m, t, None).unwrap();
            assert_eq!(g.order() as u64, m * t);
            let v = default_multiplier(m, t).unwrap();
            let sigma = &g.generators()[0];
            let psi = &g.generators()[1];
            // psi sigma psi^-1 = sigma^v
            assert_eq!(sigma.conjugate_by(psi), sigma.pow(v));
            let kernel = g.subgroup(&[sigma.clone()]).unwrap();
            assert!(g.is_normal(&kernel));
        }
    }

    #[test]
    fn semidirect_rejects_wrong_order() {
        assert!(semidirect_cyclic(5, 4, Some(4)).is_err());
        assert!(semidirect_cyclic(5, 3, None).is_err());
    }

    #[test]
    fn frobenius_twenty() {
        let g = semidirect_cyclic(5, 4, Some(2)).unwrap();
        assert_eq!(g.order(), 20);
        assert!(g.is_transitive());
    }

    #[test]
    fn affine_groups() {
        assert_eq!(affine_gf(8, 1, false).unwrap().order(), 56);
        assert_eq!(affine_gf(8, 1, true).unwrap().order(), 168);
        assert_eq!(affine_gf(9, 2, false).unwrap().order(), 36);
        assert_eq!(affine_gf(4, 1, false).unwrap().order(), 12);
    }

    #[test]
    fn symmetric_and_alternating_orders() {
        let want = [(3, 6, 3), (4, 24, 12), (5, 120, 60), (6, 720, 360)];
        for (n, s, a) in want {
            assert_eq!(symmetric(n).unwrap().order(), s);
            assert_eq!(alternating(n).unwrap().order(), a);
        }
    }
}
