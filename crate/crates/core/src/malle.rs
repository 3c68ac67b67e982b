//! Malle's index and the exponent a(G, d).

use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ntheory;
use crate::perm::{PermGroup, Permutation};
use crate::{rat, Rational};

/// `d` minus the number of orbits of `g`.
pub fn ind_element(g: &Permutation) -> usize {
    g.degree() - g.num_orbits()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalleExponent {
    pub value: Rational,
    pub ind: usize,
    pub witness: Permutation,
    pub degree: usize,
}

#[derive(Serialize)]
struct MalleJson {
    degree: usize,
    ind: usize,
    a: String,
    a_decimal: f64,
    witness: String,
}

impl MalleExponent {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(MalleJson {
            degree: self.degree,
            ind: self.ind,
            a: self.value.to_string(),
            a_decimal: self.value.to_f64().unwrap_or(f64::NAN),
            witness: self.witness.to_cycle_string(),
        })
        .expect("serializes")
    }
}

/// a(G, d) = 1 / min ind(g) over nonidentity g; ties go to the first element
/// in the group's lexicographic order.
pub fn malle_a(group: &PermGroup) -> Result<MalleExponent> {
    if group.order() < 2 {
        return Err(Error::pre("a(G,d) needs a nontrivial group"));
    }
    if !group.is_transitive() {
        return Err(Error::pre("a(G,d) needs a transitive group"));
    }
    let (ind, witness) = group
        .elements()
        .iter()
        .filter(|g| !g.is_identity())
        .map(|g| (ind_element(g), g))
        .min_by_key(|&(i, _)| i)
        .expect("nontrivial group has a nonidentity element");
    Ok(MalleExponent {
        value: Rational::new(1.into(), ind.into()),
        ind,
        witness: witness.clone(),
        degree: group.degree(),
    })
}

/// 1 / (m - max(m/p, 1 + (m-1)/p1)) for C_m ⋊ C_t in its degree-m action.
pub fn malle_a_frobenius_closed_form(m: u64, t: u64, p: u64, p1: u64) -> Result<Rational> {
    if m < 2 || t < 1 {
        return Err(Error::pre("need m >= 2 and t >= 1"));
    }
    if !ntheory::is_prime(p) || m % p != 0 {
        return Err(Error::pre(format!("p = {p} must be a prime dividing m = {m}")));
    }
    if !ntheory::is_prime(p1) || t % p1 != 0 {
        return Err(Error::pre(format!("p1 = {p1} must be a prime dividing t = {t}")));
    }
    if (m - 1) % t != 0 {
        return Err(Error::pre(format!("t = {t} must divide m - 1 = {}", m - 1)));
    }
    let ind = m - (m / p).max(1 + (m - 1) / p1);
    Ok(rat(1, ind as i64))
}

/// p / (|G| (p - 1)) for the regular action, p the smallest prime dividing |G|.
pub fn malle_a_regular_closed_form(order: u64, p: u64) -> Result<Rational> {
    if ntheory::smallest_prime_factor(order) != Some(p) {
        return Err(Error::pre(format!("{p} is not the smallest prime divisor of {order}")));
    }
    Ok(Rational::new(p.into(), (order * (p - 1)).into()))
}

/// True when a(G,d) ≤ 1, which holds for every transitive nontrivial G.
pub fn is_at_most_one(a: &MalleExponent) -> bool {
    a.value <= Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::named_group;

    #[test]
    fn dihedral_five() {
        let d5 = named_group("D5").unwrap();
        let r = Permutation::parse_cycles("(1 2 3 4 5)", 5).unwrap();
        let s = Permutation::parse_cycles("(2 5)(3 4)", 5).unwrap();
        assert_eq!(ind_element(&r), 4);
        assert_eq!(ind_element(&s), 2);
        assert_eq!(ind_element(&Permutation::identity(5)), 0);
        assert_eq!(malle_a(&d5).unwrap().value, rat(1, 2));
        let reg = named_group("D5@regular").unwrap();
        assert_eq!(malle_a(&reg).unwrap().value, rat(1, 5));
        assert_eq!(malle_a(&named_group("A4").unwrap()).unwrap().value, rat(1, 2));
    }

    #[test]
    fn witness_is_first_minimizer() {
        let a = malle_a(&named_group("D5").unwrap()).unwrap();
        assert_eq!(ind_element(&a.witness), a.ind);
        let g = named_group("D5").unwrap();
        let first = g
            .elements()
            .iter()
            .find(|e| !e.is_identity() && ind_element(e) == 2)
            .unwrap();
        assert_eq!(&a.witness, first);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(malle_a_frobenius_closed_form(103, 17, 103, 17).unwrap(), rat(1, 96));
        assert_eq!(malle_a_frobenius_closed_form(5, 4, 5, 2).unwrap(), rat(1, 2));
        assert_eq!(malle_a_frobenius_closed_form(7, 3, 7, 3).unwrap(), rat(1, 4));
        assert_eq!(malle_a_regular_closed_form(12, 2).unwrap(), rat(1, 6));
        assert_eq!(malle_a_regular_closed_form(21, 3).unwrap(), rat(1, 14));
        assert_eq!(malle_a_regular_closed_form(14, 2).unwrap(), rat(1, 7));
        assert!(malle_a_frobenius_closed_form(7, 4, 7, 2).is_err());
        assert!(malle_a_regular_closed_form(12, 3).is_err());
    }

    #[test]
    fn trivial_and_intransitive_rejected() {
        assert!(malle_a(&named_group("C1").unwrap()).is_err());
        assert!(malle_a(&named_group("gens(3;(1 2))").unwrap()).is_err());
    }
}
