//! Permutation-group, Frobenius and Malle-index properties across many constructed groups.

use malle_core::malle::{
    ind_element, is_at_most_one, malle_a, malle_a_frobenius_closed_form, malle_a_regular_closed_form,
};
use malle_core::ntheory::{is_prime, multiplicative_order, smallest_prime_factor};
use malle_core::perm::{coset_action, group_closure, named_group, regular_action, semidirect_cyclic, DEFAULT_CAP};
use malle_core::structure::{abelian_normal_subgroups, frobenius_classify};
use malle_core::{ElementSet, PermGroup};
use proptest::prelude::*;

const DESCRIPTORS: &[&str] = &[
    "cyclic(2)",
    "cyclic(6)",
    "cyclic(9)",
    "dihedral(3)",
    "dihedral(4)",
    "dihedral(5)",
    "dihedral(9)",
    "dihedral(12)",
    "alt(4)",
    "sym(4)",
    "alt(5)",
    "semidirect(5,4)",
    "semidirect(7,3)",
    "semidirect(7,6)",
    "semidirect(11,5)",
    "semidirect(13,4)",
    "semidirect(9,2)",
    "affine_gf(8,gen)",
    "affine_gf(8,gen,frob)",
    "affine_gf(9,gen^2)",
    "affine_gf(9,gen^4)",
    "affine_gf(4,gen)",
    "product(cyclic(2),cyclic(3))",
    "product(alt(4),cyclic(2))",
    "transitive(6,4)",
    "transitive(6,10)",
];

fn build(i: usize, regular: bool) -> PermGroup {
    let g = named_group(DESCRIPTORS[i]).unwrap();
    if regular && g.order() <= 60 {
        regular_action(&g).unwrap()
    } else {
        g
    }
}

fn descriptor() -> impl Strategy<Value = (usize, bool)> {
    (0..DESCRIPTORS.len(), any::<bool>())
}

fn normalizes(g: &PermGroup, set: &ElementSet) -> bool {
    g.elements()
        .iter()
        .all(|x| set.iter().all(|f| set.contains(&f.conjugate_by(x))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cycle_types_and_indices((i, reg) in descriptor()) {
        let g = build(i, reg);
        for x in g.elements() {
            prop_assert_eq!(x.cycle_type().parts().iter().sum::<usize>(), g.degree());
            prop_assert_eq!(x.num_orbits() + ind_element(x), g.degree());
        }
    }

    #[test]
    fn closure_is_idempotent((i, reg) in descriptor()) {
        let g = build(i, reg);
        let again = group_closure(g.elements(), DEFAULT_CAP).unwrap();
        prop_assert_eq!(again.element_set(), g.element_set());
    }

    #[test]
    fn trivial_coset_action_is_regular(i in 0..DESCRIPTORS.len()) {
        let g = named_group(DESCRIPTORS[i]).unwrap();
        prop_assume!(g.order() <= 60);
        let r = coset_action(&g, &ElementSet::trivial(g.degree())).unwrap();
        prop_assert_eq!(r.degree(), g.order());
        prop_assert_eq!(r.order(), g.order());
        for pt in 1..=r.degree() {
            prop_assert!(r.stabilizer(pt).is_trivial());
        }
        prop_assert!(frobenius_classify(&r).unwrap().is_none());
    }

    #[test]
    fn frobenius_decomposition((i, reg) in descriptor()) {
        let g = build(i, reg);
        prop_assume!(g.is_transitive());
        if let Some(f) = frobenius_classify(&g).unwrap() {
            prop_assert_eq!(f.kernel.len() * f.complement.len(), g.order());
            prop_assert!(f.kernel.intersection(&f.complement).is_trivial());
            prop_assert_eq!(f.kernel.len(), g.degree());
            prop_assert!(normalizes(&g, &f.kernel));
        }
    }

    #[test]
    fn abelian_normal_subgroups_are_normal((i, reg) in descriptor()) {
        let g = build(i, reg);
        for f in abelian_normal_subgroups(&g) {
            prop_assert!(!f.is_trivial());
            prop_assert!(f.is_abelian());
            prop_assert!(normalizes(&g, &f));
        }
    }

    #[test]
    fn malle_exponent_at_most_one((i, reg) in descriptor()) {
        let g = build(i, reg);
        prop_assume!(g.is_transitive());
        let a = malle_a(&g).unwrap();
        prop_assert!(is_at_most_one(&a));
        prop_assert_eq!(ind_element(&a.witness), a.ind);
    }

    #[test]
    fn semidirect_order_and_normal_kernel(k in 0usize..40, pick in any::<prop::sample::Index>()) {
        let m = [5u64, 7, 9, 11, 13, 15, 21, 25, 27, 31][k % 10];
        let ts: Vec<u64> = (2..m).filter(|&t| {
            (1..m).any(|v| num_integer::gcd(v, m) == 1 && multiplicative_order(v, m) == Some(t))
        }).collect();
        prop_assume!(!ts.is_empty());
        let t = ts[pick.index(ts.len())];
        let g = semidirect_cyclic(m, t, None).unwrap();
        prop_assert_eq!(g.order() as u64, m * t);
        let sigma = g.elements().iter().find(|x| x.order() == m && x.num_orbits() == 1).unwrap().clone();
        let kernel = g.subgroup(&[sigma]).unwrap();
        prop_assert_eq!(kernel.len() as u64, m);
        prop_assert!(g.is_normal(&kernel));
    }
}

#[test]
fn frobenius_closed_form_matches_direct() {
    for m in (3..60u64).filter(|&m| is_prime(m)) {
        for t in (2..m).filter(|t| (m - 1) % t == 0) {
            let g = semidirect_cyclic(m, t, None).unwrap();
            let p1 = smallest_prime_factor(t).unwrap();
            assert_eq!(
                malle_a(&g).unwrap().value,
                malle_a_frobenius_closed_form(m, t, m, p1).unwrap(),
                "C_{m}:C_{t}"
            );
        }
    }
}

#[test]
fn regular_closed_form_matches_direct() {
    for d in DESCRIPTORS {
        let g = named_group(d).unwrap();
        if g.order() > 200 {
            continue;
        }
        let n = g.order() as u64;
        let direct = malle_a(&regular_action(&g).unwrap()).unwrap().value;
        assert_eq!(
            direct,
            malle_a_regular_closed_form(n, smallest_prime_factor(n).unwrap()).unwrap(),
            "{d}"
        );
    }
}
