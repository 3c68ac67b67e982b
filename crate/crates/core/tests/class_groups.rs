//! Composition-law and torsion properties of form class groups.

use malle_core::field::{build_s3_tower, IntegerPolynomial, NumberFieldRecord};
use malle_core::quadclass::{class_group, negative_fundamentals, reduced_forms, torsion_size, QuadraticForm};
use proptest::prelude::*;

fn discriminants() -> Vec<i64> {
    negative_fundamentals(10_000)
}

fn disc_and_forms() -> impl Strategy<Value = (i64, usize, usize, usize)> {
    (0..discriminants().len(), any::<usize>(), any::<usize>(), any::<usize>())
        .prop_map(|(i, a, b, c)| (discriminants()[i], a, b, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn composition_is_an_abelian_group_law((d, i, j, k) in disc_and_forms()) {
        let forms = reduced_forms(d);
        let (f, g, h) = (forms[i % forms.len()], forms[j % forms.len()], forms[k % forms.len()]);
        prop_assert_eq!(f.compose(&g).reduce(), g.compose(&f).reduce());
        prop_assert_eq!(
            f.compose(&g).reduce().compose(&h).reduce(),
            f.compose(&g.compose(&h).reduce()).reduce()
        );
        let e = QuadraticForm::identity(d);
        prop_assert_eq!(f.compose(&e).reduce(), f);
        prop_assert_eq!(f.compose(&f.inverse()).reduce(), e);
        prop_assert_eq!(f.inverse(), QuadraticForm::new(f.a, -f.b, f.c).reduce());
        prop_assert!(forms.contains(&f.compose(&g).reduce()));
    }

    #[test]
    fn torsion_divides_class_number(i in 0..discriminants().len(), m in 2u64..12) {
        let g = class_group(discriminants()[i]).unwrap();
        prop_assert_eq!(g.h % torsion_size(&g, m), 0);
        prop_assert_eq!(torsion_size(&g, g.h), g.h);
        prop_assert_eq!(g.invariant_factors.iter().product::<u64>(), g.h);
        prop_assert_eq!(g.h as usize, reduced_forms(g.d).len());
        prop_assert!(g.invariant_factors.windows(2).all(|w| w[1] % w[0] == 0));
    }

    #[test]
    fn powers_follow_exponent_laws((d, i, _, _) in disc_and_forms(), a in 0u64..20, b in 0u64..20) {
        let forms = reduced_forms(d);
        let f = forms[i % forms.len()];
        prop_assert_eq!(f.pow(a).compose(&f.pow(b)).reduce(), f.pow(a + b));
        prop_assert_eq!(f.pow(forms.len() as u64), QuadraticForm::identity(d));
    }
}

#[test]
fn unramified_sextic_and_three_torsion_at_minus_23() {
    let k = NumberFieldRecord::from_poly(&IntegerPolynomial::from_descending(&[1, 0, -1, -1]).unwrap(), 0).unwrap();
    let tower = build_s3_tower(&k, 0).unwrap();
    assert_eq!(tower.relnorm, 1.into());
    let g = class_group(-23).unwrap();
    assert_eq!(g.h % 3, 0);
    assert_eq!(torsion_size(&g, 3), 3);
}
