//! Number-field invariants on random small polynomials.

use malle_core::field::galois::sample_label;
use malle_core::field::{
    build_s3_tower, canonical_generator, galois_label, is_irreducible, maximal_order_disc, Confidence,
    IntegerPolynomial, NumberFieldRecord,
};
use malle_core::ntheory::is_square_big;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn poly(c: &[i64]) -> IntegerPolynomial {
    IntegerPolynomial::from_descending(c).unwrap()
}

fn irreducible_cubic() -> impl Strategy<Value = IntegerPolynomial> {
    (-3i64..=3, -8i64..=8, -8i64..=8)
        .prop_map(|(a, b, c)| poly(&[1, a, b, c]))
        .prop_filter("irreducible", |f| is_irreducible(f).unwrap())
}

fn irreducible_quartic() -> impl Strategy<Value = IntegerPolynomial> {
    (-2i64..=2, -5i64..=5, -5i64..=5, -5i64..=5)
        .prop_map(|(a, b, c, d)| poly(&[1, a, b, c, d]))
        .prop_filter("irreducible", |f| is_irreducible(f).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn discriminant_quotient_is_square(f in prop_oneof![irreducible_cubic(), irreducible_quartic()]) {
        let mo = maximal_order_disc(&f).unwrap();
        let pd = f.discriminant();
        let (q, r) = pd.div_rem(&mo.field_disc);
        prop_assert!(r == BigInt::from(0));
        prop_assert!(is_square_big(&q));
        prop_assert!(mo.field_disc.abs() > BigInt::one());
    }

    #[test]
    fn field_disc_is_independent_of_generator(f in irreducible_cubic(), k in -3i64..=3, neg in any::<bool>()) {
        let mut g = f.shift(&BigInt::from(k));
        if neg {
            g = g.negate_root();
        }
        let a = NumberFieldRecord::from_poly(&f, 0).unwrap();
        let b = NumberFieldRecord::from_poly(&g, 0).unwrap();
        a.check().unwrap();
        prop_assert_eq!(&a.field_disc, &maximal_order_disc(&f).unwrap().field_disc);
        prop_assert_eq!(&a.field_disc, &maximal_order_disc(&g).unwrap().field_disc);
        prop_assert_eq!(&a.defining_poly, &b.defining_poly);
        prop_assert_eq!(canonical_generator(&a.defining_poly).unwrap(), a.defining_poly.clone());
    }

    #[test]
    fn quartic_records_satisfy_minkowski(f in irreducible_quartic()) {
        let r = NumberFieldRecord::from_poly(&f, 1).unwrap();
        r.check().unwrap();
        prop_assert_eq!(r.degree, 4);
    }

    #[test]
    fn cubic_label_matches_sampling(f in irreducible_cubic(), seed in 0u64..1000) {
        let certified = galois_label(&f, seed).unwrap();
        prop_assert_eq!(certified.confidence, Confidence::Certified);
        prop_assert_eq!(sample_label(&f, seed).unwrap().label, certified.label);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn s3_towers_satisfy_both_relations(f in irreducible_cubic()) {
        let k = NumberFieldRecord::from_poly(&f, 0).unwrap();
        prop_assume!(k.galois_label.name == "S3");
        let t = build_s3_tower(&k, 0).unwrap();
        prop_assert!(t.brauer_holds().unwrap());
        prop_assert!(t.tower_holds());
        prop_assert_eq!(t.n.degree, 6);
        prop_assert_eq!(t.m.degree, 2);
    }
}
