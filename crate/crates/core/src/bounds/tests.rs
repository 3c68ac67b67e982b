use proptest::prelude::*;

use super::*;
use crate::perm::named_group;

fn analysis(desc: &str) -> GroupAnalysis {
    GroupAnalysis::analyze(&named_group(desc).unwrap()).unwrap()
}

#[test]
fn frobenius_twenty_degree_five() {
    let an = analysis("semidirect(5,4)");
    let res = theorem_bound(&an, DegreeSelector::Kernel, &BoundContext::seeded(Base::General)).unwrap();
    assert_eq!(res.value, rat(1, 1));
    assert_eq!(res.branch, "torsion-term/kernel");
    res.replay().unwrap();
}

#[test]
fn a4_over_rationals() {
    let an = analysis("alt(4)");
    let res = theorem_bound(&an, DegreeSelector::Kernel, &BoundContext::seeded(Base::Rationals)).unwrap();
    assert_eq!(res.value, rat(7784, 10000));
    let general = theorem_bound(&an, DegreeSelector::Kernel, &BoundContext::seeded(Base::General)).unwrap();
    assert_eq!(general.value, rat(1, 1));
}

#[test]
fn order_168_recurses_through_order_21() {
    let an = analysis("affine_gf(8,gen,frob)");
    let res = theorem_bound(&an, DegreeSelector::Regular, &BoundContext::seeded(Base::General)).unwrap();
    assert_eq!(res.value, rat(9, 112));
    assert!(res.flags.iter().any(|f| f.contains("recursion")));
    assert!(res
        .trace
        .iter()
        .any(|s| s.rule == "recurse/a1" && s.output == rat(1, 7)));
    res.replay().unwrap();
    let conj = theorem_bound(&an, DegreeSelector::Regular, &BoundContext::conjecture(Base::General)).unwrap();
    assert_eq!(conj.value, rat(1, 84));
    assert!(theorem_bound(&an, DegreeSelector::Kernel, &BoundContext::seeded(Base::General)).is_err());
}

#[test]
fn unresolved_a1_lists_needs() {
    let mut ctx = BoundContext::seeded(Base::General);
    ctx.counts = CountExponentRegistry::empty();
    let an = analysis("semidirect(7,3)");
    match theorem_bound(&an, DegreeSelector::Kernel, &ctx) {
        Err(Error::Unresolved(needs)) => assert!(needs[0].contains("a1(C_3, 3)"), "{needs:?}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn rationals_rows() {
    let ctx = BoundContext::seeded(Base::Rationals);
    let res = theorem_bound(&analysis("affine_gf(8,gen)"), DegreeSelector::Kernel, &ctx).unwrap();
    assert_eq!(res.value, rat(5, 8));
    let res = theorem_bound(&analysis("semidirect(103,17)"), DegreeSelector::Kernel, &ctx).unwrap();
    let refined = refined_ptbw_bound(103, 17, 103, 17).unwrap();
    assert_eq!(res.value, refined.value);
    assert_eq!(refined.value, rat(17, 102) * (rat(1, 16) + rat(1, 2) - rat(1, 3296)));
    assert!((refined.decimal() - 0.09369).abs() < 1e-5);
}

#[test]
fn refined_examples() {
    // (2/4)(1 + 1/2 - 1/(2*5*1)) = 7/10, which is the D_5 closed form 3/4 - 1/20
    let r = refined_ptbw_bound(5, 2, 5, 2).unwrap();
    assert_eq!(r.value, rat(7, 10));
    assert_eq!(r.value, rat(3, 4) - rat(1, 20));
    let r = refined_ptbw_bound(7, 3, 7, 3).unwrap();
    assert_eq!(r.value, rat(1, 2) * (rat(1, 2) + rat(1, 2) - rat(1, 28)));
    r.replay().unwrap();
    assert!(r.trace.iter().any(|s| s.rule == "side-condition"));
    assert!(refined_ptbw_bound(5, 4, 5, 2).is_err());
}

#[test]
fn dihedral_rows() {
    for l in [3u64, 5, 7, 11] {
        let c = dihedral_comparison(l).unwrap();
        assert_eq!(c.kernel_bound, c.kernel_stated);
        assert_eq!(c.regular_bound, c.regular_from_theorem);
        assert_ne!(c.regular_bound, c.regular_stated);
    }
}

#[test]
fn r_values() {
    assert_eq!(r_value(true, 12, 2, &[]).unwrap(), 6);
    assert_eq!(r_value(false, 0, 3, &[]).unwrap(), 2);
    assert_eq!(r_value(false, 0, 2, &[kluners_override()]).unwrap(), 2);
    let uncited = ROverride {
        value: 4,
        citation: " ".into(),
    };
    assert!(r_value(false, 0, 2, &[uncited]).is_err());
    let lower = ROverride {
        value: 1,
        citation: "x".into(),
    };
    assert!(r_value(true, 12, 2, &[lower]).is_err());
    assert!(r_value(true, 9, 2, &[]).is_err());
}

#[test]
fn special_cases_are_half() {
    let torsion = TorsionExponentRegistry::seeded();
    for case in SpecialCase::ALL {
        let res = special_degree_bound(case, &torsion);
        assert_eq!(res.value, rat(1, 2), "{}", case.name());
        res.replay().unwrap();
        assert_eq!(SpecialCase::parse(case.name()).unwrap(), case);
    }
    let a4 = special_degree_bound(SpecialCase::A4Deg6, &torsion);
    assert!(a4.branch.starts_with("census term X^(1/2) dominates"));
    let f36 = special_degree_bound(SpecialCase::C3sqC4Deg6, &torsion);
    assert!(f36.trace.iter().any(|s| s.note.contains("(X^(1/3))^(a1 + D - 3/2)")));
    assert!(SpecialCase::parse("S4_deg6").is_err());
}

#[test]
fn limitation_examples() {
    let l = limitation_analysis(&rat(1, 4), &rat(1, 10), 4, 8).unwrap();
    assert!(l.holds);
    assert_eq!(l.exponent, rat(1, 8));
    let l = limitation_analysis(&rat(1, 1), &rat(1, 2), 2, 2).unwrap();
    assert!(!l.holds);
    assert_eq!(l.exponent, rat(3, 4));
    let l = limitation_analysis(&rat(1, 6), &rat(1, 12), 2, 8).unwrap();
    assert!(l.holds);
    assert_eq!(l.exponent, rat(1, 8));
    assert!(limitation_analysis(&rat(1, 6), &rat(1, 12), 1, 8).is_err());
}

#[test]
fn corollary_holds_on_catalog() {
    for e in catalog() {
        let an = analysis(e.descriptor);
        assert!(corollary_mode_check(&an, Base::General).unwrap(), "{}", e.name);
    }
}

#[test]
fn table_flags_the_discrepant_rows() {
    let rows = example_table(&[3, 5]).unwrap();
    let flagged: Vec<_> = rows
        .iter()
        .filter(|r| r.status.is_flagged())
        .map(|r| r.degree)
        .collect();
    assert_eq!(flagged, vec![8, 103]);
    let t = rows.iter().find(|r| r.degree == 103).unwrap();
    assert!(t.status.to_string().contains("transposed"));
    let a4 = rows.iter().find(|r| r.degree == 4).unwrap();
    assert!(matches!(a4.status, RowStatus::WithinTolerance(_)));
}

#[test]
fn table_descriptors_are_canonical() {
    for r in example_table(&[3]).unwrap() {
        let d = crate::perm::GroupDescriptor::parse(&r.descriptor).unwrap();
        assert_eq!(d.to_string(), r.descriptor);
    }
}

fn catalog_index() -> impl Strategy<Value = usize> {
    0..catalog().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn branches_replay(i in catalog_index(), q in any::<bool>()) {
        let an = analysis(catalog()[i].descriptor);
        let ctx = BoundContext::seeded(if q { Base::Rationals } else { Base::General });
        for sel in [DegreeSelector::Kernel, DegreeSelector::Regular] {
            if let Ok(res) = theorem_bound(&an, sel, &ctx) {
                prop_assert!(res.replay().is_ok());
                prop_assert_eq!(res.branches.len(), 2);
                let max = res.branches.iter().map(|b| b.1.clone()).max().unwrap();
                prop_assert_eq!(&res.value, &max);
            }
        }
    }

    #[test]
    fn registry_increase_is_monotone(
        i in catalog_index(),
        d0 in 0i64..=50, dd in 0i64..=50,
        a0 in 0i64..=100, da in 0i64..=100,
    ) {
        let an = analysis(catalog()[i].descriptor);
        let h = an.quotient().unwrap();
        let label = group_label(&h);
        let t = h.order() as u64;
        let q = an.p;
        let build = |d: i64, a: i64| {
            let mut ctx = BoundContext::seeded(Base::General);
            ctx.torsion = TorsionExponentRegistry::empty();
            ctx.torsion.insert(Base::General, &label, q, rat(d.min(50), 100), "test").unwrap();
            ctx.counts = CountExponentRegistry::empty();
            ctx.counts.insert(&label, t, Base::General, rat(a, 100), "test");
            ctx
        };
        let lo = build(d0, a0);
        let hi = build((d0 + dd).min(50), a0 + da);
        for sel in [DegreeSelector::Kernel, DegreeSelector::Regular] {
            if let (Ok(x), Ok(y)) = (theorem_bound(&an, sel, &lo), theorem_bound(&an, sel, &hi)) {
                prop_assert!(x.value <= y.value);
            }
        }
    }

    #[test]
    fn overrides_only_raise(galois in any::<bool>(), k in 1u64..20, pi in 0usize..4, extra in 0u64..10) {
        let p = [2u64, 3, 5, 7][pi];
        let order = p * k;
        let base = r_value(galois, order, p, &[]).unwrap();
        let o = ROverride { value: base + extra, citation: "cited".into() };
        prop_assert_eq!(r_value(galois, order, p, &[o]).unwrap(), base + extra);
        if base > 0 {
            let low = ROverride { value: base - 1, citation: "cited".into() };
            prop_assert!(r_value(galois, order, p, &[low]).is_err());
        }
    }
}
