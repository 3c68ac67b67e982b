//! Census determinism and counting-function properties.

use malle_core::census::{enumerate_fields, enumerate_quadratic, fit_counts, CensusParams, RunOptions};
use num_traits::ToPrimitive;
use proptest::prelude::*;

#[test]
fn quartic_census_is_worker_independent() {
    let p = CensusParams::new(4, 1200);
    let csv = |workers| {
        let cat = enumerate_fields(
            &p,
            &RunOptions {
                workers,
                ..Default::default()
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        cat.write_csv(&mut buf, &[]).unwrap();
        buf
    };
    let one = csv(1);
    assert_eq!(one, csv(3));
    // the smallest quartic discriminants: 117 (totally complex D4), 125 (C4), 144 (V4)
    let text = String::from_utf8(one).unwrap();
    let discs: Vec<&str> = text
        .lines()
        .skip(1)
        .take(3)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(discs, ["117", "125", "144"]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn counts_are_nondecreasing(mut cps in prop::collection::vec(10u64..=5000, 3..8)) {
        let cat = enumerate_quadratic(5000).unwrap();
        let discs: Vec<u64> = cat.records.iter().map(|r| r.abs_disc().to_u64().unwrap()).collect();
        cps.push(5000);
        match fit_counts(&discs, 5000, &cps, None) {
            Ok(fit) => {
                prop_assert!(fit.points.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
                prop_assert_eq!(fit.points.last().unwrap().1 as usize, cat.records.len());
            }
            Err(e) => prop_assert!(e.to_string().contains("top decade") || e.to_string().contains("at least 3")),
        }
    }
}
