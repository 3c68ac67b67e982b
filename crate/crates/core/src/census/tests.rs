use super::*;

fn discs(cat: &CensusCatalog) -> Vec<i64> {
    cat.records.iter().map(|r| r.field_disc.to_i64().unwrap()).collect()
}

fn run(params: &CensusParams) -> CensusCatalog {
    enumerate_fields(params, &RunOptions::default()).unwrap()
}

#[test]
fn quadratic_small() {
    let mut d = discs(&enumerate_quadratic(10).unwrap());
    d.sort();
    assert_eq!(d, vec![-8, -7, -4, -3, 5, 8]);
    assert_eq!(enumerate_quadratic(3).unwrap().records.len(), 1);
    assert_eq!(enumerate_quadratic(4).unwrap().records.len(), 2);
}

#[test]
fn quadratic_records_are_canonical() {
    for r in enumerate_quadratic(60).unwrap().records {
        let g = crate::field::canonical_generator(&r.defining_poly).unwrap();
        assert_eq!(g, r.defining_poly);
        r.check().unwrap();
    }
}

#[test]
fn cubic_counts() {
    let s3 = run(&CensusParams::new(3, 23).with_labels(&["S3"]));
    assert_eq!(discs(&s3), vec![-23]);
    assert_eq!(run(&CensusParams::new(3, 48).with_labels(&["C3"])).records.len(), 0);
    assert_eq!(
        discs(&run(&CensusParams::new(3, 81).with_labels(&["C3"]))),
        vec![49, 81]
    );
}

#[test]
fn cubic_fields_up_to_500() {
    let cat = run(&CensusParams::new(3, 500));
    let d = discs(&cat);
    assert_eq!(d.len(), 70);
    assert_eq!(d.iter().filter(|&&x| x < 0).count(), 58);
    let pos: Vec<i64> = d.iter().copied().filter(|&x| x > 0).collect();
    assert_eq!(pos, vec![49, 81, 148, 169, 229, 257, 316, 321, 361, 404, 469, 473]);
    // a strictly larger box finds nothing new
    let naive = enumerate_in_box(
        &CensusParams::new(3, 500),
        &CoefficientBox::Naive { trace: 2, scale: 2.0 },
        &RunOptions::default(),
    )
    .unwrap();
    assert_eq!(naive.records, cat.records);
    assert!(naive.examined > cat.examined);
}

#[test]
fn cyclic_quartic() {
    let cat = run(&CensusParams::new(4, 200).with_labels(&["C4"]));
    assert_eq!(discs(&cat), vec![125]);
    assert_eq!(cat.records[0].defining_poly.to_expr(), "x^4 - x^3 + x^2 - x + 1");
}

#[test]
fn worker_count_does_not_change_output() {
    let p = CensusParams::new(3, 400);
    let one = enumerate_fields(
        &p,
        &RunOptions {
            workers: 1,
            ..Default::default()
        },
    )
    .unwrap();
    let four = enumerate_fields(
        &p,
        &RunOptions {
            workers: 4,
            ..Default::default()
        },
    )
    .unwrap();
    let (mut a, mut b) = (Vec::new(), Vec::new());
    one.write_csv(&mut a, &[]).unwrap();
    four.write_csv(&mut b, &[]).unwrap();
    assert_eq!(a, b);
}

#[test]
fn budget_checkpoint_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cp.json");
    let p = CensusParams::new(3, 300);
    let opts = RunOptions {
        workers: 2,
        budget: Some(1),
        checkpoint: Some(path.clone()),
        cancel: None,
    };
    match enumerate_fields(&p, &opts) {
        Err(Error::Budget { examined, .. }) => assert!(examined >= 1),
        other => panic!("expected a budget stop, got {other:?}"),
    }
    assert!(path.exists());
    let resumed = enumerate_fields(&p, &RunOptions { budget: None, ..opts }).unwrap();
    assert_eq!(resumed.records, run(&p).records);
    assert!(!path.exists());
}

#[test]
fn cancel_flag_interrupts() {
    let flag = Arc::new(AtomicBool::new(true));
    let opts = RunOptions {
        cancel: Some(flag),
        ..Default::default()
    };
    assert!(matches!(
        enumerate_fields(&CensusParams::new(3, 300), &opts),
        Err(Error::Interrupted(_))
    ));
}

#[test]
fn csv_round_trip() {
    let cat = run(&CensusParams::new(3, 100));
    let mut buf = Vec::new();
    cat.write_csv(&mut buf, &["malle-lab test".into()]).unwrap();
    let rows = read_catalog_csv(buf.as_slice()).unwrap();
    assert_eq!(rows.len(), cat.records.len());
    assert_eq!(rows[0].field_disc, BigInt::from(-23));
    assert_eq!(rows[0].poly, cat.records[0].defining_poly);
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("# malle-lab test\ndegree,field_disc,galois_label"));
}

#[test]
fn series_and_checkpoints() {
    assert_eq!(default_checkpoints(1000), vec![10, 31, 100, 316, 1000]);
    let cat = enumerate_quadratic(10_000).unwrap();
    let fit = count_series(&cat, &default_checkpoints(10_000), None).unwrap();
    assert_eq!(fit.fitted, 3);
    assert!((fit.slope - 1.0).abs() < 0.05);
    let counts: Vec<u64> = fit.points.iter().map(|p| p.1).collect();
    assert!(counts.windows(2).all(|w| w[0] <= w[1]));
    assert!(count_series(&cat, &[10, 100], None).is_err());
}

#[test]
fn hasse_small() {
    let cat = run(&CensusParams::new(3, 300));
    let rep = hasse_crosscheck(300, &cat).unwrap();
    assert!(rep.mismatches.is_empty(), "{:?}", rep.mismatches);
    let row = rep.rows.iter().find(|r| r.d == -23).unwrap();
    assert_eq!((row.cubic_fields, row.torsion3), (1, 3));
    assert_eq!(rep.rows.iter().find(|r| r.d == -3).unwrap().cubic_fields, 0);
}
