//! Counting functions, slope fits, S3 towers and the cubic/class-group cross-check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{theorem_bound, Base, BoundContext, DegreeSelector};
use crate::error::{Error, Result};
use crate::field::{build_s3_tower, TowerRecord};
use crate::malle::malle_a;
use crate::perm::PermGroup;
use crate::quadclass::{negative_fundamentals, torsion_count};
use crate::structure::GroupAnalysis;
use crate::Rational;

use super::CensusCatalog;

#[derive(Debug, Clone, Serialize)]
pub struct SlopeFit {
    /// (X_i, N(X_i))
    pub points: Vec<(u64, u64)>,
    /// Least-squares slope of log N against log X over the top decade.
    pub slope: f64,
    /// Points used by the fit.
    pub fitted: usize,
    #[serde(serialize_with = "opt_rat")]
    pub reference_a: Option<Rational>,
    #[serde(rename = "reference_A", serialize_with = "opt_rat")]
    pub reference_big_a: Option<Rational>,
}

fn opt_rat<S: serde::Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// 10^(i/2) rounded down, for every value in [10, x], plus x itself.
pub fn default_checkpoints(x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 2;
    loop {
        let v = 10f64.powf(i as f64 / 2.0).floor() as u64;
        if v > x {
            break;
        }
        out.push(v);
        i += 1;
    }
    if out.last() != Some(&x) {
        out.push(x);
    }
    out
}

/// a(G, d) for the group and A(G, d) from Theorem 1 at d = |G| or d = m, when defined.
pub fn references(group: &PermGroup) -> (Option<Rational>, Option<Rational>) {
    let a = malle_a(group).ok().map(|m| m.value);
    let big_a = GroupAnalysis::analyze(group).ok().and_then(|an| {
        let sel = if group.degree() as u64 == an.m && an.in_f {
            DegreeSelector::Kernel
        } else if group.degree() == group.order() {
            DegreeSelector::Regular
        } else {
            return None;
        };
        theorem_bound(&an, sel, &BoundContext::seeded(Base::Rationals))
            .ok()
            .map(|r| r.value)
    });
    (a, big_a)
}

pub fn count_series(catalog: &CensusCatalog, checkpoints: &[u64], group: Option<&PermGroup>) -> Result<SlopeFit> {
    let discs: Vec<u64> = catalog
        .records
        .iter()
        .map(|r| r.abs_disc().to_u64().expect("|d| <= max_disc"))
        .collect();
    fit_counts(&discs, catalog.params.max_disc, checkpoints, group)
}

/// As [`count_series`] from the sorted |d| of a complete census up to `x`.
pub fn fit_counts(abs_discs: &[u64], x: u64, checkpoints: &[u64], group: Option<&PermGroup>) -> Result<SlopeFit> {
    if checkpoints.len() < 3 {
        return Err(Error::pre("a slope fit needs at least 3 checkpoints"));
    }
    if abs_discs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::pre("discriminants must be sorted by absolute value"));
    }
    if let Some(&bad) = checkpoints.iter().find(|&&c| c > x) {
        return Err(Error::pre(format!("checkpoint {bad} exceeds the catalog bound {x}")));
    }
    let mut cps = checkpoints.to_vec();
    cps.sort_unstable();
    cps.dedup();
    let points: Vec<(u64, u64)> = cps
        .iter()
        .map(|&c| (c, abs_discs.partition_point(|&d| d <= c) as u64))
        .collect();
    let top = *cps.last().expect("nonempty") as f64;
    let fit: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(c, k)| c as f64 >= top / 10.0 * (1.0 - 1e-12) && k > 0)
        .map(|&(c, k)| ((c as f64).ln(), (k as f64).ln()))
        .collect();
    if fit.len() < 3 {
        return Err(Error::pre(format!(
            "only {} nonzero checkpoints in the top decade; need 3",
            fit.len()
        )));
    }
    let m = fit.len() as f64;
    let mx = fit.iter().map(|p| p.0).sum::<f64>() / m;
    let my = fit.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = fit.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = fit.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    if !slope.is_finite() {
        return Err(Error::Invariant("slope fit is not finite".into()));
    }
    let (reference_a, reference_big_a) = group.map(references).unwrap_or((None, None));
    Ok(SlopeFit {
        points,
        slope,
        fitted: fit.len(),
        reference_a,
        reference_big_a,
    })
}

/// Towers for the `limit` smallest S3 cubics of the catalog (all when `None`).
pub fn build_s3_towers(catalog: &CensusCatalog, limit: Option<usize>) -> Result<Vec<TowerRecord>> {
    if catalog.params.degree != 3 {
        return Err(Error::pre("towers need a cubic catalog"));
    }
    let seed = catalog.params.seed;
    let s3: Vec<_> = catalog
        .records
        .iter()
        .filter(|r| r.galois_label.name == "S3")
        .take(limit.unwrap_or(usize::MAX))
        .collect();
    s3.par_iter().map(|k| build_s3_tower(k, seed)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct HasseRow {
    pub d: i64,
    pub cubic_fields: u64,
    pub torsion3: u64,
    pub expected: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HasseReport {
    pub x: u64,
    pub checked: usize,
    pub rows: Vec<HasseRow>,
    pub mismatches: Vec<HasseRow>,
}

/// For each fundamental -x <= D < 0, the cubic fields of discriminant D against
/// (|Cl_D[3]| - 1) / 2. Mismatches are reported, not raised.
pub fn hasse_crosscheck(x: u64, cubics: &CensusCatalog) -> Result<HasseReport> {
    if cubics.params.degree != 3 || cubics.params.max_disc < x || !cubics.params.labels.is_empty() {
        return Err(Error::pre(format!(
            "the cross-check needs an unfiltered cubic catalog up to {x}"
        )));
    }
    let mut per_disc: BTreeMap<BigInt, u64> = BTreeMap::new();
    for r in &cubics.records {
        *per_disc.entry(r.field_disc.clone()).or_insert(0) += 1;
    }
    let ds = negative_fundamentals(x.to_i64().ok_or_else(|| Error::pre("X too large"))?);
    let rows: Vec<HasseRow> = ds
        .par_iter()
        .map(|&d| {
            let t = torsion_count(d, 3)?;
            Ok(HasseRow {
                d,
                cubic_fields: per_disc.get(&BigInt::from(d)).copied().unwrap_or(0),
                torsion3: t,
                expected: (t - 1) / 2,
            })
        })
        .collect::<Result<_>>()?;
    let mismatches = rows.iter().filter(|r| r.cubic_fields != r.expected).cloned().collect();
    Ok(HasseReport {
        x,
        checked: rows.len(),
        rows,
        mismatches,
    })
}
