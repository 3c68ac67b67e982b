//! Complete enumeration of number fields of small degree by discriminant.

pub mod hunter;
mod series;

use std::collections::BTreeSet;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::canonical::canonical_generator_from;
use crate::field::order::maximal_order_at;
use crate::field::poly::cubic_disc;
use crate::field::roots::real_root_count;
use crate::field::{is_irreducible, Confidence, IntegerPolynomial, NumberFieldRecord};
use crate::ntheory;
use crate::perm::label_by_name;

pub use hunter::CoefficientBox;
pub use series::{
    build_s3_towers, count_series, default_checkpoints, fit_counts, hasse_crosscheck, references, HasseReport,
    HasseRow, SlopeFit,
};

/// What to enumerate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusParams {
    pub degree: usize,
    /// Galois labels to keep; empty keeps every label.
    pub labels: Vec<String>,
    pub max_disc: u64,
    /// (real embeddings, complex pairs) filter.
    pub signature: Option<(usize, usize)>,
    /// Seed for sampled Galois labels.
    pub seed: u64,
}

impl CensusParams {
    pub fn new(degree: usize, max_disc: u64) -> Self {
        CensusParams {
            degree,
            labels: Vec::new(),
            max_disc,
            signature: None,
            seed: 0,
        }
    }

    pub fn with_labels(mut self, labels: &[&str]) -> Self {
        self.labels = labels.iter().map(|s| s.to_string()).collect();
        self
    }

    fn validate(&self) -> Result<()> {
        if !(2..=6).contains(&self.degree) {
            return Err(Error::pre(format!("census degree must be 2..6, got {}", self.degree)));
        }
        for l in &self.labels {
            if label_by_name(self.degree, l).is_none() {
                return Err(Error::pre(format!(
                    "{l} is not a transitive group of degree {}",
                    self.degree
                )));
            }
        }
        if let Some((r1, r2)) = self.signature {
            if r1 + 2 * r2 != self.degree {
                return Err(Error::pre(format!(
                    "signature ({r1},{r2}) does not match degree {}",
                    self.degree
                )));
            }
        }
        Ok(())
    }

    fn keeps_label(&self, name: &str) -> bool {
        self.labels.is_empty()
            || self
                .labels
                .iter()
                .any(|l| label_by_name(self.degree, l).is_some_and(|t| t.name == name))
    }

    fn keeps_signature(&self, sig: (usize, usize)) -> bool {
        self.signature.is_none_or(|s| s == sig)
    }
}

/// Execution controls; none of them changes the result.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; 0 uses rayon's default.
    pub workers: usize,
    /// Stop after this many polynomials and write a checkpoint.
    pub budget: Option<u64>,
    pub checkpoint: Option<PathBuf>,
    /// Set from outside (e.g. a signal handler) to stop at the next chunk.
    pub cancel: Option<Arc<AtomicBool>>,
}

#[derive(Debug, Clone)]
pub struct CensusCatalog {
    pub params: CensusParams,
    /// Sorted by |d|, then d, then polynomial.
    pub records: Vec<NumberFieldRecord>,
    pub completeness_certificate: String,
    /// Polynomials examined in the coefficient box.
    pub examined: u64,
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    params: CensusParams,
    region: CoefficientBox,
    done: Vec<usize>,
    found: Vec<String>,
    examined: u64,
}

fn sort_records(records: &mut [NumberFieldRecord]) {
    records.sort_by(|a, b| {
        a.field_disc
            .abs()
            .cmp(&b.field_disc.abs())
            .then(a.field_disc.cmp(&b.field_disc))
            .then(a.defining_poly.cmp(&b.defining_poly))
    });
}

fn squarefree_sieve(x: u64) -> Vec<bool> {
    let mut sf = vec![true; x as usize + 1];
    let mut p = 2u64;
    while p * p <= x {
        let q = p * p;
        let mut k = q;
        while k <= x {
            sf[k as usize] = false;
            k += q;
        }
        p += 1;
    }
    sf
}

fn quadratic_record(d: i64) -> NumberFieldRecord {
    let poly = if d.rem_euclid(4) == 1 {
        IntegerPolynomial::from_descending(&[1, -1, (1 - d) / 4])
    } else {
        IntegerPolynomial::from_descending(&[1, 0, -d / 4])
    }
    .expect("monic");
    poly.set_irreducible(true);
    NumberFieldRecord {
        defining_poly: poly,
        degree: 2,
        field_disc: BigInt::from(d),
        poly_disc: BigInt::from(d),
        index_squared: BigInt::from(1),
        galois_label: label_by_name(2, "C2").expect("library"),
        confidence: Confidence::Certified,
        signature: if d > 0 { (2, 0) } else { (0, 1) },
    }
}

/// Every quadratic field with |d| <= x, from fundamental discriminants.
pub fn enumerate_quadratic(x: u64) -> Result<CensusCatalog> {
    if x < 3 {
        return Err(Error::pre("the quadratic census needs X >= 3"));
    }
    let sf = squarefree_sieve(x);
    let mut records = Vec::new();
    for n in 3..=x as i64 {
        for d in [n, -n] {
            let fundamental = match d.rem_euclid(4) {
                1 => sf[n as usize],
                0 => {
                    let m = d / 4;
                    matches!(m.rem_euclid(4), 2 | 3) && sf[m.unsigned_abs() as usize]
                }
                _ => false,
            };
            if fundamental {
                records.push(quadratic_record(d));
            }
        }
    }
    sort_records(&mut records);
    Ok(CensusCatalog {
        params: CensusParams::new(2, x),
        records,
        completeness_certificate: format!(
            "all fundamental discriminants with |d| <= {x}: d = 1 mod 4 squarefree, or d = 4m with m = 2,3 mod 4 squarefree"
        ),
        examined: 2 * x,
    })
}

/// Largest d with d^2 | n, from the factorization.
fn square_part(n: &BigInt) -> (BigInt, Vec<u64>) {
    let mut sq = BigInt::from(1);
    let mut primes = Vec::new();
    let fac: Vec<(u64, u32)> = match n.magnitude().to_u64() {
        Some(m) => ntheory::factor(m),
        None => ntheory::factor_big(n)
            .into_iter()
            .map(|(p, e)| (p.to_u64().unwrap_or(u64::MAX), e))
            .collect(),
    };
    for (p, e) in fac {
        if e >= 2 {
            primes.push(p);
            sq *= BigInt::from(p).pow(e / 2);
        }
    }
    (sq, primes)
}

/// The pipeline for one polynomial: cheap discriminant filters, then the exact
/// field discriminant, then the canonical generator.
fn examine(coeffs: &[i64], params: &CensusParams) -> Result<Option<IntegerPolynomial>> {
    let n = params.degree;
    let x = BigInt::from(params.max_disc);
    let disc: BigInt = if n == 3 {
        match cubic_disc(coeffs[1] as i128, coeffs[2] as i128, coeffs[3] as i128) {
            Some(d) => BigInt::from(d),
            None => IntegerPolynomial::from_descending(coeffs)?.discriminant(),
        }
    } else {
        IntegerPolynomial::from_descending(coeffs)?.discriminant()
    };
    if disc.is_zero() {
        return Ok(None);
    }
    if n == 3 && !params.labels.is_empty() {
        // C3 iff the discriminant is a square
        let square = disc.is_positive() && ntheory::is_square_big(&disc);
        if !params.keeps_label(if square { "C3" } else { "S3" }) {
            return Ok(None);
        }
    }
    if let Some((_, r2)) = params.signature {
        if disc.is_negative() != (r2 % 2 == 1) {
            return Ok(None);
        }
    }
    let (sq, primes) = square_part(&disc);
    if disc.abs() > &x * &sq * &sq {
        return Ok(None);
    }
    let f = IntegerPolynomial::from_descending(coeffs)?;
    if !is_irreducible(&f)? {
        return Ok(None);
    }
    let mo = maximal_order_at(&f, &primes)?;
    if mo.field_disc.abs() > x {
        return Ok(None);
    }
    if let Some(sig) = params.signature {
        let r1 = real_root_count(&f);
        if sig != (r1, (n - r1) / 2) {
            return Ok(None);
        }
    }
    Ok(Some(canonical_generator_from(&mo.order)?))
}

fn write_checkpoint(path: &Path, cp: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_vec_pretty(cp).expect("plain data"))?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn load_checkpoint(path: &Path, params: &CensusParams, region: &CoefficientBox) -> Result<Option<Checkpoint>> {
    if !path.exists() {
        return Ok(None);
    }
    let cp: Checkpoint = serde_json::from_slice(&std::fs::read(path)?)
        .map_err(|e| Error::parse(0, format!("checkpoint {}: {e}", path.display())))?;
    if &cp.params != params || &cp.region != region {
        return Err(Error::pre(format!(
            "checkpoint {} was written for different census parameters",
            path.display()
        )));
    }
    Ok(Some(cp))
}

/// Enumerates fields of degree 3..6 in the Hunter box.
pub fn enumerate_fields(params: &CensusParams, opts: &RunOptions) -> Result<CensusCatalog> {
    enumerate_in_box(params, &CoefficientBox::Hunter, opts)
}

/// As [`enumerate_fields`] over an explicit coefficient region.
pub fn enumerate_in_box(params: &CensusParams, region: &CoefficientBox, opts: &RunOptions) -> Result<CensusCatalog> {
    params.validate()?;
    if params.degree == 2 {
        let mut cat = enumerate_quadratic(params.max_disc)?;
        cat.records.retain(|r| params.keeps_signature(r.signature));
        cat.params = params.clone();
        return Ok(cat);
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if opts.workers > 0 {
        builder = builder.num_threads(opts.workers);
    }
    let pool = builder.build().map_err(|e| Error::pre(format!("thread pool: {e}")))?;

    let n = params.degree;
    let prefixes = hunter::prefixes(n, params.max_disc, region);
    let mut done = vec![false; prefixes.len()];
    let mut found: BTreeSet<IntegerPolynomial> = BTreeSet::new();
    let mut examined = 0u64;
    if let Some(path) = &opts.checkpoint {
        if let Some(cp) = load_checkpoint(path, params, region)? {
            for i in cp.done {
                if let Some(d) = done.get_mut(i) {
                    *d = true;
                }
            }
            for s in cp.found {
                found.insert(s.parse()?);
            }
            examined = cp.examined;
        }
    }
    let pending: Vec<usize> = (0..prefixes.len()).filter(|&i| !done[i]).collect();
    let chunk = 4 * pool.current_num_threads().max(1);
    let save = |done: &[bool], found: &BTreeSet<IntegerPolynomial>, examined: u64| -> Result<String> {
        let Some(path) = &opts.checkpoint else {
            return Ok("(no checkpoint path configured)".into());
        };
        let cp = Checkpoint {
            params: params.clone(),
            region: region.clone(),
            done: (0..done.len()).filter(|&i| done[i]).collect(),
            found: found.iter().map(|f| f.to_string()).collect(),
            examined,
        };
        write_checkpoint(path, &cp)?;
        Ok(path.display().to_string())
    };
    for batch in pending.chunks(chunk) {
        if opts.cancel.as_ref().is_some_and(|c| c.load(Ordering::SeqCst)) {
            let at = save(&done, &found, examined)?;
            return Err(Error::Interrupted(at));
        }
        if opts.budget.is_some_and(|b| examined >= b) {
            let at = save(&done, &found, examined)?;
            return Err(Error::Budget {
                examined,
                checkpoint: at,
            });
        }
        let results: Vec<Result<(u64, Vec<IntegerPolynomial>)>> = pool.install(|| {
            batch
                .par_iter()
                .map(|&i| {
                    let mut out = Vec::new();
                    let mut err = None;
                    let count = hunter::for_each_in_prefix(n, &prefixes[i], |c| {
                        if err.is_some() {
                            return;
                        }
                        match examine(c, params) {
                            Ok(Some(g)) => out.push(g),
                            Ok(None) => {}
                            Err(e) => err = Some(e),
                        }
                    });
                    match err {
                        Some(e) => Err(e),
                        None => Ok((count, out)),
                    }
                })
                .collect()
        });
        for (&i, r) in batch.iter().zip(results) {
            let (count, polys) = r?;
            examined += count;
            found.extend(polys);
            done[i] = true;
        }
    }

    let seed = params.seed;
    let found: Vec<IntegerPolynomial> = found.into_iter().collect();
    let built: Vec<Result<NumberFieldRecord>> = pool.install(|| {
        found
            .par_iter()
            .map(|g| NumberFieldRecord::from_canonical(g, seed))
            .collect()
    });
    let mut records = Vec::new();
    for r in built {
        let r = r?;
        if r.abs_disc() <= BigInt::from(params.max_disc)
            && params.keeps_label(r.galois_label.name)
            && params.keeps_signature(r.signature)
        {
            records.push(r);
        }
    }
    sort_records(&mut records);
    if let Some(path) = &opts.checkpoint {
        // a finished run leaves no stale checkpoint behind
        let _ = std::fs::remove_file(path);
    }
    Ok(CensusCatalog {
        params: params.clone(),
        records,
        completeness_certificate: region.describe(n, params.max_disc),
        examined,
    })
}

#[derive(Serialize)]
struct Sidecar<'a> {
    params: &'a CensusParams,
    completeness_certificate: &'a str,
    fields: usize,
    examined: u64,
}

impl CensusCatalog {
    /// Number of records with |d| <= x.
    pub fn count_up_to(&self, x: u64) -> usize {
        let bx = BigInt::from(x);
        self.records.partition_point(|r| r.abs_disc() <= bx)
    }

    /// CSV with leading `#` comment lines, then the header row.
    pub fn write_csv<W: Write>(&self, out: W, comments: &[String]) -> Result<()> {
        let mut out = out;
        for c in comments {
            writeln!(out, "# {c}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(NumberFieldRecord::CSV_HEADER)
            .map_err(|e| Error::pre(e.to_string()))?;
        for r in &self.records {
            w.write_record(r.csv_fields()).map_err(|e| Error::pre(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn sidecar_json(&self) -> serde_json::Value {
        serde_json::to_value(Sidecar {
            params: &self.params,
            completeness_certificate: &self.completeness_certificate,
            fields: self.records.len(),
            examined: self.examined,
        })
        .expect("plain data")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.sidecar_json();
        v["records"] = self.records.iter().map(|r| r.to_json()).collect();
        v
    }
}

/// One row of a catalog CSV: (degree, field disc, label, polynomial).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogRow {
    pub degree: usize,
    pub field_disc: BigInt,
    pub label: String,
    pub poly: IntegerPolynomial,
}

/// Reads a catalog CSV, skipping `#` comment lines.
pub fn read_catalog_csv<R: BufRead>(input: R) -> Result<Vec<CatalogRow>> {
    let mut body = String::new();
    let mut skipped = 0;
    for line in input.lines() {
        let line = line?;
        if body.is_empty() && line.starts_with('#') {
            skipped += 1;
            continue;
        }
        body.push_str(&line);
        body.push('\n');
    }
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = skipped + i + 2;
        let rec = rec.map_err(|e| Error::Parse {
            line,
            column: 1,
            message: e.to_string(),
        })?;
        let field = |k: usize| rec.get(k).unwrap_or("");
        let bad = |col: usize, what: &str| Error::Parse {
            line,
            column: col,
            message: format!("bad {what}"),
        };
        rows.push(CatalogRow {
            degree: field(0).parse().map_err(|_| bad(1, "degree"))?,
            field_disc: field(1).parse().map_err(|_| bad(2, "field_disc"))?,
            label: field(2).to_string(),
            poly: field(3).parse().map_err(|_| bad(4, "canonical_poly"))?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests;
