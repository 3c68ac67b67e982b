//! One function per subcommand.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use malle_core::bounds::{
    apply_registry_text, example_table, limitation_analysis, parse_rational, special_degree_bound, theorem_bound, Base,
    BoundContext, DegreeSelector, ExponentResult, RowStatus, SpecialCase, TableRow,
};
use malle_core::census::{
    build_s3_towers, default_checkpoints, enumerate_fields, fit_counts, hasse_crosscheck, read_catalog_csv,
    CensusCatalog, CensusParams, RunOptions, SlopeFit,
};
use malle_core::malle::malle_a;
use malle_core::perm::{named_group, GroupDescriptor};
use malle_core::quadclass::{empirical_torsion_exponent, torsion_table};
use malle_core::structure::{abelian_invariants, frobenius_classify, group_label, GroupAnalysis};
use malle_core::{Error, Result};
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::config::{emit, resolve_input, resolve_output, sha256_file, FileConfig, RunConfig};
use crate::text::{pairs, table};
use crate::{BoundOpts, Cli, Command};

/// Settings shared by every command after merging the config file and flags.
struct Shared {
    seed: u64,
    json: bool,
    file: FileConfig,
}

impl Shared {
    fn workers(&self, flag: Option<usize>) -> usize {
        flag.or(self.file.workers).unwrap_or(0)
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let file = match &cli.global.config {
        Some(p) => {
            let p = resolve_input(p)?;
            FileConfig::load(&p)?.rebase(&p)
        }
        None => FileConfig::default(),
    };
    let sh = Shared {
        seed: cli.global.seed.or(file.seed).unwrap_or(0),
        json: cli.global.json || file.json.unwrap_or(false),
        file,
    };
    match cli.command {
        Command::Invariants { group } => invariants(&sh, &group),
        Command::Analyze { group } => analyze(&sh, &group),
        Command::Bound {
            group,
            degree,
            opts,
            trace,
        } => bound(&sh, &group, &degree, &opts, trace),
        Command::Table { primes, out } => table_cmd(&sh, &primes, out.as_deref()),
        Command::Census {
            degree,
            labels,
            max_disc,
            signature,
            out,
            checkpoints,
            workers,
            budget,
            state,
        } => census(
            &sh,
            CensusArgs {
                degree,
                labels,
                max_disc,
                signature,
                out,
                checkpoints,
                workers,
                budget,
                state,
            },
        ),
        Command::Slopes {
            catalog,
            group,
            checkpoints,
            max_disc,
        } => slopes(&sh, &catalog, group.as_deref(), &checkpoints, max_disc),
        Command::Towers {
            max_disc,
            limit,
            out,
            workers,
        } => towers(&sh, max_disc, limit, out.as_deref(), workers),
        Command::ClassTorsion {
            max_disc,
            m,
            out,
            hasse,
            workers,
        } => class_torsion(&sh, max_disc, m, out.as_deref(), hasse, workers),
        Command::Limitations { case, opts, check } => limitations(&sh, case.as_deref(), &opts, check.as_deref()),
    }
}

fn canonical(group: &str) -> Result<String> {
    Ok(GroupDescriptor::parse(group)?.to_string())
}

fn dec(r: &malle_core::Rational) -> String {
    format!("{:.5}", r.to_f64().unwrap_or(f64::NAN))
}

fn invariants(sh: &Shared, group: &str) -> Result<()> {
    let desc = canonical(group)?;
    let mut cfg = RunConfig::new("invariants", sh.seed);
    cfg.set("group", &desc);
    let g = named_group(&desc)?;
    let a = malle_a(&g)?;
    if sh.json {
        let mut v = a.to_json();
        v["group"] = json!(desc);
        v["order"] = json!(g.order());
        return emit(None, &cfg.wrap_json(v));
    }
    let body = pairs(&[
        ("group", desc),
        ("order", g.order().to_string()),
        ("d", a.degree.to_string()),
        ("ind(G)", a.ind.to_string()),
        ("a(G,d)", format!("{} = {}", a.value, dec(&a.value))),
        ("witness", a.witness.to_cycle_string()),
    ]);
    emit(None, &format!("# {}\n{body}", cfg.header_line()))
}

fn analyze(sh: &Shared, group: &str) -> Result<()> {
    let desc = canonical(group)?;
    let mut cfg = RunConfig::new("analyze", sh.seed);
    cfg.set("group", &desc);
    let g = named_group(&desc)?;
    let frob = if g.is_transitive() {
        frobenius_classify(&g)?
    } else {
        None
    };
    let normals = malle_core::structure::abelian_normal_subgroups(&g);
    let analysis = GroupAnalysis::analyze(&g);
    let normal_rows: Vec<Value> = normals
        .iter()
        .map(|n| json!({ "order": n.len(), "invariants": abelian_invariants(n) }))
        .collect();
    let mut v = json!({
        "group": desc,
        "label": group_label(&g),
        "order": g.order(),
        "degree": g.degree(),
        "transitive": g.is_transitive(),
        "in_f1": !normals.is_empty(),
        "frobenius": frob.is_some(),
        "frobenius_kernel_order": frob.as_ref().map(|f| f.kernel.len()),
        "frobenius_complement_order": frob.as_ref().map(|f| f.complement.len()),
        "abelian_normal_subgroups": normal_rows,
    });
    match &analysis {
        Ok(an) => v["parameters"] = an.to_json(),
        Err(e) => v["parameters_unavailable"] = json!(e.to_string()),
    }
    if sh.json {
        return emit(None, &cfg.wrap_json(v));
    }
    let mut items = vec![
        ("group", desc.clone()),
        ("label", group_label(&g)),
        ("order", g.order().to_string()),
        ("degree", g.degree().to_string()),
        ("transitive", g.is_transitive().to_string()),
        (
            "abelian normal",
            normals
                .iter()
                .map(|n| format!("{:?}", abelian_invariants(n)))
                .collect::<Vec<_>>()
                .join(" "),
        ),
        ("in F1", (!normals.is_empty()).to_string()),
        (
            "Frobenius",
            match &frob {
                Some(f) => format!(
                    "yes, kernel order {}, complement order {}",
                    f.kernel.len(),
                    f.complement.len()
                ),
                None => "no".into(),
            },
        ),
    ];
    match &analysis {
        Ok(an) => {
            items.push(("F", format!("order {} {:?}", an.m, abelian_invariants(&an.kernel))));
            items.push(("(m, t, p, p1)", format!("({}, {}, {}, {})", an.m, an.t, an.p, an.p1)));
            items.push(("in F", an.in_f.to_string()));
        }
        Err(e) => items.push(("parameters", format!("unavailable: {e}"))),
    }
    emit(None, &format!("# {}\n{}", cfg.header_line(), pairs(&items)))
}

fn parse_base(s: &str) -> Result<Base> {
    match s {
        "Q" | "q" => Ok(Base::Rationals),
        "k" | "K" => Ok(Base::General),
        other => Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("base must be Q or k, got `{other}`"),
        }),
    }
}

/// Bound context from flags, config and an optional registry file; records what it used.
fn bound_context(sh: &Shared, opts: &BoundOpts, cfg: &mut RunConfig) -> Result<BoundContext> {
    let base = parse_base(opts.base.as_deref().or(sh.file.base.as_deref()).unwrap_or("Q"))?;
    let conj = opts.assume_l_torsion || sh.file.assume_l_torsion.unwrap_or(false);
    let mut ctx = if conj {
        BoundContext::conjecture(base)
    } else {
        BoundContext::seeded(base)
    };
    cfg.set("base", base.tag()).set("assume_l_torsion", conj);
    if let Some(p) = opts.registry.as_ref().or(sh.file.registry.as_ref()) {
        let p = resolve_input(p)?;
        let text = std::fs::read_to_string(&p)?;
        apply_registry_text(&text, &mut ctx.torsion, &mut ctx.counts)?;
        cfg.set("registry_sha256", sha256_file(&p)?);
    }
    Ok(ctx)
}

fn trace_lines(res: &ExponentResult, check: bool) -> String {
    let mut s = String::new();
    for (i, step) in res.trace.iter().enumerate() {
        s.push_str(&format!("  {:>2}. {step}\n", i + 1));
        if check {
            if let Some(v) = step.recompute() {
                let ok = if v == step.output { "ok" } else { "MISMATCH" };
                s.push_str(&format!("      recomputed {v}: {ok}\n"));
            }
        }
    }
    s
}

fn status_text(s: &RowStatus) -> String {
    match s {
        RowStatus::Exact => "match".into(),
        RowStatus::WithinTolerance(d) => format!("match within {d:.1e}"),
        RowStatus::Flagged(why) => format!("FLAG: {why}"),
    }
}

fn bound(sh: &Shared, group: &str, degree: &str, opts: &BoundOpts, check: bool) -> Result<()> {
    let desc = canonical(group)?;
    let sel = DegreeSelector::parse(degree).ok_or_else(|| Error::Parse {
        line: 1,
        column: 1,
        message: format!("--degree must be kernel or regular, got `{degree}`"),
    })?;
    let mut cfg = RunConfig::new("bound", sh.seed);
    cfg.set("group", &desc).set("degree", degree);
    let ctx = bound_context(sh, opts, &mut cfg)?;
    let g = named_group(&desc)?;
    let an = GroupAnalysis::analyze(&g)?;
    let res = theorem_bound(&an, sel, &ctx)?;
    res.replay()?;
    let small_a = match sel {
        DegreeSelector::Kernel => malle_a(&g)?.value,
        DegreeSelector::Regular => malle_a(&malle_core::perm::regular_action(&g)?)?.value,
    };
    let conj = cfg.params["assume_l_torsion"] == json!(true);
    let row: Option<TableRow> = example_table(&[3, 5, 7, 11, 13])?
        .into_iter()
        .find(|r| r.descriptor == desc && r.selector == Some(sel) && r.conjectural == conj);
    let d = match sel {
        DegreeSelector::Kernel => an.m,
        DegreeSelector::Regular => g.order() as u64,
    };
    if sh.json {
        let v = json!({
            "group": desc,
            "degree": d,
            "selector": degree,
            "bound": res.to_json(),
            "malle_a": small_a.to_string(),
            "table_row": row.as_ref().map(|r| json!({
                "group": r.group,
                "printed_A": r.printed_bound.to_string(),
                "printed_a": r.printed_malle.to_string(),
                "status": status_text(&r.status),
                "flagged": r.status.is_flagged(),
            })),
        });
        return emit(None, &cfg.wrap_json(v));
    }
    let mut out = format!("# {}\n", cfg.header_line());
    out.push_str(&pairs(&[
        ("group", desc.clone()),
        ("d", format!("{d} ({degree})")),
        ("base", ctx.base.tag().to_string()),
        (
            "mode",
            if conj {
                "conjecture".into()
            } else {
                "unconditional".to_string()
            },
        ),
        ("(m, t, p, p1)", format!("({}, {}, {}, {})", an.m, an.t, an.p, an.p1)),
        ("a(G,d)", format!("{} = {}", small_a, dec(&small_a))),
    ]));
    out.push_str("trace:\n");
    out.push_str(&trace_lines(&res, check));
    out.push_str(&format!(
        "A(G,d) = {} = {} (+eps), branch {}\n",
        res.value,
        dec(&res.value),
        res.branch
    ));
    for f in &res.flags {
        out.push_str(&format!("note: {f}\n"));
    }
    if let Some(r) = row {
        out.push_str(&format!(
            "table row {} d={}: printed A = {}, printed a = {}; {}\n",
            r.group,
            r.degree,
            r.printed_bound,
            r.printed_malle,
            status_text(&r.status)
        ));
    }
    emit(None, &out)
}

fn table_cmd(sh: &Shared, primes: &[u64], out: Option<&Path>) -> Result<()> {
    let out = out.map(resolve_output).transpose()?;
    let mut cfg = RunConfig::new("table", sh.seed);
    cfg.set("primes", primes);
    let rows = example_table(primes)?;
    if sh.json {
        let v: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "group": r.group,
                    "condition": r.condition,
                    "d": r.degree,
                    "printed_A": r.printed_bound.to_string(),
                    "A": r.bound.to_string(),
                    "A_decimal": r.bound.to_f64(),
                    "printed_a": r.printed_malle.to_string(),
                    "a": r.malle.to_string(),
                    "status": status_text(&r.status),
                    "flagged": r.status.is_flagged(),
                })
            })
            .collect();
        return emit(out.as_deref(), &cfg.wrap_json(Value::Array(v)));
    }
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.group.clone(),
                r.condition.clone(),
                r.degree.to_string(),
                r.printed_bound.to_string(),
                format!("{} = {}", r.bound, dec(&r.bound)),
                r.printed_malle.to_string(),
                r.malle.to_string(),
                status_text(&r.status),
            ]
        })
        .collect();
    let flagged = rows.iter().filter(|r| r.status.is_flagged()).count();
    let text = format!(
        "# {}\n{}{} rows, {} flagged\n",
        cfg.header_line(),
        table(
            &[
                "group",
                "condition",
                "d",
                "A printed",
                "A engine",
                "a printed",
                "a engine",
                "status"
            ],
            &body
        ),
        rows.len(),
        flagged
    );
    emit(out.as_deref(), &text)
}

struct CensusArgs {
    degree: usize,
    labels: Vec<String>,
    max_disc: u64,
    signature: Option<String>,
    out: Option<PathBuf>,
    checkpoints: String,
    workers: Option<usize>,
    budget: Option<u64>,
    state: Option<PathBuf>,
}

fn parse_signature(s: &str) -> Result<(usize, usize)> {
    let bad = |column: usize| Error::Parse {
        line: 1,
        column,
        message: format!("signature must be `r1,r2`, got `{s}`"),
    };
    let (a, b) = s.split_once(',').ok_or_else(|| bad(1))?;
    Ok((
        a.trim().parse().map_err(|_| bad(1))?,
        b.trim().parse().map_err(|_| bad(a.len() + 2))?,
    ))
}

fn parse_checkpoints(spec: &str, x: u64) -> Result<Vec<u64>> {
    if spec == "auto" {
        return Ok(default_checkpoints(x));
    }
    let mut col = 1;
    let mut out = Vec::new();
    for part in spec.split(',') {
        out.push(part.trim().parse().map_err(|_| Error::Parse {
            line: 1,
            column: col,
            message: format!("bad checkpoint `{part}`"),
        })?);
        col += part.len() + 1;
    }
    Ok(out)
}

fn counts_report(points: &[(u64, u64)], fit: Option<&SlopeFit>, fit_err: Option<String>) -> String {
    let rows: Vec<Vec<String>> = points.iter().map(|(x, n)| vec![x.to_string(), n.to_string()]).collect();
    let mut s = table(&["X", "N(X)"], &rows);
    match (fit, fit_err) {
        (Some(f), _) => s.push_str(&format!(
            "slope {:.4} (least squares over the top decade, {} points)\n",
            f.slope, f.fitted
        )),
        (None, Some(e)) => s.push_str(&format!("slope unavailable: {e}\n")),
        _ => {}
    }
    s
}

fn census(sh: &Shared, a: CensusArgs) -> Result<()> {
    let out = a.out.as_deref().map(resolve_output).transpose()?;
    let sidecar = out.as_ref().map(|p| p.with_extension("json"));
    if sidecar.is_some() && sidecar == out {
        return Err(Error::Precondition(
            "--out must not end in .json; the sidecar uses that name".into(),
        ));
    }
    let state = match (&a.state, &out) {
        (Some(s), _) => resolve_output(s)?,
        (None, Some(o)) => o.with_extension("state.json"),
        (None, None) => resolve_output(Path::new(&format!(
            "malle-lab-census-d{}-x{}.state.json",
            a.degree, a.max_disc
        )))?,
    };
    let mut params = CensusParams::new(a.degree, a.max_disc);
    params.labels = a.labels.clone();
    params.signature = a.signature.as_deref().map(parse_signature).transpose()?;
    params.seed = sh.seed;
    let checkpoints = parse_checkpoints(&a.checkpoints, a.max_disc)?;

    let mut cfg = RunConfig::new("census", sh.seed);
    cfg.set("degree", a.degree)
        .set("labels", &a.labels)
        .set("max_disc", a.max_disc)
        .set("signature", params.signature)
        .set("checkpoints", &checkpoints);

    let cancel = Arc::new(AtomicBool::new(false));
    {
        let c = cancel.clone();
        // a second handler registration fails only inside tests; ignore it
        let _ = ctrlc::set_handler(move || c.store(true, Ordering::SeqCst));
    }
    let opts = RunOptions {
        workers: sh.workers(a.workers),
        budget: a.budget.or(sh.file.budget),
        checkpoint: Some(state),
        cancel: Some(cancel),
    };
    let cat = enumerate_fields(&params, &opts)?;

    let fit = fit_counts(&abs_discs(&cat), a.max_disc, &checkpoints, None);
    let points: Vec<(u64, u64)> = checkpoints.iter().map(|&c| (c, cat.count_up_to(c) as u64)).collect();
    let comments = vec![
        cfg.header_line(),
        format!(
            "degree={} labels={} max_disc={} signature={}",
            a.degree,
            if a.labels.is_empty() {
                "all".into()
            } else {
                a.labels.join("|")
            },
            a.max_disc,
            params
                .signature
                .map_or("any".to_string(), |(r1, r2)| format!("{r1},{r2}"))
        ),
    ];
    let mut csv = Vec::new();
    cat.write_csv(&mut csv, &comments)?;
    let csv = String::from_utf8(csv).expect("utf-8");
    let summary = format!(
        "{} fields with |d| <= {} ({} polynomials examined)\n{}",
        cat.records.len(),
        a.max_disc,
        cat.examined,
        counts_report(&points, fit.as_ref().ok(), fit.as_ref().err().map(|e| e.to_string()))
    );
    match (&out, &sidecar) {
        (Some(o), Some(sc)) => {
            emit(Some(o), &csv)?;
            let mut v = cat.sidecar_json();
            v["counts"] = json!(points);
            v["slope"] = fit.as_ref().map_or(Value::Null, |f| json!(f.slope));
            emit(Some(sc), &cfg.wrap_json(v))?;
            emit(None, &format!("# {}\n{summary}", cfg.header_line()))
        }
        _ => {
            eprint!("{summary}");
            emit(None, &csv)
        }
    }
}

fn abs_discs(cat: &CensusCatalog) -> Vec<u64> {
    cat.records
        .iter()
        .map(|r| r.field_disc.abs().to_u64().expect("bounded by max_disc"))
        .collect()
}

fn slopes(sh: &Shared, catalog: &Path, group: Option<&str>, checkpoints: &str, max_disc: Option<u64>) -> Result<()> {
    let path = resolve_input(catalog)?;
    let sidecar = path.with_extension("json");
    let side_x = if sidecar.is_file() {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&sidecar)?)
            .map_err(|e| Error::Precondition(format!("sidecar {}: {e}", sidecar.display())))?;
        v["result"]["params"]["max_disc"].as_u64()
    } else {
        None
    };
    let x = match (max_disc, side_x) {
        (Some(m), Some(s)) if m > s => {
            return Err(Error::Precondition(format!(
                "--max-disc {m} exceeds the census bound {s}"
            )))
        }
        (Some(m), _) => m,
        (None, Some(s)) => s,
        (None, None) => {
            return Err(Error::Precondition(
                "no sidecar with the census bound; pass --max-disc".into(),
            ))
        }
    };
    let rows = read_catalog_csv(std::io::BufReader::new(std::fs::File::open(&path)?))?;
    let mut discs: Vec<u64> = rows
        .iter()
        .filter_map(|r| r.field_disc.abs().to_u64())
        .filter(|&d| d <= x)
        .collect();
    discs.sort_unstable();
    let cps = parse_checkpoints(checkpoints, x)?;
    let g = group.map(canonical).transpose()?;
    let built = g.as_deref().map(named_group).transpose()?;
    let fit = fit_counts(&discs, x, &cps, built.as_ref())?;

    let mut cfg = RunConfig::new("slopes", sh.seed);
    cfg.set("catalog_sha256", sha256_file(&path)?)
        .set("max_disc", x)
        .set("checkpoints", &cps)
        .set("group", &g);
    if sh.json {
        return emit(None, &cfg.wrap_json(serde_json::to_value(&fit).expect("plain data")));
    }
    let mut out = format!("# {}\n", cfg.header_line());
    out.push_str(&counts_report(&fit.points, Some(&fit), None));
    if let Some(a) = &fit.reference_a {
        out.push_str(&format!(
            "a(G,d) = {} = {}, slope - a = {:+.4}\n",
            a,
            dec(a),
            fit.slope - a.to_f64().unwrap_or(f64::NAN)
        ));
    }
    if let Some(big) = &fit.reference_big_a {
        out.push_str(&format!("A(G,d) = {} = {}\n", big, dec(big)));
    }
    emit(None, &out)
}

fn towers(sh: &Shared, max_disc: u64, limit: Option<usize>, out: Option<&Path>, workers: Option<usize>) -> Result<()> {
    let out = out.map(resolve_output).transpose()?;
    let mut cfg = RunConfig::new("towers", sh.seed);
    cfg.set("max_disc", max_disc).set("limit", limit);
    let mut params = CensusParams::new(3, max_disc).with_labels(&["S3"]);
    params.seed = sh.seed;
    let cat = enumerate_fields(
        &params,
        &RunOptions {
            workers: sh.workers(workers),
            ..Default::default()
        },
    )?;
    let towers = build_s3_towers(&cat, limit)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Precondition(e.to_string());
    w.write_record(["d_K", "K", "d_M", "M", "d_N", "N", "relnorm", "brauer", "tower"])
        .map_err(csv_err)?;
    let mut failures = 0;
    for t in &towers {
        let brauer = t.brauer_holds()?;
        let tower = t.tower_holds();
        failures += usize::from(!brauer || !tower);
        w.write_record([
            t.k.field_disc.to_string(),
            t.k.defining_poly.to_string(),
            t.m.field_disc.to_string(),
            t.m.defining_poly.to_string(),
            t.n.field_disc.to_string(),
            t.n.defining_poly.to_string(),
            t.relnorm.to_string(),
            brauer.to_string(),
            tower.to_string(),
        ])
        .map_err(csv_err)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| Error::Precondition(e.to_string()))?).expect("utf-8");
    emit(out.as_deref(), &format!("# {}\n{body}", cfg.header_line()))?;
    eprintln!("{} towers, {} relation failures", towers.len(), failures);
    if failures > 0 {
        return Err(Error::Invariant(format!(
            "{failures} towers violate a discriminant relation"
        )));
    }
    Ok(())
}

fn class_torsion(
    sh: &Shared,
    max_disc: u64,
    m: u64,
    out: Option<&Path>,
    hasse: bool,
    workers: Option<usize>,
) -> Result<()> {
    let out = out.map(resolve_output).transpose()?;
    let x = i64::try_from(max_disc).map_err(|_| Error::Precondition("--max-disc too large".into()))?;
    let mut cfg = RunConfig::new("class-torsion", sh.seed);
    cfg.set("max_disc", max_disc).set("m", m).set("hasse", hasse);
    let rows = torsion_table(m, x)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Precondition(e.to_string());
    w.write_record(["D", "h", "invariant_factors", "torsion_m", "ratio"])
        .map_err(csv_err)?;
    for r in &rows {
        let inv: Vec<String> = r.invariant_factors.iter().map(u64::to_string).collect();
        w.write_record([
            r.d.to_string(),
            r.h.to_string(),
            format!("[{}]", inv.join(",")),
            r.torsion.to_string(),
            format!("{:.6}", r.ratio),
        ])
        .map_err(csv_err)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| Error::Precondition(e.to_string()))?).expect("utf-8");
    emit(out.as_deref(), &format!("# {}\n{body}", cfg.header_line()))?;

    let mut summary = String::new();
    if x >= 3 {
        let e = empirical_torsion_exponent(m, x)?;
        summary.push_str(&format!(
            "{} discriminants; max log|Cl_D[{m}]|/log|D| = {:.5} at D = {} (|Cl_D[{m}]| = {}); a finite-X maximum, not a limsup\n",
            rows.len(),
            e.max_ratio,
            e.attained_at,
            e.torsion
        ));
    }
    let mut mismatches = 0;
    if hasse {
        let mut params = CensusParams::new(3, max_disc);
        params.seed = sh.seed;
        let cubics = enumerate_fields(
            &params,
            &RunOptions {
                workers: sh.workers(workers),
                ..Default::default()
            },
        )?;
        let rep = hasse_crosscheck(max_disc, &cubics)?;
        mismatches = rep.mismatches.len();
        summary.push_str(&format!(
            "cubic fields vs (|Cl_D[3]| - 1)/2: {} discriminants checked, {} mismatches\n",
            rep.checked, mismatches
        ));
        for r in rep.mismatches.iter().take(20) {
            summary.push_str(&format!(
                "  D = {}: {} cubic fields, |Cl_D[3]| = {}\n",
                r.d, r.cubic_fields, r.torsion3
            ));
        }
    }
    if out.is_some() {
        emit(None, &format!("# {}\n{summary}", cfg.header_line()))?;
    } else {
        eprint!("{summary}");
    }
    if mismatches > 0 {
        return Err(Error::Invariant(format!(
            "{mismatches} cubic field counts disagree with Cl_D[3]"
        )));
    }
    Ok(())
}

fn limitations(sh: &Shared, case: Option<&str>, opts: &BoundOpts, check: Option<&str>) -> Result<()> {
    let cases = match case {
        Some(c) => vec![SpecialCase::parse(c)?],
        None => SpecialCase::ALL.to_vec(),
    };
    let mut cfg = RunConfig::new("limitations", sh.seed);
    cfg.set("cases", cases.iter().map(|c| c.name()).collect::<Vec<_>>());
    let ctx = bound_context(sh, opts, &mut cfg)?;
    let limitation = match check {
        Some(text) => {
            let parts: Vec<&str> = text.split(',').map(str::trim).collect();
            let bad = |i: usize| Error::Parse {
                line: 1,
                column: parts[..i].iter().map(|p| p.len() + 1).sum::<usize>() + 1,
                message: format!("expected aH,D,r,R, got `{text}`"),
            };
            if parts.len() != 4 {
                return Err(bad(0));
            }
            let a_h = parse_rational(parts[0]).ok_or_else(|| bad(0))?;
            let d = parse_rational(parts[1]).ok_or_else(|| bad(1))?;
            let r: u64 = parts[2].parse().map_err(|_| bad(2))?;
            let big_r: u64 = parts[3].parse().map_err(|_| bad(3))?;
            cfg.set("check", text);
            Some((
                (a_h.clone(), d.clone(), r, big_r),
                limitation_analysis(&a_h, &d, r, big_r)?,
            ))
        }
        None => None,
    };
    let results: Vec<(SpecialCase, ExponentResult)> = cases
        .iter()
        .map(|&c| (c, special_degree_bound(c, &ctx.torsion)))
        .collect();
    for (_, r) in &results {
        r.replay()?;
    }
    if sh.json {
        let mut v = json!({
            "cases": results
                .iter()
                .map(|(c, r)| json!({ "case": c.name(), "bound": r.to_json() }))
                .collect::<Vec<_>>(),
        });
        if let Some((_, l)) = &limitation {
            v["check"] = json!({ "holds": l.holds, "exponent": l.exponent.to_string() });
        }
        return emit(None, &cfg.wrap_json(v));
    }
    let mut out = format!("# {}\n", cfg.header_line());
    for (c, r) in &results {
        out.push_str(&format!(
            "{}: A = {} = {}, {}\n",
            c.name(),
            r.value,
            dec(&r.value),
            r.branch
        ));
        out.push_str(&trace_lines(r, false));
    }
    if let Some(((a_h, d, rel, big_r), l)) = limitation {
        out.push_str(&format!(
            "aH + D - r/R = {a_h} + {d} - {rel}/{big_r} {} 0: {} X^{} = X^{}\n",
            if l.holds { "<=" } else { ">" },
            if l.holds { "tower reaches" } else { "tower gives only" },
            l.exponent,
            dec(&l.exponent)
        ));
    }
    emit(None, &out)
}
