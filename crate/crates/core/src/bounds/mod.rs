//! Upper-bound exponents A(G, d) for groups with an abelian normal subgroup.

mod registry;
mod table;

pub use registry::{
    apply_registry_text, parse_rational, Base, Cited, CountExponentRegistry, CountMode, TorsionExponentRegistry,
    TorsionMode,
};
pub use table::{catalog, dihedral_comparison, example_table, CatalogEntry, RowStatus, TableRow};

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::malle::{malle_a, malle_a_frobenius_closed_form, malle_a_regular_closed_form};
use crate::ntheory;
use crate::structure::{abelian_normal_subgroups, group_label, notation_parameters, GroupAnalysis};
use crate::{rat, Rational};

/// Which of the two degrees of Theorem 1 to bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeSelector {
    /// d = m, the action on the cosets of the complement.
    Kernel,
    /// d = m t = |G|.
    Regular,
}

impl DegreeSelector {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "kernel" | "m" => Some(DegreeSelector::Kernel),
            "regular" | "mt" => Some(DegreeSelector::Regular),
            _ => None,
        }
    }
}

/// One step of a bound computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: String,
    pub inputs: Vec<(String, Rational)>,
    pub output: Rational,
    pub note: String,
}

impl TraceStep {
    fn new(rule: &str, inputs: &[(&str, &Rational)], output: Rational, note: impl Into<String>) -> Self {
        TraceStep {
            rule: rule.to_string(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), (*v).clone())).collect(),
            output,
            note: note.into(),
        }
    }

    fn input(&self, key: &str) -> Option<&Rational> {
        self.inputs.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Recomputes the output from the inputs for arithmetic rules.
    /// Lookup and bookkeeping steps return `None`.
    pub fn recompute(&self) -> Option<Rational> {
        let g = |k: &str| self.input(k).cloned();
        let one = rat(1, 1);
        Some(match self.rule.as_str() {
            "torsion-term/kernel" => (g("D")? + g("a1")?) * g("t")? / (g("m")? - &one),
            "census-term/kernel" => g("p")? / (g("m")? * (g("p")? - &one)),
            "torsion-term/regular" => (g("a1")? + g("D")?) / g("m")?,
            "census-term/regular" => g("p")? / (g("m")? * g("t")? * (g("p")? - &one)),
            "census-term/refined" => one.clone() / (g("m")? * (one.clone() - one.clone() / g("p")?)),
            "torsion-term/refined" => {
                let (m, p1) = (g("m")?, g("p1")?);
                g("t")? / (&m - &one)
                    * (one.clone() / (&p1 - &one) + rat(1, 2) - one.clone() / (rat(2, 1) * &m * (&p1 - &one)))
            }
            "tower-term" => {
                let (r, big_r) = (g("r")?, g("R")?);
                let excess = g("a1")? + g("D")? - &r / &big_r;
                let excess = if excess > Rational::zero() {
                    excess
                } else {
                    Rational::zero()
                };
                one / big_r + excess / r
            }
            _ => return None,
        })
    }
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.rule)?;
        for (i, (k, v)) in self.inputs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        write!(f, ") = {}", self.output)?;
        if !self.note.is_empty() {
            write!(f, "  [{}]", self.note)?;
        }
        Ok(())
    }
}

/// An exponent A with N << X^(A + eps), the maximum of its named branches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentResult {
    pub value: Rational,
    pub epsilon: bool,
    pub branch: String,
    pub branches: Vec<(String, Rational)>,
    pub trace: Vec<TraceStep>,
    pub flags: Vec<String>,
}

#[derive(Serialize)]
struct StepJson {
    rule: String,
    inputs: Vec<(String, String)>,
    output: String,
    note: String,
}

#[derive(Serialize)]
struct ResultJson {
    value: String,
    decimal: f64,
    epsilon: bool,
    branch: String,
    branches: Vec<(String, String)>,
    trace: Vec<StepJson>,
    flags: Vec<String>,
}

impl ExponentResult {
    fn from_branches(branches: Vec<(String, Rational)>, trace: Vec<TraceStep>, flags: Vec<String>) -> Self {
        let (branch, value) = branches
            .iter()
            .fold(None::<&(String, Rational)>, |best, b| match best {
                Some(x) if x.1 >= b.1 => Some(x),
                _ => Some(b),
            })
            .cloned()
            .expect("at least one branch");
        ExponentResult {
            value,
            epsilon: true,
            branch,
            branches,
            trace,
            flags,
        }
    }

    /// Checks that every arithmetic step recomputes and the value is the branch maximum.
    pub fn replay(&self) -> Result<()> {
        for step in &self.trace {
            if let Some(v) = step.recompute() {
                if v != step.output {
                    return Err(Error::Invariant(format!("trace step {step} recomputes to {v}")));
                }
            }
        }
        let max = self.branches.iter().map(|b| &b.1).max();
        if max != Some(&self.value) {
            return Err(Error::Invariant("value is not the branch maximum".into()));
        }
        for (name, v) in &self.branches {
            let backed = self.trace.iter().any(|s| &s.rule == name && &s.output == v);
            if !backed {
                return Err(Error::Invariant(format!("branch {name} has no trace step")));
            }
        }
        Ok(())
    }

    pub fn decimal(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let json = ResultJson {
            value: self.value.to_string(),
            decimal: self.decimal(),
            epsilon: self.epsilon,
            branch: self.branch.clone(),
            branches: self.branches.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
            trace: self
                .trace
                .iter()
                .map(|s| StepJson {
                    rule: s.rule.clone(),
                    inputs: s.inputs.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
                    output: s.output.to_string(),
                    note: s.note.clone(),
                })
                .collect(),
            flags: self.flags.clone(),
        };
        serde_json::to_value(json).expect("result serializes")
    }
}

/// Registries and base field for a bound evaluation.
#[derive(Debug, Clone)]
pub struct BoundContext {
    pub torsion: TorsionExponentRegistry,
    pub counts: CountExponentRegistry,
    pub base: Base,
}

impl BoundContext {
    pub fn seeded(base: Base) -> Self {
        BoundContext {
            torsion: TorsionExponentRegistry::seeded(),
            counts: CountExponentRegistry::seeded(),
            base,
        }
    }

    /// The l-torsion conjecture plus Malle's conjecture for H.
    pub fn conjecture(base: Base) -> Self {
        BoundContext {
            torsion: TorsionExponentRegistry::conjecture(),
            counts: CountExponentRegistry::malle_values(),
            base,
        }
    }
}

const MAX_DEPTH: usize = 4;

fn r(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

/// Theorem 1: A(G, m) for Frobenius G or A(G, mt) for any G with the chosen abelian kernel.
pub fn theorem_bound(analysis: &GroupAnalysis, degree: DegreeSelector, ctx: &BoundContext) -> Result<ExponentResult> {
    let mut path = Vec::new();
    bound_inner(analysis, degree, ctx, &mut path)
}

fn bound_inner(
    analysis: &GroupAnalysis,
    degree: DegreeSelector,
    ctx: &BoundContext,
    path: &mut Vec<String>,
) -> Result<ExponentResult> {
    let (m, t, p) = (analysis.m, analysis.t, analysis.p);
    if degree == DegreeSelector::Kernel && !analysis.in_f {
        return Err(Error::pre(
            "d = m needs G Frobenius with abelian kernel F; use --degree regular",
        ));
    }
    let h = analysis.quotient()?;
    let h_label = group_label(&h);
    let mut trace = Vec::new();
    let mut flags = Vec::new();

    // D = min over primes q | m of D(k, H, q)
    let mut d_best: Option<(Rational, u64)> = None;
    for q in ntheory::prime_divisors(m) {
        let c = ctx.torsion.lookup(ctx.base, &h_label, q);
        trace.push(TraceStep::new(
            "lookup/D",
            &[("ell", &r(q))],
            c.value.clone(),
            format!("D({}, {h_label}, {q}): {}", ctx.base, c.citation),
        ));
        if d_best.as_ref().is_none_or(|(v, _)| c.value < *v) {
            d_best = Some((c.value, q));
        }
    }
    let (d_val, _) = d_best.expect("m >= 2 has a prime divisor");
    if ctx.torsion.mode == TorsionMode::Conjecture {
        flags.push("l-torsion conjecture: D = eps".into());
    }

    let (a1, a1_steps, a1_flags) = resolve_a1(&h, &h_label, ctx, path)?;
    trace.extend(a1_steps);
    flags.extend(a1_flags);

    let (mr, tr, pr) = (r(m), r(t), r(p));
    let mut branches = Vec::new();
    match degree {
        DegreeSelector::Kernel => {
            let torsion = (&d_val + &a1) * &tr / (&mr - r(1));
            trace.push(TraceStep::new(
                "torsion-term/kernel",
                &[("D", &d_val), ("a1", &a1), ("t", &tr), ("m", &mr)],
                torsion.clone(),
                "(D + a1(H,t)) t/(m-1)",
            ));
            let census = &pr / (&mr * (&pr - r(1)));
            trace.push(TraceStep::new(
                "census-term/kernel",
                &[("p", &pr), ("m", &mr)],
                census.clone(),
                "p/(m(p-1))",
            ));
            branches.push(("torsion-term/kernel".to_string(), torsion));
            branches.push(("census-term/kernel".to_string(), census));
        }
        DegreeSelector::Regular => {
            let torsion = (&a1 + &d_val) / &mr;
            trace.push(TraceStep::new(
                "torsion-term/regular",
                &[("a1", &a1), ("D", &d_val), ("m", &mr)],
                torsion.clone(),
                "(a1(H,t) + D)/m",
            ));
            let census = &pr / (&mr * &tr * (&pr - r(1)));
            trace.push(TraceStep::new(
                "census-term/regular",
                &[("p", &pr), ("m", &mr), ("t", &tr)],
                census.clone(),
                "p/(mt(p-1))",
            ));
            branches.push(("torsion-term/regular".to_string(), torsion));
            branches.push(("census-term/regular".to_string(), census));
        }
    }
    Ok(ExponentResult::from_branches(branches, trace, flags))
}

/// a1(H, t) for H in its regular action: the registry value, improved by
/// applying Theorem 1 to H itself over each of its abelian normal subgroups.
fn resolve_a1(
    h: &crate::perm::PermGroup,
    label: &str,
    ctx: &BoundContext,
    path: &mut Vec<String>,
) -> Result<(Rational, Vec<TraceStep>, Vec<String>)> {
    let t = h.order() as u64;
    let tr = r(t);
    let malle = malle_a(h)?.value;
    let mut steps = Vec::new();
    let mut flags = Vec::new();
    let abelian = h.is_abelian();
    let hit = ctx.counts.lookup(label, t, t, abelian, &malle, ctx.base);
    let mut best: Option<Rational> = None;
    let mut exact = false;
    if let Some(c) = &hit {
        steps.push(TraceStep::new(
            "lookup/a1",
            &[("t", &tr)],
            c.value.clone(),
            format!("a1({label}, {t}): {}", c.citation),
        ));
        // Malle's value is a lower limit for any count exponent, so nothing beats it.
        exact = c.value == malle;
        best = Some(c.value.clone());
    }
    let recurse = ctx.counts.mode == CountMode::Published && !exact;
    let mut needs = Vec::new();
    if recurse {
        if path.iter().any(|l| l == label) {
            needs.push(format!("a1({label}, {t}) (cycle through {})", path.join(" -> ")));
        } else if path.len() >= MAX_DEPTH {
            needs.push(format!("a1({label}, {t}) (recursion depth {MAX_DEPTH} reached)"));
        } else {
            path.push(label.to_string());
            for f in abelian_normal_subgroups(h) {
                if f.len() == h.order() {
                    continue;
                }
                let sub = match notation_parameters(h, &f) {
                    Ok(a) => a,
                    Err(_) => continue,
                };
                match bound_inner(&sub, DegreeSelector::Regular, ctx, path) {
                    Ok(res) => {
                        steps.push(TraceStep::new(
                            "recurse/a1",
                            &[("t", &tr), ("m'", &r(sub.m)), ("t'", &r(sub.t))],
                            res.value.clone(),
                            format!(
                                "Theorem 1 applied to {label} over an abelian normal subgroup of order {}",
                                sub.m
                            ),
                        ));
                        flags.push(format!("a1({label}, {t}) via recursion"));
                        for mut s in res.trace {
                            s.note = format!("within {label}: {}", s.note);
                            steps.push(s);
                        }
                        if best.as_ref().is_none_or(|b| res.value < *b) {
                            best = Some(res.value);
                        }
                    }
                    Err(Error::Unresolved(n)) => needs.extend(n),
                    Err(e) => {
                        path.pop();
                        return Err(e);
                    }
                }
            }
            path.pop();
        }
    }
    match best {
        Some(v) => {
            steps.push(TraceStep::new(
                "choose/a1",
                &[("t", &tr)],
                v.clone(),
                format!("a1({label}, {t})"),
            ));
            flags.sort();
            flags.dedup();
            Ok((v, steps, flags))
        }
        None => {
            needs.insert(0, format!("a1({label}, {t}) over {}", ctx.base));
            Err(Error::Unresolved(needs))
        }
    }
}

/// A cited upward override of an R-value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ROverride {
    pub value: u64,
    pub citation: String,
}

/// The forced power R of a tame new prime in the relative discriminant norm.
pub fn r_value(galois: bool, group_order: u64, p: u64, overrides: &[ROverride]) -> Result<u64> {
    if !ntheory::is_prime(p) {
        return Err(Error::pre(format!("{p} is not prime")));
    }
    let base = if galois {
        if group_order % p != 0 {
            return Err(Error::pre(format!(
                "|G|(1 - 1/p) is not integral for |G| = {group_order}, p = {p}"
            )));
        }
        group_order / p * (p - 1)
    } else {
        p - 1
    };
    let mut value = base;
    for o in overrides {
        if o.citation.trim().is_empty() {
            return Err(Error::pre("an R override needs a citation"));
        }
        if o.value < base {
            return Err(Error::pre(format!("override {} would lower R below {base}", o.value)));
        }
        value = value.max(o.value);
    }
    Ok(value)
}

/// The override for a quadratic step whose Galois closure is not C_2 wr H.
pub fn kluners_override() -> ROverride {
    ROverride {
        value: 2,
        citation: "Kluners: Gal of the closure is not C_2 wr H, so a new prime ramifies to power 2".into(),
    }
}

/// Checks Theorem 1 against Malle's exponent with conjecture-mode registries.
pub fn corollary_mode_check(analysis: &GroupAnalysis, base: Base) -> Result<bool> {
    let ctx = BoundContext::conjecture(base);
    let order = analysis.group.order() as u64;
    let p = ntheory::smallest_prime_factor(order).expect("nontrivial group");
    let regular = theorem_bound(analysis, DegreeSelector::Regular, &ctx)?;
    if regular.value != malle_a_regular_closed_form(order, p)? {
        return Ok(false);
    }
    if analysis.in_f {
        let kernel = theorem_bound(analysis, DegreeSelector::Kernel, &ctx)?;
        let cyclic = analysis.kernel.generating_set().len() <= 1;
        if cyclic && analysis.m % 2 == 1 && ntheory::is_prime(analysis.m) {
            let closed = malle_a_frobenius_closed_form(analysis.m, analysis.t, analysis.p, analysis.p1)?;
            if kernel.value != closed {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The bound for C_m : C_p1 over Q using the prime-cyclic torsion exponent at every
/// ramified prime, valid outside the sparse exceptional set.
pub fn refined_ptbw_bound(m: u64, t: u64, p: u64, p1: u64) -> Result<ExponentResult> {
    if !ntheory::is_prime(t) {
        return Err(Error::pre(format!(
            "t = {t} is not prime; the refinement needs H = C_p1, use theorem_bound"
        )));
    }
    if p1 != t {
        return Err(Error::pre(format!("p1 = {p1} must equal t = {t}")));
    }
    if ntheory::smallest_prime_factor(m) != Some(p) {
        return Err(Error::pre(format!("p = {p} is not the smallest prime of m = {m}")));
    }
    if (m - 1) % t != 0 {
        return Err(Error::pre(format!("t = {t} must divide m - 1")));
    }
    let (mr, tr, pr, p1r) = (r(m), r(t), r(p), r(p1));
    let census = r(1) / (&mr * (r(1) - r(1) / &pr));
    let torsion = &tr / (&mr - r(1)) * (r(1) / (&p1r - r(1)) + rat(1, 2) - r(1) / (r(2) * &mr * (&p1r - r(1))));
    let eps0 = r(1) / (r(4) * &p1r - r(4));
    let trace = vec![
        TraceStep::new(
            "side-condition",
            &[("eps0 bound", &eps0)],
            eps0.clone(),
            "exceptional fields with eps0 < 1/(4 p1 - 4) are excluded; taken as satisfied",
        ),
        TraceStep::new(
            "census-term/refined",
            &[("m", &mr), ("p", &pr)],
            census.clone(),
            "1/(m(1 - 1/p))",
        ),
        TraceStep::new(
            "torsion-term/refined",
            &[("t", &tr), ("m", &mr), ("p1", &p1r)],
            torsion.clone(),
            "(t/(m-1)) (1/(p1-1) + 1/2 - 1/(2m(p1-1)))",
        ),
    ];
    Ok(ExponentResult::from_branches(
        vec![
            ("census-term/refined".into(), census),
            ("torsion-term/refined".into(), torsion),
        ],
        trace,
        vec!["base field Q".into()],
    ))
}

/// The degree-6 and degree-14 cases bounded through an intermediate field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialCase {
    A4Deg6,
    C3sqC4Deg6,
    C3sqC2Deg6,
    D6Deg6,
    C2cubeC7Deg14,
}

impl SpecialCase {
    pub const ALL: [SpecialCase; 5] = [
        SpecialCase::A4Deg6,
        SpecialCase::C3sqC4Deg6,
        SpecialCase::C3sqC2Deg6,
        SpecialCase::D6Deg6,
        SpecialCase::C2cubeC7Deg14,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "A4_deg6" => SpecialCase::A4Deg6,
            "C3sq_C4_deg6" => SpecialCase::C3sqC4Deg6,
            "C3sq_C2_deg6" => SpecialCase::C3sqC2Deg6,
            "D6_deg6" => SpecialCase::D6Deg6,
            "C2cube_C7_deg14" => SpecialCase::C2cubeC7Deg14,
            other => return Err(Error::pre(format!("unknown special case `{other}`"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            SpecialCase::A4Deg6 => "A4_deg6",
            SpecialCase::C3sqC4Deg6 => "C3sq_C4_deg6",
            SpecialCase::C3sqC2Deg6 => "C3sq_C2_deg6",
            SpecialCase::D6Deg6 => "D6_deg6",
            SpecialCase::C2cubeC7Deg14 => "C2cube_C7_deg14",
        }
    }

    /// (relative degree r = [N1:M1], M1 label, a1(M1), prime p of the R-value, Kluners override, description)
    fn data(self) -> (u64, &'static str, Rational, u64, bool, &'static str) {
        match self {
            // N1 = K(sqrt) over the cyclic cubic M; a new prime in N1/M has R = 2 only after Kluners
            SpecialCase::A4Deg6 => (2, "C_3", rat(1, 2), 2, true, "sextic A4 field over its cubic resolvent"),
            // sextic with a quadratic subfield, N1/M1 a non-Galois cubic, R = p - 1 = 2
            SpecialCase::C3sqC4Deg6 => (3, "C_2", rat(1, 1), 3, false, "sextic over its quadratic subfield"),
            SpecialCase::C3sqC2Deg6 => (3, "C_2", rat(1, 1), 3, false, "sextic over its quadratic subfield"),
            SpecialCase::D6Deg6 => (3, "C_2", rat(1, 1), 3, false, "sextic over its quadratic subfield"),
            SpecialCase::C2cubeC7Deg14 => (2, "C_7", rat(1, 6), 2, true, "degree-14 field over its C_7 subfield"),
        }
    }
}

/// N_d(k, G; X) << X^(1/2 + eps) for the special cases, with the tower bookkeeping in the trace.
pub fn special_degree_bound(case: SpecialCase, torsion: &TorsionExponentRegistry) -> ExponentResult {
    let (rel, m1, a1, p, needs_override, what) = case.data();
    let overrides = if needs_override {
        vec![kluners_override()]
    } else {
        vec![]
    };
    let big_r = r_value(false, 0, p, &overrides).expect("cases use primes 2 and 3");
    let d = torsion.lookup(Base::General, m1, rel);
    let (relr, rr) = (r(rel), r(big_r));
    let mut trace = vec![
        TraceStep::new("setup", &[("r", &relr)], relr.clone(), what),
        TraceStep::new(
            "r-value",
            &[("p", &r(p))],
            rr.clone(),
            if needs_override {
                "p - 1 = 1 raised to 2 by the Kluners override".to_string()
            } else {
                "non-Galois relative extension: R = p - 1".to_string()
            },
        ),
        TraceStep::new("lookup/a1", &[], a1.clone(), format!("a1({m1})")),
        TraceStep::new("lookup/D", &[("ell", &r(rel))], d.value.clone(), d.citation.clone()),
    ];
    let census = rat(1, 1) / &rr;
    let sum_exponent = &a1 + &d.value - &relr / &rr;
    trace.push(TraceStep::new(
        "census-term",
        &[("R", &rr)],
        census.clone(),
        format!("fields with a new prime of power R: X^(1/{big_r})"),
    ));
    let tower = {
        let excess = if sum_exponent > Rational::zero() {
            sum_exponent.clone()
        } else {
            Rational::zero()
        };
        &census + excess / &relr
    };
    trace.push(TraceStep::new(
        "tower-term",
        &[("a1", &a1), ("D", &d.value), ("r", &relr), ("R", &rr)],
        tower.clone(),
        format!(
            "sum over M1 of (X^(1/{rel}))^(a1 + D - {rel}/{big_r}) with exponent {sum_exponent}, {}",
            if sum_exponent <= Rational::zero() {
                "non-dominant"
            } else {
                "dominant"
            }
        ),
    ));
    let mut res = ExponentResult::from_branches(
        vec![("census-term".into(), census), ("tower-term".into(), tower)],
        trace,
        vec![],
    );
    if res.branch == "census-term" {
        res.branch = format!("census term X^(1/{big_r}) dominates");
    }
    res
}

/// Outcome of the inequality that decides whether the tower method reaches X^(1/R).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limitation {
    pub holds: bool,
    pub exponent: Rational,
}

/// Tests aH + D - rel/R <= 0, with D the torsion exponent of M1.
pub fn limitation_analysis(a_h: &Rational, d: &Rational, rel_degree: u64, big_r: u64) -> Result<Limitation> {
    if big_r < 1 || rel_degree < 2 {
        return Err(Error::pre("need R >= 1 and relative degree >= 2"));
    }
    let (rel, rr) = (r(rel_degree), r(big_r));
    let holds = a_h + d - &rel / &rr <= Rational::zero();
    let exponent = if holds { r(1) / rr } else { (a_h + d) / rel };
    Ok(Limitation { holds, exponent })
}

#[cfg(test)]
mod tests;
