//! Normal subgroups, Frobenius classification and the (m, t, p, p1) block.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ntheory;
use crate::perm::{coset_action, ElementSet, PermGroup, Permutation};

fn generated(group: &PermGroup, gens: &[Permutation]) -> ElementSet {
    group
        .subgroup(gens)
        .expect("generators are group elements and the closure fits the group")
}

/// Smallest normal subgroup containing `gens`: adds conjugates by the group
/// generators until the generated subgroup is closed under them.
fn normal_closure(group: &PermGroup, mut gens: Vec<Permutation>) -> ElementSet {
    loop {
        let set = generated(group, &gens);
        let outside = gens
            .iter()
            .flat_map(|x| group.generators().iter().map(move |g| x.conjugate_by(g)))
            .find(|y| !set.contains(y));
        match outside {
            Some(y) => gens.push(y),
            None => return set,
        }
    }
}

/// Every normal subgroup, sorted by order and then by element list.
pub fn normal_subgroups(group: &PermGroup) -> Vec<ElementSet> {
    let classes = group.conjugacy_classes();
    let trivial = ElementSet::trivial(group.degree());
    let mut found: BTreeSet<(usize, ElementSet)> = BTreeSet::new();
    let mut seen: HashSet<ElementSet> = HashSet::new();
    let mut frontier = vec![trivial.clone()];
    seen.insert(trivial.clone());
    found.insert((1, trivial));
    while let Some(n) = frontier.pop() {
        let base = n.generating_set();
        for class in &classes {
            if class.iter().next().is_some_and(|x| n.contains(x)) {
                continue;
            }
            let mut gens = base.clone();
            gens.push(class.iter().next().expect("classes are nonempty").clone());
            let next = normal_closure(group, gens);
            if seen.insert(next.clone()) {
                found.insert((next.len(), next.clone()));
                frontier.push(next);
            }
        }
    }
    found.into_iter().map(|(_, s)| s).collect()
}

/// Nontrivial abelian normal subgroups.
pub fn abelian_normal_subgroups(group: &PermGroup) -> Vec<ElementSet> {
    normal_subgroups(group)
        .into_iter()
        .filter(|n| !n.is_trivial() && n.is_abelian())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusData {
    pub kernel: ElementSet,
    pub complement: ElementSet,
    pub kernel_is_abelian: bool,
}

/// Stabilizer-conjugate test: `1 < |H| < |G|` and `H ∩ H^g = 1` for `g ∉ H`.
fn frobenius_by_stabilizer(group: &PermGroup, h: &ElementSet) -> bool {
    if h.len() <= 1 || h.len() >= group.order() {
        return false;
    }
    let mut done: HashSet<usize> = HashSet::new();
    for g in group.elements() {
        if h.contains(g) {
            continue;
        }
        // H^g only depends on the image of the fixed point of H
        if !done.insert(g.image(1)) {
            continue;
        }
        let meets = h
            .iter()
            .filter(|x| !x.is_identity())
            .any(|x| h.contains(&x.conjugate_by(g)));
        if meets {
            return false;
        }
    }
    true
}

/// Fixed-point test: no nonidentity element fixes two points, and some fixes one.
fn frobenius_by_fixed_points(group: &PermGroup) -> bool {
    let mut some_fixes = false;
    for g in group.elements().iter().filter(|g| !g.is_identity()) {
        match g.num_fixed_points() {
            0 => {}
            1 => some_fixes = true,
            _ => return false,
        }
    }
    some_fixes
}

/// Classifies a transitive group as Frobenius, running both characterizations.
pub fn frobenius_classify(group: &PermGroup) -> Result<Option<FrobeniusData>> {
    if !group.is_transitive() {
        return Err(Error::pre("Frobenius classification needs a transitive group"));
    }
    let h = group.stabilizer(1);
    let by_def = frobenius_by_stabilizer(group, &h);
    let by_fix = frobenius_by_fixed_points(group);
    if by_def != by_fix {
        return Err(Error::Invariant(format!(
            "Frobenius characterizations disagree (stabilizer test {by_def}, fixed-point test {by_fix})"
        )));
    }
    if !by_def {
        return Ok(None);
    }
    let kernel = ElementSet::new(
        group
            .elements()
            .iter()
            .filter(|g| g.is_identity() || g.num_fixed_points() == 0)
            .cloned()
            .collect(),
    );
    if !kernel.is_group() || !group.is_normal(&kernel) || kernel.len() != group.degree() {
        return Err(Error::Invariant(
            "fixed-point-free elements do not form a normal subgroup of order d".into(),
        ));
    }
    if kernel.len() * h.len() != group.order() || kernel.intersection(&h).len() != 1 {
        return Err(Error::Invariant("kernel and complement do not split the group".into()));
    }
    let kernel_is_abelian = kernel.is_abelian();
    Ok(Some(FrobeniusData {
        kernel,
        complement: h,
        kernel_is_abelian,
    }))
}

/// The parameter block for a chosen abelian normal subgroup F.
#[derive(Debug, Clone)]
pub struct GroupAnalysis {
    pub group: PermGroup,
    pub abelian_normal_subgroups: Vec<ElementSet>,
    pub frobenius: Option<FrobeniusData>,
    pub kernel: ElementSet,
    pub m: u64,
    pub t: u64,
    pub p: u64,
    pub p1: u64,
    pub in_f1: bool,
    pub in_f: bool,
}

#[derive(Serialize)]
struct AnalysisJson<'a> {
    group: &'a str,
    order: usize,
    degree: usize,
    m: u64,
    t: u64,
    p: u64,
    p1: u64,
    frobenius: bool,
    kernel_generators: Vec<String>,
    abelian_normal_subgroup_orders: Vec<usize>,
    kernel_is_abelian: bool,
}

/// Computes (m, t, p, p1) and the membership flags for the pair (G, F).
pub fn notation_parameters(group: &PermGroup, kernel: &ElementSet) -> Result<GroupAnalysis> {
    group.check_subgroup(kernel)?;
    if kernel.is_trivial() {
        return Err(Error::pre("F must be nontrivial"));
    }
    if !group.is_normal(kernel) {
        return Err(Error::pre("F is not normal in G"));
    }
    if !kernel.is_abelian() {
        return Err(Error::pre("F is not abelian"));
    }
    let m = kernel.len() as u64;
    let t = group.order() as u64 / m;
    if t == 1 {
        return Err(Error::pre(
            "G/F is trivial, so G is abelian; use the abelian count registry",
        ));
    }
    let p = ntheory::smallest_prime_factor(m).expect("m >= 2");
    let p1 = ntheory::smallest_prime_factor(t).expect("t >= 2");
    let frobenius = if group.is_transitive() {
        frobenius_classify(group)?
    } else {
        None
    };
    let in_f = frobenius.as_ref().is_some_and(|f| &f.kernel == kernel);
    Ok(GroupAnalysis {
        group: group.clone(),
        abelian_normal_subgroups: abelian_normal_subgroups(group),
        frobenius,
        kernel: kernel.clone(),
        m,
        t,
        p,
        p1,
        in_f1: true,
        in_f,
    })
}

impl GroupAnalysis {
    /// Uses the Frobenius kernel when there is one, else the unique abelian
    /// normal subgroup. Several candidates without a Frobenius kernel is an error.
    pub fn analyze(group: &PermGroup) -> Result<GroupAnalysis> {
        if group.is_transitive() {
            if let Some(f) = frobenius_classify(group)? {
                if f.kernel_is_abelian {
                    return notation_parameters(group, &f.kernel);
                }
            }
        }
        let cands = abelian_normal_subgroups(group);
        match cands.len() {
            0 => Err(Error::pre("group has no nontrivial abelian normal subgroup")),
            1 => notation_parameters(group, &cands[0]),
            n => Err(Error::pre(format!("{n} abelian normal subgroups; choose F explicitly"))),
        }
    }

    /// G/F in its regular action, i.e. the Galois group of M = Fix(F).
    pub fn quotient(&self) -> Result<PermGroup> {
        coset_action(&self.group, &self.kernel)
    }

    pub fn kernel_generators(&self) -> Vec<String> {
        self.kernel
            .generating_set()
            .iter()
            .map(|g| g.to_cycle_string())
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let json = AnalysisJson {
            group: self.group.name().unwrap_or("unnamed"),
            order: self.group.order(),
            degree: self.group.degree(),
            m: self.m,
            t: self.t,
            p: self.p,
            p1: self.p1,
            frobenius: self.in_f,
            kernel_generators: self.kernel_generators(),
            abelian_normal_subgroup_orders: self.abelian_normal_subgroups.iter().map(ElementSet::len).collect(),
            kernel_is_abelian: self.kernel.is_abelian(),
        };
        serde_json::to_value(json).expect("analysis serializes")
    }
}

/// Invariant factors `d1 | d2 | ...` of an abelian group given as a full element set.
pub fn abelian_invariants(set: &ElementSet) -> Vec<u64> {
    let orders: Vec<u64> = set.iter().map(Permutation::order).collect();
    let mut largest_first: Vec<u64> = Vec::new();
    for (p, a) in ntheory::factor(set.len() as u64) {
        // r[k-1] = log_p |G[p^k]| / |G[p^(k-1)]| = number of factors of exponent >= k
        let mut r = Vec::new();
        let mut prev = 1u64;
        for k in 1..=a {
            let pk = p.pow(k);
            let c = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            r.push((c / prev).ilog(p));
            prev = c;
            if c == p.pow(a) {
                break;
            }
        }
        let count = r.first().copied().unwrap_or(0) as usize;
        for j in 0..count {
            let e = r.iter().filter(|&&rk| rk as usize > j).count() as u32;
            if largest_first.len() <= j {
                largest_first.push(1);
            }
            largest_first[j] *= p.pow(e);
        }
    }
    largest_first.reverse();
    largest_first
}

/// A short isomorphism-class label for small groups, used as a registry key.
///
/// Recognizes cyclic `C_n`, elementary abelian `C_p^k`, other abelian groups
/// as `C_a x C_b`, dihedral `D_n`, `A_4`, `S_4`, metacyclic `C_m:C_t` and
/// falls back to `G_<order>`.
pub fn group_label(group: &PermGroup) -> String {
    let n = group.order() as u64;
    let all = group.element_set();
    if group.is_abelian() {
        let inv = abelian_invariants(&all);
        if inv.len() <= 1 {
            return format!("C_{n}");
        }
        let p = inv[0];
        if inv.iter().all(|&d| d == p) && ntheory::is_prime(p) {
            return format!("C_{p}^{}", inv.len());
        }
        let parts: Vec<String> = inv.iter().map(|d| format!("C_{d}")).collect();
        return parts.join(" x ");
    }
    let elements = group.elements();
    // dihedral: a cyclic subgroup of index 2 with every outside element an involution
    if n % 2 == 0 {
        let half = n / 2;
        if let Some(r) = elements.iter().find(|g| g.order() == half) {
            let c = generated(group, std::slice::from_ref(r));
            if elements.iter().filter(|g| !c.contains(g)).all(|g| g.order() == 2) {
                return format!("D_{half}");
            }
        }
    }
    if n == 12 && elements.iter().all(|g| g.order() != 6) && elements.iter().all(|g| g.order() != 4) {
        return "A_4".into();
    }
    if n == 24 && elements.iter().filter(|g| g.order() == 2).count() == 9 && elements.iter().any(|g| g.order() == 4) {
        let normals = normal_subgroups(group);
        if normals.iter().any(|s| s.len() == 12) && !normals.iter().any(|s| s.len() == 2) {
            return "S_4".into();
        }
    }
    // metacyclic C_m:C_t with cyclic normal C_m and cyclic quotient
    let mut best: Option<(u64, u64)> = None;
    for nsub in normal_subgroups(group) {
        let m = nsub.len() as u64;
        if m == 1 || m == n {
            continue;
        }
        let cyclic = nsub.iter().any(|g| g.order() == m);
        let t = n / m;
        let quotient_cyclic = elements.iter().any(|g| {
            // order of gF in G/F
            (1..=t).find(|&k| nsub.contains(&g.pow(k))) == Some(t)
        });
        let coprime = num_integer::gcd(m, t) == 1;
        if cyclic && quotient_cyclic && coprime && best.is_none_or(|(bm, _)| m > bm) {
            best = Some((m, t));
        }
    }
    if let Some((m, t)) = best {
        return format!("C_{m}:C_{t}");
    }
    format!("G_{n}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::named_group;

    fn orders(sets: &[ElementSet]) -> Vec<usize> {
        sets.iter().map(ElementSet::len).collect()
    }

    /// Brute force: every union of conjugacy classes that is closed under products.
    fn brute_normal(group: &PermGroup) -> Vec<ElementSet> {
        let classes = group.conjugacy_classes();
        let rest = &classes[1..];
        let mut out = Vec::new();
        for mask in 0u32..(1 << rest.len()) {
            let mut els: Vec<Permutation> = classes[0].iter().cloned().collect();
            for (i, c) in rest.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    els.extend(c.iter().cloned());
                }
            }
            let s = ElementSet::new(els);
            if s.iter().all(|a| s.iter().all(|b| s.contains(&a.compose(b).unwrap()))) {
                out.push((s.len(), s));
            }
        }
        out.sort();
        out.into_iter().map(|(_, s)| s).collect()
    }

    #[test]
    fn normal_subgroups_of_small_groups() {
        let a4 = named_group("A4").unwrap();
        assert_eq!(orders(&normal_subgroups(&a4)), vec![1, 4, 12]);
        let c6 = named_group("C6").unwrap();
        assert_eq!(orders(&normal_subgroups(&c6)), vec![1, 2, 3, 6]);
        let s3 = named_group("S3").unwrap();
        assert_eq!(orders(&normal_subgroups(&s3)), vec![1, 3, 6]);
        for text in ["A4", "S4", "dihedral(6)", "semidirect(7,3)", "affine_gf(8,gen)"] {
            let g = named_group(text).unwrap();
            assert_eq!(normal_subgroups(&g), brute_normal(&g), "{text}");
        }
    }

    #[test]
    fn abelian_normal_examples() {
        let a4 = named_group("A4").unwrap();
        assert_eq!(orders(&abelian_normal_subgroups(&a4)), vec![4]);
        let f56 = named_group("affine_gf(8,gen)").unwrap();
        assert_eq!(orders(&abelian_normal_subgroups(&f56)), vec![8]);
        let s4 = named_group("S4").unwrap();
        assert_eq!(orders(&abelian_normal_subgroups(&s4)), vec![4]);
    }

    #[test]
    fn frobenius_examples() {
        for (text, kernel) in [
            ("D5", 5),
            ("A4", 4),
            ("semidirect(5,4)", 5),
            ("semidirect(7,3)", 7),
            ("affine_gf(8,gen)", 8),
            ("affine_gf(9,gen^2)", 9),
        ] {
            let g = named_group(text).unwrap();
            let f = frobenius_classify(&g).unwrap().expect(text);
            assert_eq!(f.kernel.len(), kernel, "{text}");
            assert_eq!(f.kernel.len() * f.complement.len(), g.order());
            assert!(f.kernel_is_abelian);
        }
        // the field automorphism fixes 0 and 1, so this action is not Frobenius
        let agl = named_group("affine_gf(8,gen,frob)").unwrap();
        assert!(frobenius_classify(&agl).unwrap().is_none());
        assert_eq!(orders(&abelian_normal_subgroups(&agl)), vec![8]);
        let a4c2 = named_group("product(A4,C2)").unwrap();
        assert!(frobenius_classify(&a4c2).unwrap().is_none());
        assert!(!abelian_normal_subgroups(&a4c2).is_empty());
    }

    #[test]
    fn regular_actions_are_not_frobenius() {
        for text in ["S3@regular", "D5@regular", "A4@regular"] {
            let g = named_group(text).unwrap();
            assert!(frobenius_classify(&g).unwrap().is_none());
        }
    }

    #[test]
    fn intransitive_input_is_rejected() {
        let g = named_group("gens(4;(1 2))").unwrap();
        assert!(frobenius_classify(&g).is_err());
    }

    #[test]
    fn parameter_blocks() {
        let a4 = named_group("A4").unwrap();
        let an = GroupAnalysis::analyze(&a4).unwrap();
        assert_eq!((an.m, an.t, an.p, an.p1, an.in_f), (4, 3, 2, 3, true));
        let g = named_group("affine_gf(8,gen,frob)").unwrap();
        let an = GroupAnalysis::analyze(&g).unwrap();
        assert_eq!((an.m, an.t, an.p, an.p1), (8, 21, 2, 3));
        let d5 = named_group("D5").unwrap();
        let an = GroupAnalysis::analyze(&d5).unwrap();
        assert_eq!((an.m, an.t, an.p, an.p1), (5, 2, 5, 2));
    }

    #[test]
    fn non_normal_kernel_is_rejected() {
        let s3 = named_group("S3").unwrap();
        let u = s3.subgroup(&[Permutation::parse_cycles("(1 2)", 3).unwrap()]).unwrap();
        assert!(notation_parameters(&s3, &u).is_err());
    }

    #[test]
    fn labels() {
        let cases = [
            ("C6", "C_6"),
            ("D5", "D_5"),
            ("S3", "D_3"),
            ("A4", "A_4"),
            ("S4", "S_4"),
            ("gens(4;(1 2)(3 4),(1 3)(2 4))", "C_2^2"),
            ("semidirect(5,4)", "C_5:C_4"),
            ("semidirect(7,3)", "C_7:C_3"),
            ("product(C2,C4)", "C_2 x C_4"),
        ];
        for (text, want) in cases {
            assert_eq!(group_label(&named_group(text).unwrap()), want, "{text}");
        }
    }

    #[test]
    fn quotient_is_regular_representation() {
        let g = named_group("affine_gf(8,gen,frob)").unwrap();
        let an = GroupAnalysis::analyze(&g).unwrap();
        let h = an.quotient().unwrap();
        assert_eq!((h.degree(), h.order()), (21, 21));
        assert_eq!(group_label(&h), "C_7:C_3");
    }
}
