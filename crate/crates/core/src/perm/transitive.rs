//! Transitive groups of degree at most 6, numbered as in the standard tables.

use crate::error::{Error, Result};

use super::group::{coset_action, group_closure, PermGroup, DEFAULT_CAP};
use super::named;
use super::permutation::Permutation;

/// Library entry: degree, number within the degree, short name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TransitiveLabel {
    pub degree: usize,
    pub number: usize,
    pub name: &'static str,
}

impl std::fmt::Display for TransitiveLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name)
    }
}

const LIBRARY: &[(usize, usize, &str)] = &[
    (1, 1, "C1"),
    (2, 1, "C2"),
    (3, 1, "C3"),
    (3, 2, "S3"),
    (4, 1, "C4"),
    (4, 2, "V4"),
    (4, 3, "D4"),
    (4, 4, "A4"),
    (4, 5, "S4"),
    (5, 1, "C5"),
    (5, 2, "D5"),
    (5, 3, "F20"),
    (5, 4, "A5"),
    (5, 5, "S5"),
    (6, 1, "C6"),
    (6, 2, "S3(6)"),
    (6, 3, "D6"),
    (6, 4, "A4(6)"),
    (6, 5, "F18"),
    (6, 6, "2A4"),
    (6, 7, "S4(6d)"),
    (6, 8, "S4(6c)"),
    (6, 9, "F18:2"),
    (6, 10, "F36"),
    (6, 11, "2S4"),
    (6, 12, "PSL(2,5)"),
    (6, 13, "F36:2"),
    (6, 14, "PGL(2,5)"),
    (6, 15, "A6"),
    (6, 16, "S6"),
];

pub fn labels(degree: usize) -> Vec<TransitiveLabel> {
    LIBRARY
        .iter()
        .filter(|e| e.0 == degree)
        .map(|&(degree, number, name)| TransitiveLabel { degree, number, name })
        .collect()
}

pub fn label(degree: usize, number: usize) -> Option<TransitiveLabel> {
    labels(degree).into_iter().find(|l| l.number == number)
}

/// Looks up a label by its short name or `nTk` form within a degree.
pub fn label_by_name(degree: usize, name: &str) -> Option<TransitiveLabel> {
    let lower = name.to_ascii_lowercase();
    if let Some((d, k)) = lower.split_once('t') {
        if let (Ok(d), Ok(k)) = (d.parse::<usize>(), k.parse::<usize>()) {
            if d == degree {
                return label(d, k);
            }
        }
    }
    labels(degree).into_iter().find(|l| l.name.eq_ignore_ascii_case(name))
}

fn p(d: usize, s: &str) -> Permutation {
    Permutation::parse_cycles(s, d).expect("library permutation")
}

fn closure(d: usize, gens: &[&str]) -> Result<PermGroup> {
    let gens: Vec<Permutation> = gens.iter().map(|s| p(d, s)).collect();
    group_closure(&gens, DEFAULT_CAP)
}

// Edges of K4 as points 1..6: 12, 13, 14, 23, 24, 34.
const EDGES: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

fn on_edges(g: &Permutation) -> Permutation {
    let images: Vec<usize> = EDGES
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (g.image(a), g.image(b));
            let key = (x.min(y), x.max(y));
            EDGES.iter().position(|&e| e == key).unwrap() + 1
        })
        .collect();
    Permutation::from_images(&images).expect("edge action is a bijection")
}

/// Swaps each edge with the complementary edge.
fn complement() -> Permutation {
    p(6, "(1 6)(2 5)(3 4)")
}

fn s4_on_edges(twisted: bool, with_complement: bool) -> Result<PermGroup> {
    let s4 = named::symmetric(4)?;
    let mut gens: Vec<Permutation> = s4
        .generators()
        .iter()
        .map(|g| {
            let e = on_edges(g);
            if twisted && !g.is_even() {
                e.compose_unchecked(&complement())
            } else {
                e
            }
        })
        .collect();
    if with_complement {
        gens.push(complement());
    }
    group_closure(&gens, DEFAULT_CAP)
}

/// The transitive group `nTk` in its degree-`n` action.
pub fn transitive_group(n: usize, k: usize) -> Result<PermGroup> {
    let lbl =
        label(n, k).ok_or_else(|| Error::pre(format!("transitive({n},{k}) is not in the library (degree <= 6)")))?;
    let g = match (n, k) {
        (1, 1) => Ok(PermGroup::trivial(1)),
        (2, 1) | (3, 1) | (4, 1) | (5, 1) | (6, 1) => named::cyclic(n),
        (3, 2) => named::symmetric(3),
        (4, 2) => closure(4, &["(1 2)(3 4)", "(1 3)(2 4)"]),
        (4, 3) => named::dihedral(4),
        (4, 4) => named::alternating(4),
        (4, 5) => named::symmetric(4),
        (5, 2) => named::dihedral(5),
        (5, 3) => named::semidirect_cyclic(5, 4, Some(2)),
        (5, 4) => named::alternating(5),
        (5, 5) => named::symmetric(5),
        (6, 2) => closure(6, &["(1 2 3)(4 5 6)", "(1 4)(2 6)(3 5)"]),
        (6, 3) => named::dihedral(6),
        (6, 4) => {
            let a4 = named::alternating(4)?;
            let u = a4.subgroup(&[p(4, "(1 2)(3 4)")])?;
            coset_action(&a4, &u)
        }
        (6, 5) => closure(6, &["(1 2 3)", "(4 5 6)", "(1 4)(2 5)(3 6)"]),
        (6, 6) => {
            let a4 = named::alternating(4)?;
            let mut gens: Vec<Permutation> = a4.generators().iter().map(on_edges).collect();
            gens.push(complement());
            group_closure(&gens, DEFAULT_CAP)
        }
        (6, 7) => s4_on_edges(false, false),
        (6, 8) => s4_on_edges(true, false),
        (6, 9) => closure(6, &["(1 2 3)", "(4 5 6)", "(1 2)(4 5)", "(1 4)(2 5)(3 6)"]),
        (6, 10) => closure(6, &["(1 2 3)", "(4 5 6)", "(1 4 2 5)(3 6)"]),
        (6, 11) => s4_on_edges(false, true),
        // P^1(F_5) with 0..4 as points 1..5 and infinity as 6
        (6, 12) => closure(6, &["(1 2 3 4 5)", "(2 5)(3 4)", "(1 6)(2 5)"]),
        (6, 13) => closure(6, &["(1 2 3)", "(1 2)", "(1 4)(2 5)(3 6)"]),
        (6, 14) => closure(6, &["(1 2 3 4 5)", "(2 3 5 4)", "(1 6)(2 5)"]),
        (6, 15) => named::alternating(6),
        (6, 16) => named::symmetric(6),
        _ => unreachable!("label table and constructors agree"),
    }?;
    Ok(g.with_name(format!("{n}T{k} {}", lbl.name)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    use crate::perm::CycleType;

    const ORDERS: &[(usize, usize, usize)] = &[
        (3, 1, 3),
        (3, 2, 6),
        (4, 1, 4),
        (4, 2, 4),
        (4, 3, 8),
        (4, 4, 12),
        (4, 5, 24),
        (5, 1, 5),
        (5, 2, 10),
        (5, 3, 20),
        (5, 4, 60),
        (5, 5, 120),
        (6, 1, 6),
        (6, 2, 6),
        (6, 3, 12),
        (6, 4, 12),
        (6, 5, 18),
        (6, 6, 24),
        (6, 7, 24),
        (6, 8, 24),
        (6, 9, 36),
        (6, 10, 36),
        (6, 11, 48),
        (6, 12, 60),
        (6, 13, 72),
        (6, 14, 120),
        (6, 15, 360),
        (6, 16, 720),
    ];

    fn profile(g: &PermGroup) -> BTreeMap<CycleType, usize> {
        let mut m = BTreeMap::new();
        for e in g.elements() {
            *m.entry(e.cycle_type()).or_insert(0) += 1;
        }
        m
    }

    #[test]
    fn library_orders_and_transitivity() {
        for &(n, k, order) in ORDERS {
            let g = transitive_group(n, k).unwrap();
            assert_eq!(g.order(), order, "{n}T{k}");
            assert_eq!(g.degree(), n);
            assert!(g.is_transitive(), "{n}T{k}");
        }
    }

    #[test]
    fn degree_six_groups_are_pairwise_distinct() {
        let groups: Vec<_> = (1..=16).map(|k| transitive_group(6, k).unwrap()).collect();
        for i in 0..16 {
            for j in i + 1..16 {
                let same = groups[i].order() == groups[j].order() && profile(&groups[i]) == profile(&groups[j]);
                assert!(!same, "6T{} and 6T{} look identical", i + 1, j + 1);
            }
        }
    }

    #[test]
    fn parity_of_edge_actions() {
        assert!(transitive_group(6, 7).unwrap().elements().iter().all(|g| g.is_even()));
        assert!(!transitive_group(6, 8).unwrap().elements().iter().all(|g| g.is_even()));
        assert!(transitive_group(6, 12).unwrap().elements().iter().all(|g| g.is_even()));
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(label_by_name(3, "S3").unwrap().number, 2);
        assert_eq!(label_by_name(6, "6T5").unwrap().name, "F18");
        assert!(label_by_name(4, "F20").is_none());
    }
}
