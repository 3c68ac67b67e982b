use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

use super::permutation::Permutation;

/// Default cap on the number of elements materialized by a closure.
pub const DEFAULT_CAP: usize = 100_000;

/// A finite permutation group with its full element list.
///
/// Elements are kept sorted lexicographically by image sequence, so the
/// identity is always `elements()[0]` and every traversal is deterministic.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    name: Option<String>,
    index: OnceLock<HashMap<Permutation, usize>>,
}

/// A sorted set of permutations, typically a subgroup of some `PermGroup`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(Vec<Permutation>);

impl ElementSet {
    pub fn new(mut elements: Vec<Permutation>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        ElementSet(elements)
    }

    pub fn trivial(degree: usize) -> Self {
        ElementSet(vec![Permutation::identity(degree)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.0.binary_search(g).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Permutation> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Permutation] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_identity()
    }

    pub fn is_subset_of(&self, other: &ElementSet) -> bool {
        self.0.iter().all(|g| other.contains(g))
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        ElementSet(self.0.iter().filter(|g| other.contains(g)).cloned().collect())
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generating_set();
        gens.iter().enumerate().all(|(i, a)| {
            gens[i + 1..]
                .iter()
                .all(|b| a.compose_unchecked(b) == b.compose_unchecked(a))
        })
    }

    /// Greedy generating set: walk the elements in order, keeping each one not
    /// already in the closure of those kept so far. Assumes `self` is a group.
    pub fn generating_set(&self) -> Vec<Permutation> {
        let mut gens: Vec<Permutation> = Vec::new();
        let mut span: HashSet<Permutation> = HashSet::new();
        if let Some(e) = self.0.first() {
            span.insert(Permutation::identity(e.degree()));
        }
        for g in &self.0 {
            if span.contains(g) {
                continue;
            }
            gens.push(g.clone());
            span = closure_set(&gens, usize::MAX).unwrap_or_default();
            if span.len() == self.0.len() {
                break;
            }
        }
        gens
    }

    /// True when this set contains the identity and is closed under composition.
    pub fn is_group(&self) -> bool {
        let Some(first) = self.0.first() else {
            return false;
        };
        if !first.is_identity() {
            return false;
        }
        let gens = self.generating_set();
        if gens.is_empty() {
            return self.0.len() == 1;
        }
        match closure_set(&gens, self.0.len()) {
            Ok(set) => set.len() == self.0.len() && set.iter().all(|g| self.contains(g)),
            Err(_) => false,
        }
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = &'a Permutation;
    type IntoIter = std::slice::Iter<'a, Permutation>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

fn closure_set(generators: &[Permutation], cap: usize) -> Result<HashSet<Permutation>> {
    let degree = generators[0].degree();
    let identity = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(identity.clone());
    queue.push_back(identity);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = g.compose_unchecked(&x);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::Capacity { cap });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

/// Closes `generators` under composition, returning the whole group.
///
/// Fails with a capacity error once more than `cap` elements appear.
pub fn group_closure(generators: &[Permutation], cap: usize) -> Result<PermGroup> {
    let Some(first) = generators.first() else {
        return Err(Error::pre("group closure needs at least one generator"));
    };
    let degree = first.degree();
    if let Some(bad) = generators.iter().find(|g| g.degree() != degree) {
        return Err(Error::DegreeMismatch(degree, bad.degree()));
    }
    let set = closure_set(generators, cap)?;
    let mut elements: Vec<Permutation> = set.into_iter().collect();
    elements.sort_unstable();
    Ok(PermGroup {
        degree,
        generators: generators.to_vec(),
        elements,
        name: None,
        index: OnceLock::new(),
    })
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: vec![Permutation::identity(degree)],
            elements: vec![Permutation::identity(degree)],
            name: None,
            index: OnceLock::new(),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element_set(&self) -> ElementSet {
        ElementSet(self.elements.clone())
    }

    pub fn identity(&self) -> &Permutation {
        &self.elements[0]
    }

    fn index(&self) -> &HashMap<Permutation, usize> {
        self.index
            .get_or_init(|| self.elements.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect())
    }

    /// Position of `g` in the sorted element list.
    pub fn position(&self, g: &Permutation) -> Option<usize> {
        self.index().get(g).copied()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.position(g).is_some()
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, a)| {
            self.generators[i + 1..]
                .iter()
                .all(|b| a.compose_unchecked(b) == b.compose_unchecked(a))
        })
    }

    pub fn is_cyclic(&self) -> bool {
        let n = self.order() as u64;
        self.elements.iter().any(|g| g.order() == n)
    }

    /// Orbit of a 1-based point under the group.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree + 1];
        let mut queue = VecDeque::from([point]);
        seen[point] = true;
        let mut out = vec![point];
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.image(x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(1).len() == self.degree
    }

    pub fn stabilizer(&self, point: usize) -> ElementSet {
        ElementSet(
            self.elements
                .iter()
                .filter(|g| g.image(point) == point)
                .cloned()
                .collect(),
        )
    }

    /// Checks that `set` is a subgroup of this group.
    pub fn check_subgroup(&self, set: &ElementSet) -> Result<()> {
        if let Some(g) = set.iter().find(|g| !self.contains(g)) {
            return Err(Error::NotSubgroup(format!("{g} is not in the group")));
        }
        if !set.is_group() {
            return Err(Error::NotSubgroup(
                "set is not closed under composition or lacks the identity".into(),
            ));
        }
        Ok(())
    }

    /// Subgroup generated by `gens`; all must be elements of this group.
    pub fn subgroup(&self, gens: &[Permutation]) -> Result<ElementSet> {
        if gens.is_empty() {
            return Ok(ElementSet::trivial(self.degree));
        }
        if let Some(g) = gens.iter().find(|g| !self.contains(g)) {
            return Err(Error::NotSubgroup(format!("{g} is not in the group")));
        }
        let set = closure_set(gens, self.order())?;
        Ok(ElementSet::new(set.into_iter().collect()))
    }

    pub fn is_normal(&self, set: &ElementSet) -> bool {
        self.generators
            .iter()
            .all(|g| set.iter().all(|x| set.contains(&x.conjugate_by(g))))
    }

    /// Intersection of all conjugates of a subgroup.
    pub fn core(&self, set: &ElementSet) -> ElementSet {
        let mut core = set.clone();
        for g in &self.elements {
            core = ElementSet(
                core.0
                    .iter()
                    .filter(|x| set.contains(&x.conjugate_by(&g.inverse())))
                    .cloned()
                    .collect(),
            );
            if core.len() == 1 {
                break;
            }
        }
        core
    }

    /// Conjugacy classes, each sorted, listed by smallest element.
    pub fn conjugacy_classes(&self) -> Vec<ElementSet> {
        let mut assigned = vec![false; self.order()];
        let mut classes = Vec::new();
        for (i, x) in self.elements.iter().enumerate() {
            if assigned[i] {
                continue;
            }
            let mut class = vec![x.clone()];
            assigned[i] = true;
            let mut queue = VecDeque::from([x.clone()]);
            while let Some(y) = queue.pop_front() {
                for g in &self.generators {
                    let z = y.conjugate_by(g);
                    let k = self.position(&z).expect("conjugate stays in the group");
                    if !assigned[k] {
                        assigned[k] = true;
                        class.push(z.clone());
                        queue.push_back(z);
                    }
                }
            }
            classes.push(ElementSet::new(class));
        }
        classes
    }

    /// Smallest prime dividing the group order, if the group is nontrivial.
    pub fn smallest_prime_divisor(&self) -> Option<u64> {
        crate::ntheory::smallest_prime_factor(self.order() as u64)
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for PermGroup {}

/// Permutation action of `group` on the left cosets of `subgroup`.
///
/// Cosets are numbered in order of their smallest element, so the result is
/// deterministic. The kernel of the action is the core of `subgroup`; the
/// returned group is its image and so may be a proper quotient of `group`.
pub fn coset_action(group: &PermGroup, subgroup: &ElementSet) -> Result<PermGroup> {
    group.check_subgroup(subgroup)?;
    let mut coset_of = vec![usize::MAX; group.order()];
    let mut reps = Vec::new();
    for (i, g) in group.elements().iter().enumerate() {
        if coset_of[i] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(g.clone());
        for u in subgroup {
            let k = group
                .position(&g.compose_unchecked(u))
                .expect("subgroup element times group element stays in the group");
            coset_of[k] = c;
        }
    }
    let n = reps.len();
    let act = |h: &Permutation| -> Permutation {
        let images = reps
            .iter()
            .map(|r| {
                let k = group.position(&h.compose_unchecked(r)).expect("closed");
                coset_of[k] as u32
            })
            .collect();
        Permutation::from_raw(images)
    };
    let gens: Vec<Permutation> = group.generators().iter().map(act).collect();
    debug_assert_eq!(gens[0].degree(), n);
    group_closure(&gens, group.order())
}

/// Regular representation: the action on the cosets of the trivial subgroup.
pub fn regular_action(group: &PermGroup) -> Result<PermGroup> {
    coset_action(group, &ElementSet::trivial(group.degree()))
}

/// Direct product acting on the Cartesian product of the point sets.
///
/// Point `(i, j)` is numbered `(i - 1) * d2 + j`.
pub fn direct_product(a: &PermGroup, b: &PermGroup, cap: usize) -> Result<PermGroup> {
    let (d1, d2) = (a.degree(), b.degree());
    let lift_left = |g: &Permutation| {
        let mut images = vec![0u32; d1 * d2];
        for i in 0..d1 {
            for j in 0..d2 {
                images[i * d2 + j] = (g.raw()[i] as usize * d2 + j) as u32;
            }
        }
        Permutation::from_raw(images)
    };
    let lift_right = |g: &Permutation| {
        let mut images = vec![0u32; d1 * d2];
        for i in 0..d1 {
            for j in 0..d2 {
                images[i * d2 + j] = (i * d2 + g.raw()[j] as usize) as u32;
            }
        }
        Permutation::from_raw(images)
    };
    let mut gens: Vec<Permutation> = a.generators().iter().map(lift_left).collect();
    gens.extend(b.generators().iter().map(lift_right));
    group_closure(&gens, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(d: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(s, d).unwrap()
    }

    /// Independent closure: repeatedly multiply every pair until nothing new appears.
    fn naive_closure(gens: &[Permutation]) -> Vec<Permutation> {
        let mut set: Vec<Permutation> = gens.to_vec();
        set.push(Permutation::identity(gens[0].degree()));
        set.sort();
        set.dedup();
        loop {
            let mut next = set.clone();
            for a in &set {
                for b in &set {
                    next.push(a.compose(b).unwrap());
                }
            }
            next.sort();
            next.dedup();
            if next.len() == set.len() {
                return next;
            }
            set = next;
        }
    }

    #[test]
    fn dihedral_five_has_order_ten() {
        let gens = [p(5, "(1 2 3 4 5)"), p(5, "(2 5)(3 4)")];
        let g = group_closure(&gens, DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 10);
        assert_eq!(g.elements(), naive_closure(&gens).as_slice());
    }

    #[test]
    fn small_closures() {
        let g = group_closure(&[Permutation::identity(3)], DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 1);
        let s3 = group_closure(&[p(3, "(1 2)"), p(3, "(1 2 3)")], DEFAULT_CAP).unwrap();
        assert_eq!(s3.order(), 6);
    }

    #[test]
    fn closure_cap_is_reported() {
        let gens = [p(6, "(1 2)"), p(6, "(1 2 3 4 5 6)")];
        match group_closure(&gens, 100) {
            Err(Error::Capacity { cap }) => assert_eq!(cap, 100),
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn closure_is_idempotent() {
        let gens = [p(4, "(1 2 3)"), p(4, "(2 3 4)")];
        let g = group_closure(&gens, DEFAULT_CAP).unwrap();
        let again = group_closure(g.elements(), DEFAULT_CAP).unwrap();
        assert_eq!(g.elements(), again.elements());
    }

    #[test]
    fn coset_action_of_a4_on_double_transposition() {
        let a4 = group_closure(&[p(4, "(1 2 3)"), p(4, "(2 3 4)")], DEFAULT_CAP).unwrap();
        let u = a4.subgroup(&[p(4, "(1 2)(3 4)")]).unwrap();
        let act = coset_action(&a4, &u).unwrap();
        assert_eq!(act.degree(), 6);
        assert_eq!(act.order(), 12);
        assert!(act.is_transitive());
    }

    #[test]
    fn coset_action_on_whole_group_is_trivial() {
        let a4 = group_closure(&[p(4, "(1 2 3)"), p(4, "(2 3 4)")], DEFAULT_CAP).unwrap();
        let act = coset_action(&a4, &a4.element_set()).unwrap();
        assert_eq!(act.degree(), 1);
        assert_eq!(act.order(), 1);
    }

    #[test]
    fn dihedral_on_reflection_cosets_is_dihedral() {
        let d5 = group_closure(&[p(5, "(1 2 3 4 5)"), p(5, "(2 5)(3 4)")], DEFAULT_CAP).unwrap();
        let u = d5.subgroup(&[p(5, "(2 5)(3 4)")]).unwrap();
        let act = coset_action(&d5, &u).unwrap();
        assert_eq!(act.degree(), 5);
        assert_eq!(act.order(), 10);
        // brute-force coset table: h·gU computed from explicit coset sets
        let cosets: Vec<ElementSet> = {
            let mut seen: Vec<ElementSet> = Vec::new();
            for g in d5.elements() {
                let c = ElementSet::new(u.iter().map(|x| g.compose(x).unwrap()).collect());
                if !seen.contains(&c) {
                    seen.push(c);
                }
            }
            seen
        };
        assert_eq!(cosets.len(), 5);
        for h in d5.generators() {
            for c in &cosets {
                let moved = ElementSet::new(c.iter().map(|x| h.compose(x).unwrap()).collect());
                assert!(cosets.contains(&moved));
            }
        }
    }

    #[test]
    fn non_subgroup_is_rejected() {
        let s3 = group_closure(&[p(3, "(1 2)"), p(3, "(1 2 3)")], DEFAULT_CAP).unwrap();
        let bad = ElementSet::new(vec![Permutation::identity(3), p(3, "(1 2 3)")]);
        assert!(coset_action(&s3, &bad).is_err());
    }

    #[test]
    fn regular_action_has_trivial_stabilizers() {
        let s3 = group_closure(&[p(3, "(1 2)"), p(3, "(1 2 3)")], DEFAULT_CAP).unwrap();
        let reg = regular_action(&s3).unwrap();
        assert_eq!(reg.degree(), 6);
        assert_eq!(reg.order(), 6);
        for pt in 1..=6 {
            assert_eq!(reg.stabilizer(pt).len(), 1);
        }
    }

    #[test]
    fn conjugacy_classes_of_s4() {
        let s4 = group_closure(&[p(4, "(1 2)"), p(4, "(1 2 3 4)")], DEFAULT_CAP).unwrap();
        let mut sizes: Vec<usize> = s4.conjugacy_classes().iter().map(ElementSet::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3, 6, 6, 8]);
    }
}
