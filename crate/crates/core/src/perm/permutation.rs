use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A permutation of the points `1..=d`.
///
/// Stored 0-based internally; every public accessor speaks 1-based points.
/// The derived ordering is lexicographic on the image sequence, which is the
/// element order used throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u32]>,
}

/// Multiset of cycle lengths, sorted in decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of cycles, fixed points included.
    pub fn num_cycles(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 1-based images: `images[i-1]` is the image of `i`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let d = images.len();
        if d == 0 {
            return Err(Error::InvalidPermutation("degree must be at least 1".into()));
        }
        let mut seen = vec![false; d];
        let mut out = Vec::with_capacity(d);
        for &im in images {
            if im == 0 || im > d || seen[im - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "images {images:?} are not a bijection on 1..={d}"
                )));
            }
            seen[im - 1] = true;
            out.push((im - 1) as u32);
        }
        Ok(Permutation {
            images: out.into_boxed_slice(),
        })
    }

    /// 0-based constructor for internal use; the caller guarantees bijectivity.
    pub(crate) fn from_raw(images: Vec<u32>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| v as usize == i)
        });
        Permutation {
            images: images.into_boxed_slice(),
        }
    }

    /// Builds a permutation of degree `degree` from disjoint cycles of 1-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=degree).collect();
        let mut touched = vec![false; degree + 1];
        for cycle in cycles {
            for (k, &pt) in cycle.iter().enumerate() {
                if pt == 0 || pt > degree {
                    return Err(Error::InvalidPermutation(format!("point {pt} outside 1..={degree}")));
                }
                if touched[pt] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {pt} appears twice in cycle notation"
                    )));
                }
                touched[pt] = true;
                images[pt - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        Permutation::from_images(&images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `point`.
    pub fn image(&self, point: usize) -> usize {
        self.images[point - 1] as usize + 1
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.images
    }

    /// 1-based image sequence.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v as usize == i)
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Permutation {
            images: inv.into_boxed_slice(),
        }
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.compose_unchecked(&self.compose_unchecked(&g.inverse()))
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            base = base.compose_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Orbits of `⟨self⟩` on `1..=d`, each sorted, listed by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                orbit.push(x + 1);
                x = self.images[x] as usize;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn num_orbits(&self) -> usize {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut count = 0;
        for start in 0..d {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
            }
        }
        count
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::new(self.orbits().iter().map(Vec::len).collect())
    }

    pub fn order(&self) -> u64 {
        self.orbits()
            .iter()
            .fold(1u64, |acc, o| num_integer::lcm(acc, o.len() as u64))
    }

    pub fn num_fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &v)| *i == v as usize)
            .count()
    }

    pub fn is_even(&self) -> bool {
        let d = self.degree();
        (d - self.num_orbits()) % 2 == 0
    }

    /// Disjoint-cycle notation, fixed points omitted; the identity prints as `()`.
    pub fn to_cycle_string(&self) -> String {
        let mut s = String::new();
        for orbit in self.cycles() {
            if orbit.len() < 2 {
                continue;
            }
            s.push('(');
            let parts: Vec<String> = orbit.iter().map(|p| p.to_string()).collect();
            s.push_str(&parts.join(" "));
            s.push(')');
        }
        if s.is_empty() {
            s.push_str("()");
        }
        s
    }

    /// Cycles in traversal order, each starting at its smallest point.
    fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x + 1);
                x = self.images[x] as usize;
            }
            out.push(cyc);
        }
        out
    }

    /// Parses cycle notation such as `(1 2 3)(4 5)` or `(1,2)`; `()` is the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
        let cycles = parse_cycle_list(text, 0)?;
        Permutation::from_cycles(degree, &cycles)
    }
}

/// Parses a run of parenthesised cycles; `offset` shifts reported columns.
pub(crate) fn parse_cycle_list(text: &str, offset: usize) -> Result<Vec<Vec<usize>>> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut cycles = Vec::new();
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'\t' => i += 1,
            b'(' => {
                let close = text[i..]
                    .find(')')
                    .map(|k| k + i)
                    .ok_or_else(|| Error::parse(offset + i + 1, "unclosed cycle"))?;
                let inner = &text[i + 1..close];
                let mut cyc = Vec::new();
                for tok in inner.split(|c: char| c == ',' || c.is_whitespace()) {
                    if tok.is_empty() {
                        continue;
                    }
                    let v: usize = tok
                        .parse()
                        .map_err(|_| Error::parse(offset + i + 2, format!("bad point `{tok}`")))?;
                    cyc.push(v);
                }
                if !cyc.is_empty() {
                    cycles.push(cyc);
                }
                i = close + 1;
            }
            c => {
                return Err(Error::parse(
                    offset + i + 1,
                    format!("unexpected character `{}` in cycle notation", c as char),
                ))
            }
        }
    }
    Ok(cycles)
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_cycle_string())
    }
}
