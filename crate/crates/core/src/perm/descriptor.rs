//! One-line group descriptors.
//!
//! ```text
//! descriptor := expr [ '@' action ]
//! action     := 'natural' | 'regular'
//! expr       := 'cyclic(' n ')' | 'dihedral(' m ')' | 'sym(' n ')' | 'alt(' n ')'
//!             | 'semidirect(' m ',' t [ ';' 'v=' v ] ')'
//!             | 'affine_gf(' q ',' 'gen' [ '^' k ] [ ',' 'frob' ] ')'
//!             | 'transitive(' n ',' k ')'
//!             | 'product(' expr ',' expr ')'
//!             | 'coset(' expr ',' '[' perm { ',' perm } ']' ')'
//!             | 'gens(' d ';' perm { ',' perm } ')'
//!             | alias
//! alias      := ('C' | 'D' | 'S' | 'A') digits
//! perm       := cycle { cycle } ;  cycle := '(' point { (' ' | ',') point } ')' | '()'
//! ```
//!
//! `semidirect_cyclic` is accepted as a synonym of `semidirect`. Whitespace is
//! allowed between tokens. The canonical printer always emits the long forms
//! with no optional whitespace, and `@natural` spelled out.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::group::{coset_action, direct_product, regular_action, PermGroup, DEFAULT_CAP};
use super::named;
use super::permutation::Permutation;
use super::transitive;

/// Cycle lists exactly as written, so printing reproduces the input.
pub type CycleList = Vec<Vec<usize>>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupExpr {
    Cyclic(usize),
    Dihedral(usize),
    Sym(usize),
    Alt(usize),
    Semidirect { m: u64, t: u64, v: Option<u64> },
    AffineGf { q: u64, power: u64, frobenius: bool },
    Transitive(usize, usize),
    Product(Box<GroupExpr>, Box<GroupExpr>),
    Coset(Box<GroupExpr>, Vec<CycleList>),
    Gens(usize, Vec<CycleList>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Natural,
    Regular,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupDescriptor {
    pub expr: GroupExpr,
    pub action: Action,
}

fn write_perm(f: &mut fmt::Formatter<'_>, cycles: &CycleList) -> fmt::Result {
    if cycles.is_empty() {
        return f.write_str("()");
    }
    for c in cycles {
        let pts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", pts.join(" "))?;
    }
    Ok(())
}

fn write_perms(f: &mut fmt::Formatter<'_>, perms: &[CycleList]) -> fmt::Result {
    for (i, p) in perms.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write_perm(f, p)?;
    }
    Ok(())
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Cyclic(n) => write!(f, "cyclic({n})"),
            GroupExpr::Dihedral(m) => write!(f, "dihedral({m})"),
            GroupExpr::Sym(n) => write!(f, "sym({n})"),
            GroupExpr::Alt(n) => write!(f, "alt({n})"),
            GroupExpr::Semidirect { m, t, v: None } => write!(f, "semidirect({m},{t})"),
            GroupExpr::Semidirect { m, t, v: Some(v) } => write!(f, "semidirect({m},{t};v={v})"),
            GroupExpr::AffineGf { q, power, frobenius } => {
                write!(f, "affine_gf({q},gen")?;
                if *power != 1 {
                    write!(f, "^{power}")?;
                }
                if *frobenius {
                    f.write_str(",frob")?;
                }
                f.write_str(")")
            }
            GroupExpr::Transitive(n, k) => write!(f, "transitive({n},{k})"),
            GroupExpr::Product(a, b) => write!(f, "product({a},{b})"),
            GroupExpr::Coset(g, perms) => {
                write!(f, "coset({g},[")?;
                write_perms(f, perms)?;
                f.write_str("])")
            }
            GroupExpr::Gens(d, perms) => {
                write!(f, "gens({d};")?;
                write_perms(f, perms)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::Natural => "natural",
            Action::Regular => "regular",
        })
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.expr, self.action)
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn col(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(self.col(), msg))
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(got) => self.err(format!("expected `{c}`, found `{got}`")),
                None => self.err(format!("expected `{c}`, found end of input")),
            }
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if len == 0 {
            return self.err("expected an identifier");
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if len == 0 {
            return self.err("expected a number");
        }
        let v = rest[..len].parse().or_else(|_| self.err("number out of range"))?;
        self.pos += len;
        Ok(v)
    }

    fn cycles(&mut self) -> Result<CycleList> {
        let mut out = Vec::new();
        if self.peek() != Some('(') {
            return self.err("expected a permutation in cycle notation");
        }
        while self.eat('(') {
            let mut cyc = Vec::new();
            loop {
                if self.eat(')') {
                    break;
                }
                self.eat(',');
                if self.peek() == Some(')') {
                    continue;
                }
                let v = self.number()?;
                if v == 0 {
                    return self.err("points are numbered from 1");
                }
                cyc.push(v as usize);
            }
            if !cyc.is_empty() {
                out.push(cyc);
            }
        }
        Ok(out)
    }

    fn perm_list(&mut self, close: char) -> Result<Vec<CycleList>> {
        let mut perms = vec![self.cycles()?];
        while self.eat(',') {
            perms.push(self.cycles()?);
        }
        self.expect(close)?;
        Ok(perms)
    }

    fn usize_arg(&mut self) -> Result<usize> {
        Ok(self.number()? as usize)
    }

    fn expr(&mut self) -> Result<GroupExpr> {
        let start = self.col();
        let name = self.ident()?;
        if self.peek() != Some('(') {
            return alias(name).ok_or_else(|| Error::parse(start, format!("unknown group `{name}`")));
        }
        self.expect('(')?;
        let e = match name {
            "cyclic" => GroupExpr::Cyclic(self.usize_arg()?),
            "dihedral" => GroupExpr::Dihedral(self.usize_arg()?),
            "sym" => GroupExpr::Sym(self.usize_arg()?),
            "alt" => GroupExpr::Alt(self.usize_arg()?),
            "transitive" => {
                let n = self.usize_arg()?;
                self.expect(',')?;
                GroupExpr::Transitive(n, self.usize_arg()?)
            }
            "semidirect" | "semidirect_cyclic" => {
                let m = self.number()?;
                self.expect(',')?;
                let t = self.number()?;
                let mut v = None;
                if self.eat(';') || self.eat(',') {
                    if self.peek() == Some('v') {
                        self.ident()?;
                        self.expect('=')?;
                    }
                    v = Some(self.number()?);
                }
                GroupExpr::Semidirect { m, t, v }
            }
            "affine_gf" => {
                let q = self.number()?;
                self.expect(',')?;
                if self.ident()? != "gen" {
                    return self.err("expected `gen`");
                }
                let power = if self.eat('^') { self.number()? } else { 1 };
                let mut frobenius = false;
                if self.eat(',') {
                    if self.ident()? != "frob" {
                        return self.err("expected `frob`");
                    }
                    frobenius = true;
                }
                GroupExpr::AffineGf { q, power, frobenius }
            }
            "product" => {
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                GroupExpr::Product(Box::new(a), Box::new(b))
            }
            "coset" => {
                let g = self.expr()?;
                self.expect(',')?;
                self.expect('[')?;
                let perms = if self.eat(']') {
                    Vec::new()
                } else {
                    self.perm_list(']')?
                };
                GroupExpr::Coset(Box::new(g), perms)
            }
            "gens" => {
                let d = self.usize_arg()?;
                if !(self.eat(';') || self.eat(',')) {
                    return self.err("expected `;` after the degree");
                }
                let perms = self.perm_list(')')?;
                return Ok(GroupExpr::Gens(d, perms));
            }
            other => return Err(Error::parse(start, format!("unknown constructor `{other}`"))),
        };
        self.expect(')')?;
        Ok(e)
    }
}

fn alias(name: &str) -> Option<GroupExpr> {
    let (head, digits) = name.split_at(1);
    let n: usize = digits.parse().ok()?;
    match head {
        "C" => Some(GroupExpr::Cyclic(n)),
        "D" => Some(GroupExpr::Dihedral(n)),
        "S" => Some(GroupExpr::Sym(n)),
        "A" => Some(GroupExpr::Alt(n)),
        _ => None,
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cur = Cursor { text, pos: 0 };
        let expr = cur.expr()?;
        let action = if cur.eat('@') {
            let col = cur.col();
            match cur.ident()? {
                "natural" => Action::Natural,
                "regular" => Action::Regular,
                other => return Err(Error::parse(col, format!("unknown action `{other}`"))),
            }
        } else {
            Action::Natural
        };
        if let Some(c) = cur.peek() {
            return cur.err(format!("unexpected trailing `{c}`"));
        }
        Ok(GroupDescriptor { expr, action })
    }
}

fn to_perms(degree: usize, perms: &[CycleList]) -> Result<Vec<Permutation>> {
    perms.iter().map(|c| Permutation::from_cycles(degree, c)).collect()
}

impl GroupExpr {
    /// The group in its natural permutation representation.
    pub fn build(&self) -> Result<PermGroup> {
        match self {
            GroupExpr::Cyclic(n) => named::cyclic(*n),
            GroupExpr::Dihedral(m) => named::dihedral(*m),
            GroupExpr::Sym(n) => named::symmetric(*n),
            GroupExpr::Alt(n) => named::alternating(*n),
            GroupExpr::Semidirect { m, t, v } => named::semidirect_cyclic(*m, *t, *v),
            GroupExpr::AffineGf { q, power, frobenius } => named::affine_gf(*q, *power, *frobenius),
            GroupExpr::Transitive(n, k) => transitive::transitive_group(*n, *k),
            GroupExpr::Product(a, b) => direct_product(&a.build()?, &b.build()?, DEFAULT_CAP),
            GroupExpr::Coset(g, perms) => {
                let g = g.build()?;
                let gens = to_perms(g.degree(), perms)?;
                let u = g.subgroup(&gens)?;
                let core = g.core(&u);
                if !core.is_trivial() {
                    return Err(Error::pre(format!(
                        "coset action is not faithful: the core has order {}",
                        core.len()
                    )));
                }
                coset_action(&g, &u)
            }
            GroupExpr::Gens(d, perms) => {
                if *d == 0 {
                    return Err(Error::pre("degree must be at least 1"));
                }
                let gens = to_perms(*d, perms)?;
                super::group::group_closure(&gens, DEFAULT_CAP)
            }
        }
    }
}

impl GroupDescriptor {
    pub fn parse(text: &str) -> Result<Self> {
        text.parse()
    }

    pub fn build(&self) -> Result<PermGroup> {
        let g = self.expr.build()?;
        let g = match self.action {
            Action::Natural => g,
            Action::Regular => regular_action(&g)?,
        };
        Ok(g.with_name(self.to_string()))
    }
}

/// Parses a descriptor and builds the group it names.
pub fn named_group(text: &str) -> Result<PermGroup> {
    GroupDescriptor::parse(text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples_parse() {
        let d = GroupDescriptor::parse("semidirect(5,4;v=2)@natural").unwrap();
        assert_eq!(d.expr, GroupExpr::Semidirect { m: 5, t: 4, v: Some(2) });
        let d = GroupDescriptor::parse("dihedral(7)@regular").unwrap();
        assert_eq!(d.action, Action::Regular);
        let d = GroupDescriptor::parse("coset(A4, [(1 2)(3 4)])").unwrap();
        assert_eq!(d.to_string(), "coset(alt(4),[(1 2)(3 4)])@natural");
    }

    #[test]
    fn builds_expected_orders() {
        let cases = [
            ("semidirect_cyclic(5,4,2)", 5, 20),
            ("dihedral(5)", 5, 10),
            ("dihedral(5)@regular", 10, 10),
            ("affine_gf(8,gen)", 8, 56),
            ("affine_gf(8,gen,frob)", 8, 168),
            ("affine_gf(9,gen^2)", 9, 36),
            ("coset(A4,[(1 2)(3 4)])", 6, 12),
            ("product(A4,C2)", 8, 24),
            ("gens(4;(1 2 3),(2 3 4))", 4, 12),
            ("transitive(6,5)", 6, 18),
        ];
        for (text, d, n) in cases {
            let g = named_group(text).unwrap();
            assert_eq!((g.degree(), g.order()), (d, n), "{text}");
        }
    }

    #[test]
    fn parse_errors_carry_columns() {
        match GroupDescriptor::parse("dihedral(5)@sideways") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 13),
            other => panic!("{other:?}"),
        }
        match GroupDescriptor::parse("dihedral(5") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 11),
            other => panic!("{other:?}"),
        }
        assert!(GroupDescriptor::parse("frobnicate(3)").is_err());
        assert!(GroupDescriptor::parse("cyclic(3) x").is_err());
    }

    #[test]
    fn unfaithful_coset_action_is_rejected() {
        // V4 is normal in A4, so the action on its cosets has a kernel
        assert!(named_group("coset(A4,[(1 2)(3 4),(1 3)(2 4)])").is_err());
    }
}
