//! Published exponent inputs: torsion exponents and field-count exponents.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ntheory;
use crate::{rat, Rational};

/// Base field of the count. `General` entries apply to every base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    General,
    Rationals,
}

impl Base {
    pub fn tag(self) -> &'static str {
        match self {
            Base::General => "k",
            Base::Rationals => "Q",
        }
    }

    fn parse(tok: &str) -> Option<Base> {
        match tok {
            "k" | "K" => Some(Base::General),
            "Q" | "q" => Some(Base::Rationals),
            _ => None,
        }
    }

    /// Whether an entry stored under `self` may be used for a count over `target`.
    pub fn applies_to(self, target: Base) -> bool {
        self == Base::General || self == target
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cited {
    pub value: Rational,
    pub citation: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorsionMode {
    Unconditional,
    /// The l-torsion conjecture: every lookup is epsilon, i.e. 0 plus the flag.
    Conjecture,
}

/// Exponents D with |Cl_M[l]| << d_M^D, keyed by (base, Gal(M/k) label, l).
#[derive(Debug, Clone)]
pub struct TorsionExponentRegistry {
    pub mode: TorsionMode,
    entries: BTreeMap<(Base, String, u64), Cited>,
    /// D(Q, C_p, l) = 1/2 - 1/(2 l (p-1)) for most prime cyclic M.
    pub ptbw_rule: bool,
}

fn half() -> Rational {
    rat(1, 2)
}

impl TorsionExponentRegistry {
    pub fn empty() -> Self {
        TorsionExponentRegistry {
            mode: TorsionMode::Unconditional,
            entries: BTreeMap::new(),
            ptbw_rule: false,
        }
    }

    /// The seeded registry: 2-torsion of cubic fields and the prime-cyclic rule.
    pub fn seeded() -> Self {
        let mut r = Self::empty();
        r.ptbw_rule = true;
        r.insert(
            Base::Rationals,
            "C_3",
            2,
            Rational::new(2784.into(), 10000.into()),
            "2-torsion in cubic fields (Bhargava-Shankar-Taniguchi-Thorne-Tsimerman-Zhao)",
        )
        .expect("seed is at most 1/2");
        r
    }

    pub fn conjecture() -> Self {
        let mut r = Self::seeded();
        r.mode = TorsionMode::Conjecture;
        r
    }

    pub fn insert(&mut self, base: Base, label: &str, ell: u64, value: Rational, citation: &str) -> Result<()> {
        if value > half() {
            return Err(Error::pre(format!(
                "torsion exponent {value} for ({base}, {label}, {ell}) exceeds the generic 1/2"
            )));
        }
        if value.is_negative() {
            return Err(Error::pre("torsion exponents are nonnegative"));
        }
        self.entries.insert(
            (base, label.to_string(), ell),
            Cited {
                value,
                citation: citation.to_string(),
            },
        );
        Ok(())
    }

    /// D(k, H, l): the minimum over every applicable entry and rule.
    pub fn lookup(&self, base: Base, label: &str, ell: u64) -> Cited {
        if self.mode == TorsionMode::Conjecture {
            return Cited {
                value: Rational::zero(),
                citation: "l-torsion conjecture (epsilon)".into(),
            };
        }
        let mut best = Cited {
            value: half(),
            citation: "generic bound 1/2".into(),
        };
        let mut consider = |c: Cited| {
            if c.value < best.value {
                best = c;
            }
        };
        for ((b, l, e), c) in &self.entries {
            if l == label && *e == ell && b.applies_to(base) {
                consider(c.clone());
            }
        }
        if self.ptbw_rule && base == Base::Rationals {
            if let Some(p) = prime_cyclic_order(label) {
                if p != ell {
                    let v = half() - Rational::new(1.into(), (2 * ell * (p - 1)).into());
                    consider(Cited {
                        value: v,
                        citation: format!(
                            "Pierce-Turnage-Butterbaugh-Wood, C_{p} fields outside a sparse exceptional set"
                        ),
                    });
                }
            }
        }
        best
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(Base, String, u64), &Cited)> {
        self.entries.iter()
    }
}

/// `Some(p)` when the label is `C_p` for a prime p.
fn prime_cyclic_order(label: &str) -> Option<u64> {
    let n: u64 = label.strip_prefix("C_")?.parse().ok()?;
    ntheory::is_prime(n).then_some(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMode {
    Published,
    /// Malle's conjecture for H: a1(H, t) is the Malle exponent itself.
    MalleValues,
}

/// Upper exponents a1 with N_d(k, G; X) << X^(a1 + eps), keyed by (label, degree, base).
#[derive(Debug, Clone)]
pub struct CountExponentRegistry {
    pub mode: CountMode,
    entries: BTreeMap<(String, u64, Base), Cited>,
    /// Abelian groups in the regular action attain the Malle exponent (Wright).
    pub wright_rule: bool,
    /// D_l: 3/(l-1) in degree l, 3/(2l) in degree 2l (Kluners).
    pub kluners_rule: bool,
    /// Regular action of any group of order > 4: 3/8 (Ellenberg-Venkatesh).
    pub ev_rule: bool,
}

impl CountExponentRegistry {
    pub fn empty() -> Self {
        CountExponentRegistry {
            mode: CountMode::Published,
            entries: BTreeMap::new(),
            wright_rule: false,
            kluners_rule: false,
            ev_rule: false,
        }
    }

    pub fn seeded() -> Self {
        let mut r = Self::empty();
        r.wright_rule = true;
        r.kluners_rule = true;
        r.ev_rule = true;
        r.insert("C_5:C_4", 5, Base::General, rat(39, 40), "Bhargava-Cojocaru-Thorne");
        r
    }

    pub fn malle_values() -> Self {
        let mut r = Self::empty();
        r.mode = CountMode::MalleValues;
        r
    }

    pub fn insert(&mut self, label: &str, degree: u64, base: Base, value: Rational, citation: &str) {
        self.entries.insert(
            (label.to_string(), degree, base),
            Cited {
                value,
                citation: citation.to_string(),
            },
        );
    }

    /// Best published a1 for a group with the given label, order and abelian flag.
    /// `malle` is the group's Malle exponent in this degree, used by the Wright rule.
    pub fn lookup(
        &self,
        label: &str,
        order: u64,
        degree: u64,
        abelian: bool,
        malle: &Rational,
        base: Base,
    ) -> Option<Cited> {
        if self.mode == CountMode::MalleValues {
            return Some(Cited {
                value: malle.clone(),
                citation: "Malle's conjecture for H".into(),
            });
        }
        let mut best: Option<Cited> = None;
        let mut consider = |c: Cited| {
            if best.as_ref().is_none_or(|b| c.value < b.value) {
                best = Some(c);
            }
        };
        for ((l, d, b), c) in &self.entries {
            if l == label && *d == degree && b.applies_to(base) {
                consider(c.clone());
            }
        }
        if self.wright_rule && abelian && degree == order {
            consider(Cited {
                value: malle.clone(),
                citation: "Wright, abelian extensions".into(),
            });
        }
        if self.kluners_rule {
            if let Some(l) = label.strip_prefix("D_").and_then(|s| s.parse::<u64>().ok()) {
                if ntheory::is_prime(l) && l > 2 {
                    if degree == l {
                        consider(Cited {
                            value: rat(3, l as i64 - 1),
                            citation: "Kluners, D_l in degree l".into(),
                        });
                    } else if degree == 2 * l {
                        consider(Cited {
                            value: rat(3, 2 * l as i64),
                            citation: "Kluners, D_l in degree 2l".into(),
                        });
                    }
                }
            }
        }
        if self.ev_rule && degree == order && order > 4 {
            consider(Cited {
                value: rat(3, 8),
                citation: "Ellenberg-Venkatesh, regular action of order > 4".into(),
            });
        }
        best
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(String, u64, Base), &Cited)> {
        self.entries.iter()
    }
}

/// Parses an exact rational from `p/q`, an integer, or a finite decimal.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: num_bigint::BigInt = n.trim().parse().ok()?;
        let d: num_bigint::BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if !frac.chars().all(|c| c.is_ascii_digit()) || frac.is_empty() {
            return None;
        }
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        let all: num_bigint::BigInt = format!("{int_digits}{frac}").parse().ok()?;
        let den = num_bigint::BigInt::from(10u32).pow(frac.len() as u32);
        let r = Rational::new(all, den);
        return Some(if neg { -r } else { r });
    }
    let n: num_bigint::BigInt = text.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Applies a registry file on top of existing registries.
///
/// ```text
/// D Q C_7 2 = 11/24 # PTBW
/// a1 D_5 5 = 3/4 # Kluners
/// a1 C_7:C_3 21 Q = 1/7
/// disable ptbw|wright|kluners|ev
/// ```
pub fn apply_registry_text(
    text: &str,
    torsion: &mut TorsionExponentRegistry,
    counts: &mut CountExponentRegistry,
) -> Result<()> {
    for (lineno, raw) in text.lines().enumerate() {
        let line_err = |col: usize, msg: String| Error::Parse {
            line: lineno + 1,
            column: col,
            message: msg,
        };
        let (body, citation) = match raw.split_once('#') {
            Some((b, c)) => (b, c.trim()),
            None => (raw, ""),
        };
        if body.trim().is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let col_of = |tok: &str| raw.find(tok).map_or(1, |i| i + 1);
        match toks[0] {
            "disable" => {
                let Some(rule) = toks.get(1) else {
                    return Err(line_err(1, "`disable` needs a rule name".into()));
                };
                match *rule {
                    "ptbw" => torsion.ptbw_rule = false,
                    "wright" => counts.wright_rule = false,
                    "kluners" => counts.kluners_rule = false,
                    "ev" => counts.ev_rule = false,
                    other => return Err(line_err(col_of(other), format!("unknown rule `{other}`"))),
                }
            }
            "D" | "a1" => {
                let eq = toks
                    .iter()
                    .position(|&t| t == "=")
                    .ok_or_else(|| line_err(raw.len().max(1), "expected `= value`".into()))?;
                let value_tok = toks
                    .get(eq + 1)
                    .ok_or_else(|| line_err(raw.len().max(1), "missing value".into()))?;
                let value = parse_rational(value_tok)
                    .ok_or_else(|| line_err(col_of(value_tok), format!("bad exponent `{value_tok}`")))?;
                let keys = &toks[1..eq];
                if toks[0] == "D" {
                    let [base, label, ell] = keys else {
                        return Err(line_err(1, "expected `D <base> <label> <l> = <value>`".into()));
                    };
                    let base =
                        Base::parse(base).ok_or_else(|| line_err(col_of(base), format!("unknown base `{base}`")))?;
                    let ell: u64 = ell
                        .parse()
                        .map_err(|_| line_err(col_of(ell), format!("bad modulus `{ell}`")))?;
                    torsion
                        .insert(base, label, ell, value, citation)
                        .map_err(|e| line_err(col_of(value_tok), e.to_string()))?;
                } else {
                    let (label, degree, base) = match keys {
                        [label, degree] => (label, degree, Base::General),
                        [label, degree, base] => (
                            label,
                            degree,
                            Base::parse(base)
                                .ok_or_else(|| line_err(col_of(base), format!("unknown base `{base}`")))?,
                        ),
                        _ => return Err(line_err(1, "expected `a1 <label> <degree> [base] = <value>`".into())),
                    };
                    let degree: u64 = degree
                        .parse()
                        .map_err(|_| line_err(col_of(degree), format!("bad degree `{degree}`")))?;
                    counts.insert(label, degree, base, value, citation);
                }
            }
            other => {
                return Err(line_err(col_of(other), format!("unknown directive `{other}`")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_torsion_lookups() {
        let r = TorsionExponentRegistry::seeded();
        assert_eq!(r.lookup(Base::General, "C_3", 2).value, rat(1, 2));
        assert_eq!(r.lookup(Base::Rationals, "C_3", 2).value, rat(2784, 10000));
        assert_eq!(r.lookup(Base::Rationals, "C_7", 2).value, rat(11, 24));
        assert_eq!(r.lookup(Base::Rationals, "C_17", 103).value, rat(1, 2) - rat(1, 3296));
        assert_eq!(r.lookup(Base::Rationals, "C_2", 5).value, rat(2, 5));
        assert_eq!(
            TorsionExponentRegistry::conjecture()
                .lookup(Base::General, "C_3", 2)
                .value,
            rat(0, 1)
        );
    }

    #[test]
    fn torsion_entries_are_capped() {
        let mut r = TorsionExponentRegistry::empty();
        assert!(r.insert(Base::General, "C_3", 2, rat(3, 5), "too big").is_err());
    }

    #[test]
    fn seeded_count_lookups() {
        let r = CountExponentRegistry::seeded();
        let m = rat(1, 2);
        assert_eq!(r.lookup("C_3", 3, 3, true, &m, Base::General).unwrap().value, m);
        let d5 = r.lookup("D_5", 10, 5, false, &rat(1, 2), Base::General).unwrap();
        assert_eq!(d5.value, rat(3, 4));
        let d5r = r.lookup("D_5", 10, 10, false, &rat(1, 5), Base::General).unwrap();
        assert_eq!(d5r.value, rat(3, 10));
        let f20 = r.lookup("C_5:C_4", 20, 5, false, &rat(1, 2), Base::General).unwrap();
        assert_eq!(f20.value, rat(39, 40));
        let h21 = r.lookup("C_7:C_3", 21, 21, false, &rat(1, 14), Base::General).unwrap();
        assert_eq!(h21.value, rat(3, 8));
        assert!(r.lookup("A_4", 12, 4, false, &rat(1, 2), Base::General).is_none());
    }

    #[test]
    fn registry_file_round() {
        let mut t = TorsionExponentRegistry::seeded();
        let mut c = CountExponentRegistry::seeded();
        let text = "D Q C_7 2 = 11/24 # PTBW\n\na1 D_5 5 = 3/4 # Kluners\nD k C_3 2 = 0.3\n";
        apply_registry_text(text, &mut t, &mut c).unwrap();
        assert_eq!(t.lookup(Base::General, "C_3", 2).value, rat(3, 10));
        assert_eq!(t.entries().count(), 3);
        match apply_registry_text("D Q C_7 2 = 3/4", &mut t, &mut c) {
            Err(Error::Parse { line: 1, column, .. }) => assert_eq!(column, 13),
            other => panic!("{other:?}"),
        }
        assert!(apply_registry_text("D Q C_7 = 1/3", &mut t, &mut c).is_err());
        assert!(apply_registry_text("frob 1", &mut t, &mut c).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("0.2784").unwrap(), rat(2784, 10000));
        assert_eq!(parse_rational("11/24").unwrap(), rat(11, 24));
        assert_eq!(parse_rational("3").unwrap(), rat(3, 1));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }
}
