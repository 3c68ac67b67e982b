use crate::error::{Error, Result};
use crate::ntheory;

/// A small finite field GF(p^e) with elements encoded as base-`p` digit
/// strings (constant coefficient first), so `0` is zero and `1` is one.
#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u64,
    e: u32,
    /// Low coefficients of the monic defining polynomial.
    modulus: Vec<u64>,
    mul_table: Vec<Vec<u32>>,
    primitive: u32,
}

fn digits(mut c: u64, p: u64, e: u32) -> Vec<u64> {
    (0..e)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

fn encode(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Remainder of `a` modulo a monic `m` over F_p (coefficients low first).
fn poly_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let shift = a.len() - dm;
        for i in 0..dm {
            a[shift + i] = (a[shift + i] + p - lead * m[i] % p) % p;
        }
    }
    a
}

fn is_irreducible(low: &[u64], p: u64) -> bool {
    let e = low.len();
    let mut m = low.to_vec();
    m.push(1);
    for deg in 1..=e / 2 {
        for code in 0..p.pow(deg as u32) {
            let mut g = digits(code, p, deg as u32);
            g.push(1);
            if poly_rem(m.clone(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// GF(q) built from the smallest irreducible monic polynomial, with the
    /// smallest primitive element as multiplicative generator.
    pub fn new(q: u64) -> Result<Self> {
        let f = ntheory::factor(q);
        if f.len() != 1 {
            return Err(Error::pre(format!("{q} is not a prime power")));
        }
        if q > 1024 {
            return Err(Error::pre(format!("GF({q}) exceeds the supported size 1024")));
        }
        let (p, e) = f[0];
        let modulus = if e == 1 {
            vec![0]
        } else {
            (0..p.pow(e))
                .map(|code| digits(code, p, e))
                .find(|low| is_irreducible(low, p))
                .expect("an irreducible polynomial exists in every degree")
        };
        let mut full = modulus.clone();
        full.push(1);
        let mul = |a: u64, b: u64| -> u64 {
            let (da, db) = (digits(a, p, e), digits(b, p, e));
            let mut prod = vec![0u64; 2 * e as usize];
            for (i, x) in da.iter().enumerate() {
                for (j, y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            if e == 1 {
                return prod[0];
            }
            encode(&poly_rem(prod, &full, p), p)
        };
        let mul_table: Vec<Vec<u32>> = (0..q).map(|a| (0..q).map(|b| mul(a, b) as u32).collect()).collect();
        let mut field = FiniteField {
            p,
            e,
            modulus,
            mul_table,
            primitive: 0,
        };
        field.primitive = (1..q as u32)
            .find(|&g| field.mult_order(g) == q - 1)
            .expect("the multiplicative group is cyclic");
        Ok(field)
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.e)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.e
    }

    /// Low coefficients of the defining polynomial.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn primitive_element(&self) -> u32 {
        self.primitive
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul_table[a as usize][b as usize]
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (digits(a as u64, self.p, self.e), digits(b as u64, self.p, self.e));
        let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        encode(&sum, self.p) as u32
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        (0..k).fold(1, |acc, _| self.mul(acc, a))
    }

    pub fn mult_order(&self, a: u32) -> u64 {
        if a == 0 {
            return 0;
        }
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}
