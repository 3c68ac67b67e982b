//! Elementary integer arithmetic: primality, factorization, square tests.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Modular inverse, if `a` is a unit mod `m`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1usize;
        let mut ys = 2u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorization as sorted `(prime, exponent)` pairs; `factor(1)` is empty.
pub fn factor(n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut n = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    let mut stack = vec![];
    if n > 1 {
        stack.push(n);
    }
    let mut primes = Vec::new();
    while let Some(m) = stack.pop() {
        if is_prime(m) {
            primes.push(m);
        } else {
            let r = m.sqrt();
            if r * r == m {
                stack.push(r);
                stack.push(r);
                continue;
            }
            let d = pollard_brent(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    primes.sort_unstable();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out.sort_unstable();
    out
}

pub fn smallest_prime_factor(n: u64) -> Option<u64> {
    factor(n).first().map(|&(p, _)| p)
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

pub fn primes_up_to(n: usize) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

pub fn is_square_u128(n: u128) -> bool {
    let r = n.sqrt();
    r * r == n
}

pub fn is_square_i128(n: i128) -> bool {
    n >= 0 && is_square_u128(n as u128)
}

pub fn is_square_big(n: &BigInt) -> bool {
    if n.sign() == Sign::Minus {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factor(n).iter().all(|&(_, e)| e == 1)
}

/// True when `d` is the discriminant of a quadratic field.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Fundamental discriminant of `Q(sqrt(n))` for a non-square integer `n`.
pub fn fundamental_part(n: i64) -> i64 {
    assert!(n != 0, "fundamental_part of zero");
    let sign = n.signum();
    let mut core = 1i64;
    for (p, e) in factor(n.unsigned_abs()) {
        if e % 2 == 1 {
            core *= p as i64;
        }
    }
    let core = core * sign;
    if core.rem_euclid(4) == 1 {
        core
    } else {
        4 * core
    }
}

/// Multiplicative order of `a` modulo `m`, if `a` is a unit.
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if a.gcd(&m) != 1 {
        return None;
    }
    let phi = euler_phi(m);
    let mut ord = phi;
    for (p, _) in factor(phi) {
        while ord % p == 0 && pow_mod(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    Some(ord)
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

const SMALL_TRIAL: u64 = 1 << 16;

/// Factorization of a nonzero big integer's absolute value.
pub fn factor_big(n: &BigInt) -> Vec<(BigUint, u32)> {
    let mut n = n.magnitude().clone();
    assert!(!n.is_zero(), "factor_big of zero");
    if let Some(small) = n.to_u64() {
        return factor(small).into_iter().map(|(p, e)| (BigUint::from(p), e)).collect();
    }
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes_up_to(SMALL_TRIAL as usize) {
        let bp = BigUint::from(p);
        if (&n % &bp).is_zero() {
            let mut e = 0;
            while (&n % &bp).is_zero() {
                n /= &bp;
                e += 1;
            }
            out.push((bp, e));
        }
        if n.is_one() {
            return out;
        }
    }
    let mut stack = vec![n];
    let mut big_primes = Vec::new();
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            for (p, e) in factor(small) {
                for _ in 0..e {
                    big_primes.push(BigUint::from(p));
                }
            }
            continue;
        }
        if is_probable_prime_big(&m) {
            big_primes.push(m);
            continue;
        }
        let r = m.sqrt();
        if &r * &r == m {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let d = rho_big(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    big_primes.sort();
    for p in big_primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out.sort();
    out
}

fn is_probable_prime_big(n: &BigUint) -> bool {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53] {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_big(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = BigUint::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_factor(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn factor_matches_trial_division() {
        for n in (1..5000u64).chain([600851475143, 999999000001, 4294967297]) {
            assert_eq!(factor(n), naive_factor(n), "n = {n}");
        }
    }

    #[test]
    fn factor_large_semiprime() {
        let p = 1_000_000_007u64;
        let q = 998_244_353u64;
        assert_eq!(factor(p * q), vec![(q, 1), (p, 1)]);
    }

    #[test]
    fn big_factorization() {
        let n: BigInt = BigInt::from(1_000_000_007u64) * BigInt::from(1_000_000_009u64) * 12;
        let f = factor_big(&n);
        assert_eq!(f.len(), 4);
        assert_eq!(f[0], (BigUint::from(2u32), 2));
    }

    #[test]
    fn fundamental_discriminants_up_to_ten() {
        let found: Vec<i64> = (-10..=10).filter(|&d| is_fundamental_discriminant(d)).collect();
        assert_eq!(found, vec![-8, -7, -4, -3, 5, 8]);
    }

    #[test]
    fn fundamental_part_examples() {
        assert_eq!(fundamental_part(-108), -3);
        assert_eq!(fundamental_part(-23), -23);
        assert_eq!(fundamental_part(20), 5);
        assert_eq!(fundamental_part(12), 12);
    }

    #[test]
    fn orders() {
        assert_eq!(multiplicative_order(2, 5), Some(4));
        assert_eq!(multiplicative_order(2, 7), Some(3));
        assert_eq!(multiplicative_order(3, 6), None);
    }
}
