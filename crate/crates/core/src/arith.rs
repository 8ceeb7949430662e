//! Rational-integer helpers: trial-division factorization, squarefreeness,
//! divisor lists and the Legendre symbol at odd primes.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Prime factorization `n = p_1^a_1 ... p_k^a_k`, primes ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn from_pairs(pairs: Vec<(u64, u32)>) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0));
        Factorization(pairs)
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.0.iter().copied()
    }

    /// Product of the prime powers.
    pub fn value(&self) -> u64 {
        self.0.iter().map(|&(p, a)| p.pow(a)).product()
    }

    /// Euler's totient of the factored number.
    pub fn totient(&self) -> u64 {
        self.0
            .iter()
            .map(|&(p, a)| p.pow(a - 1) * (p - 1))
            .product()
    }

    pub fn is_prime(&self) -> bool {
        matches!(self.0.as_slice(), [(_, 1)])
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, &(p, a)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            if a == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{a}")?;
            }
        }
        Ok(())
    }
}

impl IntoIterator for Factorization {
    type Item = (u64, u32);
    type IntoIter = std::vec::IntoIter<(u64, u32)>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

/// Trial division by 2, 3 and then the 6k ± 1 wheel.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Zero("factorize"));
    }
    let mut rest = n;
    let mut out = Vec::new();
    let mut take = |p: u64, rest: &mut u64| {
        let mut a = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            a += 1;
        }
        if a > 0 {
            out.push((p, a));
        }
    };
    take(2, &mut rest);
    take(3, &mut rest);
    let mut p = 5u64;
    while p.saturating_mul(p) <= rest {
        take(p, &mut rest);
        take(p + 2, &mut rest);
        p += 6;
    }
    if rest > 1 {
        out.push((rest, 1));
    }
    Ok(Factorization(out))
}

pub fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut p = 5u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) || n.is_multiple_of(p + 2) {
            return false;
        }
        p += 6;
    }
    true
}

pub fn is_squarefree(d: i64) -> Result<bool> {
    if d == 0 {
        return Err(Error::Zero("is_squarefree"));
    }
    Ok(factorize(d.unsigned_abs())?.iter().all(|(_, a)| a == 1))
}

/// `base^exp mod modulus` by square-and-multiply.
pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut acc = 1u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol `(d/p)` for an odd prime `p`, by Euler's criterion.
pub fn kronecker(d: i64, p: u64) -> Result<i8> {
    if p == 2 {
        return Err(Error::EvenPrime(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let r = (d as i128).rem_euclid(p as i128) as u64;
    if r == 0 {
        return Ok(0);
    }
    match pow_mod(r, (p - 1) / 2, p) {
        1 => Ok(1),
        x if x == p - 1 => Ok(-1),
        x => Err(Error::Internal(format!(
            "Euler criterion gave {x} for ({d}/{p})"
        ))),
    }
}

pub fn divisors_sorted(n: u64) -> Result<Vec<u64>> {
    let f = factorize(n)?;
    Ok(divisors_of(&f))
}

/// Divisors from a known factorization, ascending.
pub fn divisors_of(f: &Factorization) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, a) in f.iter() {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..a {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Smallest-prime-factor table for `0..=limit`, used to factor many small
/// numbers at once.
#[derive(Clone, Debug)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u64) -> Self {
        let limit = limit as usize;
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfSieve { spf }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Falls back to trial division above the sieve limit.
    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::Zero("factorize"));
        }
        if n > self.limit() {
            return factorize(n);
        }
        let mut rest = n as usize;
        let mut out: Vec<(u64, u32)> = Vec::new();
        while rest > 1 {
            let p = self.spf[rest] as usize;
            let mut a = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                a += 1;
            }
            out.push((p as u64, a));
        }
        Ok(Factorization(out))
    }

    pub fn is_prime(&self, n: u64) -> bool {
        if n > self.limit() {
            return is_prime(n);
        }
        n >= 2 && self.spf[n as usize] as u64 == n
    }
}
