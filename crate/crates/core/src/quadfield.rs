//! Quadratic integers `a + bω` over a fixed field, exactly and modulo `M`,
//! and the splitting of rational primes.
//!
//! Coordinates are always taken in the basis `(1, ω)` where `ω = √d` for
//! `d ≡ 2, 3 (mod 4)` and `ω = (1 + √d)/2` for `d ≡ 1 (mod 4)`. With that
//! basis the index-`n` order `Z + nO_K` is exactly the set of elements whose
//! `ω`-coordinate is divisible by `n`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, is_squarefree};
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OmegaKind {
    /// `ω = √d`
    Sqrt,
    /// `ω = (1 + √d)/2`
    Half,
}

/// A validated quadratic field `Q(√d)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldContext {
    d: i64,
    kind: OmegaKind,
    disc: i64,
}

impl FieldContext {
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::DegenerateField(d));
        }
        if !is_squarefree(d)? {
            return Err(Error::NotSquarefree(d));
        }
        let (kind, disc) = if d.rem_euclid(4) == 1 {
            (OmegaKind::Half, d)
        } else {
            (OmegaKind::Sqrt, 4 * d)
        };
        Ok(FieldContext { d, kind, disc })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn kind(&self) -> OmegaKind {
        self.kind
    }

    /// Fundamental discriminant.
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn is_real(&self) -> bool {
        self.d > 0
    }

    /// Trace of ω.
    pub fn omega_trace(&self) -> i64 {
        match self.kind {
            OmegaKind::Sqrt => 0,
            OmegaKind::Half => 1,
        }
    }

    /// Norm of ω.
    pub fn omega_norm(&self) -> i64 {
        match self.kind {
            OmegaKind::Sqrt => -self.d,
            OmegaKind::Half => (1 - self.d) / 4,
        }
    }

    pub fn mul(&self, x: &QuadInt, y: &QuadInt) -> QuadInt {
        // ω² = tr·ω − N(ω)
        let tr = BigInt::from(self.omega_trace());
        let nm = BigInt::from(self.omega_norm());
        let bb = &x.b * &y.b;
        QuadInt {
            a: &x.a * &y.a - &bb * &nm,
            b: &x.a * &y.b + &x.b * &y.a + &bb * &tr,
        }
    }

    pub fn norm(&self, x: &QuadInt) -> BigInt {
        let tr = BigInt::from(self.omega_trace());
        let nm = BigInt::from(self.omega_norm());
        &x.a * &x.a + &x.a * &x.b * tr + &x.b * &x.b * nm
    }

    pub fn conj(&self, x: &QuadInt) -> QuadInt {
        QuadInt {
            a: &x.a + &x.b * BigInt::from(self.omega_trace()),
            b: -&x.b,
        }
    }

    pub fn pow(&self, x: &QuadInt, mut e: u64) -> QuadInt {
        let mut acc = QuadInt::one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn mod_mul(&self, x: ModQuadInt, y: ModQuadInt) -> ModQuadInt {
        debug_assert_eq!(x.modulus, y.modulus);
        let m = x.modulus as i128;
        let tr = self.omega_trace() as i128;
        let nm = (self.omega_norm() as i128).rem_euclid(m);
        let (xa, xb, ya, yb) = (x.a as i128, x.b as i128, y.a as i128, y.b as i128);
        let bb = xb * yb % m;
        let a = (xa * ya % m - bb * nm % m).rem_euclid(m);
        let b = (xa * yb % m + xb * ya % m + bb * tr) % m;
        ModQuadInt {
            a: a as u64,
            b: b as u64,
            modulus: x.modulus,
        }
    }

    /// `x^e mod M` by square-and-multiply; `e = 0` gives `1`.
    pub fn mod_pow(&self, x: ModQuadInt, mut e: u64) -> Result<ModQuadInt> {
        if x.modulus < 2 {
            return Err(Error::ModulusTooSmall(x.modulus));
        }
        let mut acc = ModQuadInt::one(x.modulus)?;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mod_mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mod_mul(base, base);
            }
        }
        Ok(acc)
    }

    /// Norm of a residue, reduced into `[0, M)`.
    pub fn mod_norm(&self, x: ModQuadInt) -> u64 {
        let m = x.modulus as i128;
        let (a, b) = (x.a as i128, x.b as i128);
        let tr = self.omega_trace() as i128;
        let nm = (self.omega_norm() as i128).rem_euclid(m);
        ((a * a % m + a * b % m * tr + b * b % m * nm) % m) as u64
    }

    /// Residue of `r² − tr(ω)·r + N(ω)`, the minimal polynomial of ω at `r`.
    fn min_poly_at(&self, r: u64, p: u64) -> u64 {
        let p = p as i128;
        let r = r as i128;
        let v = r * r - self.omega_trace() as i128 * r + self.omega_norm() as i128;
        v.rem_euclid(p) as u64
    }

    /// Decomposition type of `p` without the roots: `d mod 8` for `p = 2`,
    /// the Legendre symbol otherwise.
    pub fn split_kind(&self, p: u64) -> Result<SplitKind> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(if p == 2 {
            match self.d.rem_euclid(8) {
                5 => SplitKind::Inert,
                1 => SplitKind::Split,
                _ => SplitKind::Ramified,
            }
        } else {
            match arith::kronecker(self.d, p)? {
                -1 => SplitKind::Inert,
                1 => SplitKind::Split,
                _ => SplitKind::Ramified,
            }
        })
    }

    /// Decomposition type of the rational prime `p` in this field, with the
    /// roots of the minimal polynomial of ω found by scanning `0..p`.
    pub fn splitting_type(&self, p: u64) -> Result<SplittingReport> {
        let kind = self.split_kind(p)?;
        let roots: Vec<u64> = (0..p).filter(|&r| self.min_poly_at(r, p) == 0).collect();
        let expected = match kind {
            SplitKind::Inert => 0,
            SplitKind::Split => 2,
            SplitKind::Ramified => 1,
        };
        if roots.len() != expected {
            return Err(Error::Internal(format!(
                "d = {}, p = {p}: {kind:?} but minimal polynomial has roots {roots:?}",
                self.d
            )));
        }
        Ok(SplittingReport { p, kind, roots })
    }
}

/// Exact element `a + bω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl QuadInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        QuadInt {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn one() -> Self {
        QuadInt::new(1, 0)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Reduce both coordinates into `[0, M)`.
    pub fn reduce(&self, modulus: u64) -> Result<ModQuadInt> {
        if modulus < 2 {
            return Err(Error::ModulusTooSmall(modulus));
        }
        let m = BigInt::from(modulus);
        let red = |x: &BigInt| x.mod_floor(&m).to_u64().expect("residue fits in u64");
        Ok(ModQuadInt {
            a: red(&self.a),
            b: red(&self.b),
            modulus,
        })
    }

    /// Membership in `Z + nO_K`.
    pub fn in_order(&self, n: u64) -> bool {
        n <= 1 || self.b.is_multiple_of(&BigInt::from(n))
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{}-{}ω", self.a, self.b.abs())
        } else {
            write!(f, "{}+{}ω", self.a, self.b)
        }
    }
}

/// Element `a + bω` of `O_K/(M)` with `a, b ∈ [0, M)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModQuadInt {
    pub a: u64,
    pub b: u64,
    pub modulus: u64,
}

impl ModQuadInt {
    pub fn new(a: i64, b: i64, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::ModulusTooSmall(modulus));
        }
        let m = modulus as i128;
        Ok(ModQuadInt {
            a: (a as i128).rem_euclid(m) as u64,
            b: (b as i128).rem_euclid(m) as u64,
            modulus,
        })
    }

    pub fn one(modulus: u64) -> Result<Self> {
        ModQuadInt::new(1, 0, modulus)
    }

    /// Membership in `Z + nO_K`; requires `n | M`.
    pub fn in_order(&self, n: u64) -> bool {
        debug_assert!(n == 0 || self.modulus.is_multiple_of(n));
        n <= 1 || self.b.is_multiple_of(n)
    }

    /// Multiply by a rational residue.
    pub fn scale(&self, z: u64) -> Self {
        let m = self.modulus as u128;
        ModQuadInt {
            a: (self.a as u128 * z as u128 % m) as u64,
            b: (self.b as u128 * z as u128 % m) as u64,
            modulus: self.modulus,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplitKind {
    Inert,
    Split,
    Ramified,
}

/// How `p` decomposes, with the residues `r` for which `(p, ω − r)` are the
/// primes above `p` (none when `p` is inert).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingReport {
    pub p: u64,
    pub kind: SplitKind,
    pub roots: Vec<u64>,
}

impl SplittingReport {
    pub fn is_inert(&self) -> bool {
        self.kind == SplitKind::Inert
    }
}

pub(crate) fn is_one(x: &ModQuadInt) -> bool {
    x.b == 0 && x.a == 1 % x.modulus
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field(d: i64) -> FieldContext {
        FieldContext::new(d).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn make_field_examples() {
        let f = field(2);
        assert_eq!((f.kind(), f.disc()), (OmegaKind::Sqrt, 8));
        let f = field(5);
        assert_eq!((f.kind(), f.disc()), (OmegaKind::Half, 5));
        assert_eq!(field(-3).disc(), -3);
        assert_eq!(field(-1).disc(), -4);
        assert!(matches!(
            FieldContext::new(12),
            Err(Error::NotSquarefree(12))
        ));
        assert!(matches!(
            FieldContext::new(0),
            Err(Error::DegenerateField(0))
        ));
        assert!(matches!(
            FieldContext::new(1),
            Err(Error::DegenerateField(1))
        ));
        assert!(FieldContext::new(-4).is_err());
    }

    #[test]
    fn mul_examples() {
        let f = field(2);
        let u = QuadInt::new(1, 1);
        let u2 = f.mul(&u, &u);
        assert_eq!(u2, QuadInt::new(3, 2));
        assert_eq!(f.mul(&u, &u2), QuadInt::new(7, 5));
        let g = field(5);
        assert_eq!(
            g.mul(&QuadInt::new(0, 1), &QuadInt::new(0, 1)),
            QuadInt::new(1, 1)
        );
    }

    #[test]
    fn norm_and_conj_examples() {
        assert_eq!(field(2).norm(&QuadInt::new(1, 1)), big(-1));
        assert_eq!(field(5).norm(&QuadInt::new(0, 1)), big(-1));
        for d in [2, 5, -3, -7, 10] {
            assert_eq!(field(d).norm(&QuadInt::one()), big(1));
        }
        assert_eq!(field(2).conj(&QuadInt::new(1, 1)), QuadInt::new(1, -1));
        assert_eq!(field(5).conj(&QuadInt::new(0, 1)), QuadInt::new(1, -1));
        assert_eq!(field(13).conj(&QuadInt::new(7, 0)), QuadInt::new(7, 0));
    }

    #[test]
    fn mod_pow_examples() {
        let f = field(2);
        let u = QuadInt::new(1, 1);
        assert_eq!(
            f.mod_pow(u.reduce(5).unwrap(), 3).unwrap(),
            ModQuadInt::new(2, 0, 5).unwrap()
        );
        assert_eq!(
            f.mod_pow(u.reduce(2).unwrap(), 2).unwrap(),
            ModQuadInt::new(1, 0, 2).unwrap()
        );
        let x = ModQuadInt::new(4, 9, 11).unwrap();
        assert_eq!(f.mod_pow(x, 0).unwrap(), ModQuadInt::one(11).unwrap());
        assert!(QuadInt::one().reduce(1).is_err());
        assert!(ModQuadInt::new(1, 1, 1).is_err());
    }

    #[test]
    fn in_order_examples() {
        assert!(QuadInt::new(7, 5).in_order(5));
        assert!(!QuadInt::new(1, 1).in_order(5));
        assert!(QuadInt::new(1, 1).in_order(1));
        assert!(QuadInt::new(7, 5).reduce(10).unwrap().in_order(5));
        assert!(!QuadInt::new(7, 5).reduce(10).unwrap().in_order(2));
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(field(2).splitting_type(5).unwrap().kind, SplitKind::Inert);
        let r = field(2).splitting_type(2).unwrap();
        assert_eq!(r.kind, SplitKind::Ramified);
        assert_eq!(r.roots, vec![0]);
        let s = field(17).splitting_type(2).unwrap();
        assert_eq!(s.kind, SplitKind::Split);
        assert_eq!(s.roots, vec![0, 1]);
        assert_eq!(field(-3).splitting_type(2).unwrap().kind, SplitKind::Inert);
        assert!(matches!(
            field(2).splitting_type(9),
            Err(Error::NotPrime(9))
        ));
    }

    fn squarefree_ds(limit: i64) -> Vec<i64> {
        (-limit..=limit)
            .filter(|&d| d != 0 && d != 1 && is_squarefree(d).unwrap())
            .collect()
    }

    #[test]
    fn splitting_partition() {
        let primes: Vec<u64> = (2..200).filter(|&p| arith::is_prime(p)).collect();
        for d in squarefree_ds(60) {
            let f = field(d);
            for &p in &primes {
                let rep = f.splitting_type(p).unwrap();
                if p != 2 {
                    assert_eq!(rep.kind == SplitKind::Ramified, d % p as i64 == 0);
                }
                // ramified iff p divides the discriminant
                assert_eq!(rep.kind == SplitKind::Ramified, f.disc() % p as i64 == 0);
            }
        }
    }

    #[test]
    fn norm_is_multiplicative_exhaustive_small() {
        for d in squarefree_ds(50) {
            let f = field(d);
            for a in -4..=4 {
                for b in -4..=4 {
                    let x = QuadInt::new(a, b);
                    let y = QuadInt::new(b - 1, a + 2);
                    assert_eq!(f.norm(&f.mul(&x, &y)), f.norm(&x) * f.norm(&y));
                    assert_eq!(f.mod_norm(x.reduce(97).unwrap()), {
                        let n = f.norm(&x);
                        n.mod_floor(&big(97)).to_u64().unwrap()
                    });
                }
            }
        }
    }

    fn squarefree_d() -> impl Strategy<Value = i64> {
        prop::sample::select(squarefree_ds(50))
    }

    proptest! {
        #[test]
        fn norm_multiplicative(d in squarefree_d(), a1 in -1000i64..=1000, b1 in -1000i64..=1000,
                               a2 in -1000i64..=1000, b2 in -1000i64..=1000) {
            let f = field(d);
            let (x, y) = (QuadInt::new(a1, b1), QuadInt::new(a2, b2));
            prop_assert_eq!(f.norm(&f.mul(&x, &y)), f.norm(&x) * f.norm(&y));
        }

        #[test]
        fn conj_product_is_norm(d in squarefree_d(), a in -1000i64..=1000, b in -1000i64..=1000) {
            let f = field(d);
            let x = QuadInt::new(a, b);
            let prod = f.mul(&x, &f.conj(&x));
            prop_assert!(prod.b.is_zero());
            prop_assert_eq!(prod.a, f.norm(&x));
        }

        #[test]
        fn reduction_is_a_ring_homomorphism(d in squarefree_d(), a1 in -1000i64..=1000, b1 in -1000i64..=1000,
                                            a2 in -1000i64..=1000, b2 in -1000i64..=1000, m in 2u64..=100) {
            let f = field(d);
            let (x, y) = (QuadInt::new(a1, b1), QuadInt::new(a2, b2));
            let lhs = f.mul(&x, &y).reduce(m).unwrap();
            let rhs = f.mod_mul(x.reduce(m).unwrap(), y.reduce(m).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn mod_pow_matches_exact_pow(d in squarefree_d(), a in -20i64..=20, b in -20i64..=20,
                                     e in 0u64..40, m in 2u64..=100) {
            let f = field(d);
            let x = QuadInt::new(a, b);
            let exact = f.pow(&x, e).reduce(m).unwrap();
            prop_assert_eq!(f.mod_pow(x.reduce(m).unwrap(), e).unwrap(), exact);
        }
    }
}
