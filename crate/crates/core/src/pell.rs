//! Fundamental units of quadratic fields.
//!
//! For a real field the unit is read off the continued fraction of
//! `ω = (P₀ + √D)/2` (with `P₀ = D mod 2`): the convergent index where the
//! complete quotient denominator returns to `2` gives the least `y > 0`
//! with `x² − D·y² = ±4`, and then `u = (x + y√D)/2`. Expanding `ω` rather
//! than `√D` is what catches the half-integral units such as `(1 + √5)/2`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::quadfield::{FieldContext, OmegaKind, QuadInt};

/// Generator of `U(O_K)` modulo `±1` (real fields) or of the whole finite
/// unit group (imaginary fields).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub u: QuadInt,
    pub norm_sign: i8,
    pub torsion_order: u32,
}

impl FundamentalUnit {
    /// The `(x, y)` with `u = (x + y√D)/2`.
    pub fn half_disc_coords(&self, field: &FieldContext) -> (BigInt, BigInt) {
        let QuadInt { a, b } = &self.u;
        match field.kind() {
            OmegaKind::Sqrt => (a * 2, b.clone()),
            OmegaKind::Half => (a * 2 + b, b.clone()),
        }
    }

    /// Human-readable form in terms of `√d`, e.g. `1+√2` or `(1+√5)/2`.
    pub fn display<'a>(&'a self, field: &'a FieldContext) -> UnitDisplay<'a> {
        UnitDisplay { unit: self, field }
    }
}

pub struct UnitDisplay<'a> {
    unit: &'a FundamentalUnit,
    field: &'a FieldContext,
}

impl fmt::Display for UnitDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // u = (p + q√d)/den
        let QuadInt { a, b } = &self.unit.u;
        let (mut p, mut q, mut den) = match self.field.kind() {
            OmegaKind::Sqrt => (a.clone(), b.clone(), BigInt::one()),
            OmegaKind::Half => (a * 2 + b, b.clone(), BigInt::from(2)),
        };
        if den == BigInt::from(2) && p.is_even() && q.is_even() {
            p /= 2;
            q /= 2;
            den = BigInt::one();
        }
        let surd = format!("√{}", self.field.d());
        let mut body = String::new();
        if !p.is_zero() {
            body.push_str(&p.to_string());
        }
        if !q.is_zero() {
            if q.is_negative() {
                body.push('-');
            } else if !body.is_empty() {
                body.push('+');
            }
            if q.abs() != BigInt::one() {
                body.push_str(&q.abs().to_string());
            }
            body.push_str(&surd);
        }
        if body.is_empty() {
            body.push('0');
        }
        if den.is_one() {
            f.write_str(&body)
        } else {
            write!(f, "({body})/{den}")
        }
    }
}

pub fn fundamental_unit(field: &FieldContext) -> Result<FundamentalUnit> {
    if !field.is_real() {
        return Ok(match field.d() {
            -1 => FundamentalUnit {
                u: QuadInt::new(0, 1),
                norm_sign: 1,
                torsion_order: 4,
            },
            -3 => FundamentalUnit {
                u: QuadInt::new(0, 1),
                norm_sign: 1,
                torsion_order: 6,
            },
            _ => FundamentalUnit {
                u: QuadInt::new(-1, 0),
                norm_sign: 1,
                torsion_order: 2,
            },
        });
    }
    let (x, y) = least_pell4_solution(field.disc())?;
    let u = from_half_disc(field, &x, &y);
    let norm = field.norm(&u);
    let norm_sign = if norm == BigInt::one() {
        1
    } else if norm == -BigInt::one() {
        -1
    } else {
        return Err(Error::Internal(format!(
            "candidate unit {u} of Q(√{}) has norm {norm}",
            field.d()
        )));
    };
    Ok(FundamentalUnit {
        u,
        norm_sign,
        torsion_order: 2,
    })
}

fn from_half_disc(field: &FieldContext, x: &BigInt, y: &BigInt) -> QuadInt {
    match field.kind() {
        OmegaKind::Sqrt => QuadInt::new(x / 2, y.clone()),
        OmegaKind::Half => QuadInt::new((x - y) / 2, y.clone()),
    }
}

/// Least `(x, y)` with `x, y > 0` and `x² − D·y² = ±4`, via the continued
/// fraction of `(P₀ + √D)/2`.
fn least_pell4_solution(disc: i64) -> Result<(BigInt, BigInt)> {
    if disc <= 4 {
        return Err(Error::InvalidArgument(format!(
            "discriminant {disc} is not that of a real quadratic field"
        )));
    }
    let root = disc.sqrt();
    let q0: i64 = 2;
    let p0: i64 = disc & 1;
    let (mut p, mut q) = (p0, q0);
    // A_{-2}, A_{-1} and B_{-2}, B_{-1}
    let (mut a_prev, mut a_cur) = (BigInt::zero(), BigInt::one());
    let (mut b_prev, mut b_cur) = (BigInt::one(), BigInt::zero());
    // The period of a √D expansion is O(√D log D); this cap is far above it.
    let cap = 64 + 8 * (root as usize + 1) * (64 - disc.leading_zeros() as usize);
    for _ in 0..cap {
        if q <= 0 {
            return Err(Error::Internal(format!(
                "non-positive complete quotient denominator for D = {disc}"
            )));
        }
        let partial = (p + root).div_euclid(q);
        let a_next = &a_cur * partial + &a_prev;
        let b_next = &b_cur * partial + &b_prev;
        a_prev = std::mem::replace(&mut a_cur, a_next);
        b_prev = std::mem::replace(&mut b_cur, b_next);
        p = partial * q - p;
        q = (disc - p * p) / q;
        if q == q0 {
            let x = &a_cur * q0 - &b_cur * p0;
            let y = b_cur.clone();
            let check = &x * &x - &y * &y * disc;
            if check.abs() != BigInt::from(4) {
                return Err(Error::Internal(format!(
                    "convergent ({x}, {y}) gives x² − {disc}y² = {check}"
                )));
            }
            return Ok((x, y));
        }
    }
    Err(Error::Internal(format!(
        "no ±4 solution within {cap} continued-fraction steps for D = {disc}"
    )))
}

/// Checks that `U` is a unit and, for real fields, that no smaller `y ≥ 1`
/// solves `x² − D·y² = ±4`.
///
/// The rescan is linear in `y`, so only call this where the unit is small.
pub fn verify_unit(field: &FieldContext, unit: &FundamentalUnit) -> bool {
    let norm = field.norm(&unit.u);
    if norm.abs() != BigInt::one() {
        return false;
    }
    if !field.is_real() {
        return unit.u.b.is_zero() == (unit.torsion_order == 2);
    }
    let (x, y) = unit.half_disc_coords(field);
    if !x.is_positive() || !y.is_positive() {
        return false;
    }
    let disc = BigInt::from(field.disc());
    let four = BigInt::from(4);
    let mut k = BigInt::one();
    while k < y {
        let base = &k * &k * &disc;
        for target in [&base + &four, &base - &four] {
            if !target.is_negative() {
                let s = target.sqrt();
                if &s * &s == target {
                    return false;
                }
            }
        }
        k += 1;
    }
    true
}
