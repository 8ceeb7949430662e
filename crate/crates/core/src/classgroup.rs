//! Class numbers of maximal orders by counting reduced binary quadratic
//! forms `(a, b, c)` of discriminant `D = b² − 4ac`.
//!
//! Definite forms are counted directly. Indefinite forms are grouped into
//! cycles under the reduction operator `ρ`; the number of cycles is the
//! narrow class number `h⁺`, and `h = h⁺` or `h⁺/2` according to the sign
//! of the fundamental unit's norm.

use std::collections::HashSet;

use num_integer::{Integer, Roots};

use crate::error::{Error, Result};
use crate::pell::FundamentalUnit;
use crate::quadfield::FieldContext;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct FormClassData {
    pub disc: i64,
    pub h: u64,
    /// Narrow class number; only meaningful for real fields.
    pub h_plus: Option<u64>,
    pub unit_norm_sign: i8,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Form {
    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }
}

pub fn class_number(field: &FieldContext, unit: &FundamentalUnit) -> Result<FormClassData> {
    let disc = field.disc();
    if disc < 0 {
        let h = reduced_definite_forms(disc).len() as u64;
        return Ok(FormClassData {
            disc,
            h,
            h_plus: None,
            unit_norm_sign: unit.norm_sign,
        });
    }
    let h_plus = indefinite_cycles(disc)?.len() as u64;
    let h = if unit.norm_sign == -1 {
        h_plus
    } else {
        if !h_plus.is_multiple_of(2) {
            return Err(Error::Internal(format!(
                "D = {disc}: norm +1 unit but odd narrow class number {h_plus}"
            )));
        }
        h_plus / 2
    };
    Ok(FormClassData {
        disc,
        h,
        h_plus: Some(h_plus),
        unit_norm_sign: unit.norm_sign,
    })
}

/// Rings of integers with class number at most 2 are exactly the
/// half-factorial ones.
pub fn maximal_order_is_hfd(data: &FormClassData) -> bool {
    data.h <= 2
}

/// Primitive reduced positive definite forms: `|b| ≤ a ≤ c`, with `b ≥ 0`
/// whenever `|b| = a` or `a = c`.
pub fn reduced_definite_forms(disc: i64) -> Vec<Form> {
    debug_assert!(disc < 0);
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && a == c) {
                continue;
            }
            let f = Form { a, b, c };
            if f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out
}

/// Primitive reduced indefinite forms: `0 < b < √D` and
/// `√D − b < 2|a| < √D + b`.
pub fn reduced_indefinite_forms(disc: i64) -> Vec<Form> {
    debug_assert!(disc > 0);
    let root = disc.sqrt();
    let mut out = Vec::new();
    let mut b = if disc % 2 == 0 { 2 } else { 1 };
    while b <= root {
        // -ac = (D - b²)/4
        let prod = (disc - b * b) / 4;
        for a_abs in 1..=prod {
            if prod % a_abs != 0 {
                continue;
            }
            let two_a = 2 * a_abs;
            let lower_ok = {
                let s = two_a + b;
                s * s > disc
            };
            let upper_ok = {
                let t = two_a - b;
                t <= 0 || t * t < disc
            };
            if !(lower_ok && upper_ok) {
                continue;
            }
            let c_abs = prod / a_abs;
            for sign in [1, -1] {
                let f = Form {
                    a: sign * a_abs,
                    b,
                    c: -sign * c_abs,
                };
                if f.is_primitive() {
                    out.push(f);
                }
            }
        }
        b += 2;
    }
    out
}

/// One reduction step `(a, b, c) ↦ (c, b', a')` with `b' ≡ −b (mod 2c)`
/// chosen in `(√D − 2|c|, √D)`.
pub fn rho(form: Form, disc: i64) -> Form {
    let root = disc.sqrt();
    let m = 2 * form.c.abs();
    let r = (-form.b).rem_euclid(m);
    let b_next = root - (root - r).rem_euclid(m);
    let a_next = (b_next * b_next - disc) / (4 * form.c);
    Form {
        a: form.c,
        b: b_next,
        c: a_next,
    }
}

/// Partition the reduced indefinite forms into `ρ`-cycles.
pub fn indefinite_cycles(disc: i64) -> Result<Vec<Vec<Form>>> {
    let forms = reduced_indefinite_forms(disc);
    let reduced: HashSet<Form> = forms.iter().copied().collect();
    let mut seen: HashSet<Form> = HashSet::new();
    let mut cycles = Vec::new();
    for &start in &forms {
        if seen.contains(&start) {
            continue;
        }
        let mut cycle = vec![start];
        seen.insert(start);
        let mut cur = rho(start, disc);
        while cur != start {
            if !reduced.contains(&cur) || !seen.insert(cur) {
                return Err(Error::Internal(format!(
                    "D = {disc}: ρ left the reduced set or merged cycles at {cur:?}"
                )));
            }
            cycle.push(cur);
            cur = rho(cur, disc);
        }
        cycles.push(cycle);
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pell::fundamental_unit;

    fn data(d: i64) -> FormClassData {
        let f = FieldContext::new(d).unwrap();
        let u = fundamental_unit(&f).unwrap();
        class_number(&f, &u).unwrap()
    }

    /// Triple loop over (a, b, c) with a ≤ √(|D|/3).
    fn definite_oracle(disc: i64) -> u64 {
        let mut count = 0;
        let mut a = 1;
        while 3 * a * a <= -disc {
            for b in -a..=a {
                for c in a..=(a + (-disc) / (4 * a) + 1) {
                    if b * b - 4 * a * c != disc {
                        continue;
                    }
                    if (b.abs() == a || a == c) && b < 0 {
                        continue;
                    }
                    if a.gcd(&b).gcd(&c) == 1 {
                        count += 1;
                    }
                }
            }
            a += 1;
        }
        count
    }

    #[test]
    fn definite_spot_values() {
        for (disc, h) in [(-3, 1), (-4, 1), (-20, 2), (-23, 3)] {
            assert_eq!(definite_oracle(disc), h);
            assert_eq!(reduced_definite_forms(disc).len() as u64, h);
        }
        assert_eq!(
            reduced_definite_forms(-20),
            vec![Form { a: 1, b: 0, c: 5 }, Form { a: 2, b: 2, c: 3 }]
        );
        assert_eq!(data(-5).h, 2);
        assert_eq!(data(-1).h, 1);
        assert_eq!(data(-23).h, 3);
    }

    #[test]
    fn indefinite_spot_values() {
        let d10 = data(10);
        assert_eq!((d10.h, d10.h_plus, d10.unit_norm_sign), (2, Some(2), -1));
        let d3 = data(3);
        assert_eq!((d3.h, d3.h_plus), (1, Some(2)));
        assert_eq!(data(2).h, 1);
        assert_eq!(data(5).h, 1);
        assert_eq!(data(79).h, 3);
        assert_eq!(data(82).h, 4);
    }

    #[test]
    fn rho_preserves_discriminant() {
        for disc in [8i64, 12, 13, 40, 60, 229, 316, 1596] {
            for f in reduced_indefinite_forms(disc) {
                assert_eq!(f.disc(), disc);
                assert_eq!(rho(f, disc).disc(), disc);
            }
        }
    }

    #[test]
    fn narrow_parity_and_positivity() {
        for d in (2..1000).filter(|&d| crate::arith::is_squarefree(d).unwrap()) {
            let c = data(d);
            assert!(c.h >= 1);
            if c.unit_norm_sign == 1 {
                assert_eq!(c.h_plus.unwrap() % 2, 0, "d = {d}");
            }
        }
        for d in (-1000..0).filter(|&d| crate::arith::is_squarefree(d).unwrap()) {
            assert!(data(d).h >= 1);
        }
    }

    #[test]
    fn hfd_threshold() {
        let mk = |h| FormClassData {
            disc: -20,
            h,
            h_plus: None,
            unit_norm_sign: 1,
        };
        assert!(maximal_order_is_hfd(&mk(1)));
        assert!(maximal_order_is_hfd(&mk(2)));
        assert!(!maximal_order_is_hfd(&mk(3)));
    }
}
