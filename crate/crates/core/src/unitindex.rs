//! The unit index `m(n, d) = |U(O_K)/U(Z + nO_K)|`: the least `m > 0` with
//! `u^m` in the order.
//!
//! `{k : u^k ∈ R}` is a subgroup of `Z`, and `m` divides `L(n, d)`, so each
//! prime-power part is found by testing the divisors of `L(p^a, d)` in
//! increasing order, and `m(n)` is the lcm of those parts.

use crate::arith::{self, divisors_of};
use crate::error::{Error, Result};
use crate::lfun;
use crate::pell::FundamentalUnit;
use crate::quadfield::FieldContext;

pub fn min_power_prime_power(
    field: &FieldContext,
    unit: &FundamentalUnit,
    p: u64,
    a: u32,
) -> Result<u64> {
    if a == 0 {
        return Err(Error::InvalidArgument(
            "prime power exponent must be positive".into(),
        ));
    }
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = p.pow(a);
    let l = lfun::l_prime_power_unchecked(p, a, field.d());
    let base = unit.u.reduce(q)?;
    for k in divisors_of(&arith::factorize(l)?) {
        if field.mod_pow(base, k)?.b == 0 {
            return Ok(k);
        }
    }
    Err(Error::Internal(format!(
        "no divisor of L({q}, {}) = {l} is a unit exponent landing in the order",
        field.d()
    )))
}

pub fn min_power(field: &FieldContext, unit: &FundamentalUnit, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Zero("min_power"));
    }
    let mut m = 1;
    for (p, a) in arith::factorize(n)?.iter() {
        m = arith::lcm(m, min_power_prime_power(field, unit, p, a)?);
    }
    Ok(m)
}
