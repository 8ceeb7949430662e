//! The multiplicative function `L(n, d) = |U(O_K/(n))| / φ(n)`.

use crate::arith::{self, Factorization};
use crate::error::{Error, Result};

fn check_d(d: i64) -> Result<()> {
    if d == 0 || d == 1 {
        return Err(Error::DegenerateField(d));
    }
    if !arith::is_squarefree(d)? {
        return Err(Error::NotSquarefree(d));
    }
    Ok(())
}

/// `L(p^a, d)`.
pub fn l_prime_power(p: u64, a: u32, d: i64) -> Result<u64> {
    if a == 0 {
        return Err(Error::InvalidArgument(
            "prime power exponent must be positive".into(),
        ));
    }
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    check_d(d)?;
    Ok(l_prime_power_unchecked(p, a, d))
}

pub(crate) fn l_prime_power_unchecked(p: u64, a: u32, d: i64) -> u64 {
    if p == 2 {
        match d.rem_euclid(8) {
            1 => 1 << (a - 1),
            5 => 3 << (a - 1),
            _ => 1 << a,
        }
    } else {
        let chi = arith::kronecker(d, p).expect("odd prime");
        p.pow(a - 1) * (p as i64 - chi as i64) as u64
    }
}

pub fn l_value(n: u64, d: i64) -> Result<u64> {
    check_d(d)?;
    let f = arith::factorize(n)?;
    Ok(l_from_factorization(&f, d))
}

pub(crate) fn l_from_factorization(f: &Factorization, d: i64) -> u64 {
    f.iter()
        .map(|(p, a)| l_prime_power_unchecked(p, a, d))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{gcd, is_squarefree};
    use proptest::prelude::*;

    #[test]
    fn prime_power_examples() {
        assert_eq!(l_prime_power(5, 1, 2).unwrap(), 6);
        assert_eq!(l_prime_power(2, 1, 2).unwrap(), 2);
        assert_eq!(arith::kronecker(2, 3).unwrap(), -1);
        assert_eq!(l_prime_power(3, 1, 2).unwrap(), 4);
        assert_eq!(l_prime_power(2, 3, 17).unwrap(), 4);
        assert_eq!(l_prime_power(2, 3, -3).unwrap(), 12);
        assert_eq!(l_prime_power(3, 2, -3).unwrap(), 9);
    }

    #[test]
    fn prime_power_rejects_bad_input() {
        assert!(matches!(l_prime_power(4, 1, 2), Err(Error::NotPrime(4))));
        assert!(l_prime_power(3, 0, 2).is_err());
        assert!(matches!(
            l_prime_power(3, 1, 8),
            Err(Error::NotSquarefree(8))
        ));
        assert!(l_prime_power(3, 1, 1).is_err());
    }

    #[test]
    fn value_examples() {
        assert_eq!(l_value(1, 7).unwrap(), 1);
        assert_eq!(l_prime_power(11, 1, 2).unwrap(), 12);
        assert_eq!(l_value(33, 2).unwrap(), 48);
        assert_eq!(l_value(2, -3).unwrap(), 3);
        assert!(l_value(0, 2).is_err());
        assert!(l_value(5, 12).is_err());
    }

    #[test]
    fn multiplicative_over_coprime_pairs() {
        let ds: Vec<i64> = (-50..=50)
            .filter(|&d| d != 0 && d != 1 && is_squarefree(d).unwrap())
            .collect();
        for &d in &ds {
            let table: Vec<u64> = (0..=200u64)
                .map(|n| if n == 0 { 0 } else { l_value(n, d).unwrap() })
                .collect();
            for m in 1..=200u64 {
                for n in 1..=200u64 {
                    if gcd(m, n) == 1 {
                        assert_eq!(
                            l_value(m * n, d).unwrap(),
                            table[m as usize] * table[n as usize]
                        );
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn l_is_at_least_one_and_bounded(n in 1u64..100_000, d in prop::sample::select(vec![-7i64, -3, -1, 2, 3, 5, 17, 101, 997])) {
            let l = l_value(n, d).unwrap();
            prop_assert!(l >= 1);
            // L(p^a) ≤ p^(a-1)(p+1) ≤ 2 p^a
            prop_assert!(l <= 2 * n * n);
        }
    }
}
