//! Exact rational helpers on top of `num-rational`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(value: u64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `num/den` or a bare integer.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let parsed = match text.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad_rational(text))?;
            let den: BigInt = den.trim().parse().map_err(|_| bad_rational(text))?;
            if den.is_zero() {
                return Err(bad_rational(text));
            }
            Rational::new(num, den)
        }
        None => Rational::from_integer(text.parse().map_err(|_| bad_rational(text))?),
    };
    Ok(parsed)
}

fn bad_rational(text: &str) -> Error {
    Error::InvalidArgument(format!("not a rational `num/den`: {text:?}"))
}

/// Canonical `num/den` form (reduced, denominator always written).
pub fn display(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// `value^exp` for a non-negative exponent.
pub fn pow(value: &Rational, exp: usize) -> Rational {
    let numer = num_traits::pow(value.numer().clone(), exp);
    let denom = num_traits::pow(value.denom().clone(), exp);
    Rational::new(numer, denom)
}

/// Smallest integer `>= value`, saturated into `u64` (negative values give 0).
pub fn ceil_u64(value: &Rational) -> u64 {
    if value.is_negative() {
        return 0;
    }
    value.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

/// Largest integer `<= value`, saturated into `u64` (negative values give 0).
pub fn floor_u64(value: &Rational) -> u64 {
    if value.is_negative() {
        return 0;
    }
    value.floor().to_integer().to_u64().unwrap_or(u64::MAX)
}

/// Integer `d >= value` decided exactly.
pub fn int_at_least(d: u64, value: &Rational) -> bool {
    BigInt::from(d) * value.denom() >= *value.numer()
}

/// Integer `d <= value` decided exactly.
pub fn int_at_most(d: u64, value: &Rational) -> bool {
    BigInt::from(d) * value.denom() <= *value.numer()
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        assert_eq!(parse("3/2").unwrap(), ratio(3, 2));
        assert_eq!(parse("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse(" 4 ").unwrap(), integer(4));
        assert_eq!(display(&parse("4").unwrap()), "4/1");
        assert_eq!(display(&ratio(22, 20)), "11/10");
        assert!(parse("1/0").is_err());
        assert!(parse("x/2").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn floors_and_ceils() {
        assert_eq!(ceil_u64(&ratio(9, 4)), 3);
        assert_eq!(floor_u64(&ratio(9, 4)), 2);
        assert_eq!(ceil_u64(&integer(3)), 3);
        assert_eq!(floor_u64(&ratio(-1, 2)), 0);
        assert!(int_at_least(3, &ratio(5, 2)));
        assert!(!int_at_least(2, &ratio(5, 2)));
        assert!(int_at_most(2, &ratio(5, 2)));
        assert!(int_at_most(3, &integer(3)));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(16, 8), BigUint::from(12870u32));
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(8, 0), BigUint::one());
    }
}
