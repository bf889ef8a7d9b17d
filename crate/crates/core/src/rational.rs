//! Exact rational helpers.
//!
//! Every coordinate, density and entitlement is a [`Rational`]; these
//! helpers cover the string form used on the wire (`"p/q"` or `"p"`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Rational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"` or `"p"`; anything that looks like a float is rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational string: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let valid_int = |p: &str| {
        let digits = p.strip_prefix('-').unwrap_or(p);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    if !valid_int(num) || !valid_int(den) || den.starts_with('-') {
        return Err(bad());
    }
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(parse_rational(" 7/1 ").unwrap(), int(7));
    }

    #[test]
    fn rejects_floats_and_garbage() {
        for s in ["0.5", "1e3", "1/0", "", "/2", "1/", "1/-2", "a/b", "1/2/3"] {
            assert!(parse_rational(s).is_err(), "{s} should be rejected");
        }
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(format_rational(&ratio(2, 4)), "1/2");
        assert_eq!(format_rational(&int(3)), "3");
        assert_eq!(format_rational(&ratio(-3, 9)), "-1/3");
    }

    #[test]
    fn lcm_of_denominators() {
        let v = [ratio(1, 4), ratio(1, 6), int(1)];
        assert_eq!(common_denominator(&v), BigInt::from(12));
    }
}
