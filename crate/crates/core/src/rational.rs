//! Exact rational scalars.
//!
//! All coefficients in the crate are [`Rational`]s (arbitrary precision,
//! always in lowest terms with positive denominator).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"` or `"p"` (optional leading sign, no decimals, no spaces).
pub fn parse(text: &str) -> Result<Rational> {
    let t = text.trim();
    let ok = !t.is_empty()
        && t.chars()
            .all(|c| c.is_ascii_digit() || c == '/' || c == '-' || c == '+');
    if !ok {
        return Err(Error::Parse(format!("invalid rational literal `{text}`")));
    }
    t.parse::<Rational>()
        .map_err(|e| Error::Parse(format!("invalid rational literal `{text}`: {e}")))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

pub fn is_integer(r: &Rational) -> bool {
    r.is_integer()
}

/// `base^exp` for a possibly negative integer exponent.
pub fn pow(base: &Rational, exp: i64) -> Rational {
    let mut acc = one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3").unwrap(), int(3));
        assert_eq!(parse("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(format(&parse("4/8").unwrap()), "1/2");
        assert!(parse("1.5").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("").is_err());
        assert!(parse("a").is_err());
    }

    #[test]
    fn powers() {
        assert_eq!(pow(&int(2), 3), int(8));
        assert_eq!(pow(&int(2), -2), frac(1, 4));
        assert_eq!(pow(&frac(2, 3), 0), one());
    }
}
