//! Exact rational numbers and small helpers around them.
//!
//! The coefficient field of every exact series is [`num_rational::BigRational`],
//! which keeps its denominator positive and the fraction reduced after every
//! operation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// `base^exp` as an exact rational; negative exponents give reciprocals.
pub fn pow_i(base: i64, exp: i64) -> Rational {
    let b = rat(base);
    if exp >= 0 {
        num_traits::pow(b, exp as usize)
    } else {
        num_traits::pow(b.recip(), (-exp) as usize)
    }
}

/// Formats as `num/den`, omitting the denominator when it is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `num` or `num/den` in base 10.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("`{s}`: {e}")))
    };
    match s.split_once('/') {
        None => Ok(int(parse_int(s)?)),
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("`{s}`: zero denominator")));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
    }
}

pub fn is_integral(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Approximate `log2 |r|`; `-inf` for zero.
pub fn log2_abs(r: &Rational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    log2_bigint(r.numer()) - log2_bigint(r.denom())
}

pub fn log2_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 52 {
        return (n.abs().to_string().parse::<f64>().unwrap_or(1.0)).log2();
    }
    let shift = bits - 53;
    let top: BigInt = n.abs() >> shift;
    let top: f64 = top.to_string().parse().unwrap_or(1.0);
    top.log2() + shift as f64
}
