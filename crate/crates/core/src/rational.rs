//! Parsing and conversion helpers for exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses `"p/q"`, integers, and decimals with an optional exponent
/// (`"0.01"`, `"1e-6"`, `"-2.5E3"`) into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("cannot parse {s:?} as a rational number"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::InvalidArgument(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0")
        .parse()
        .map_err(|_| bad())?;
    // the trailing "0" keeps the string non-empty; undo it with one more power of ten
    let scale = exp - frac_part.len() as i32 - 1;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(all * ten.pow(scale as u32))
    } else {
        BigRational::new(all, ten.pow((-scale) as u32))
    };
    Ok(if neg { -value } else { value })
}

/// Exact binary value of a finite `f64`.
pub fn from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::InvalidArgument(format!("{x} is not a finite number")))
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rational("1/11").unwrap(), r(1, 11));
        assert_eq!(parse_rational("-6/4").unwrap(), r(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), r(7, 1));
        assert_eq!(parse_rational("0.01").unwrap(), r(1, 100));
        assert_eq!(parse_rational("1e-6").unwrap(), r(1, 1_000_000));
        assert_eq!(parse_rational("-2.5E3").unwrap(), r(-2500, 1));
        assert_eq!(parse_rational(".5").unwrap(), r(1, 2));
        for bad in ["", "abc", "1/0", "1.2.3", "e5", "1e"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn float_conversions() {
        assert_eq!(from_f64(0.5).unwrap(), r(1, 2));
        assert!(from_f64(f64::NAN).is_err());
        assert_eq!(to_f64(&r(1, 3)), 1.0 / 3.0);
    }
}
