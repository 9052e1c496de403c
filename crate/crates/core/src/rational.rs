//! Exact rational scalars and their text encoding.
//!
//! Values cross every external interface as `"p/q"` strings so that no
//! float ever touches a coefficient.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// `p/q` with the denominator always written, `1/1` included.
pub fn to_fraction_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p`, `p/q` and finite decimals such as `-0.25`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("{t}: {e}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(format!("{t}: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("{t}: zero denominator")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((whole, fracpart)) = t.split_once('.') {
        if fracpart.is_empty() || !fracpart.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal '{t}'")));
        }
        let negative = whole.trim_start().starts_with('-');
        let w = match whole {
            "" | "-" | "+" => BigInt::zero(),
            w => BigInt::from_str(w).map_err(|e| Error::Parse(format!("{t}: {e}")))?,
        };
        let scale = BigInt::from(10u32).pow(fracpart.len() as u32);
        let f = BigInt::from_str(fracpart).map_err(|e| Error::Parse(format!("{t}: {e}")))?;
        let mag = w.abs() * &scale + f;
        let num = if negative { -mag } else { mag };
        return Ok(Rat::new(num, scale));
    }
    BigInt::from_str(t)
        .map(Rat::from_integer)
        .map_err(|e| Error::Parse(format!("{t}: {e}")))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn pow(base: &Rat, e: i32) -> Rat {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rat("3").unwrap(), int(3));
        assert_eq!(parse_rat("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(parse_rat("0.25").unwrap(), frac(1, 4));
        assert_eq!(parse_rat("-1.5").unwrap(), frac(-3, 2));
        assert_eq!(parse_rat("-0.5").unwrap(), frac(-1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert!(parse_rat("1.").is_err());
    }

    #[test]
    fn fraction_strings_always_carry_denominator() {
        assert_eq!(to_fraction_string(&int(1)), "1/1");
        assert_eq!(to_fraction_string(&frac(-3, 6)), "-1/2");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::zero());
    }
}
