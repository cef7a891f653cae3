//! Small helpers around exact rational arithmetic.

use num::rational::Ratio;
use num::BigRational;
use num::{BigInt, One, Signed, Zero};
use thiserror::Error;

/// Exact machine-word rational used for sizes, loads and ratios.
pub type Rat = Ratio<i64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatioParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("bad rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses `"p/q"` or a plain integer `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat, RatioParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RatioParseError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: i64 = num
        .trim()
        .parse()
        .map_err(|_| RatioParseError::Malformed(s.to_string()))?;
    let d: i64 = den
        .trim()
        .parse()
        .map_err(|_| RatioParseError::Malformed(s.to_string()))?;
    if d == 0 {
        return Err(RatioParseError::ZeroDenominator(s.to_string()));
    }
    Ok(Rat::new(n, d))
}

/// Canonical text form: reduced, `p/q`, or `p` when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Same canonical form for big rationals.
pub fn format_big(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_big(s: &str) -> Result<BigRational, RatioParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RatioParseError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num
        .trim()
        .parse()
        .map_err(|_| RatioParseError::Malformed(s.to_string()))?;
    let d: BigInt = den
        .trim()
        .parse()
        .map_err(|_| RatioParseError::Malformed(s.to_string()))?;
    if d.is_zero() {
        return Err(RatioParseError::ZeroDenominator(s.to_string()));
    }
    Ok(BigRational::new(n, d))
}

/// 2^-k as a big rational.
pub fn pow2_inv(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << k)
}

/// True when `x` is a dyadic rational (denominator a power of two).
pub fn is_dyadic(x: &BigRational) -> bool {
    let mut d = x.denom().abs();
    let two = BigInt::from(2);
    while (&d % &two).is_zero() {
        d /= &two;
    }
    d.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["1/2", "3", "-5/3", "0"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(format_rat(&parse_rat("4/8").unwrap()), "1/2");
        assert_eq!(format_rat(&parse_rat("6/3").unwrap()), "2");
    }

    #[test]
    fn rejects_bad_literals() {
        assert!(parse_rat("").is_err());
        assert!(parse_rat("a/b").is_err());
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn dyadic_detection() {
        assert!(is_dyadic(&parse_big("3/8").unwrap()));
        assert!(is_dyadic(&parse_big("1").unwrap()));
        assert!(!is_dyadic(&parse_big("1/3").unwrap()));
    }
}
