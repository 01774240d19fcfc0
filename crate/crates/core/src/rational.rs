//! Exact rational scalars.
//!
//! Every scalar in the kernel is a [`BigRational`]; the helpers here cover
//! the text form used in reports and on the command line (`"p/q"`, `"-3/7"`,
//! plain integers).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn from_bigint(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

/// Canonical text form: `"p/q"` with positive denominator, or `"p"` when
/// the value is an integer.
pub fn to_string(q: &Rational) -> String {
    q.to_string()
}

/// Parses `"p"`, `"p/q"` or `"-p/q"`. `field` names the input in errors.
pub fn parse(field: &str, s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = |msg: &str| Error::parse(field, format!("{msg}: {s:?}"));
    let parse_int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("malformed rational"));
        }
        t.parse::<BigInt>().map_err(|_| err("malformed rational"))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let num = parse_int(p)?;
            if q.starts_with(['-', '+']) {
                return Err(err("denominator must be an unsigned integer"));
            }
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(err("zero denominator"));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Parses a comma separated list such as `"1,1/2,-3"`.
pub fn parse_list(field: &str, s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(|part| parse(field, part)).collect()
}

pub fn binomial(n: u32, k: u32) -> BigInt {
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

/// n (n-1) ... (n-k+1)
pub fn falling_factorial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

pub fn factorial(n: u32) -> BigInt {
    falling_factorial(n, n)
}

pub fn pow(q: &Rational, e: u32) -> Rational {
    num_traits::pow(q.clone(), e as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse("a", "1/2").unwrap(), frac(1, 2));
        assert_eq!(parse("a", "-3/7").unwrap(), frac(-3, 7));
        assert_eq!(parse("a", "4/2").unwrap(), int(2));
        assert_eq!(parse("a", " 5 ").unwrap(), int(5));
        assert_eq!(to_string(&frac(-6, 14)), "-3/7");
        assert_eq!(to_string(&int(3)), "3");
    }

    #[test]
    fn rejects_malformed_input_naming_the_field() {
        for bad in ["1//2", "", "1/", "/2", "1/0", "x", "1/-2", "1.5"] {
            match parse("a", bad) {
                Err(Error::Parse { field, .. }) => assert_eq!(field, "a"),
                other => panic!("{bad:?} parsed as {other:?}"),
            }
        }
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_list("a", "1,1/2").unwrap(), vec![int(1), frac(1, 2)]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 3), BigInt::zero());
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(factorial(4), BigInt::from(24));
    }
}
