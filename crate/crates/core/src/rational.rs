//! Arbitrary-precision rationals and the small helpers the rest of the
//! crate needs around them.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Always stored in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q`; panics on `q == 0`.
pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or `"p"` (surrounding whitespace allowed). Decimal points
/// and exponents are rejected so that exact inputs stay exact.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `p/q` rendering (`p` when the denominator is one).
pub fn to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub fn vec_to_f64(v: &[Rational]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

pub fn pow(r: &Rational, e: usize) -> Rational {
    num_traits::pow(r.clone(), e)
}

/// Binomial coefficient as a rational.
pub fn binomial(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    Rational::from_integer(num_integer::binomial(BigInt::from(n), BigInt::from(k)))
}

/// Smallest multiple of `1/scale` strictly greater than `sqrt(n)`.
pub fn sqrt_upper(n: u64, scale: u64) -> Rational {
    let target = BigInt::from(n) * BigInt::from(scale) * BigInt::from(scale);
    let floor = target.sqrt();
    Rational::new(floor + 1, BigInt::from(scale))
}

/// Smallest integer `>= r`.
pub fn ceil_to_usize(r: &Rational) -> Option<usize> {
    r.ceil().to_integer().to_usize()
}

/// Checks that closed intervals `(lo, hi)` lie inside `[a, b]` and their
/// union is all of `[a, b]`.
pub fn check_cover(a: &Rational, b: &Rational, mut intervals: Vec<(Rational, Rational)>) -> Result<()> {
    intervals.sort();
    let mut reach = a.clone();
    for (lo, hi) in &intervals {
        if lo < a || hi > b {
            return Err(Error::invalid(format!(
                "image [{}, {}] leaves [{}, {}]",
                to_string(lo),
                to_string(hi),
                to_string(a),
                to_string(b)
            )));
        }
        if lo > &reach {
            return Err(Error::invalid(format!(
                "gap between {} and {}",
                to_string(&reach),
                to_string(lo)
            )));
        }
        if hi > &reach {
            reach = hi.clone();
        }
    }
    if &reach != b {
        return Err(Error::invalid(format!("images do not reach {}", to_string(b))));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse(" -7 ").unwrap(), int(-7));
        assert_eq!(parse("4/-8").unwrap(), frac(-1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("0.5").is_err());
        assert!(parse("").is_err());
        assert!(parse("1e3").is_err());
    }

    #[test]
    fn render_round_trips() {
        for s in ["0", "-3", "22/7", "-1/1000000"] {
            assert_eq!(to_string(&parse(s).unwrap()), s);
        }
    }

    #[test]
    fn sqrt_surrogate() {
        assert_eq!(sqrt_upper(2, 1_000_000), frac(1_414_214, 1_000_000));
        assert_eq!(sqrt_upper(3, 1_000_000), frac(1_732_051, 1_000_000));
        // perfect squares still get a strict upper bound
        assert_eq!(sqrt_upper(4, 1_000_000), frac(2_000_001, 1_000_000));
    }
}
