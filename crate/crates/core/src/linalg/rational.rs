use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p/q"` or `"p"` in base 10. A zero denominator is rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("malformed rational {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("malformed rational {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"p/q"` form, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// `floor(sqrt(r))` for `r >= 0`, exact.
pub fn floor_sqrt(r: &Rational) -> BigInt {
    assert!(!r.is_negative(), "floor_sqrt of a negative rational");
    // sqrt(p/q) = sqrt(p q) / q, and floor(floor(x)/q) = floor(x/q) for integer q
    let pq = r.numer() * r.denom();
    num_integer::Integer::div_floor(&pq.sqrt(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn is_integer(r: &Rational) -> bool {
    r.is_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_are_canonical() {
        assert_eq!(format_rational(&parse_rational("2/4").unwrap()), "1/2");
        assert_eq!(format_rational(&parse_rational("-6/3").unwrap()), "-2");
        assert_eq!(format_rational(&parse_rational("1/-2").unwrap()), "-1/2");
        assert_eq!(format_rational(&parse_rational(" 7 ").unwrap()), "7");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/2").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn floor_sqrt_matches_brute_force() {
        for p in 0..60i64 {
            for q in 1..12i64 {
                let r = frac(p, q);
                let mut k = 0i64;
                while frac((k + 1) * (k + 1), 1) <= r {
                    k += 1;
                }
                assert_eq!(floor_sqrt(&r), BigInt::from(k), "sqrt({p}/{q})");
            }
        }
    }
}
