//! Exact rational scalars and their canonical text form.
//!
//! Every coefficient in the crate is a [`Coefficient`], an arbitrary
//! precision rational kept in lowest terms with a positive denominator.
//! The text form is `"<int>"` for integers and `"<int>/<posint>"` otherwise.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Coefficient = BigRational;

pub fn int(n: i64) -> Coefficient {
    Coefficient::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Coefficient {
    Coefficient::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn factorial_q(n: usize) -> Coefficient {
    Coefficient::from_integer(factorial(n))
}

/// `base^exp` for a nonnegative exponent; `0^0 = 1`.
pub fn pow(base: &Coefficient, exp: usize) -> Coefficient {
    let mut acc = Coefficient::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub fn format(q: &Coefficient) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"<int>"` or `"<int>/<posint>"`. Rejects a zero or negative
/// denominator and anything that is not an exact integer literal, so floats
/// never sneak in.
pub fn parse(text: &str) -> Result<Coefficient> {
    let text = text.trim();
    let bad = |msg: &str| Error::parse(text, msg);
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let numer: BigInt = parse_int(num).ok_or_else(|| bad("invalid integer numerator"))?;
    let denom = match den {
        None => BigInt::one(),
        Some(d) => {
            if d.starts_with('-') || d.starts_with('+') {
                return Err(bad("denominator must be a positive integer"));
            }
            let d = parse_int(d).ok_or_else(|| bad("invalid integer denominator"))?;
            if d.is_zero() {
                return Err(bad("zero denominator"));
            }
            d
        }
    };
    Ok(Coefficient::new(numer, denom))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s
        .strip_prefix('-')
        .or_else(|| s.strip_prefix('+'))
        .unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub fn require_positive(name: &'static str, value: &Coefficient) -> Result<()> {
    if value.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositive {
            name,
            value: format(value),
        })
    }
}

/// Natural logarithm of `|q|` as a float, robust for values far outside
/// the `f64` range. Returns `-inf` for zero.
pub fn ln_abs(q: &Coefficient) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_bigint(&q.numer().abs()) - ln_bigint(q.denom())
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn to_f64(q: &Coefficient) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    sign * ln_abs(q).exp()
}

/// Exact test `a <= sqrt(b)` for rationals with `b >= 0`.
pub fn le_sqrt(a: &Coefficient, b: &Coefficient) -> bool {
    if a.is_negative() {
        return true;
    }
    a * a <= *b
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn gcd_check(q: &Coefficient) -> bool {
        q.denom().is_positive() && q.numer().gcd(q.denom()).is_one()
    }

    #[test]
    fn parse_and_format_canonical() {
        assert_eq!(parse("6/4").unwrap(), ratio(3, 2));
        assert_eq!(format(&parse("6/4").unwrap()), "3/2");
        assert_eq!(format(&parse("-8/4").unwrap()), "-2");
        assert_eq!(format(&parse(" 7 ").unwrap()), "7");
        assert!(gcd_check(&parse("-12/18").unwrap()));
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "1.5", "1/0", "1/-2", "abc", "1/", "/3", "--1", "1e3"] {
            assert!(parse(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn ln_abs_handles_huge_values() {
        let big = factorial_q(400);
        let expected: f64 = (1..=400).map(|k| (k as f64).ln()).sum();
        assert!((ln_abs(&big) - expected).abs() < 1e-9 * expected);
        assert!((ln_abs(&ratio(1, 8)) + 8f64.ln()).abs() < 1e-12);
    }
}
