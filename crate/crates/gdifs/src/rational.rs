//! Exact rational scalars.
//!
//! Everything structural — similarity ratios, translations, interval
//! endpoints, gap lengths — is kept as an exact `Rational`. Floating point
//! appears only where a quantity is genuinely transcendental in the input
//! data (the dimension `s`, eigenvector entries, measure estimates).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`: expected `p` or `p/q` with integer p, q")]
    Malformed(String),
    #[error("rational literal `{0}` has a zero denominator")]
    ZeroDenominator(String),
    #[error("decimal literals are not exact; write `{0}` as a fraction p/q")]
    DecimalLiteral(String),
}

/// Shorthand for small constants: `rat(5, 12)` is 5/12.
///
/// Panics on a zero denominator; intended for literals, not input data.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `p` or `p/q`. Decimal notation is rejected rather than rounded.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if trimmed.contains('.') {
        return Err(ParseRationalError::DecimalLiteral(trimmed.to_owned()));
    }
    let mut parts = trimmed.splitn(2, '/');
    let numer_text = parts.next().unwrap_or("");
    let parse_int = |t: &str| -> Result<BigInt, ParseRationalError> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| ParseRationalError::Malformed(trimmed.to_owned()))
    };
    let numer = parse_int(numer_text)?;
    match parts.next() {
        None => Ok(Rational::from_integer(numer)),
        Some(denom_text) => {
            let denom = parse_int(denom_text)?;
            if denom.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(trimmed.to_owned()));
            }
            Ok(Rational::new(numer, denom))
        }
    }
}

/// Canonical form: `p` for integers, `p/q` with q > 0 otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `r^s` for positive `r` and a floating-point exponent.
pub fn pow_f64(r: &Rational, s: f64) -> f64 {
    debug_assert!(r.is_positive());
    to_f64(r).powf(s)
}

/// Exact integer power; negative exponents require a nonzero base.
pub fn pow_exact(r: &Rational, e: i32) -> Rational {
    if e >= 0 {
        r.pow(e)
    } else {
        Rational::one() / r.pow(-e)
    }
}

/// Ten significant digits, the display precision used in reports.
pub fn decimal10(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000".to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (9 - magnitude).clamp(0, 17) as usize;
    format!("{:.*}", decimals, x)
}
