use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator (zero is `0/1`).
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}: {}", self.input, self.reason)
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

/// Parses `"p"` or `"p/q"` with an optional leading minus on `p` and `q > 0`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        input: s.to_string(),
        reason,
    };
    match s.split_once('/') {
        None => parse_int(s)
            .map(Rational::from_integer)
            .ok_or_else(|| err("expected an integer numerator")),
        Some((p, q)) => {
            let p = parse_int(p).ok_or_else(|| err("expected an integer numerator"))?;
            if q.starts_with('-') {
                return Err(err("denominator must be positive"));
            }
            let q = parse_int(q).ok_or_else(|| err("expected an integer denominator"))?;
            if q == BigInt::from(0) {
                return Err(err("zero denominator"));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Canonical `"p/q"` form, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}
