//! Exact scalar and linear-algebra substrate.
//!
//! Every quantity in this crate is an arbitrary-precision rational number;
//! there is no floating point anywhere. This module provides the scalar
//! type, sparse matrices over the rationals with exact rank and linear
//! solving, and truncated multivariate power series.

pub mod matrix;
pub mod series;

use num::{BigInt, BigRational, One, Signed, Zero};
use std::str::FromStr;

/// The only scalar in the system: an arbitrary-precision rational,
/// always reduced to lowest terms with positive denominator.
pub type Rational = BigRational;

/// Shorthand for a rational from a numerator/denominator pair.
///
/// Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact factorial as a rational.
pub fn factorial(n: u64) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

/// Double factorial (2k-1)!! with the convention (-1)!! = 1.
pub fn odd_double_factorial(k: i64) -> Rational {
    if k <= 0 {
        return Rational::one();
    }
    let mut acc = BigInt::one();
    let mut m = 2 * k - 1;
    while m > 1 {
        acc *= BigInt::from(m);
        m -= 2;
    }
    Rational::from_integer(acc)
}

/// Parses a rational in the text format `p/q` or `p`, with an optional
/// leading sign. The denominator must be nonzero; the result is reduced
/// with positive denominator.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    Rational::from_str(s.trim()).map_err(|_| ExactError::BadRational(s.to_string()))
}

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// True for rationals that are (nonnegative) integers.
pub fn is_nonneg_integer(r: &Rational) -> bool {
    r.is_integer() && !r.is_negative()
}

/// Errors from the exact-arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("cannot parse rational from {0:?}")]
    BadRational(String),
    #[error("matrix index ({0},{1}) out of bounds for {2}x{3} matrix")]
    IndexOutOfBounds(usize, usize, usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("series variable lists differ")]
    VariableMismatch,
    #[error("series has nonzero constant term where none is allowed")]
    NonzeroConstantTerm,
    #[error("constant term of the series matrix is not invertible")]
    SingularConstantTerm,
    #[error("constant term of the series matrix must have determinant 1")]
    NonUnitConstantDeterminant,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trips_through_text() {
        for s in ["3/4", "-3/4", "5", "0", "-1/120", "22/7"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
    }

    #[test]
    fn rational_parse_normalizes() {
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("1/-2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("+6/8").unwrap(), rat(3, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn double_factorials() {
        assert_eq!(odd_double_factorial(0), rat_int(1));
        assert_eq!(odd_double_factorial(1), rat_int(1));
        assert_eq!(odd_double_factorial(2), rat_int(3));
        assert_eq!(odd_double_factorial(5), rat_int(945));
    }
}
