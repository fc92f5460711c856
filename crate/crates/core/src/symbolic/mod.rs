//! Exact multivariate polynomials over the rationals.
//!
//! [`Poly`] is a sparse polynomial over an indexed variable set. Terms are
//! kept in a canonical form (no zero coefficients, graded-lexicographic
//! order), so two polynomials are equal as functions iff they are equal as
//! values. Basic functions of the foliation are polynomials in `y1..yn` and
//! use the alias [`BasicFn`].

mod parse;
mod poly;

pub use parse::{parse_poly, ParseError, ParseErrorKind};
pub use poly::{Monomial, Poly, PolyDisplay};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// A function constant on the leaves `y = const`: a polynomial in `y1..yn`.
pub type BasicFn = Poly;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p` or `p/q` (surrounding whitespace allowed).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::InvalidRational(text.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Prints `p` or `p/q`; the inverse of [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Default variable names `y1..yn`.
pub fn y_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("y{i}")).collect()
}
