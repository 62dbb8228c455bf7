//! The universal scalar: an arbitrary-precision signed rational.
//!
//! Backed by [`num_rational::BigRational`], which already maintains the
//! invariants this crate relies on everywhere: the denominator is positive,
//! numerator and denominator are coprime, and zero is stored as `0/1`.
//! This module pins the text format used across the CLI and file outputs:
//! `<sign><num>/<den>` with `den >= 1`, or `<sign><num>` when `den = 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

pub type Rational = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den` as a normalized rational. Panics on `den = 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `q^k` for signed integer exponents (negative `k` inverts; `q` must be
/// nonzero in that case).
pub fn rational_pow(q: &Rational, k: i64) -> Rational {
    if k >= 0 {
        q.pow(k as i32)
    } else {
        q.pow(-k as i32).recip()
    }
}

/// Canonical text form: `-3/4`, `5`, `0`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the output of [`format_rational`] (and any `p/q` with nonzero `q`).
pub fn parse_rational(s: &str) -> Option<Rational> {
    s.parse::<BigRational>().ok()
}

/// True when the rational is an integer (denominator 1).
pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Nearest integer to `r` (ties away from zero); used when reporting failed
/// integrality checks.
pub fn nearest_integer(r: &Rational) -> BigInt {
    r.round().to_integer()
}

/// Sign as -1, 0, +1.
pub fn sign_of(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}
