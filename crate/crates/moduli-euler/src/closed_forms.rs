//! Closed-form expressions for `χ(M_g^s)` and `ξ^s_g(1/q)`, plus the
//! Bernoulli identities they rest on, each evaluated exactly over finite
//! parameter grids with counterexamples reported verbatim.
//!
//! One convention matters here: both convolution identities
//! ([`IdentityName::Identity1`], [`IdentityName::Identity2`]) are evaluated
//! with the sum starting at `r = 0`. The `r = 1` reading fails numerically
//! (at `g = 2, q = 2` it gives `2/15` against `1/10`); the `r = 0` reading is
//! the one consistent with the full ξ polynomial and passes everywhere. The
//! rejected literal reading is kept around as a documented negative check.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::bernoulli::{
    bernoulli_number, bernoulli_polynomial, binomial, factorial, weighted_bernoulli_sum,
    weighted_sum_upper_index,
};
use crate::model::{ComputePath, XiRecord};
use crate::rational::{is_integer, nearest_integer, rat, ratio, rational_pow, Rational};
use crate::{Error, Result};

/// Orbifold Euler characteristic of the moduli space of genus-`g` complex
/// curves with `s` punctures:
/// `χ(M_g^s) = (-1)^s (g+s-2)! / ((g+1)(g-1)!) · B_{g+1}`, for odd `g`.
pub fn chi_orbifold(g: u32, s: u32) -> Result<Rational> {
    if g % 2 == 0 {
        return Err(Error::OddGenusRequired {
            op: "chi_orbifold",
            g,
        });
    }
    if g + s < 2 {
        return Err(Error::DomainTooSmall {
            op: "chi_orbifold",
            g,
            s,
        });
    }
    let sign = if s % 2 == 0 { 1 } else { -1 };
    let num = Rational::from_integer(factorial(g + s - 2));
    let den = Rational::from_integer(factorial(g - 1)) * rat(g as i64 + 1);
    Ok(rat(sign) * num / den * bernoulli_number(g + 1))
}

/// `ξ^s_g(1/q)` for even `g`:
/// `(-1)^s (g+s-2)!/(2·g!) (q^g - q) B_g`.
pub fn xi_even(q: u32, g: u32, s: u32) -> Result<Rational> {
    if g % 2 == 1 {
        return Err(Error::EvenGenusRequired { op: "xi_even", g });
    }
    if g < 2 || q < 1 {
        return Err(Error::DomainTooSmall {
            op: "xi_even",
            g,
            s,
        });
    }
    let sign = if s % 2 == 0 { 1 } else { -1 };
    let qr = rat(q as i64);
    let factor = rational_pow(&qr, g as i64) - &qr;
    Ok(rat(sign) * Rational::from_integer(factorial(g + s - 2))
        / (Rational::from_integer(factorial(g)) * rat(2))
        * factor
        * bernoulli_number(g))
}

/// `ξ^s_g(1/q)` for odd `g`: the orbifold Euler characteristic plus the
/// weighted Bernoulli-polynomial correction,
/// `χ(M_g^s) + (-1)^s (g+s-2)!/g! · q^{g-1} · Σ_i (q-2i) B_g(i/q)`.
pub fn xi_odd(q: u32, g: u32, s: u32) -> Result<Rational> {
    if g % 2 == 0 {
        return Err(Error::OddGenusRequired { op: "xi_odd", g });
    }
    if g + s < 2 || q < 1 {
        return Err(Error::DomainTooSmall { op: "xi_odd", g, s });
    }
    let sign = if s % 2 == 0 { 1 } else { -1 };
    let correction = rat(sign) * Rational::from_integer(factorial(g + s - 2))
        / Rational::from_integer(factorial(g))
        * rational_pow(&rat(q as i64), g as i64 - 1)
        * weighted_bernoulli_sum(g, q)?;
    Ok(chi_orbifold(g, s)? + correction)
}

/// The convolution `Σ_{r=start_r}^{n} C(n,r) B_{n-r} B_r q^r`.
pub fn bernoulli_convolution(n: u32, q: u32, start_r: u32) -> Rational {
    let qr = rat(q as i64);
    let mut acc = Rational::zero();
    for r in start_r..=n {
        acc += Rational::from_integer(binomial(n, r))
            * bernoulli_number(n - r)
            * bernoulli_number(r)
            * rational_pow(&qr, r as i64);
    }
    acc
}

/// The even-index convolution `Σ_{r=start_r}^{g} C(2g,2r) B_{2g-2r} B_{2r} q^{2r}`.
/// For `g >= 2` the odd-index terms of the full convolution vanish, so at
/// `start_r = 0` this equals [`bernoulli_convolution`]`(2g, q, 0)`.
pub fn even_index_convolution(g: u32, q: u32, start_r: u32) -> Rational {
    let qr = rat(q as i64);
    let mut acc = Rational::zero();
    for r in start_r..=g {
        acc += Rational::from_integer(binomial(2 * g, 2 * r))
            * bernoulli_number(2 * g - 2 * r)
            * bernoulli_number(2 * r)
            * rational_pow(&qr, 2 * r as i64);
    }
    acc
}

/// The ξ polynomial for odd `g` in its convolution form:
/// `(g+s-2)!(-1)^{s+1}/(g+1)! · { (g+1) B_g q^g + Σ_{r=0}^{g+1} C(g+1,r) B_{g+1-r} B_r q^r }`.
pub fn xi_ghj_polynomial(q: u32, g: u32, s: u32) -> Result<Rational> {
    if g % 2 == 0 {
        return Err(Error::OddGenusRequired {
            op: "xi_ghj_polynomial",
            g,
        });
    }
    if g + s < 2 || q < 1 {
        return Err(Error::DomainTooSmall {
            op: "xi_ghj_polynomial",
            g,
            s,
        });
    }
    let sign = if s % 2 == 0 { -1 } else { 1 }; // (-1)^{s+1}
    let qr = rat(q as i64);
    let brace = rat(g as i64 + 1) * bernoulli_number(g) * rational_pow(&qr, g as i64)
        + bernoulli_convolution(g + 1, q, 0);
    Ok(Rational::from_integer(factorial(g + s - 2)) * rat(sign)
        / Rational::from_integer(factorial(g + 1))
        * brace)
}

/// Dispatcher over the two parity branches; tags the result as a
/// closed-form value.
pub fn xi_closed(q: u32, g: u32, s: u32) -> Result<XiRecord> {
    if g < 1 || g + s < 2 {
        return Err(Error::DomainTooSmall {
            op: "xi_closed",
            g,
            s,
        });
    }
    let value = if g % 2 == 0 {
        xi_even(q, g, s)?
    } else {
        xi_odd(q, g, s)?
    };
    Ok(XiRecord {
        g,
        s,
        q,
        value,
        path: ComputePath::ClosedForm,
    })
}

/// The identities this crate can sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityName {
    /// `Σ_i (q-2i) B_1(i/q) = -(q²/12 - q/4 + 1/6)`.
    P21,
    /// `Σ_i (q-2i) B_g(i/q) = -q^{1-g}(B_{g+1} + (1/(g+1)) Σ_{r=1}^{g+1} C(g+1,r) B_{g+1-r} B_r q^r)`
    /// for odd `g > 1`.
    P22,
    /// `Σ_{r=0}^{2g} C(2g,r) B_{2g-r} B_r q^r = (1-2g) B_{2g} - 2g q^{2g-2} Σ_i (q-2i) B_{2g-1}(i/q)`.
    Identity1,
    /// `Σ_{r=0}^{g} C(2g,2r) B_{2g-2r} B_{2r} 2^{2r} = (1-2g) B_{2g}`.
    Identity2,
    /// `q^g B_g(i/q) ∈ ℤ` for odd `g > 1`, `0 <= i <= q`, and the composite
    /// `2q^{g-1} Σ_i i·B_g(i/q) - (B_{g+1} + (1/(g+1)) Σ_{r=1}^{g+1} C(g+1,r) B_{g+1-r} B_r q^r) ∈ ℤ`.
    AmIntegrality,
    /// `xi_odd(q,g,s) = xi_ghj_polynomial(q,g,s)` for odd `g`.
    P20Equality,
}

impl IdentityName {
    pub fn as_str(self) -> &'static str {
        match self {
            IdentityName::P21 => "p21",
            IdentityName::P22 => "p22",
            IdentityName::Identity1 => "identity1",
            IdentityName::Identity2 => "identity2",
            IdentityName::AmIntegrality => "am_integrality",
            IdentityName::P20Equality => "p20_equality",
        }
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "p21" => Ok(IdentityName::P21),
            "p22" => Ok(IdentityName::P22),
            "identity1" => Ok(IdentityName::Identity1),
            "identity2" => Ok(IdentityName::Identity2),
            "am" | "am_integrality" => Ok(IdentityName::AmIntegrality),
            "p20" | "p20_equality" => Ok(IdentityName::P20Equality),
            other => Err(format!("unknown identity name: {other}")),
        }
    }
}

/// Parameter bounds for an identity sweep. Each identity uses the bounds it
/// needs; see [`check_identity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityRange {
    pub q_max: u32,
    pub g_max: u32,
    pub s_max: u32,
}

impl Default for IdentityRange {
    fn default() -> Self {
        IdentityRange {
            q_max: 8,
            g_max: 11,
            s_max: 5,
        }
    }
}

/// One failed comparison, stored exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub params: String,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Outcome of an identity sweep; passing means no counterexamples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub identity: IdentityName,
    pub parameter_range: String,
    pub counterexamples: Vec<Counterexample>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    fn record(&mut self, params: String, lhs: Rational, rhs: Rational) {
        if lhs != rhs {
            self.counterexamples
                .push(Counterexample { params, lhs, rhs });
        }
    }
}

/// Evaluates both sides of the named identity exactly over the given ranges,
/// exhaustively, and reports every counterexample.
pub fn check_identity(name: IdentityName, range: &IdentityRange) -> Result<IdentityReport> {
    let mut report = IdentityReport {
        identity: name,
        parameter_range: String::new(),
        counterexamples: Vec::new(),
    };
    match name {
        IdentityName::P21 => {
            report.parameter_range = format!("q = 1..={}", range.q_max);
            for q in 1..=range.q_max {
                let lhs = weighted_bernoulli_sum(1, q)?;
                let qr = rat(q as i64);
                let rhs = -(&qr * &qr * ratio(1, 12) - &qr * ratio(1, 4) + ratio(1, 6));
                report.record(format!("q={q}"), lhs, rhs);
            }
        }
        IdentityName::P22 => {
            report.parameter_range =
                format!("odd g = 3..={}, q = 2..={}", range.g_max, range.q_max);
            for g in (3..=range.g_max).step_by(2) {
                for q in 2..=range.q_max {
                    let lhs = weighted_bernoulli_sum(g, q)?;
                    let rhs = -rational_pow(&rat(q as i64), 1 - g as i64)
                        * (bernoulli_number(g + 1)
                            + bernoulli_convolution(g + 1, q, 1) / rat(g as i64 + 1));
                    report.record(format!("g={g} q={q}"), lhs, rhs);
                }
            }
        }
        IdentityName::Identity1 => {
            report.parameter_range = format!("g = 2..={}, q = 1..={}", range.g_max, range.q_max);
            for g in 2..=range.g_max {
                for q in 1..=range.q_max {
                    let lhs = bernoulli_convolution(2 * g, q, 0);
                    let rhs = rat(1 - 2 * g as i64) * bernoulli_number(2 * g)
                        - rat(2 * g as i64)
                            * rational_pow(&rat(q as i64), 2 * g as i64 - 2)
                            * weighted_bernoulli_sum(2 * g - 1, q)?;
                    report.record(format!("g={g} q={q}"), lhs, rhs);
                }
            }
        }
        IdentityName::Identity2 => {
            report.parameter_range = format!("g = 2..={}", range.g_max);
            for g in 2..=range.g_max {
                let lhs = even_index_convolution(g, 2, 0);
                let rhs = rat(1 - 2 * g as i64) * bernoulli_number(2 * g);
                report.record(format!("g={g}"), lhs, rhs);
            }
        }
        IdentityName::AmIntegrality => {
            report.parameter_range = format!(
                "odd g = 3..={}, q = 1..={}, i = 0..=q",
                range.g_max, range.q_max
            );
            for g in (3..=range.g_max).step_by(2) {
                for q in 1..=range.q_max {
                    let qg = rational_pow(&rat(q as i64), g as i64);
                    for i in 0..=q {
                        let value = &qg * bernoulli_polynomial(g, &ratio(i as i64, q as i64));
                        if !is_integer(&value) {
                            let near = Rational::from_integer(nearest_integer(&value));
                            report.record(format!("g={g} q={q} i={i}"), value, near);
                        }
                    }
                    let mut weighted = Rational::zero();
                    for i in 1..=weighted_sum_upper_index(q) {
                        weighted +=
                            rat(i as i64) * bernoulli_polynomial(g, &ratio(i as i64, q as i64));
                    }
                    let composite = rat(2) * rational_pow(&rat(q as i64), g as i64 - 1) * weighted
                        - (bernoulli_number(g + 1)
                            + bernoulli_convolution(g + 1, q, 1) / rat(g as i64 + 1));
                    if !is_integer(&composite) {
                        let near = Rational::from_integer(nearest_integer(&composite));
                        report.record(format!("g={g} q={q} composite"), composite, near);
                    }
                }
            }
        }
        IdentityName::P20Equality => {
            report.parameter_range = format!(
                "odd g = 1..={}, q = 1..={}, s = 0..={}",
                range.g_max, range.q_max, range.s_max
            );
            for g in (1..=range.g_max).step_by(2) {
                for q in 1..=range.q_max {
                    for s in 0..=range.s_max {
                        if g + s < 2 {
                            continue;
                        }
                        let lhs = xi_odd(q, g, s)?;
                        let rhs = xi_ghj_polynomial(q, g, s)?;
                        report.record(format!("g={g} q={q} s={s}"), lhs, rhs);
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_spot_values() {
        assert_eq!(chi_orbifold(1, 1).unwrap(), ratio(-1, 12));
        assert_eq!(chi_orbifold(3, 1).unwrap(), ratio(1, 120));
        assert_eq!(chi_orbifold(1, 2).unwrap(), ratio(1, 12));
    }

    #[test]
    fn chi_guards() {
        assert!(matches!(
            chi_orbifold(2, 1),
            Err(Error::OddGenusRequired { .. })
        ));
        assert!(matches!(
            chi_orbifold(1, 0),
            Err(Error::DomainTooSmall { .. })
        ));
    }

    #[test]
    fn xi_even_spot_values() {
        assert_eq!(xi_even(2, 2, 1).unwrap(), ratio(-1, 12));
        assert_eq!(xi_even(2, 4, 1).unwrap(), ratio(7, 120));
        for g in [2u32, 4, 6] {
            for s in 0..4 {
                assert!(xi_even(1, g, s).unwrap().is_zero(), "g={g} s={s}");
            }
        }
        assert!(matches!(
            xi_even(2, 3, 1),
            Err(Error::EvenGenusRequired { .. })
        ));
    }

    #[test]
    fn xi_odd_spot_values() {
        assert_eq!(xi_odd(2, 1, 1).unwrap(), ratio(-1, 12));
        assert_eq!(xi_odd(3, 1, 2).unwrap(), ratio(-1, 12));
        for g in [1u32, 3, 5] {
            for s in 1..4 {
                assert_eq!(
                    xi_odd(1, g, s).unwrap(),
                    chi_orbifold(g, s).unwrap(),
                    "g={g} s={s}"
                );
            }
        }
        assert!(matches!(
            xi_odd(2, 2, 1),
            Err(Error::OddGenusRequired { .. })
        ));
    }

    #[test]
    fn xi_polynomial_spot_values() {
        assert_eq!(xi_ghj_polynomial(3, 1, 2).unwrap(), ratio(-1, 12));
        assert_eq!(xi_ghj_polynomial(2, 3, 1).unwrap(), ratio(1, 120));
        assert_eq!(xi_ghj_polynomial(1, 1, 1).unwrap(), ratio(-1, 12));
    }

    #[test]
    fn xi_closed_dispatches_on_parity() {
        let even = xi_closed(2, 2, 1).unwrap();
        assert_eq!(even.value, ratio(-1, 12));
        assert_eq!(even.path, ComputePath::ClosedForm);
        assert_eq!(xi_closed(3, 1, 2).unwrap().value, ratio(-1, 12));
        assert!(xi_closed(1, 2, 1).unwrap().value.is_zero());
        assert!(matches!(
            xi_closed(2, 1, 0),
            Err(Error::DomainTooSmall { .. })
        ));
    }

    #[test]
    fn orthogonal_reduction_to_chi() {
        // at q = 2 the weighted sum is empty, so odd-g ξ collapses to χ
        for g in (1..=11u32).step_by(2) {
            for s in 0..=6u32 {
                if g + s < 2 {
                    continue;
                }
                assert_eq!(
                    xi_odd(2, g, s).unwrap(),
                    chi_orbifold(g, s).unwrap(),
                    "g={g} s={s}"
                );
            }
        }
    }

    #[test]
    fn identity_sweeps_pass() {
        let range = IdentityRange {
            q_max: 8,
            g_max: 9,
            s_max: 5,
        };
        for name in [
            IdentityName::P21,
            IdentityName::P22,
            IdentityName::Identity1,
            IdentityName::Identity2,
            IdentityName::AmIntegrality,
            IdentityName::P20Equality,
        ] {
            let report = check_identity(name, &range).unwrap();
            assert!(report.passed(), "{name}: {:?}", report.counterexamples);
        }
    }

    #[test]
    fn identity2_spot_value_includes_r0() {
        // -1/30 + 2/3 - 8/15 = 1/10 = (1-4) B_4
        assert_eq!(even_index_convolution(2, 2, 0), ratio(1, 10));
        assert_eq!(rat(-3) * bernoulli_number(4), ratio(1, 10));
    }

    #[test]
    fn identity2_literal_reading_fails() {
        // dropping the r = 0 term gives 2/15, not (1-2g) B_{2g} = 1/10
        let literal = even_index_convolution(2, 2, 1);
        assert_eq!(literal, ratio(2, 15));
        assert_ne!(literal, rat(-3) * bernoulli_number(4));
    }

    #[test]
    fn even_convolution_matches_full_for_g_at_least_two() {
        for g in 2..=8u32 {
            for q in 1..=6u32 {
                assert_eq!(
                    even_index_convolution(g, q, 0),
                    bernoulli_convolution(2 * g, q, 0),
                    "g={g} q={q}"
                );
            }
        }
    }

    #[test]
    fn am_integrality_spot_value() {
        // 27 · B_3(1/3) = 1
        let v = rational_pow(&rat(3), 3) * bernoulli_polynomial(3, &ratio(1, 3));
        assert_eq!(v, rat(1));
    }

    #[test]
    fn identity_names_parse() {
        assert_eq!("p21".parse::<IdentityName>().unwrap(), IdentityName::P21);
        assert_eq!(
            "am".parse::<IdentityName>().unwrap(),
            IdentityName::AmIntegrality
        );
        assert_eq!(
            "p20".parse::<IdentityName>().unwrap(),
            IdentityName::P20Equality
        );
        assert!("p99".parse::<IdentityName>().is_err());
    }
}
