//! Double-scaling-limit free energies `F_q(μ)` with `μ = N(1-t)` held fixed.
//!
//! The limit is a trans-series in `μ`: a handful of `log μ`-carrying terms
//! plus one exact rational coefficient per genus. Only those coefficients are
//! computed; `log μ` and `μ² log μ` are carried as tagged term kinds, never
//! expanded.

use num_traits::Zero;

use crate::bernoulli::{bernoulli_number, factorial, weighted_bernoulli_sum};
use crate::rational::{rat, ratio, rational_pow, Rational};
use crate::series::UnivariateSeries;
use crate::{Error, Result};

/// Parity sector of the genus expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    EvenGenus,
    OddGenus,
}

impl Sector {
    pub fn as_str(self) -> &'static str {
        match self {
            Sector::EvenGenus => "even",
            Sector::OddGenus => "odd",
        }
    }
}

impl std::fmt::Display for Sector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One term of `F_q(μ)`: `coefficient · μ^{mu_power} · (log μ)^{log_mu_power}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuumTerm {
    pub mu_power: i32,
    /// 0 or 1; `log μ` factors never appear squared.
    pub log_mu_power: u8,
    pub coefficient: Rational,
}

impl ContinuumTerm {
    /// Whether this is the `μ² log μ` sphere term of the odd sector.
    pub fn mu_squared_log(&self) -> bool {
        self.log_mu_power == 1 && self.mu_power == 2
    }
}

/// A continuum expansion up to a genus bound, terms sorted by descending
/// power of `μ`, at most one term per `(mu_power, log_mu_power)`, zero
/// coefficients dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuumExpansion {
    pub q: u32,
    pub sector: Sector,
    pub terms: Vec<ContinuumTerm>,
}

impl ContinuumExpansion {
    /// The coefficient at `(mu_power, log_mu_power)`, zero when absent.
    pub fn coefficient(&self, mu_power: i32, log_mu_power: u8) -> Rational {
        self.terms
            .iter()
            .find(|t| t.mu_power == mu_power && t.log_mu_power == log_mu_power)
            .map(|t| t.coefficient.clone())
            .unwrap_or_default()
    }

    fn push(&mut self, mu_power: i32, log_mu_power: u8, coefficient: Rational) {
        if !coefficient.is_zero() {
            self.terms.push(ContinuumTerm {
                mu_power,
                log_mu_power,
                coefficient,
            });
        }
    }
}

/// Even-genus sector:
/// `F_q(μ) = (μ log μ)(1/q - 1)/2 + Σ_{g>=1} μ^{1-2g} (q^{2g-1}-1) B_{2g} / (2(2g)(2g-1))`.
///
/// At `q = 1` every coefficient vanishes and the expansion is empty.
pub fn even_sector_expansion(q: u32, genus_max: u32) -> Result<ContinuumExpansion> {
    if q < 1 {
        return Err(Error::QTooSmall { q, min: 1 });
    }
    if genus_max < 1 {
        return Err(Error::GenusMaxTooSmall { genus_max, min: 1 });
    }
    let mut out = ContinuumExpansion {
        q,
        sector: Sector::EvenGenus,
        terms: Vec::new(),
    };
    let qr = rat(q as i64);
    out.push(1, 1, (qr.recip() - rat(1)) / rat(2));
    for g in 1..=genus_max {
        let two_g = 2 * g as i64;
        let coeff = (rational_pow(&qr, two_g - 1) - rat(1)) * bernoulli_number(2 * g)
            / rat(2 * two_g * (two_g - 1));
        out.push(1 - 2 * g as i32, 0, coeff);
    }
    Ok(out)
}

/// Penner and deformation contributions to the odd-sector `μ^{2-2g}`
/// coefficient at genus `g >= 2`:
/// `B_{2g}/(q(2g-2)(2g))` and `q^{2g-3} Σ_i (q-2i) B_{2g-1}(i/q) / ((2g-1)(2g-2))`.
pub fn odd_sector_genus_parts(q: u32, g: u32) -> Result<(Rational, Rational)> {
    if q < 1 {
        return Err(Error::QTooSmall { q, min: 1 });
    }
    if g < 2 {
        return Err(Error::GenusMaxTooSmall {
            genus_max: g,
            min: 2,
        });
    }
    let two_g = 2 * g as i64;
    let penner = bernoulli_number(2 * g) / (rat(q as i64) * rat((two_g - 2) * two_g));
    let deformation = rational_pow(&rat(q as i64), two_g - 3)
        * weighted_bernoulli_sum(2 * g - 1, q)?
        / rat((two_g - 1) * (two_g - 2));
    Ok((penner, deformation))
}

/// Odd-genus sector:
/// `F_q(μ) = (μ² log μ)/(2q) + (log μ)[-1/(12q) + (1/q)(q²/12 - q/4 + 1/6)]`
/// plus, for each genus `g >= 2`, the merged `μ^{2-2g}` coefficient of
/// [`odd_sector_genus_parts`].
///
/// The two `log μ` addends are stored combined into a single coefficient.
pub fn odd_sector_expansion(q: u32, genus_max: u32) -> Result<ContinuumExpansion> {
    if q < 1 {
        return Err(Error::QTooSmall { q, min: 1 });
    }
    if genus_max < 2 {
        return Err(Error::GenusMaxTooSmall { genus_max, min: 2 });
    }
    let mut out = ContinuumExpansion {
        q,
        sector: Sector::OddGenus,
        terms: Vec::new(),
    };
    let qr = rat(q as i64);
    out.push(2, 1, (rat(2) * &qr).recip());
    let bracket = &qr * &qr * ratio(1, 12) - &qr * ratio(1, 4) + ratio(1, 6);
    out.push(0, 1, -ratio(1, 12) / &qr + bracket / &qr);
    for g in 2..=genus_max {
        let (penner, deformation) = odd_sector_genus_parts(q, g)?;
        out.push(2 - 2 * g as i32, 0, penner + deformation);
    }
    Ok(out)
}

/// Outcome of [`resummation_check`]; `first_mismatch` names the failing part
/// and carries the first differing `t`-coefficient of both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResummationReport {
    pub q: u32,
    pub g: u32,
    pub order: u32,
    pub pass: bool,
    pub first_mismatch: Option<(String, u32, Rational, Rational)>,
}

/// `Σ_{m=1}^{order} t^m`, the expansion of `t/(1-t)`.
fn geometric_tail(order: u32) -> UnivariateSeries {
    let mut s = UnivariateSeries::zero(order);
    for m in 1..=order {
        s.add_term(m, rat(1));
    }
    s
}

fn pow_series(base: &UnivariateSeries, exp: u32) -> UnivariateSeries {
    let mut acc = base.clone();
    for _ in 1..exp {
        acc = acc.mul(base).expect("matching truncation");
    }
    acc
}

/// Verifies that summing the puncture series in closed form is exact:
///
/// - even sector, genus `g`:
///   `Σ_{s=0}^{s_retained} ((2g+s-2)!/s!) t^{2g-1+s}` must agree with the
///   Taylor expansion of `(2g-2)! (t/(1-t))^{2g-1}` through `t^order`
///   (the expansion computed by truncated products of the geometric tail);
/// - odd sector, genus `g >= 2`: the same with `2g-2` and `(2g-3)!`;
/// - odd sector, genus 1: the `log(1-t)` coefficient must equal
///   `q/12 - 1/4 + 1/(6q)`, i.e. `-(1/q) Σ_i (q-2i) B_1(i/q)`.
pub fn resummation_check(q: u32, g: u32, s_retained: u32, order: u32) -> Result<ResummationReport> {
    if q < 1 {
        return Err(Error::QTooSmall { q, min: 1 });
    }
    if g < 1 || order < 2 * g - 1 {
        return Err(Error::TruncationInsufficient {
            order,
            needed: 2 * g.max(1) - 1,
        });
    }
    let mut report = ResummationReport {
        q,
        g,
        order,
        pass: true,
        first_mismatch: None,
    };
    let fail =
        |report: &mut ResummationReport, label: &str, k: u32, lhs: Rational, rhs: Rational| {
            if report.pass {
                report.pass = false;
                report.first_mismatch = Some((label.to_string(), k, lhs, rhs));
            }
        };

    let base = geometric_tail(order);

    // even sector at genus g: power 2g-1
    let closed = pow_series(&base, 2 * g - 1).scale(&Rational::from_integer(factorial(2 * g - 2)));
    for s in 0..=s_retained {
        let k = 2 * g - 1 + s;
        if k > order {
            break;
        }
        let lhs =
            Rational::from_integer(factorial(2 * g + s - 2)) / Rational::from_integer(factorial(s));
        let rhs = closed.coeff(k);
        if lhs != rhs {
            fail(&mut report, "even_genus", k, lhs, rhs);
        }
    }

    // odd sector at genus g >= 2: power 2g-2
    if g >= 2 {
        let closed =
            pow_series(&base, 2 * g - 2).scale(&Rational::from_integer(factorial(2 * g - 3)));
        for s in 0..=s_retained {
            let k = 2 * g - 2 + s;
            if k > order {
                break;
            }
            let lhs = Rational::from_integer(factorial(2 * g + s - 3))
                / Rational::from_integer(factorial(s));
            let rhs = closed.coeff(k);
            if lhs != rhs {
                fail(&mut report, "odd_genus", k, lhs, rhs);
            }
        }
    }

    // odd sector genus-1 piece: coefficient of log(1-t)
    let qr = rat(q as i64);
    let lhs = -weighted_bernoulli_sum(1, q)? / &qr;
    let rhs = &qr * ratio(1, 12) - ratio(1, 4) + (rat(6) * &qr).recip();
    if lhs != rhs {
        fail(&mut report, "odd_log_term", 0, lhs, rhs);
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::xi_even;

    #[test]
    fn even_sector_spot_values() {
        let exp = even_sector_expansion(2, 3).unwrap();
        assert_eq!(exp.coefficient(-1, 0), ratio(1, 24));
        assert_eq!(exp.coefficient(1, 1), ratio(-1, 4));

        let trivial = even_sector_expansion(1, 5).unwrap();
        assert!(trivial.terms.is_empty());
    }

    #[test]
    fn even_sector_terms_sorted_descending() {
        let exp = even_sector_expansion(3, 6).unwrap();
        for w in exp.terms.windows(2) {
            assert!(w[0].mu_power > w[1].mu_power);
        }
    }

    #[test]
    fn odd_sector_spot_values() {
        // q = 2: deformation parts vanish, log μ coefficient is
        // -1/24 + (1/2)(1/3 - 1/2 + 1/6) = -1/24
        let exp = odd_sector_expansion(2, 4).unwrap();
        assert_eq!(exp.coefficient(0, 1), ratio(-1, 24));
        assert_eq!(exp.coefficient(2, 1), ratio(1, 4));
        assert!(exp.terms[0].mu_squared_log());

        // q = 1 reduces to the pure Penner value -1/12
        let exp = odd_sector_expansion(1, 4).unwrap();
        assert_eq!(exp.coefficient(0, 1), ratio(-1, 12));

        // genus-2 Penner part is -1/(240 q)
        for q in 1..=5u32 {
            let (penner, _) = odd_sector_genus_parts(q, 2).unwrap();
            assert_eq!(penner, ratio(-1, 240 * q as i64));
        }
    }

    #[test]
    fn q2_penner_parts_are_half_of_q1() {
        for g in 2..=6u32 {
            let (p1, d1) = odd_sector_genus_parts(1, g).unwrap();
            let (p2, d2) = odd_sector_genus_parts(2, g).unwrap();
            assert!(d1.is_zero());
            assert!(d2.is_zero());
            assert_eq!(p2 * rat(2), p1, "g={g}");
        }
    }

    #[test]
    fn deformation_corrections_pattern() {
        // all genera receive corrections for q >= 3 and none for q <= 2
        for g in 2..=5u32 {
            for q in 1..=2u32 {
                let (_, d) = odd_sector_genus_parts(q, g).unwrap();
                assert!(d.is_zero(), "q={q} g={g}");
            }
            for q in 3..=6u32 {
                let (_, d) = odd_sector_genus_parts(q, g).unwrap();
                assert!(!d.is_zero(), "q={q} g={g}");
            }
        }
    }

    #[test]
    fn even_sector_consistent_with_xi() {
        // the s-dependence of xi_even must factor as (2g+s-2)!/s!, and the
        // s-independent residue must reproduce the continuum coefficient
        for q in 1..=6u32 {
            let exp = even_sector_expansion(q, 4).unwrap();
            for g in 1..=4u32 {
                // the free-energy row is (1/q)(-1)^s ξ/s! · N^{1-2g} t^{2g-1+s},
                // so ξ(-1)^s/(2g+s-2)! must not depend on s
                let mut residue: Option<Rational> = None;
                for s in 1..=4u32 {
                    let sign = if s % 2 == 0 { 1 } else { -1 };
                    let r = xi_even(q, 2 * g, s).unwrap() * rat(sign)
                        / Rational::from_integer(factorial(2 * g + s - 2));
                    match &residue {
                        None => residue = Some(r),
                        Some(prev) => assert_eq!(prev, &r, "q={q} g={g} s={s}"),
                    }
                }
                let residue = residue.unwrap();
                let expected =
                    residue * Rational::from_integer(factorial(2 * g - 2)) / rat(q as i64);
                assert_eq!(
                    exp.coefficient(1 - 2 * g as i32, 0),
                    expected,
                    "q={q} g={g}"
                );
            }
        }
    }

    #[test]
    fn resummation_small_cases() {
        assert!(resummation_check(2, 1, 4, 5).unwrap().pass);
        assert!(resummation_check(2, 2, 4, 6).unwrap().pass);
        assert!(resummation_check(3, 3, 3, 8).unwrap().pass);
    }

    #[test]
    fn odd_log_coefficient_at_q3() {
        // 3/12 - 1/4 + 1/18 = 1/18
        let qr = rat(3);
        let rhs = &qr * ratio(1, 12) - ratio(1, 4) + (rat(6) * &qr).recip();
        assert_eq!(rhs, ratio(1, 18));
        assert_eq!(-weighted_bernoulli_sum(1, 3).unwrap() / qr, ratio(1, 18));
    }

    #[test]
    fn resummation_guards() {
        assert!(matches!(
            resummation_check(2, 3, 4, 3),
            Err(Error::TruncationInsufficient { .. })
        ));
        assert!(matches!(
            even_sector_expansion(0, 3),
            Err(Error::QTooSmall { .. })
        ));
        assert!(matches!(
            odd_sector_expansion(2, 1),
            Err(Error::GenusMaxTooSmall { .. })
        ));
    }
}
