//! Truncated formal power series in `t` whose coefficients are polynomials in
//! the formal matrix size `N`.
//!
//! Only powers `1 <= t_degree <= T` are ever stored: the coefficient
//! extraction that defines `ξ^s_g` reads `t^{g+s-1}` with `g+s-1 >= 1`, so
//! constant-in-`t` terms (which would drag in transcendental constants like
//! `log 2π`) are excluded by construction. Zero coefficients are never stored.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::bernoulli::bernoulli_number;
use crate::rational::{rat, rational_pow, Rational};
use crate::{Error, Result};

/// Default truncation order: covers every extraction with `g+s-1 <= 12`.
pub const DEFAULT_TRUNCATION: u32 = 12;

/// A polynomial in the formal variable `N`, used as a series coefficient and
/// as the weight of a logarithm term.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NPoly {
    coeffs: BTreeMap<u32, Rational>,
}

impl NPoly {
    pub fn zero() -> Self {
        NPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = NPoly::default();
        p.add_term(0, c);
        p
    }

    /// The monomial `N`.
    pub fn n() -> Self {
        let mut p = NPoly::default();
        p.add_term(1, rat(1));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, degree: u32) -> Rational {
        self.coeffs.get(&degree).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, degree: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(degree).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&degree);
        }
    }

    pub fn add_assign(&mut self, other: &NPoly) {
        for (&d, c) in &other.coeffs {
            self.add_term(d, c.clone());
        }
    }

    pub fn scale(&self, c: &Rational) -> NPoly {
        if c.is_zero() {
            return NPoly::zero();
        }
        NPoly {
            coeffs: self.coeffs.iter().map(|(&d, v)| (d, v * c)).collect(),
        }
    }

    /// Multiplication by `N` (degree shift).
    pub fn times_n(&self) -> NPoly {
        NPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&d, v)| (d + 1, v.clone()))
                .collect(),
        }
    }

    /// Substitutes `N -> N/q`: the coefficient of `N^d` is divided by `q^d`.
    pub fn scale_argument(&self, q: u32) -> NPoly {
        NPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&d, v)| (d, v / rational_pow(&rat(q as i64), d as i64)))
                .collect(),
        }
    }

    pub fn eval(&self, n: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&d, c) in &self.coeffs {
            acc += c * rational_pow(n, d as i64);
        }
        acc
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(&d, c)| (d, c))
    }
}

/// Series in `t` truncated at order `T`, coefficients polynomial in `N`.
/// Immutable once built; all operations produce fresh values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries {
    trunc: u32,
    terms: BTreeMap<(u32, u32), Rational>, // (t_degree, n_degree) -> coefficient
}

impl BivariateSeries {
    pub fn zero(trunc: u32) -> Self {
        assert!(trunc >= 1, "truncation order must be positive");
        BivariateSeries {
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn truncation_order(&self) -> u32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c · N^{n_degree} t^{t_degree}`, silently dropping powers of `t`
    /// beyond the truncation order. `t_degree = 0` is outside the
    /// representable range and is rejected.
    pub fn add_term(&mut self, t_degree: u32, n_degree: u32, c: Rational) {
        assert!(t_degree >= 1, "constant-in-t terms are not representable");
        if t_degree > self.trunc || c.is_zero() {
            return;
        }
        let entry = self.terms.entry((t_degree, n_degree)).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(t_degree, n_degree));
        }
    }

    /// Adds `poly(N) · t^{t_degree}`.
    pub fn add_npoly_at(&mut self, t_degree: u32, poly: &NPoly) {
        for (d, c) in poly.iter() {
            self.add_term(t_degree, d, c.clone());
        }
    }

    /// Stored coefficient at `(t_degree, n_degree)`, or zero when absent.
    /// Asking beyond the truncation order signals insufficient truncation.
    ///
    /// This is a raw lookup: the `s!(-1)^s` normalization of ξ belongs to the
    /// caller.
    pub fn extract_coefficient(&self, n_degree: u32, t_degree: u32) -> Result<Rational> {
        if t_degree > self.trunc {
            return Err(Error::TruncationInsufficient {
                order: self.trunc,
                needed: t_degree,
            });
        }
        Ok(self
            .terms
            .get(&(t_degree, n_degree))
            .cloned()
            .unwrap_or_default())
    }

    /// Coefficient of `t^{t_degree}` as a polynomial in `N`.
    pub fn t_coefficient(&self, t_degree: u32) -> NPoly {
        let mut p = NPoly::zero();
        for (&(td, nd), c) in &self.terms {
            if td == t_degree {
                p.add_term(nd, c.clone());
            }
        }
        p
    }

    fn check_trunc(&self, other: &Self) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch(self.trunc, other.trunc));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_trunc(other)?;
        let mut out = self.clone();
        for (&(td, nd), c) in &other.terms {
            out.add_term(td, nd, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        BivariateSeries {
            trunc: self.trunc,
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return BivariateSeries::zero(self.trunc);
        }
        BivariateSeries {
            trunc: self.trunc,
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    /// Truncated product: all terms with `t_degree > T` are dropped.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_trunc(other)?;
        let mut out = BivariateSeries::zero(self.trunc);
        for (&(ta, na), ca) in &self.terms {
            if ta >= self.trunc {
                continue; // ta + tb > T for every tb >= 1
            }
            for (&(tb, nb), cb) in &other.terms {
                if ta + tb > self.trunc {
                    break; // keys sorted by t_degree first
                }
                out.add_term(ta + tb, na + nb, ca * cb);
            }
        }
        Ok(out)
    }

    /// Substitutes a concrete integer for `N`.
    pub fn specialize(&self, n: u32) -> UnivariateSeries {
        let nr = rat(n as i64);
        let mut out = UnivariateSeries::zero(self.trunc);
        for (&(td, nd), c) in &self.terms {
            out.add_term(td, c * rational_pow(&nr, nd as i64));
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), &Rational)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }
}

/// Series in `t` alone (the concrete-`N` specialization).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariateSeries {
    trunc: u32,
    coeffs: BTreeMap<u32, Rational>,
}

impl UnivariateSeries {
    pub fn zero(trunc: u32) -> Self {
        assert!(trunc >= 1, "truncation order must be positive");
        UnivariateSeries {
            trunc,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn truncation_order(&self) -> u32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, t_degree: u32) -> Rational {
        self.coeffs.get(&t_degree).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, t_degree: u32, c: Rational) {
        assert!(t_degree >= 1, "constant-in-t terms are not representable");
        if t_degree > self.trunc || c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(t_degree).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&t_degree);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch(self.trunc, other.trunc));
        }
        let mut out = self.clone();
        for (&td, c) in &other.coeffs {
            out.add_term(td, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return UnivariateSeries::zero(self.trunc);
        }
        UnivariateSeries {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    /// Truncated product of two series with no constant term.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch(self.trunc, other.trunc));
        }
        let mut out = UnivariateSeries::zero(self.trunc);
        for (&ta, ca) in &self.coeffs {
            for (&tb, cb) in &other.coeffs {
                if ta + tb > self.trunc {
                    break;
                }
                out.add_term(ta + tb, ca * cb);
            }
        }
        Ok(out)
    }

    /// `multiplier · log(1 - p t) = multiplier · sum_{m=1}^{T} -(p^m/m) t^m`
    /// added in place, for a concrete positive integer `p`.
    pub fn add_scaled_log_one_minus(&mut self, p: u64, multiplier: &Rational) -> Result<()> {
        if p < 1 {
            return Err(Error::InvalidLogArgument(p as i64));
        }
        if multiplier.is_zero() {
            return Ok(());
        }
        let p_big = BigInt::from(p);
        let mut p_pow = BigInt::from(1u32);
        for m in 1..=self.trunc {
            p_pow *= &p_big;
            let c = -Rational::new(p_pow.clone(), BigInt::from(m)) * multiplier;
            self.add_term(m, c);
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }
}

/// `weight(N) · log(1 - p t)` expanded to order `T`:
/// `weight · sum_{m=1}^{T} -(p^m/m) t^m`. Requires `p >= 1`.
pub fn log_one_minus(p_coeff: u32, weight: &NPoly, trunc: u32) -> Result<BivariateSeries> {
    if p_coeff < 1 {
        return Err(Error::InvalidLogArgument(p_coeff as i64));
    }
    let mut out = BivariateSeries::zero(trunc);
    let p_big = BigInt::from(p_coeff);
    let mut p_pow = BigInt::from(1u32);
    for m in 1..=trunc {
        p_pow *= &p_big;
        let c = -Rational::new(p_pow.clone(), BigInt::from(m));
        out.add_npoly_at(m, &weight.scale(&c));
    }
    Ok(out)
}

/// The polynomial-coefficient content of the partition-function prefactor
/// `N · log(√(2πt) / (Γ(1/t) (et)^{1/t}))`: the Stirling expansion of
/// `log Γ(1/t)` cancels every transcendental piece and leaves
///
/// `N · sum_{k>=1, 2k-1<=T} ( -B_{2k} / (2k(2k-1)) ) t^{2k-1}`,
///
/// odd powers of `t` only, all at `N`-degree 1.
pub fn penner_prefactor_series(trunc: u32) -> BivariateSeries {
    let mut out = BivariateSeries::zero(trunc);
    let mut k = 1u32;
    while 2 * k - 1 <= trunc {
        let c = -bernoulli_number(2 * k) / rat(2 * k as i64 * (2 * k as i64 - 1));
        out.add_term(2 * k - 1, 1, c);
        k += 1;
    }
    out
}
