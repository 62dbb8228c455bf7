//! The deformed-Penner partition products and free energy.
//!
//! The partition function at deformation `γ = 1/q` has an exact single-product
//! form; `q·log W_{1/q}(N,t)` splits into the Penner free energy (prefactor
//! plus `Σ_p (N-p) log(1-pt)`) and a deformation part rewritten over
//! congruence classes mod `q`. This module builds that free energy two
//! independent ways:
//!
//! - **formal**: the finite sums over `p` are converted to polynomials in `N`
//!   by the Faulhaber power-sum polynomials, so the series coefficients are
//!   polynomials in the formal matrix size;
//! - **concrete**: for an actual matrix size `N` (a multiple of `q`) the
//!   product is expanded term by term with no power-sum algebra at all.
//!
//! The concrete route is the trusted oracle for the formal one, and the
//! parametrized Euler characteristic is read off the formal series as
//! `ξ^s_g(1/q) = s!(-1)^s [N^s t^{g+s-1}] q·log W`.

use num_traits::Zero;

use crate::bernoulli::{binomial, factorial, power_sum_polynomial, PowerSumPolynomial};
use crate::poly::TPoly;
use crate::rational::{rat, ratio, rational_pow, Rational};
use crate::series::{penner_prefactor_series, BivariateSeries, NPoly, UnivariateSeries};
use crate::{Error, Result};

/// Parameters of one model instance: deformation `q >= 1` (so `γ = 1/q`),
/// series truncation order, and optionally a concrete matrix size, which must
/// be a positive multiple of `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelParams {
    pub q: u32,
    pub trunc: u32,
    pub n_concrete: Option<u32>,
}

impl ModelParams {
    pub fn new(q: u32, trunc: u32) -> Result<Self> {
        if q < 1 {
            return Err(Error::QTooSmall { q, min: 1 });
        }
        if trunc < 1 {
            return Err(Error::TruncationInsufficient {
                order: trunc,
                needed: 1,
            });
        }
        Ok(ModelParams {
            q,
            trunc,
            n_concrete: None,
        })
    }

    pub fn with_concrete_n(mut self, n: u32) -> Result<Self> {
        if n == 0 || n % self.q != 0 {
            return Err(Error::NNotMultipleOfQ { n, q: self.q });
        }
        self.n_concrete = Some(n);
        Ok(self)
    }
}

/// Which route produced a ξ value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComputePath {
    SeriesExtraction,
    ClosedForm,
}

impl ComputePath {
    pub fn as_str(self) -> &'static str {
        match self {
            ComputePath::SeriesExtraction => "series_extraction",
            ComputePath::ClosedForm => "closed_form",
        }
    }
}

impl std::fmt::Display for ComputePath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One computed value `ξ^s_g(1/q)` with its computation path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiRecord {
    pub g: u32,
    pub s: u32,
    pub q: u32,
    pub value: Rational,
    pub path: ComputePath,
}

/// Both sides of the product identity behind the single-product partition
/// function, fully expanded with exact coefficients (`N = qK`):
///
/// - left: `Π_{l=1}^{K} Π_{j=1}^{ql} (1-jt) / Π_{j=1}^{K} (1-qjt)`, the
///   division performed by exact polynomial long division;
/// - right: `Π_{j=0}^{N/q-1} Π_{p=1}^{N-(qj+1)} (1-pt)`.
///
/// Stated for the deformed cases `q >= 2`; `q = 1` is the plain Penner branch
/// and is rejected here.
pub fn product_identity_sides(q: u32, k: u32) -> Result<(TPoly, TPoly)> {
    if q < 2 {
        return Err(Error::QTooSmall { q, min: 2 });
    }
    let n = q * k;

    let mut numerator = TPoly::one();
    for l in 1..=k {
        for j in 1..=q * l {
            numerator.mul_one_minus(j as i64);
        }
    }
    let mut denominator = TPoly::one();
    for j in 1..=k {
        denominator.mul_one_minus((q * j) as i64);
    }
    let lhs = numerator.div_exact(&denominator)?;

    let mut rhs = TPoly::one();
    for j in 0..k {
        for p in 1..=n - (q * j + 1) {
            rhs.mul_one_minus(p as i64);
        }
    }
    Ok((lhs, rhs))
}

/// Result of sweeping [`product_identity_sides`] over a parameter grid.
#[derive(Debug, Clone, Default)]
pub struct ProductIdentityReport {
    /// `(q, K, t_degree, lhs coefficient, rhs coefficient)` for each mismatch.
    pub counterexamples: Vec<(u32, u32, usize, Rational, Rational)>,
}

impl ProductIdentityReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Checks the product identity for all `2 <= q <= q_max`, `1 <= K <= k_max`.
pub fn verify_product_identity(q_max: u32, k_max: u32) -> Result<ProductIdentityReport> {
    let mut report = ProductIdentityReport::default();
    for q in 2..=q_max {
        for k in 1..=k_max {
            let (lhs, rhs) = product_identity_sides(q, k)?;
            if lhs != rhs {
                let top = lhs.degree().unwrap_or(0).max(rhs.degree().unwrap_or(0));
                for d in 0..=top {
                    let (a, b) = (lhs.coeff(d), rhs.coeff(d));
                    if a != b {
                        report.counterexamples.push((q, k, d, a, b));
                        break;
                    }
                }
            }
        }
    }
    Ok(report)
}

fn npoly_of(ps: &PowerSumPolynomial) -> NPoly {
    let mut p = NPoly::zero();
    for (r, c) in ps.iter() {
        p.add_term(r, c.clone());
    }
    p
}

/// Congruence-class weights `w_j = Σ_{c=2}^{q-1} (c-1) ((q-c)/q)^j` for
/// `j = 0..=max_j`; all zero for `q <= 2`.
fn congruence_class_weights(q: u32, max_j: u32) -> Vec<Rational> {
    let mut weights = vec![Rational::zero(); max_j as usize + 1];
    for c in 2..q {
        let base = ratio(q as i64 - c as i64, q as i64);
        let coeff = rat(c as i64 - 1);
        let mut pow = rat(1);
        for w in weights.iter_mut() {
            *w += &coeff * &pow;
            pow *= &base;
        }
    }
    weights
}

/// The free energy `q·log W_{1/q}(N,t)` as a series in `t` with
/// polynomial-in-`N` coefficients:
///
/// - the prefactor series (odd powers of `t`, `N`-degree 1);
/// - the Penner product block `Σ_{p=1}^{N} (N-p) log(1-pt)`, Faulhaber-expanded
///   to `-(t^m/m)[N·PS_m(N) - PS_{m+1}(N)]`;
/// - for `q >= 2`, the congruent-class difference
///   `Σ_{p=1}^{N} log(1-pt) - Σ_{p=1}^{N/q} log(1-qpt)`;
/// - for `q >= 3`, the class sum
///   `-(t^m/m) Σ_{j=0}^{m} (-1)^j C(m,j) q^m w_j PS_{m-j}(N/q)` with the
///   weights `w_j` of [`congruence_class_weights`].
pub fn free_energy_formal(params: &ModelParams) -> BivariateSeries {
    let trunc = params.trunc;
    let q = params.q;
    let ps: Vec<NPoly> = (0..=trunc + 1)
        .map(|k| npoly_of(&power_sum_polynomial(k)))
        .collect();
    let ps_scaled: Vec<NPoly> = ps.iter().map(|p| p.scale_argument(q)).collect();
    let weights = congruence_class_weights(q, trunc);

    let mut out = penner_prefactor_series(trunc);
    for m in 1..=trunc {
        let i = m as usize;
        let minus_inv_m = ratio(-1, m as i64);

        let mut penner = ps[i].times_n();
        penner.add_assign(&ps[i + 1].scale(&rat(-1)));
        out.add_npoly_at(m, &penner.scale(&minus_inv_m));

        if q >= 2 {
            let q_pow_m = rational_pow(&rat(q as i64), m as i64);
            let mut diff = ps[i].clone();
            diff.add_assign(&ps_scaled[i].scale(&-q_pow_m.clone()));
            out.add_npoly_at(m, &diff.scale(&minus_inv_m));

            if q >= 3 {
                let mut class_sum = NPoly::zero();
                for j in 0..=m {
                    let w = &weights[j as usize];
                    if w.is_zero() {
                        continue;
                    }
                    let sign = if j % 2 == 0 { rat(1) } else { rat(-1) };
                    let factor = sign * Rational::from_integer(binomial(m, j)) * &q_pow_m * w;
                    class_sum.add_assign(&ps_scaled[(m - j) as usize].scale(&factor));
                }
                out.add_npoly_at(m, &class_sum.scale(&minus_inv_m));
            }
        }
    }
    out
}

/// The free energy for a concrete matrix size, expanded directly from the
/// finite products with no power-sum algebra: every class log
/// `log(1 - (qp - (q-j)) t)` enters with multiplicity `N - (qp - (q-j))` plus
/// the extra class weight `j` (for `j < q`), matching the `q·log W`
/// normalization of [`free_energy_formal`]. The `N·(prefactor)` term is
/// excluded.
pub fn free_energy_concrete(params: &ModelParams) -> Result<UnivariateSeries> {
    let n = params.n_concrete.ok_or(Error::MissingConcreteN)?;
    let q = params.q;
    let mut out = UnivariateSeries::zero(params.trunc);
    for p in 1..=n / q {
        for j in 1..=q {
            let a = (q * p - (q - j)) as i64;
            let extra = if j < q { j as i64 } else { 0 };
            let multiplicity = rat(n as i64 - a + extra);
            out.add_scaled_log_one_minus(a as u64, &multiplicity)?;
        }
    }
    Ok(out)
}

/// Reads `ξ^s_g(1/q) = s!(-1)^s [N^s t^{g+s-1}]` off an already-built free
/// energy series.
///
/// Requires `s >= 1`: the free energy vanishes identically at `N = 0`, so the
/// `N^0` coefficient carries no ξ content and only the closed forms extend to
/// `s = 0`.
pub fn xi_from_series(series: &BivariateSeries, q: u32, g: u32, s: u32) -> Result<XiRecord> {
    if g < 1 || g + s < 2 {
        return Err(Error::DomainTooSmall {
            op: "xi_by_extraction",
            g,
            s,
        });
    }
    if s < 1 {
        return Err(Error::ExtractionRequiresPunctures);
    }
    let m = g + s - 1;
    let raw = series.extract_coefficient(s, m)?;
    let sign = if s % 2 == 0 { 1 } else { -1 };
    let value = raw * Rational::from_integer(factorial(s)) * rat(sign);
    Ok(XiRecord {
        g,
        s,
        q,
        value,
        path: ComputePath::SeriesExtraction,
    })
}

/// Builds the formal free energy at truncation `trunc` and extracts
/// `ξ^s_g(1/q)`. For sweeps over many `(g, s)` build the series once and use
/// [`xi_from_series`].
pub fn xi_by_extraction(q: u32, g: u32, s: u32, trunc: u32) -> Result<XiRecord> {
    let params = ModelParams::new(q, trunc)?;
    if g >= 1 && g + s >= 2 && g + s - 1 > trunc {
        return Err(Error::TruncationInsufficient {
            order: trunc,
            needed: g + s - 1,
        });
    }
    xi_from_series(&free_energy_formal(&params), q, g, s)
}
