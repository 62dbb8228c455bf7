//! Exact arithmetic for the Goulden-Harer-Jackson matrix model.
//!
//! The crate computes the parametrized Euler characteristic `ξ^s_g(1/q)` two
//! independent ways and checks that they agree:
//!
//! - **series extraction**: build the free energy `q·log W_{1/q}(N,t)` as a
//!   truncated formal power series in `t` with polynomial-in-`N` coefficients
//!   and read off `s!(-1)^s [N^s t^{g+s-1}]`;
//! - **closed forms**: Bernoulli-number/-polynomial expressions, one per
//!   parity of `g`.
//!
//! Everything is exact: the only scalar is an arbitrary-precision rational.
//! On top of the two ξ routes the crate verifies the product identity behind
//! the single-product partition function, a family of Bernoulli convolution
//! identities, Almkvist-Meurman integrality, and the double-scaling-limit
//! (continuum) free energies of both parity sectors.

// parity tests on genus read better as `g % 2` than `g.is_multiple_of(2)`
#![allow(clippy::manual_is_multiple_of)]

pub mod bernoulli;
pub mod closed_forms;
pub mod continuum;
pub mod model;
pub mod poly;
pub mod rational;
pub mod series;

pub use bernoulli::{
    bernoulli_number, bernoulli_polynomial, binomial, factorial, power_sum_polynomial,
    weighted_bernoulli_sum, BernoulliTable, PowerSumPolynomial,
};
pub use closed_forms::{
    check_identity, chi_orbifold, xi_closed, xi_even, xi_ghj_polynomial, xi_odd, Counterexample,
    IdentityName, IdentityRange, IdentityReport,
};
pub use continuum::{
    even_sector_expansion, odd_sector_expansion, resummation_check, ContinuumExpansion,
    ContinuumTerm, ResummationReport, Sector,
};
pub use model::{
    free_energy_concrete, free_energy_formal, product_identity_sides, verify_product_identity,
    xi_by_extraction, xi_from_series, ComputePath, ModelParams, ProductIdentityReport, XiRecord,
};
pub use poly::TPoly;
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
pub use series::{
    log_one_minus, penner_prefactor_series, BivariateSeries, NPoly, UnivariateSeries,
};

/// Errors shared by every module. The CLI maps all of these to exit code 3
/// (precondition violation); identity counterexamples are not errors and are
/// reported through [`IdentityReport`] instead.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{op} requires odd g, got g = {g}")]
    OddGenusRequired { op: &'static str, g: u32 },
    #[error("{op} requires even g, got g = {g}")]
    EvenGenusRequired { op: &'static str, g: u32 },
    #[error("{op} requires g + s >= 2, got g = {g}, s = {s}")]
    DomainTooSmall { op: &'static str, g: u32, s: u32 },
    #[error(
        "series extraction defines xi^s_g only for s >= 1 (the free energy has no N^0 content); \
         use the closed form for s = 0"
    )]
    ExtractionRequiresPunctures,
    #[error("q must be >= {min}, got q = {q}")]
    QTooSmall { q: u32, min: u32 },
    #[error("N = {n} must be a positive multiple of q = {q}")]
    NNotMultipleOfQ { n: u32, q: u32 },
    #[error("concrete matrix size N is required but was not provided")]
    MissingConcreteN,
    #[error("truncation order {order} is insufficient, need at least {needed}")]
    TruncationInsufficient { order: u32, needed: u32 },
    #[error("genus bound {genus_max} is too small, need at least {min}")]
    GenusMaxTooSmall { genus_max: u32, min: u32 },
    #[error("series truncation orders differ: {0} vs {1}")]
    TruncationMismatch(u32, u32),
    #[error("log(1 - p t) requires p >= 1, got p = {0}")]
    InvalidLogArgument(i64),
    #[error("polynomial division left a nonzero remainder")]
    InexactDivision,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
}

pub type Result<T> = std::result::Result<T, Error>;
