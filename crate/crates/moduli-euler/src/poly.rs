//! Dense univariate polynomials in `t` over exact rationals, with the exact
//! long division needed to verify the partition-function product identity.

use num_traits::Zero;

use crate::rational::{rat, Rational};
use crate::{Error, Result};

/// Polynomial in `t`, dense coefficient vector, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TPoly {
    coeffs: Vec<Rational>, // coeffs[i] is the coefficient of t^i
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        TPoly {
            coeffs: vec![rat(1)],
        }
    }

    /// The linear factor `1 - a t`.
    pub fn one_minus(a: i64) -> Self {
        TPoly {
            coeffs: vec![rat(1), rat(-a)],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = TPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Rational::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return TPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        TPoly::from_coeffs(out)
    }

    /// In-place multiplication by `1 - a t`; cheaper than a general product
    /// when expanding long runs of linear factors.
    pub fn mul_one_minus(&mut self, a: i64) {
        if self.is_zero() {
            return;
        }
        let ar = rat(a);
        self.coeffs.push(Rational::zero());
        for i in (1..self.coeffs.len()).rev() {
            let shifted = &self.coeffs[i - 1] * &ar;
            self.coeffs[i] -= shifted;
        }
        self.trim();
    }

    /// Exact long division; errors unless the remainder is zero.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        if self.is_zero() {
            return Ok(TPoly::zero());
        }
        let n = self.coeffs.len();
        let d = divisor.coeffs.len();
        if n < d {
            return Err(Error::InexactDivision);
        }
        let lead = divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); n - d + 1];
        for k in (0..=n - d).rev() {
            let q = &rem[k + d - 1] / lead;
            if !q.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    let sub = &q * b;
                    rem[k + j] -= sub;
                }
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InexactDivision);
        }
        Ok(TPoly::from_coeffs(quot))
    }
}
