//! Bernoulli numbers and polynomials, factorials, binomials, and the
//! Faulhaber (power sum) polynomials.
//!
//! Convention: `B_1 = -1/2` (the `B_n(0)` convention). The power sum formula
//! used throughout,
//!
//! ```text
//! sum_{j=1}^{n} j^k = (1/(k+1)) sum_{r=1}^{k+1} C(k+1,r) B_{k+1-r} (-1)^{k+1-r} n^r,
//! ```
//!
//! carries explicit `(-1)^{k+1-r}` factors that are only consistent with this
//! choice; the brute-force property test below pins it.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::{rat, rational_pow, Rational};
use crate::{Error, Result};

/// `n!` over arbitrary-precision integers.
pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= k;
    }
    acc
}

/// Binomial coefficient `C(n, k)` over arbitrary-precision integers;
/// zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k as u64 {
        acc = acc * (n as u64 - i) / (i + 1);
    }
    acc
}

/// Cache of Bernoulli numbers `B_0, B_1, ...`, extended on demand by the
/// defining recurrence `sum_{k=0}^{n} C(n+1,k) B_k = 0`.
///
/// Extension is deterministic and idempotent: asking for `B_n` twice, or from
/// two tables, yields identical values.
#[derive(Debug, Default)]
pub struct BernoulliTable {
    values: Vec<Rational>,
}

impl BernoulliTable {
    pub const fn new() -> Self {
        BernoulliTable { values: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `B_n`, extending the table as needed.
    pub fn get(&mut self, n: u32) -> Rational {
        self.extend_to(n);
        self.values[n as usize].clone()
    }

    fn extend_to(&mut self, n: u32) {
        if self.values.is_empty() {
            self.values.push(rat(1));
        }
        while self.values.len() <= n as usize {
            let m = self.values.len() as u32; // computing B_m
            let mut acc = Rational::zero();
            for k in 0..m {
                acc += Rational::from_integer(binomial(m + 1, k)) * &self.values[k as usize];
            }
            self.values.push(-acc / rat(m as i64 + 1));
        }
    }
}

static TABLE: Mutex<BernoulliTable> = Mutex::new(BernoulliTable::new());

/// `B_n` under the convention `B_1 = -1/2`, served from a shared
/// internally-synchronized cache.
pub fn bernoulli_number(n: u32) -> Rational {
    TABLE.lock().unwrap().get(n)
}

/// Bernoulli polynomial `B_n(x) = sum_{k=0}^{n} C(n,k) B_k x^{n-k}`.
pub fn bernoulli_polynomial(n: u32, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for k in 0..=n {
        let term = Rational::from_integer(binomial(n, k))
            * bernoulli_number(k)
            * rational_pow(x, (n - k) as i64);
        acc += term;
    }
    acc
}

/// Closed-form polynomial in `n` for `sum_{j=1}^{n} j^k`.
///
/// Degree exactly `k+1`, constant term zero: `coeffs[r-1]` holds the
/// coefficient of `n^r` for `r = 1..=k+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSumPolynomial {
    pub exponent: u32,
    coeffs: Vec<Rational>,
}

impl PowerSumPolynomial {
    /// Coefficient of `n^r` (zero outside `1..=k+1`).
    pub fn coeff(&self, r: u32) -> Rational {
        if r == 0 || r as usize > self.coeffs.len() {
            Rational::zero()
        } else {
            self.coeffs[r as usize - 1].clone()
        }
    }

    pub fn degree(&self) -> u32 {
        self.exponent + 1
    }

    /// Iterator over `(r, coefficient of n^r)` for `r = 1..=k+1`.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (i as u32 + 1, c))
    }

    /// Exact evaluation at an integer argument.
    pub fn eval(&self, n: &Rational) -> Rational {
        let mut acc = Rational::zero();
        // Horner from the top: p(n) = n(c_1 + n(c_2 + ...))
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c;
        }
        acc * n
    }

    pub fn eval_u64(&self, n: u64) -> Rational {
        self.eval(&Rational::from_integer(BigInt::from(n)))
    }
}

/// The Faulhaber polynomial for exponent `k`: coefficient of `n^r` is
/// `(1/(k+1)) C(k+1,r) B_{k+1-r} (-1)^{k+1-r}`.
pub fn power_sum_polynomial(k: u32) -> PowerSumPolynomial {
    let inv = rat(k as i64 + 1).recip();
    let coeffs = (1..=k + 1)
        .map(|r| {
            let b = bernoulli_number(k + 1 - r);
            let sign = if (k + 1 - r) % 2 == 0 { 1 } else { -1 };
            &inv * Rational::from_integer(binomial(k + 1, r)) * b * rat(sign)
        })
        .collect();
    PowerSumPolynomial {
        exponent: k,
        coeffs,
    }
}

/// Upper index of the folded congruence-class sum: `(q-1)/2` for odd `q`,
/// `(q-2)/2` for even `q`; zero (empty sum) for `q <= 2`.
pub fn weighted_sum_upper_index(q: u32) -> u32 {
    q.saturating_sub(1) / 2
}

/// The weighted Bernoulli-polynomial sum
/// `sum_{i=1}^{I(q)} (q - 2i) B_g(i/q)` with `I(q) = (q-1)/2` for odd `q` and
/// `(q-2)/2` for even `q`. Zero for `q <= 2` (empty index range).
///
/// Defined only for odd `g`; even `g` is rejected.
pub fn weighted_bernoulli_sum(g: u32, q: u32) -> Result<Rational> {
    if g % 2 == 0 {
        return Err(Error::OddGenusRequired {
            op: "weighted_bernoulli_sum",
            g,
        });
    }
    if q < 1 {
        return Err(Error::QTooSmall { q, min: 1 });
    }
    let mut acc = Rational::zero();
    for i in 1..=weighted_sum_upper_index(q) {
        let x = Rational::new(BigInt::from(i), BigInt::from(q));
        acc += rat(q as i64 - 2 * i as i64) * bernoulli_polynomial(g, &x);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn bernoulli_base_cases() {
        assert_eq!(bernoulli_number(0), rat(1));
        assert_eq!(bernoulli_number(1), ratio(-1, 2));
        assert_eq!(bernoulli_number(2), ratio(1, 6));
        assert_eq!(bernoulli_number(4), ratio(-1, 30));
        assert_eq!(bernoulli_number(6), ratio(1, 42));
        assert_eq!(bernoulli_number(12), ratio(-691, 2730));
    }

    #[test]
    fn odd_bernoulli_numbers_vanish() {
        for n in 1..=25u32 {
            assert!(
                bernoulli_number(2 * n + 1).is_zero(),
                "B_{} != 0",
                2 * n + 1
            );
        }
    }

    #[test]
    fn table_extension_idempotent() {
        let mut t = BernoulliTable::new();
        let a = t.get(20);
        let b = t.get(20);
        assert_eq!(a, b);
        let mut u = BernoulliTable::new();
        assert_eq!(u.get(20), a);
    }

    #[test]
    fn shared_cache_is_thread_safe() {
        let expected: Vec<Rational> = (0..40).map(bernoulli_number).collect();
        let handles: Vec<_> = (0..8)
            .map(|_| {
                let want = expected.clone();
                std::thread::spawn(move || {
                    for (n, w) in want.iter().enumerate() {
                        assert_eq!(&bernoulli_number(n as u32), w);
                    }
                })
            })
            .collect();
        for h in handles {
            h.join().unwrap();
        }
    }

    #[test]
    fn bernoulli_polynomial_spot_values() {
        assert_eq!(bernoulli_polynomial(1, &ratio(1, 3)), ratio(-1, 6));
        assert_eq!(bernoulli_polynomial(1, &ratio(1, 4)), ratio(-1, 4));
        assert_eq!(bernoulli_polynomial(3, &ratio(1, 3)), ratio(1, 27));
        assert_eq!(bernoulli_polynomial(3, &ratio(1, 4)), ratio(3, 64));
        for n in 0..=10 {
            assert_eq!(
                bernoulli_polynomial(n, &Rational::zero()),
                bernoulli_number(n)
            );
        }
    }

    #[test]
    fn bernoulli_polynomial_reflection() {
        // B_n(1-x) = (-1)^n B_n(x), exact, at every rational i/q in range
        for q in 2..=8u32 {
            for i in 1..q {
                let x = ratio(i as i64, q as i64);
                let one_minus = rat(1) - &x;
                for n in 0..=15u32 {
                    let lhs = bernoulli_polynomial(n, &one_minus);
                    let rhs = bernoulli_polynomial(n, &x);
                    let rhs = if n % 2 == 0 { rhs } else { -rhs };
                    assert_eq!(lhs, rhs, "n={n} x={i}/{q}");
                }
            }
        }
    }

    #[test]
    fn bernoulli_multiplication_theorem_at_zero() {
        // sum_{j=0}^{k-1} B_n(j/k) = k^{1-n} B_n
        for k in 1..=8u32 {
            for n in 0..=12u32 {
                let mut lhs = Rational::zero();
                for j in 0..k {
                    lhs += bernoulli_polynomial(n, &ratio(j as i64, k as i64));
                }
                let rhs = rational_pow(&rat(k as i64), 1 - n as i64) * bernoulli_number(n);
                assert_eq!(lhs, rhs, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn power_sum_small_values() {
        assert_eq!(power_sum_polynomial(1).eval_u64(4), rat(10));
        assert_eq!(power_sum_polynomial(2).eval_u64(3), rat(14));
        assert_eq!(power_sum_polynomial(3).eval_u64(2), rat(9));
        assert_eq!(power_sum_polynomial(0).eval_u64(7), rat(7));
    }

    #[test]
    fn power_sum_matches_brute_force() {
        for k in 0..=10u32 {
            let p = power_sum_polynomial(k);
            assert_eq!(p.degree(), k + 1);
            assert!(p.coeff(0).is_zero());
            for n in 1..=50u64 {
                let brute: Rational = (1..=n)
                    .map(|j| Rational::from_integer(BigInt::from(j).pow(k)))
                    .sum();
                assert_eq!(p.eval_u64(n), brute, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn weighted_sum_examples() {
        assert_eq!(weighted_bernoulli_sum(1, 3).unwrap(), ratio(-1, 6));
        assert_eq!(weighted_bernoulli_sum(3, 3).unwrap(), ratio(1, 27));
        assert_eq!(weighted_bernoulli_sum(5, 2).unwrap(), rat(0));
        assert_eq!(weighted_bernoulli_sum(7, 1).unwrap(), rat(0));
    }

    #[test]
    fn weighted_sum_rejects_even_genus() {
        assert!(matches!(
            weighted_bernoulli_sum(2, 3),
            Err(Error::OddGenusRequired { .. })
        ));
    }

    #[test]
    fn weighted_sum_genus_one_closed_form() {
        // sum_i (q-2i) B_1(i/q) = -(q^2/12 - q/4 + 1/6)
        for q in 1..=12u32 {
            let lhs = weighted_bernoulli_sum(1, q).unwrap();
            let qr = rat(q as i64);
            let rhs = -(&qr * &qr * ratio(1, 12) - &qr * ratio(1, 4) + ratio(1, 6));
            assert_eq!(lhs, rhs, "q={q}");
        }
    }

    #[test]
    fn weighted_sum_higher_genus_closed_form() {
        // sum_i (q-2i) B_g(i/q)
        //   = -q^{1-g} (B_{g+1} + (1/(g+1)) sum_{r=1}^{g+1} C(g+1,r) B_{g+1-r} B_r q^r)
        for g in (3..=11u32).step_by(2) {
            for q in 2..=8u32 {
                let lhs = weighted_bernoulli_sum(g, q).unwrap();
                let mut conv = Rational::zero();
                for r in 1..=g + 1 {
                    conv += Rational::from_integer(binomial(g + 1, r))
                        * bernoulli_number(g + 1 - r)
                        * bernoulli_number(r)
                        * rational_pow(&rat(q as i64), r as i64);
                }
                let rhs = -rational_pow(&rat(q as i64), 1 - g as i64)
                    * (bernoulli_number(g + 1) + conv / rat(g as i64 + 1));
                assert_eq!(lhs, rhs, "g={g} q={q}");
            }
        }
    }

    #[test]
    fn binomial_and_factorial() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(4, 0), BigInt::one());
        assert_eq!(binomial(3, 5), BigInt::zero());
    }
}
