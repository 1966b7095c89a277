//! Exact rational multipliers for cross-checking the floating-point path.
//!
//! [`product_multiplier`] evaluates the product form for any rational `σ`;
//! [`factorial_multiplier`] uses the factorial form, defined for integer `σ`.
//! The two are computed independently.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

pub fn product_multiplier(sigma: &BigRational, n: usize, k: usize) -> BigRational {
    assert!(k >= 1);
    let shift = BigRational::from_integer(BigInt::from(k - 1));
    (0..n).fold(BigRational::one(), |acc, j| {
        let j = BigRational::from_integer(BigInt::from(j));
        acc * (sigma + &shift - &j) / (sigma - &j)
    })
}

fn factorial(m: u64) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, i| acc * i)
}

/// `(σ+k-1)!/σ! · (σ-n)!/(σ+k-1-n)!` for integer `σ >= n`.
pub fn factorial_multiplier(sigma: u64, n: u64, k: u64) -> BigRational {
    assert!(k >= 1 && sigma >= n);
    let num = factorial(sigma + k - 1) * factorial(sigma - n);
    let den = factorial(sigma) * factorial(sigma + k - 1 - n);
    BigRational::new(num, den)
}

/// Sharp coefficient bound `σ!/(σ+k-1)! · (σ+k-1-n)!/(σ-n)! · k`.
pub fn coefficient_bound(sigma: u64, n: u64, k: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(k)) / factorial_multiplier(sigma, n, k)
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("rational is representable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{multiplier, OperatorSpec};

    #[test]
    fn product_and_factorial_forms_agree() {
        for sigma in 1..=9u64 {
            for n in 0..sigma {
                for k in 1..=40u64 {
                    let s = BigRational::from_integer(BigInt::from(sigma));
                    assert_eq!(
                        product_multiplier(&s, n as usize, k as usize),
                        factorial_multiplier(sigma, n, k),
                        "sigma={sigma} n={n} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn floating_multiplier_is_accurate() {
        for (sigma, n) in [(2u64, 1u64), (3, 2), (7, 2), (9, 6)] {
            let spec = OperatorSpec::new(sigma as f64, n as usize).unwrap();
            for k in 1..=64u64 {
                let exact = to_f64(&factorial_multiplier(sigma, n, k));
                let approx = multiplier(&spec, k as usize);
                assert!((approx - exact).abs() <= 4.0 * f64::EPSILON * exact);
            }
        }
    }

    #[test]
    fn half_integer_sigma() {
        // σ = 5/2, n = 2, k = 3: (9/2)(7/2) / ((5/2)(3/2)) = 21/5
        let s = BigRational::new(BigInt::from(5), BigInt::from(2));
        assert_eq!(
            product_multiplier(&s, 2, 3),
            BigRational::new(BigInt::from(21), BigInt::from(5))
        );
    }

    #[test]
    fn bound_for_sigma_n_zero_is_k() {
        for k in 1..20 {
            assert_eq!(
                coefficient_bound(4, 0, k),
                BigRational::from_integer(k.into())
            );
        }
    }
}
