//! Truncated power series with complex double-precision coefficients.
//!
//! A [`PowerSeries`] of order `N` stores `c_0 ..= c_N` and represents the
//! class of analytic germs agreeing with `Σ c_k z^k` modulo `z^{N+1}`. Binary
//! operations truncate to the shorter operand. Every operation returns a new
//! value; series are never mutated after construction.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Magnitude below which a reduced denominator constant term counts as zero.
pub const QUOTIENT_EPSILON: f64 = 1e-12;

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::io::SeriesRepr", into = "crate::io::SeriesRepr")]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
    valuation: usize,
}

impl PowerSeries {
    /// Builds a series from `c_0 ..= c_N`.
    ///
    /// Panics if `coeffs` is empty.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs at least c_0");
        let valuation = coeffs
            .iter()
            .position(|c| *c != ZERO)
            .unwrap_or(coeffs.len());
        Self { coeffs, valuation }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&re| Complex64::new(re, 0.0)).collect())
    }

    /// Series whose coefficients are `coeff(k)` for `k = 0..=order`.
    pub fn from_fn(order: usize, coeff: impl FnMut(usize) -> Complex64) -> Self {
        Self::new((0..=order).map(coeff).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![ZERO; order + 1])
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut coeffs = vec![ZERO; order + 1];
        coeffs[0] = value;
        Self::new(coeffs)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(ONE, order)
    }

    /// The identity function `z`, the smallest member of the normalized class.
    pub fn identity(order: usize) -> Self {
        assert!(order >= 1, "z needs order >= 1");
        let mut coeffs = vec![ZERO; order + 1];
        coeffs[1] = ONE;
        Self::new(coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`; zero past the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Index of the first structurally nonzero coefficient (`N + 1` for the
    /// zero series).
    pub fn valuation(&self) -> usize {
        self.valuation
    }

    /// `c_0 = 0` and `c_1 = 1` exactly.
    pub fn is_normalized(&self) -> bool {
        self.order() >= 1 && self.coeffs[0] == ZERO && self.coeffs[1] == ONE
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized {
                c0: self.coeff(0),
                c1: self.coeff(1),
            })
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = (order + 1).min(self.coeffs.len());
        Self::new(self.coeffs[..keep].to_vec())
    }

    /// Multiplies by `z^m`; the order grows by `m`.
    pub fn shift_up(&self, m: usize) -> Self {
        let mut coeffs = vec![ZERO; m];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(coeffs)
    }

    /// Divides by `z^m`, dropping the first `m` coefficients. The order
    /// shrinks by `m`. Panics if `m` exceeds the valuation or the order.
    pub fn shift_down(&self, m: usize) -> Self {
        assert!(m <= self.valuation, "shift_down past the valuation");
        assert!(m <= self.order(), "shift_down past the truncation order");
        Self::new(self.coeffs[m..].to_vec())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn add_constant(&self, value: Complex64) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] += value;
        Self::new(coeffs)
    }

    /// Applies `c_k ↦ weight(k) · c_k`.
    pub fn map_indexed(&self, mut weight: impl FnMut(usize, Complex64) -> Complex64) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| weight(k, c))
                .collect(),
        )
    }

    /// `f'`, of order `N - 1`. An order-0 series differentiates to the zero
    /// constant.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    /// `z f'`, keeping the order.
    pub fn z_derivative(&self) -> Self {
        self.map_indexed(|k, c| c * k as f64)
    }

    pub fn cauchy_product(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let (a, b) = (&self.coeffs, &other.coeffs);
        Self::from_fn(order, |k| {
            let mut acc = ZERO;
            for j in 0..=k {
                acc += a[j] * b[k - j];
            }
            acc
        })
    }

    /// `self / den` after cancelling `z^v`, `v = valuation(den)`. The result
    /// has order `min(N_self, N_den) - v`.
    pub fn quotient(&self, den: &Self) -> Result<Self> {
        let order = self.order().min(den.order());
        let v = den.valuation();
        if v > order {
            return Err(Error::DivisionByZeroSeries { magnitude: 0.0 });
        }
        if self.valuation() < v {
            return Err(Error::ValuationMismatch {
                numerator: self.valuation(),
                denominator: v,
            });
        }
        let num = &self.coeffs[v..=order];
        let den = &den.coeffs[v..=order];
        let lead = den[0];
        if lead.norm() < QUOTIENT_EPSILON {
            return Err(Error::DivisionByZeroSeries {
                magnitude: lead.norm(),
            });
        }
        let inv_lead = lead.inv();
        let mut out: Vec<Complex64> = Vec::with_capacity(num.len());
        for k in 0..num.len() {
            let mut acc = num[k];
            for j in 1..=k {
                acc -= den[j] * out[k - j];
            }
            out.push(acc * inv_lead);
        }
        Ok(Self::new(out))
    }

    /// `exp(u)` for `u(0) = 0`, from `k E_k = Σ_{j=1}^{k} j u_j E_{k-j}`.
    pub fn exp_series(&self) -> Result<Self> {
        if self.coeffs[0] != ZERO {
            return Err(Error::NonzeroConstantTerm(self.coeffs[0]));
        }
        let u = &self.coeffs;
        let mut out: Vec<Complex64> = Vec::with_capacity(u.len());
        out.push(ONE);
        for k in 1..u.len() {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += u[j] * (j as f64) * out[k - j];
            }
            out.push(acc / k as f64);
        }
        Ok(Self::new(out))
    }

    /// `log(w)` for `w(0) = 1`, from `w' = L' w`.
    pub fn log_series(&self) -> Result<Self> {
        if self.coeffs[0] != ONE {
            return Err(Error::NonunitConstantTerm(self.coeffs[0]));
        }
        let w = &self.coeffs;
        let mut out: Vec<Complex64> = Vec::with_capacity(w.len());
        out.push(ZERO);
        for k in 1..w.len() {
            let mut acc = ZERO;
            for j in 1..k {
                acc += out[j] * (j as f64) * w[k - j];
            }
            out.push(w[k] - acc / k as f64);
        }
        Ok(Self::new(out))
    }

    /// `∫_0^z u(t)/t dt` for `u(0) = 0`: `c_k ↦ c_k / k`.
    pub fn integrate_zlog(&self) -> Result<Self> {
        if self.coeffs[0] != ZERO {
            return Err(Error::NonzeroConstantTerm(self.coeffs[0]));
        }
        Ok(self.map_indexed(|k, c| if k == 0 { ZERO } else { c / k as f64 }))
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Hadamard product of two normalized series: `a_k b_k` for `k >= 2`.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.ensure_normalized()?;
        other.ensure_normalized()?;
        let order = self.order().min(other.order());
        Ok(Self::from_fn(order, |k| match k {
            0 => ZERO,
            1 => ONE,
            _ => self.coeffs[k] * other.coeffs[k],
        }))
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficientwise distance over the common order.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let order = self.order().min(other.order());
        Self::from_fn(order, |k| op(self.coeffs[k], other.coeffs[k]))
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: Self) -> PowerSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;

    fn sub(self, rhs: Self) -> PowerSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;

    fn mul(self, rhs: Self) -> PowerSeries {
        self.cauchy_product(rhs)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;

    fn neg(self) -> PowerSeries {
        self.scale_real(-1.0)
    }
}
