//! Coefficient-multiplier operators on the normalized class and the
//! constructions built from them.
//!
//! `L_n^σ` multiplies `a_k` by `Π_{j=0}^{n-1} (σ+k-1-j)/(σ-j)`; its inverse
//! `l_n^σ` divides by the same factor. Only the product form is used, so
//! non-integer `σ` needs no Gamma function.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::PowerSeries;

pub mod exact;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance on `h(0) = 1` and `p(0) = 1` for inputs built numerically.
const UNIT_TOLERANCE: f64 = 1e-12;

/// Parameters `(σ, n)` of `L_n^σ` and `l_n^σ`.
///
/// Strict specs satisfy `σ >= n + 1`. Legacy specs only need `σ > n - 1`,
/// which keeps every denominator `σ - j` positive and admits `L_1^1 f = z f'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    sigma: f64,
    n: usize,
    legacy: bool,
}

impl OperatorSpec {
    pub fn new(sigma: f64, n: usize) -> Result<Self> {
        if !sigma.is_finite() {
            return Err(Error::InvalidSpec(format!("sigma = {sigma} is not finite")));
        }
        if sigma < (n + 1) as f64 {
            return Err(Error::InvalidSpec(format!(
                "sigma = {sigma} < n + 1 = {}",
                n + 1
            )));
        }
        Ok(Self {
            sigma,
            n,
            legacy: false,
        })
    }

    /// Relaxed constructor for operator application outside `σ >= n + 1`.
    pub fn legacy(sigma: f64, n: usize) -> Result<Self> {
        if !sigma.is_finite() {
            return Err(Error::InvalidSpec(format!("sigma = {sigma} is not finite")));
        }
        if n > 0 && sigma <= (n - 1) as f64 {
            return Err(Error::InvalidSpec(format!(
                "sigma = {sigma} must exceed n - 1 = {}",
                n - 1
            )));
        }
        Ok(Self {
            sigma,
            n,
            legacy: sigma < (n + 1) as f64,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `σ >= n + 1`.
    pub fn is_strict(&self) -> bool {
        !self.legacy
    }

    pub fn ensure_strict(&self) -> Result<()> {
        if self.is_strict() {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!(
                "sigma = {} < n + 1 = {} (legacy specs cannot be used for class checks)",
                self.sigma,
                self.n + 1
            )))
        }
    }

    /// `μ = σ - (n + 1)`.
    pub fn mu(&self) -> f64 {
        self.sigma - (self.n + 1) as f64
    }

    /// Lower bound `(σ - (n+1)) / (σ - n)` in the class definition.
    pub fn class_threshold(&self) -> f64 {
        self.mu() / (self.sigma - self.n as f64)
    }

    /// `(σ, n + 1)`, legacy when `σ < n + 2`.
    pub fn successor(&self) -> Self {
        Self::legacy(self.sigma, self.n + 1).expect("sigma > n whenever (sigma, n) is valid")
    }

    /// `(σ, n - 1)`; `None` at `n = 0`.
    pub fn predecessor(&self) -> Option<Self> {
        let n = self.n.checked_sub(1)?;
        Some(Self::legacy(self.sigma, n).expect("lowering n keeps the spec valid"))
    }

    pub fn multiplier(&self, k: usize) -> f64 {
        multiplier(self, k)
    }

    /// `multiplier(k)` for `k = 0..=order`; index 0 holds 0.
    pub fn multipliers(&self, order: usize) -> Vec<f64> {
        (0..=order)
            .map(|k| if k == 0 { 0.0 } else { multiplier(self, k) })
            .collect()
    }

    /// `L_n^σ f`.
    pub fn apply(&self, f: &PowerSeries) -> Result<PowerSeries> {
        f.ensure_normalized()?;
        let m = self.multipliers(f.order());
        Ok(f.map_indexed(|k, a| if k <= 1 { a } else { a * m[k] }))
    }

    /// `l_n^σ f`.
    pub fn apply_inverse(&self, f: &PowerSeries) -> Result<PowerSeries> {
        f.ensure_normalized()?;
        let m = self.multipliers(f.order());
        Ok(f.map_indexed(|k, a| if k <= 1 { a } else { a / m[k] }))
    }
}

/// `Π_{j=0}^{n-1} (σ+k-1-j)/(σ-j)`; the empty product is 1.
pub fn multiplier(spec: &OperatorSpec, k: usize) -> f64 {
    assert!(k >= 1, "multipliers are indexed from k = 1");
    let shift = k as f64 - 1.0;
    (0..spec.n).fold(1.0, |acc, j| {
        let j = j as f64;
        acc * ((spec.sigma + shift - j) / (spec.sigma - j))
    })
}

/// `γ` of the Bernardi transform, `γ > -1`. `γ = 1` is the Libera transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BernardiSpec {
    gamma: f64,
}

impl BernardiSpec {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && gamma > -1.0 {
            Ok(Self { gamma })
        } else {
            Err(Error::InvalidSpec(format!(
                "gamma = {gamma} must exceed -1"
            )))
        }
    }

    pub fn libera() -> Self {
        Self { gamma: 1.0 }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `(γ+1)/(γ+k)`.
    pub fn weight(&self, k: usize) -> f64 {
        (self.gamma + 1.0) / (self.gamma + k as f64)
    }
}

/// `F(z) = (γ+1) z^{-γ} ∫_0^z t^{γ-1} f(t) dt`, termwise.
pub fn bernardi(spec: &BernardiSpec, f: &PowerSeries) -> Result<PowerSeries> {
    f.ensure_normalized()?;
    Ok(f.map_indexed(|k, a| if k <= 1 { a } else { a * spec.weight(k) }))
}

/// The extremal member `l_n^σ` of the Koebe function: `a_k = k / multiplier(k)`.
pub fn extremal_k(spec: &OperatorSpec, order: usize) -> PowerSeries {
    assert!(order >= 1);
    PowerSeries::from_fn(order, |k| match k {
        0 => ZERO,
        1 => ONE,
        _ => Complex64::new(k as f64 / multiplier(spec, k), 0.0),
    })
}

/// Closed-form best dominant for `h = (1+z)/(1-z)`, `η = 1`, `μ = σ - (n+1)`:
/// the ratio of `1 + Σ w_k (k+1)² z^k` and `1 + Σ w_k (k+1) z^k` with
/// `w_k = (σ-n)/(σ-n+k)`.
pub fn dominant_q_series(spec: &OperatorSpec, order: usize) -> PowerSeries {
    let s = spec.sigma - spec.n as f64;
    let weight = |k: usize| if k == 0 { 1.0 } else { s / (s + k as f64) };
    let num = PowerSeries::from_fn(order, |k| {
        let kp1 = (k + 1) as f64;
        Complex64::new(weight(k) * kp1 * kp1, 0.0)
    });
    let den = PowerSeries::from_fn(order, |k| Complex64::new(weight(k) * (k + 1) as f64, 0.0));
    num.quotient(&den).expect("denominator has constant term 1")
}

/// Solves `q + z q'/(η q + μ) = h`, `q(0) = 1`, through `q = zF'/F` with
/// `F^η = (η+μ) z^{-μ} ∫_0^z t^{μ-1} H^η dt` and `H = z exp(∫_0^z (h-1)/t dt)`.
///
/// Writing `H^η = z^η S₀(z)` with `S₀ = exp(η ∫(h-1)/t)`, the weighted
/// integral maps the coefficients of `S₀` by `(η+μ)/(η+μ+k)`, giving
/// `F = z S^{1/η}`.
pub fn solve_dominant(h: &PowerSeries, eta: f64, mu: f64, order: usize) -> Result<PowerSeries> {
    if !(eta.is_finite() && mu.is_finite()) {
        return Err(Error::BadDominantInput("eta and mu must be finite".into()));
    }
    if eta == 0.0 {
        return Err(Error::BadDominantInput("eta must be nonzero".into()));
    }
    if eta + mu <= 0.0 {
        return Err(Error::BadDominantInput(format!(
            "eta + mu = {} must be positive",
            eta + mu
        )));
    }
    if (h.coeff(0) - ONE).norm() > UNIT_TOLERANCE {
        return Err(Error::BadDominantInput(format!(
            "h(0) = {} != 1",
            h.coeff(0)
        )));
    }
    let h = h.truncate(order);
    let u = h.add_constant(-h.coeff(0));
    let base = u.integrate_zlog()?.scale_real(eta).exp_series()?;
    let scale = eta + mu;
    let s = base.map_indexed(|k, c| c * (scale / (scale + k as f64)));
    let lead = s.coeff(0);
    if lead.im != 0.0 || lead.re <= 0.0 {
        return Err(Error::PowerBranchError(lead));
    }
    let s = s.scale(lead.inv());
    let root = s.log_series()?.scale_real(1.0 / eta).exp_series()?;
    let f = root
        .scale(Complex64::new(lead.re.powf(1.0 / eta), 0.0))
        .shift_up(1);
    f.z_derivative().quotient(&f)
}

/// `l_n^σ { z exp(∫_0^z (p(t)-1)/t dt) }`, the member whose `L_n^σ` image
/// has `z L'/L = p`. Positivity of `Re p` is not checked here.
pub fn from_caratheodory(
    p: &PowerSeries,
    spec: &OperatorSpec,
    order: usize,
) -> Result<PowerSeries> {
    if (p.coeff(0) - ONE).norm() > UNIT_TOLERANCE {
        return Err(Error::NonunitConstantTerm(p.coeff(0)));
    }
    let p = p.truncate(order.saturating_sub(1));
    let u = p.add_constant(-p.coeff(0));
    let image = u.integrate_zlog()?.exp_series()?.shift_up(1);
    spec.apply_inverse(&image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn koebe(order: usize) -> PowerSeries {
        PowerSeries::from_fn(order, |k| Complex64::new(k as f64, 0.0))
    }

    fn halfplane(order: usize) -> PowerSeries {
        PowerSeries::from_fn(order, |k| {
            Complex64::new(if k == 0 { 1.0 } else { 2.0 }, 0.0)
        })
    }

    fn spec(sigma: f64, n: usize) -> OperatorSpec {
        OperatorSpec::new(sigma, n).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(OperatorSpec::new(1.5, 1).is_err());
        assert!(OperatorSpec::new(2.0, 1).is_ok());
        assert!(OperatorSpec::new(f64::NAN, 0).is_err());
        let l11 = OperatorSpec::legacy(1.0, 1).unwrap();
        assert!(!l11.is_strict());
        assert!(l11.ensure_strict().is_err());
        assert!(OperatorSpec::legacy(0.5, 2).is_err());
        assert!(OperatorSpec::legacy(3.0, 1).unwrap().is_strict());
        assert_eq!(spec(3.0, 1).mu(), 1.0);
        assert_eq!(spec(3.0, 1).class_threshold(), 0.5);
        assert!(BernardiSpec::new(-1.0).is_err());
        assert!(BernardiSpec::new(-0.5).is_ok());
    }

    #[test]
    fn multiplier_examples() {
        for k in 1..10 {
            assert_eq!(multiplier(&spec(4.25, 0), k), 1.0);
        }
        let l11 = OperatorSpec::legacy(1.0, 1).unwrap();
        for k in 1..10 {
            assert_eq!(multiplier(&l11, k), k as f64);
        }
        assert_eq!(multiplier(&spec(2.0, 1), 2), 1.5);
        for s in [spec(2.0, 1), spec(5.5, 3), spec(7.0, 6)] {
            assert_eq!(multiplier(&s, 1), 1.0);
        }
    }

    #[test]
    fn apply_examples() {
        let f = PowerSeries::from_real(&[0.0, 1.0, -0.75, 0.5, 2.0]);
        assert_eq!(spec(3.0, 0).apply(&f).unwrap(), f);
        let l11 = OperatorSpec::legacy(1.0, 1).unwrap();
        assert_eq!(l11.apply(&f).unwrap(), f.z_derivative());
        let g = PowerSeries::from_real(&[0.0, 1.0, 1.0]);
        assert_eq!(
            spec(2.0, 1).apply(&g).unwrap(),
            PowerSeries::from_real(&[0.0, 1.0, 1.5])
        );
        assert!(spec(2.0, 1)
            .apply(&PowerSeries::from_real(&[1.0, 1.0]))
            .is_err());
    }

    #[test]
    fn apply_inverse_examples() {
        let f = PowerSeries::from_real(&[0.0, 1.0, -0.75, 0.5, 2.0]);
        let s = spec(5.5, 2);
        let back = s.apply_inverse(&s.apply(&f).unwrap()).unwrap();
        assert!(back.max_abs_diff(&f) < 1e-15);
        assert_eq!(spec(2.0, 0).apply_inverse(&f).unwrap(), f);
        let g = PowerSeries::from_real(&[0.0, 1.0, 1.5]);
        assert_eq!(
            spec(2.0, 1).apply_inverse(&g).unwrap(),
            PowerSeries::from_real(&[0.0, 1.0, 1.0])
        );
        assert!(s
            .apply_inverse(&PowerSeries::from_real(&[0.0, 2.0]))
            .is_err());
    }

    #[test]
    fn bernardi_examples() {
        let libera = bernardi(&BernardiSpec::libera(), &koebe(3)).unwrap();
        assert_relative_eq!(libera.coeff(2).re, 4.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(libera.coeff(3).re, 1.5, epsilon = 1e-15);
        assert_eq!(libera.coeff(1), ONE);
        assert!(bernardi(&BernardiSpec::libera(), &PowerSeries::one(3)).is_err());
    }

    #[test]
    fn bernardi_differential_identity() {
        // γF + zF' = (γ+1) f
        let f = PowerSeries::from_fn(20, |k| match k {
            0 => ZERO,
            1 => ONE,
            _ => Complex64::new((k as f64).sin(), (k as f64 * 0.7).cos()),
        });
        let b = BernardiSpec::new(2.5).unwrap();
        let big_f = bernardi(&b, &f).unwrap();
        let lhs = &big_f.scale_real(2.5) + &big_f.z_derivative();
        let residual = &lhs - &f.scale_real(3.5);
        assert!(residual.max_abs() < 1e-12, "{}", residual.max_abs());
    }

    #[test]
    fn extremal_examples() {
        assert_eq!(extremal_k(&spec(3.0, 0), 10), koebe(10));
        assert_eq!(extremal_k(&spec(2.0, 1), 5).coeff(1), ONE);
        assert_relative_eq!(extremal_k(&spec(2.0, 1), 5).coeff(2).re, 4.0 / 3.0);
    }

    #[test]
    fn dominant_examples() {
        for (sigma, n) in [(2.0, 0), (3.0, 1), (6.5, 2), (4.0, 3)] {
            let s = spec(sigma, n);
            let q = dominant_q_series(&s, 12);
            assert_eq!(q.coeff(0), ONE);
            let d = sigma - n as f64;
            assert_relative_eq!(q.coeff(1).re, 2.0 * d / (d + 1.0), epsilon = 1e-15);
        }
        assert_relative_eq!(
            dominant_q_series(&spec(2.0, 0), 4).coeff(1).re,
            4.0 / 3.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn solve_dominant_constant_h() {
        let q = solve_dominant(&PowerSeries::one(10), 1.0, 0.5, 10).unwrap();
        assert!(q.max_abs_diff(&PowerSeries::one(10)) < 1e-15);
        assert_eq!(q.order(), 10);
    }

    #[test]
    fn solve_dominant_matches_closed_form() {
        for (sigma, n) in [(2.0, 1), (3.0, 1), (5.0, 1), (11.5, 1), (4.5, 2)] {
            let s = spec(sigma, n);
            let q = solve_dominant(&halfplane(40), 1.0, s.mu(), 40).unwrap();
            let closed = dominant_q_series(&s, 40);
            assert!(q.max_abs_diff(&closed) < 1e-10, "sigma={sigma} n={n}");
        }
    }

    #[test]
    fn solve_dominant_rejects_bad_input() {
        let h = halfplane(8);
        assert!(matches!(
            solve_dominant(&h, 0.0, 1.0, 8),
            Err(Error::BadDominantInput(_))
        ));
        assert!(solve_dominant(&h, 1.0, -1.0, 8).is_err());
        assert!(solve_dominant(&PowerSeries::zero(8), 1.0, 0.0, 8).is_err());
    }

    #[test]
    fn from_caratheodory_examples() {
        let z = PowerSeries::identity(12);
        assert_eq!(
            from_caratheodory(&PowerSeries::one(12), &spec(3.0, 1), 12).unwrap(),
            z
        );
        for (sigma, n) in [(2.0, 0), (2.0, 1), (5.5, 3)] {
            let s = spec(sigma, n);
            let f = from_caratheodory(&halfplane(30), &s, 30).unwrap();
            let ext = extremal_k(&s, 30);
            for k in 0..=30 {
                let (a, b) = (f.coeff(k), ext.coeff(k));
                assert!(
                    (a - b).norm() <= 1e-12 * b.norm().max(1.0),
                    "k={k}: {a} vs {b}"
                );
            }
        }
        // (1-z)/(1+z) = 1 + 2 Σ (-1)^k z^k
        let p = PowerSeries::from_fn(20, |k| match k {
            0 => ONE,
            _ => Complex64::new(if k % 2 == 0 { 2.0 } else { -2.0 }, 0.0),
        });
        let f = from_caratheodory(&p, &spec(4.0, 0), 20).unwrap();
        let ratio = f.z_derivative().quotient(&f).unwrap();
        assert!(ratio.max_abs_diff(&p) < 1e-10);
        assert!(matches!(
            from_caratheodory(&PowerSeries::zero(4), &spec(4.0, 0), 4),
            Err(Error::NonunitConstantTerm(_))
        ));
    }

    fn arb_normalized(order: usize) -> impl Strategy<Value = PowerSeries> {
        prop::collection::vec((0.0f64..1.0, 0.0f64..std::f64::consts::TAU), order - 1).prop_map(
            move |v| {
                let mut coeffs = vec![ZERO, ONE];
                coeffs.extend(v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)));
                PowerSeries::new(coeffs)
            },
        )
    }

    fn arb_spec() -> impl Strategy<Value = OperatorSpec> {
        (0usize..4, 0.0f64..6.0).prop_map(|(n, extra)| spec(n as f64 + 1.0 + extra, n))
    }

    proptest! {
        #[test]
        fn inverse_pair(f in arb_normalized(24), s in arb_spec()) {
            let there = s.apply(&f).unwrap();
            prop_assert!(s.apply_inverse(&there).unwrap().max_abs_diff(&f) < 1e-13);
            let back = s.apply_inverse(&f).unwrap();
            prop_assert!(s.apply(&back).unwrap().max_abs_diff(&f) < 1e-13);
        }

        #[test]
        fn first_order_recurrence(f in arb_normalized(24), s in arb_spec()) {
            // (σ-n) L_{n+1} f = (σ-(n+1)) L_n f + z (L_n f)'
            let ln = s.apply(&f).unwrap();
            let ln1 = s.successor().apply(&f).unwrap();
            let d = s.sigma() - s.n() as f64;
            let residual = &(&ln1.scale_real(d) - &ln.scale_real(s.mu())) - &ln.z_derivative();
            let scale = ln1.max_abs().max(1.0) * d;
            prop_assert!(residual.max_abs() <= 1e-14 * scale);
        }

        #[test]
        fn hadamard_commutes(f in arb_normalized(16), g in arb_normalized(16)) {
            prop_assert_eq!(f.hadamard(&g).unwrap(), g.hadamard(&f).unwrap());
        }

        #[test]
        fn operators_are_hadamard_multipliers(f in arb_normalized(16), s in arb_spec()) {
            let kernel = s.apply(&PowerSeries::from_fn(16, |k| if k == 0 { ZERO } else { ONE })).unwrap();
            prop_assert!(f.hadamard(&kernel).unwrap().max_abs_diff(&s.apply(&f).unwrap()) < 1e-12);
        }
    }
}
