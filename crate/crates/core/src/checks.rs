//! Sampled verification of the real-part inequalities, ODE residuals and
//! coefficient bounds.
//!
//! Every inequality check reduces to [`ratio_report`]: evaluate two
//! truncated series at each grid node, take `Re(num/den)`, and compare the
//! minimum against a threshold with the grid's margin. The polynomials are
//! evaluated as given, so near-boundary radii need an order large enough for
//! the coefficient tail to be negligible there (see [`GridSpec::tail_order`]).

use std::cmp::Ordering;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridPoint, GridSpec};
use crate::operators::OperatorSpec;
use crate::series::{PowerSeries, QUOTIENT_EPSILON};

pub const REPORT_SCHEMA: u32 = 1;

/// Pointwise denominators below this magnitude abort a scan.
pub const DENOMINATOR_EPSILON: f64 = 1e-12;

pub const ODE_TOLERANCE: f64 = 1e-10;

/// Slack allowed above a coefficient bound.
pub const BOUND_SLACK: f64 = 1e-9;

/// Relative tolerance for reporting that a coefficient attains its bound.
pub const EQUALITY_TOLERANCE: f64 = 1e-12;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    RatioMin,
    Starlike,
    ClassMembership,
    ClassViaStarlike,
    Univalence,
    Lemma3,
    Lemma3RealG,
    Lemma3StarlikeQ,
    Lemma3StarlikeR,
    OdeResidual,
    CoefficientBound,
    Example,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Minimum over one circle of the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusMinimum {
    pub radius: f64,
    pub min_real_part: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundViolation {
    pub k: usize,
    pub coefficient_abs: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema: u32,
    pub kind: CheckKind,
    pub verdict: Verdict,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub min_real_part: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub argmin_point: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_excess: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub violation: Option<BoundViolation>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub attains_bound: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub details: Vec<RadiusMinimum>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub flags: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub sub_reports: Vec<CheckReport>,
}

impl CheckReport {
    fn empty(kind: CheckKind) -> Self {
        Self {
            schema: REPORT_SCHEMA,
            kind,
            verdict: Verdict::Fail,
            passed: false,
            threshold: None,
            min_real_part: None,
            argmin_point: None,
            residual_norm: None,
            tolerance: None,
            max_excess: None,
            violation: None,
            attains_bound: None,
            grid: None,
            details: Vec::new(),
            flags: Vec::new(),
            sub_reports: Vec::new(),
        }
    }

    fn not_applicable(kind: CheckKind, reason: &str) -> Self {
        let mut r = Self::empty(kind);
        r.verdict = Verdict::NotApplicable;
        r.flags.push(reason.to_string());
        r
    }

    fn set_passed(&mut self, ok: bool) {
        self.passed = ok;
        self.verdict = Verdict::from_bool(ok);
    }

    /// `min_real_part - threshold`, when both are present.
    pub fn margin_above_threshold(&self) -> Option<f64> {
        Some(self.min_real_part? - self.threshold.unwrap_or(0.0))
    }

    pub fn argmin(&self) -> Option<Complex64> {
        self.argmin_point.map(|[re, im]| Complex64::new(re, im))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }
}

/// One evaluated grid node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub point: GridPoint,
    pub value: Complex64,
}

/// Values of `f` at every node, in grid order.
pub fn evaluate_on_grid(f: &PowerSeries, grid: &GridSpec) -> Vec<Complex64> {
    let points: Vec<GridPoint> = grid.points().collect();
    points.par_iter().map(|p| f.evaluate(p.z)).collect()
}

fn divide_samples(num: &[Complex64], den: &[Complex64], grid: &GridSpec) -> Result<Vec<Sample>> {
    grid.points()
        .zip(num.iter().zip(den))
        .map(|(point, (n, d))| {
            if d.norm() <= DENOMINATOR_EPSILON {
                Err(Error::DenominatorVanishes {
                    point: point.z,
                    magnitude: d.norm(),
                })
            } else {
                Ok(Sample {
                    point,
                    value: n / d,
                })
            }
        })
        .collect()
}

/// Evaluates `num(z)/den(z)` at every node, in grid order.
pub fn sample_ratio(num: &PowerSeries, den: &PowerSeries, grid: &GridSpec) -> Result<Vec<Sample>> {
    divide_samples(
        &evaluate_on_grid(num, grid),
        &evaluate_on_grid(den, grid),
        grid,
    )
}

/// Orders candidates by value, then angle index, then radius index.
fn lower(a: &Sample, b: &Sample) -> bool {
    match a.value.re.partial_cmp(&b.value.re) {
        Some(Ordering::Less) => true,
        Some(Ordering::Greater) => false,
        _ => {
            (a.point.angle_index, a.point.radius_index)
                < (b.point.angle_index, b.point.radius_index)
        }
    }
}

/// Scans `Re(num/den)` on the grid and reports `min > threshold - margin`.
pub fn ratio_report(
    kind: CheckKind,
    num: &PowerSeries,
    den: &PowerSeries,
    grid: &GridSpec,
    threshold: f64,
) -> Result<CheckReport> {
    let num = evaluate_on_grid(num, grid);
    let den = evaluate_on_grid(den, grid);
    report_from_values(kind, &num, &den, grid, threshold)
}

fn report_from_values(
    kind: CheckKind,
    num: &[Complex64],
    den: &[Complex64],
    grid: &GridSpec,
    threshold: f64,
) -> Result<CheckReport> {
    let samples = divide_samples(num, den, grid)?;
    let mut report = CheckReport::empty(kind);
    let mut non_finite = false;
    let mut best: Option<Sample> = None;
    let mut per_radius: Vec<Option<Sample>> = vec![None; grid.radii().len()];
    for s in &samples {
        if !s.value.re.is_finite() {
            non_finite = true;
            continue;
        }
        if best.is_none_or(|b| lower(s, &b)) {
            best = Some(*s);
        }
        let slot = &mut per_radius[s.point.radius_index];
        if slot.is_none_or(|b| lower(s, &b)) {
            *slot = Some(*s);
        }
    }
    report.details = per_radius
        .into_iter()
        .flatten()
        .map(|s| RadiusMinimum {
            radius: s.point.radius,
            min_real_part: s.value.re,
            theta: s.point.theta,
        })
        .collect();
    report.threshold = Some(threshold);
    report.grid = Some(grid.clone());
    if non_finite {
        report.flags.push("non_finite_values".into());
    }
    match best {
        Some(b) => {
            report.min_real_part = Some(b.value.re);
            report.argmin_point = Some([b.point.z.re, b.point.z.im]);
            report.set_passed(!non_finite && b.value.re - threshold > -grid.margin());
        }
        None => report.set_passed(false),
    }
    Ok(report)
}

/// `min Re(num/den)` against threshold 0.
pub fn re_ratio_min(num: &PowerSeries, den: &PowerSeries, grid: &GridSpec) -> Result<CheckReport> {
    ratio_report(CheckKind::RatioMin, num, den, grid, 0.0)
}

/// `Re(z f'/f) > 0` on the grid.
pub fn check_starlike(f: &PowerSeries, grid: &GridSpec) -> Result<CheckReport> {
    f.ensure_normalized()?;
    ratio_report(CheckKind::Starlike, &f.z_derivative(), f, grid, 0.0)
}

/// `Re(L_{n+1} f / L_n f) > (σ-(n+1))/(σ-n)` on the grid, cross-checked
/// against starlikeness of `L_n f`. The second scan's margin is scaled by
/// `σ - n` so both verdicts compare the same quantity.
pub fn check_class_membership(
    f: &PowerSeries,
    spec: &OperatorSpec,
    grid: &GridSpec,
) -> Result<CheckReport> {
    spec.ensure_strict()?;
    f.ensure_normalized()?;
    let lower = spec.apply(f)?;
    let upper = spec.successor().apply(f)?;
    let lower_values = evaluate_on_grid(&lower, grid);
    let mut report = report_from_values(
        CheckKind::ClassMembership,
        &evaluate_on_grid(&upper, grid),
        &lower_values,
        grid,
        spec.class_threshold(),
    )?;

    let scale = spec.sigma() - spec.n() as f64;
    let mut via = report_from_values(
        CheckKind::ClassViaStarlike,
        &evaluate_on_grid(&lower.z_derivative(), grid),
        &lower_values,
        grid,
        0.0,
    )?;
    let via_ok = via
        .min_real_part
        .is_some_and(|m| m / scale > -grid.margin())
        && !via.flags.iter().any(|f| f == "non_finite_values");
    via.set_passed(via_ok);

    let direct_ok = report.passed;
    if direct_ok != via_ok {
        report.flags.push("verdict_mismatch".into());
    }
    report.set_passed(direct_ok && via_ok);
    report.sub_reports.push(via);
    Ok(report)
}

/// `(2zf' + z²f'')/(f + zf')` as a series, using `z²f'' = z(zf')' - zf'`.
pub fn univalence_ratio_series(f: &PowerSeries) -> Result<PowerSeries> {
    let (num, den) = univalence_parts(f)?;
    num.quotient(&den)
}

/// Numerator `2zf' + z²f''` and denominator `f + zf'` of the univalence ratio.
pub fn univalence_parts(f: &PowerSeries) -> Result<(PowerSeries, PowerSeries)> {
    f.ensure_normalized()?;
    let zf1 = f.z_derivative();
    let zzf = zf1.z_derivative();
    let z2f2 = &zzf - &zf1;
    let num = &zf1.scale_real(2.0) + &z2f2;
    let den = f + &zf1;
    Ok((num, den))
}

/// `Re[(2zf' + z²f'')/(f + zf')] > 0` on the grid.
pub fn check_univalence_condition(f: &PowerSeries, grid: &GridSpec) -> Result<CheckReport> {
    let (num, den) = univalence_parts(f)?;
    ratio_report(CheckKind::Univalence, &num, &den, grid, 0.0)
}

/// Univalence conditions for the dominant equation's solution:
/// `Re G > 0` with `G = ηh + μ`, and `Q = zG'/G`, `R = Q/G` starlike.
pub fn check_lemma3_conditions(
    h: &PowerSeries,
    eta: f64,
    mu: f64,
    grid: &GridSpec,
) -> Result<CheckReport> {
    if eta == 0.0 || !eta.is_finite() || !mu.is_finite() {
        return Err(Error::BadDominantInput(format!("eta = {eta}, mu = {mu}")));
    }
    if (h.coeff(0) - ONE).norm() > QUOTIENT_EPSILON {
        return Err(Error::BadDominantInput(format!(
            "h(0) = {} != 1",
            h.coeff(0)
        )));
    }
    let g = h.scale_real(eta).add_constant(Complex64::new(mu, 0.0));
    let mut report = CheckReport::empty(CheckKind::Lemma3);
    report.grid = Some(grid.clone());
    if mu == 0.0 {
        report.flags.push("mu_zero_boundary".into());
    }

    let re_g = ratio_report(
        CheckKind::Lemma3RealG,
        &g,
        &PowerSeries::one(g.order()),
        grid,
        0.0,
    )?;

    let lead = g.coeff(0);
    if lead.norm() < QUOTIENT_EPSILON {
        return Err(Error::DenominatorVanishes {
            point: Complex64::new(0.0, 0.0),
            magnitude: lead.norm(),
        });
    }
    let (q_report, r_report) = if h.coeff(1).norm() < QUOTIENT_EPSILON {
        (
            CheckReport::not_applicable(CheckKind::Lemma3StarlikeQ, "h_prime_zero"),
            CheckReport::not_applicable(CheckKind::Lemma3StarlikeR, "h_prime_zero"),
        )
    } else {
        let q = g.z_derivative().quotient(&g)?;
        let r = q.quotient(&g)?;
        (
            ratio_report(CheckKind::Lemma3StarlikeQ, &q.z_derivative(), &q, grid, 0.0)?,
            ratio_report(CheckKind::Lemma3StarlikeR, &r.z_derivative(), &r, grid, 0.0)?,
        )
    };

    let subs = [re_g, q_report, r_report];
    if subs.iter().any(|s| s.verdict == Verdict::NotApplicable) {
        report.verdict = Verdict::NotApplicable;
        report.passed = false;
    } else {
        report.set_passed(subs.iter().all(|s| s.passed));
    }
    report.min_real_part = subs
        .iter()
        .filter_map(|s| s.min_real_part)
        .min_by(|a, b| a.total_cmp(b));
    report.threshold = Some(0.0);
    report.sub_reports = subs.to_vec();
    Ok(report)
}

/// Coefficients of `q + z q'/(ηq + μ) - h`.
pub fn ode_residual_series(
    q: &PowerSeries,
    h: &PowerSeries,
    eta: f64,
    mu: f64,
) -> Result<PowerSeries> {
    let den = q.scale_real(eta).add_constant(Complex64::new(mu, 0.0));
    if den.coeff(0).norm() < QUOTIENT_EPSILON {
        return Err(Error::DenominatorVanishes {
            point: Complex64::new(0.0, 0.0),
            magnitude: den.coeff(0).norm(),
        });
    }
    let term = q.z_derivative().quotient(&den)?;
    Ok(&(q + &term) - h)
}

/// Residual of the dominant equation through order `N - 2`.
pub fn ode_residual(q: &PowerSeries, h: &PowerSeries, eta: f64, mu: f64) -> Result<CheckReport> {
    let residual = ode_residual_series(q, h, eta, mu)?;
    let upto = residual.order().saturating_sub(2);
    let norm = residual.coeffs()[..=upto]
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    let mut report = CheckReport::empty(CheckKind::OdeResidual);
    report.residual_norm = Some(norm);
    report.tolerance = Some(ODE_TOLERANCE);
    report.set_passed(norm <= ODE_TOLERANCE);
    Ok(report)
}

/// `|a_k| <= k / multiplier(k)` for `k = 2..=N`.
pub fn coefficient_bound_check(f: &PowerSeries, spec: &OperatorSpec) -> Result<CheckReport> {
    spec.ensure_strict()?;
    f.ensure_normalized()?;
    let mut report = CheckReport::empty(CheckKind::CoefficientBound);
    let mut max_excess = f64::NEG_INFINITY;
    let mut attains = true;
    for k in 2..=f.order() {
        let bound = k as f64 / spec.multiplier(k);
        let abs = f.coeff(k).norm();
        let excess = abs - bound;
        max_excess = max_excess.max(excess);
        if (abs - bound).abs() > EQUALITY_TOLERANCE * bound {
            attains = false;
        }
        if excess > BOUND_SLACK && report.violation.is_none() {
            report.violation = Some(BoundViolation {
                k,
                coefficient_abs: abs,
                bound,
            });
        }
    }
    report.tolerance = Some(BOUND_SLACK);
    if f.order() >= 2 {
        report.max_excess = Some(max_excess);
        report.attains_bound = Some(attains);
    }
    let ok = report.violation.is_none();
    report.set_passed(ok);
    Ok(report)
}

/// One point mass of a Herglotz-type representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mass {
    pub weight: f64,
    pub point: [f64; 2],
}

impl Mass {
    pub fn new(weight: f64, point: Complex64) -> Self {
        Self {
            weight,
            point: [point.re, point.im],
        }
    }

    pub fn point(&self) -> Complex64 {
        Complex64::new(self.point[0], self.point[1])
    }
}

/// `p(z) = Σ λ_i (1 + x_i z)/(1 - x_i z)` with `λ_i > 0`, `Σ λ_i = 1` and
/// `|x_i| <= 1`, so `p(0) = 1` and `Re p > 0` on the open disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaratheodoryFunction {
    masses: Vec<Mass>,
}

impl CaratheodoryFunction {
    pub fn new(masses: Vec<Mass>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidMasses("no masses".into()));
        }
        if let Some(m) = masses
            .iter()
            .find(|m| !(m.weight > 0.0 && m.weight.is_finite()))
        {
            return Err(Error::InvalidMasses(format!(
                "weight {} is not positive",
                m.weight
            )));
        }
        if let Some(m) = masses
            .iter()
            .find(|m| m.point().norm().is_nan() || m.point().norm() > 1.0)
        {
            return Err(Error::InvalidMasses(format!(
                "point {} lies outside the closed disk",
                m.point()
            )));
        }
        let total: f64 = masses.iter().map(|m| m.weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMasses(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Self { masses })
    }

    /// Single mass at `x`; `x = 1` gives `(1+z)/(1-z)`.
    pub fn point_mass(x: Complex64) -> Result<Self> {
        Self::new(vec![Mass::new(1.0, x)])
    }

    pub fn masses(&self) -> &[Mass] {
        &self.masses
    }

    /// Largest `|x_i|`.
    pub fn max_radius(&self) -> f64 {
        self.masses
            .iter()
            .map(|m| m.point().norm())
            .fold(0.0, f64::max)
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.masses
            .iter()
            .map(|m| {
                let xz = m.point() * z;
                (ONE + xz) / (ONE - xz) * m.weight
            })
            .sum()
    }
}

/// `c_0 = 1`, `c_k = Σ 2 λ_i x_i^k`.
pub fn caratheodory_series(p: &CaratheodoryFunction, order: usize) -> PowerSeries {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    coeffs[0] = ONE;
    for m in p.masses() {
        let x = m.point();
        let mut power = ONE;
        for c in coeffs.iter_mut().skip(1) {
            power *= x;
            *c += power * (2.0 * m.weight);
        }
    }
    PowerSeries::new(coeffs)
}
