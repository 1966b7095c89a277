//! Closed-form fixtures built by series arithmetic.
//!
//! | name     | closed form                 | ratio `(2zf'+z²f'')/(f+zf')` |
//! |----------|-----------------------------|------------------------------|
//! | f1       | `2[1 - (1-z)e^z]/z`         | `1 + z`                      |
//! | f2       | `2[1 - (1+z)e^{-z}]/z`      | `1 - z`                      |
//! | f3       | `-2[z + log(1-z)]/z`        | `1/(1-z)`                    |
//! | f4       | `2[z - log(1+z)]/z`         | `1/(1+z)`                    |
//! | koebe    | `z/(1-z)²`                  | none                         |
//! | identity | `z`                         | `1`                          |

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::checks::{
    caratheodory_series, check_starlike, check_univalence_condition, univalence_ratio_series,
    CaratheodoryFunction, CheckKind, CheckReport, Verdict, REPORT_SCHEMA,
};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::series::PowerSeries;

pub const MIN_EXAMPLE_ORDER: usize = 4;

/// Tolerance for the computed univalence ratio against its closed form.
pub const RATIO_TOLERANCE: f64 = 1e-12;

/// Highest ratio coefficient compared against the closed form. Coefficients
/// up to this order depend only on `a_1 ..= a_{RATIO_CHECK_ORDER + 1}`.
pub const RATIO_CHECK_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExampleName {
    F1,
    F2,
    F3,
    F4,
    Koebe,
    Identity,
}

impl ExampleName {
    pub const ALL: [ExampleName; 6] = [
        ExampleName::F1,
        ExampleName::F2,
        ExampleName::F3,
        ExampleName::F4,
        ExampleName::Koebe,
        ExampleName::Identity,
    ];

    /// The four functions whose univalence ratio lies in the Carathéodory class.
    pub const UNIVALENCE_FAMILY: [ExampleName; 4] = [
        ExampleName::F1,
        ExampleName::F2,
        ExampleName::F3,
        ExampleName::F4,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExampleName::F1 => "f1",
            ExampleName::F2 => "f2",
            ExampleName::F3 => "f3",
            ExampleName::F4 => "f4",
            ExampleName::Koebe => "koebe",
            ExampleName::Identity => "identity",
        }
    }
}

impl fmt::Display for ExampleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedExample {
    pub name: ExampleName,
    pub series: PowerSeries,
    pub expected_ratio: Option<PowerSeries>,
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `1 - z` style binomials `a + b z` at the given order.
fn linear(a: f64, b: f64, order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |k| match k {
        0 => real(a),
        1 => real(b),
        _ => real(0.0),
    })
}

/// `1/(1 - s z)` via series division.
fn geometric(s: f64, order: usize) -> PowerSeries {
    PowerSeries::one(order)
        .quotient(&linear(1.0, -s, order))
        .expect("constant term 1")
}

/// `2[1 - (1 - s z) e^{s z}]/z`.
fn exp_example(s: f64, order: usize) -> PowerSeries {
    let e = linear(0.0, s, order + 1)
        .exp_series()
        .expect("zero constant");
    let inner = &linear(1.0, -s, order + 1) * &e;
    (&PowerSeries::one(order + 1) - &inner)
        .scale_real(2.0)
        .shift_down(1)
}

/// `-2[s z + log(1 - s z)]/(s² z)`, i.e. f3 for `s = 1` and f4 for `s = -1`.
fn log_example(s: f64, order: usize) -> PowerSeries {
    let log = linear(1.0, -s, order + 1)
        .log_series()
        .expect("unit constant");
    (&linear(0.0, s, order + 1) + &log)
        .scale_real(-2.0 / (s * s))
        .shift_down(1)
}

pub fn build_example(name: ExampleName, order: usize) -> Result<NamedExample> {
    if order < MIN_EXAMPLE_ORDER {
        return Err(Error::InvalidSpec(format!(
            "example order {order} < {MIN_EXAMPLE_ORDER}"
        )));
    }
    let (series, expected_ratio) = match name {
        ExampleName::F1 => (exp_example(1.0, order), Some(linear(1.0, 1.0, order))),
        ExampleName::F2 => (exp_example(-1.0, order), Some(linear(1.0, -1.0, order))),
        ExampleName::F3 => (log_example(1.0, order), Some(geometric(1.0, order))),
        ExampleName::F4 => (log_example(-1.0, order), Some(geometric(-1.0, order))),
        ExampleName::Koebe => {
            let g = geometric(1.0, order);
            ((&g * &g).shift_up(1).truncate(order), None)
        }
        ExampleName::Identity => (PowerSeries::identity(order), Some(PowerSeries::one(order))),
    };
    series.ensure_normalized()?;
    Ok(NamedExample {
        name,
        series,
        expected_ratio,
    })
}

/// Checks the univalence ratio against its closed form, then the univalence
/// condition and starlikeness on the grid. Koebe has no closed-form ratio and
/// lies outside the univalence family, so only starlikeness is checked for it.
pub fn verify_example(ex: &NamedExample, grid: &GridSpec) -> Result<CheckReport> {
    let mut report = CheckReport {
        schema: REPORT_SCHEMA,
        kind: CheckKind::Example,
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
        grid: Some(grid.clone()),
        details: Vec::new(),
        flags: vec![format!("example:{}", ex.name)],
        sub_reports: Vec::new(),
    };
    let mut ok = true;
    if let Some(expected) = &ex.expected_ratio {
        let ratio = univalence_ratio_series(&ex.series.truncate(RATIO_CHECK_ORDER + 1))?;
        let diff = ratio.max_abs_diff(expected);
        report.residual_norm = Some(diff);
        report.tolerance = Some(RATIO_TOLERANCE);
        ok &= diff <= RATIO_TOLERANCE;
        let uni = check_univalence_condition(&ex.series, grid)?;
        ok &= uni.passed;
        report.sub_reports.push(uni);
    }
    let star = check_starlike(&ex.series, grid)?;
    ok &= star.passed;
    report.sub_reports.push(star);
    report.min_real_part = report
        .sub_reports
        .iter()
        .filter_map(|s| s.min_real_part)
        .min_by(|a, b| a.total_cmp(b));
    report.passed = ok;
    report.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    Ok(report)
}

/// Named members of the Carathéodory class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// `(1+z)/(1-z)`
    Halfplane,
    /// `(1-z)/(1+z)`
    HalfplaneReflected,
    /// `1`
    Constant,
}

impl Generator {
    pub fn function(&self) -> CaratheodoryFunction {
        let x = match self {
            Generator::Halfplane => 1.0,
            Generator::HalfplaneReflected => -1.0,
            Generator::Constant => 0.0,
        };
        CaratheodoryFunction::point_mass(real(x)).expect("single unit mass")
    }

    pub fn series(&self, order: usize) -> PowerSeries {
        caratheodory_series(&self.function(), order)
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "halfplane" => Ok(Generator::Halfplane),
            "halfplane-reflected" => Ok(Generator::HalfplaneReflected),
            "constant" => Ok(Generator::Constant),
            other => Err(Error::UnknownExample(other.to_string())),
        }
    }
}
