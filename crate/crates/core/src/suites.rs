//! Seeded sampled suites: class inclusion, closure under the Bernardi
//! transform, and the catalog examples.
//!
//! Members of `S_{n+1}^σ` are generated from random Carathéodory functions
//! with at most [`MAX_MASSES`] point masses inside the disk of radius
//! [`MASS_RADIUS`]. Each case draws from its own ChaCha stream keyed by
//! `(seed, case)`, so any case can be replayed alone.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{build_example, verify_example, ExampleName};
use crate::checks::{
    caratheodory_series, check_class_membership, check_starlike, coefficient_bound_check,
    CaratheodoryFunction, CheckReport, Mass,
};
use crate::error::Result;
use crate::grid::GridSpec;
use crate::operators::{bernardi, from_caratheodory, BernardiSpec, OperatorSpec};
use crate::series::PowerSeries;

pub const DEFAULT_SEED: u64 = 20240001;
pub const DEFAULT_CASES: usize = 100;
pub const MAX_MASSES: usize = 4;
pub const MASS_RADIUS: f64 = 0.95;
pub const BERNARDI_GAMMAS: [f64; 3] = [0.5, 1.0, 2.0];

/// Tail tolerance used to pick the working order of sampled members.
pub const TAIL_TOLERANCE: f64 = 1e-13;

pub const SUITE_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Inclusion,
    BernardiClosure,
    Examples,
    All,
}

impl std::str::FromStr for SuiteName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "inclusion" => Ok(SuiteName::Inclusion),
            "bernardi-closure" => Ok(SuiteName::BernardiClosure),
            "examples" => Ok(SuiteName::Examples),
            "all" => Ok(SuiteName::All),
            other => Err(format!("unknown suite `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub spec: OperatorSpec,
    pub cases: usize,
    pub seed: u64,
    pub grid: GridSpec,
    /// Minimum truncation order; sampled members may use more.
    pub order: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            spec: OperatorSpec::new(3.0, 1).expect("valid"),
            cases: DEFAULT_CASES,
            seed: DEFAULT_SEED,
            grid: GridSpec::default(),
            order: crate::series::DEFAULT_ORDER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseFailure {
    pub case: usize,
    pub seed: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: SuiteName,
    pub cases: usize,
    pub passes: usize,
    /// Smallest `min Re - threshold` seen across all grid checks.
    pub worst_margin: f64,
    pub passed: bool,
    pub failures: Vec<CaseFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub schema: u32,
    pub seed: u64,
    pub sigma: f64,
    pub n: usize,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

/// Draws a Carathéodory function for `(seed, case)`.
pub fn sample_caratheodory(seed: u64, case: usize) -> CaratheodoryFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case as u64);
    let count = rng.random_range(1..=MAX_MASSES);
    let raw: Vec<f64> = (0..count).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut masses: Vec<Mass> = raw
        .iter()
        .map(|w| {
            let radius = MASS_RADIUS * rng.random::<f64>().sqrt();
            let angle = rng.random_range(0.0..std::f64::consts::TAU);
            Mass::new(w / total, Complex64::from_polar(radius, angle))
        })
        .collect();
    // absorb rounding so the weights sum to 1 within the validator's tolerance
    let drift: f64 = 1.0 - masses.iter().map(|m| m.weight).sum::<f64>();
    masses[0].weight += drift;
    CaratheodoryFunction::new(masses).expect("sampled masses are valid")
}

/// Order at which the coefficients of a member generated from `p` are
/// negligible on the grid's outermost circle.
pub fn working_order(p: &CaratheodoryFunction, grid: &GridSpec, floor: usize) -> usize {
    let r = grid.radii().iter().copied().fold(0.0, f64::max) * p.max_radius();
    let mut n = floor.max(16);
    // coefficients of z exp(∫(p-1)/t) grow at most like k·ρ^k
    while (n as f64).powi(2) * r.powi(n as i32) / (1.0 - r) > TAIL_TOLERANCE {
        n += 16;
    }
    n
}

/// A sampled member of `S_{n+1}^σ` built from `sample_caratheodory(seed, case)`.
pub fn sample_member(
    config: &SuiteConfig,
    case: usize,
) -> Result<(CaratheodoryFunction, PowerSeries)> {
    let p = sample_caratheodory(config.seed, case);
    let order = working_order(&p, &config.grid, config.order);
    let series = caratheodory_series(&p, order);
    let f = from_caratheodory(&series, &config.spec.successor(), order)?;
    Ok((p, f))
}

struct Tally {
    suite: SuiteName,
    cases: usize,
    passes: usize,
    worst: f64,
    failures: Vec<CaseFailure>,
}

impl Tally {
    fn new(suite: SuiteName) -> Self {
        Self {
            suite,
            cases: 0,
            passes: 0,
            worst: f64::INFINITY,
            failures: Vec::new(),
        }
    }

    fn observe(&mut self, report: &CheckReport) {
        if let Some(m) = report.margin_above_threshold() {
            self.worst = self.worst.min(m);
        }
    }

    fn record(&mut self, case: usize, seed: u64, failures: Vec<String>) {
        self.cases += 1;
        if failures.is_empty() {
            self.passes += 1;
        } else {
            self.failures.push(CaseFailure {
                case,
                seed,
                detail: failures.join("; "),
            });
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            suite: self.suite,
            cases: self.cases,
            passes: self.passes,
            worst_margin: self.worst,
            passed: self.failures.is_empty() && self.passes == self.cases,
            failures: self.failures,
        }
    }
}

/// Inclusion `S_{n+1}^σ ⊂ S_n^σ`, starlikeness of every member, and the
/// coefficient bounds for both classes.
pub fn run_inclusion(config: &SuiteConfig) -> Result<SuiteReport> {
    config.spec.ensure_strict()?;
    let upper = config.spec.successor();
    upper.ensure_strict()?;
    let mut tally = Tally::new(SuiteName::Inclusion);
    for case in 0..config.cases {
        let (_, f) = sample_member(config, case)?;
        let mut failures = Vec::new();
        let premise = check_class_membership(&f, &upper, &config.grid)?;
        tally.observe(&premise);
        if !premise.passed {
            failures.push(format!(
                "generated member fails S_{}^{} (min {:?})",
                upper.n(),
                upper.sigma(),
                premise.min_real_part
            ));
        }
        let lower = check_class_membership(&f, &config.spec, &config.grid)?;
        tally.observe(&lower);
        if !lower.passed {
            failures.push(format!(
                "not in S_{}^{} (min {:?})",
                config.spec.n(),
                config.spec.sigma(),
                lower.min_real_part
            ));
        }
        let star = check_starlike(&f, &config.grid)?;
        tally.observe(&star);
        if !star.passed {
            failures.push(format!("not starlike (min {:?})", star.min_real_part));
        }
        for spec in [upper, config.spec] {
            let bound = coefficient_bound_check(&f, &spec)?;
            if let Some(v) = bound.violation {
                failures.push(format!(
                    "coefficient bound for ({}, {}) exceeded at k = {}",
                    spec.sigma(),
                    spec.n(),
                    v.k
                ));
            }
        }
        tally.record(case, config.seed, failures);
    }
    Ok(tally.finish())
}

/// Bernardi images of the sampled members stay in `S_n^σ`.
pub fn run_bernardi_closure(config: &SuiteConfig) -> Result<SuiteReport> {
    config.spec.ensure_strict()?;
    config.spec.successor().ensure_strict()?;
    let mut tally = Tally::new(SuiteName::BernardiClosure);
    for case in 0..config.cases {
        let (_, f) = sample_member(config, case)?;
        let mut failures = Vec::new();
        for gamma in BERNARDI_GAMMAS {
            let image = bernardi(&BernardiSpec::new(gamma)?, &f)?;
            let report = check_class_membership(&image, &config.spec, &config.grid)?;
            tally.observe(&report);
            if !report.passed {
                failures.push(format!("gamma = {gamma}: min {:?}", report.min_real_part));
            }
        }
        tally.record(case, config.seed, failures);
    }
    Ok(tally.finish())
}

/// Order used for catalog examples: enough for the slowest (`1/k`) tail.
pub fn example_order(grid: &GridSpec, floor: usize) -> usize {
    grid.tail_order(1, TAIL_TOLERANCE).max(floor)
}

pub fn run_examples(config: &SuiteConfig) -> Result<SuiteReport> {
    let mut tally = Tally::new(SuiteName::Examples);
    let order = example_order(&config.grid, config.order);
    for (case, name) in ExampleName::UNIVALENCE_FAMILY.into_iter().enumerate() {
        let ex = build_example(name, order)?;
        let report = verify_example(&ex, &config.grid)?;
        let mut failures = Vec::new();
        for sub in &report.sub_reports {
            tally.observe(sub);
        }
        if !report.passed {
            failures.push(format!("{name}: {:?}", report.verdict));
        }
        tally.record(case, config.seed, failures);
    }
    Ok(tally.finish())
}

pub fn run_suite(name: SuiteName, config: &SuiteConfig) -> Result<SuiteSummary> {
    let suites = match name {
        SuiteName::Inclusion => vec![run_inclusion(config)?],
        SuiteName::BernardiClosure => vec![run_bernardi_closure(config)?],
        SuiteName::Examples => vec![run_examples(config)?],
        SuiteName::All => vec![
            run_inclusion(config)?,
            run_bernardi_closure(config)?,
            run_examples(config)?,
        ],
    };
    Ok(SuiteSummary {
        schema: SUITE_SCHEMA,
        seed: config.seed,
        sigma: config.spec.sigma(),
        n: config.spec.n(),
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}
