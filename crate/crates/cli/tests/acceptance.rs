//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the
//! process exits nonzero if any criterion fails.

use std::panic;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starlike_core::catalog::RATIO_TOLERANCE;
use starlike_core::checks::{
    caratheodory_series, check_class_membership, check_lemma3_conditions, check_starlike,
    coefficient_bound_check, ode_residual, univalence_ratio_series, BOUND_SLACK,
};
use starlike_core::operators::exact::{coefficient_bound, to_f64};
use starlike_core::operators::{dominant_q_series, extremal_k, from_caratheodory, solve_dominant};
use starlike_core::suites::{
    example_order, run_bernardi_closure, run_inclusion, sample_caratheodory, sample_member,
    SuiteConfig,
};
use starlike_core::{
    build_example, Complex64, ExampleName, Generator, GridSpec, OperatorSpec, PowerSeries,
};

const SAMPLE_SEED: u64 = 20240001;
const SAMPLE_SIZE: usize = 1000;
const SAMPLE_ORDER: usize = 64;
const SAMPLE_SPECS: [(f64, usize); 8] = [
    (2.0, 0),
    (2.0, 1),
    (3.0, 0),
    (3.0, 1),
    (3.0, 2),
    (5.5, 0),
    (5.5, 1),
    (5.5, 2),
];

const ROUND_TRIP_TOL: f64 = 1e-12;
const ROUND_TRIP_BUDGET: Duration = Duration::from_secs(5);
const RECURRENCE_TOL: f64 = 1e-12;
const CHAIN_TOL: f64 = 1e-10;
const CHAIN_SAMPLES: usize = 100;
const DOMINANT_ORDER: usize = 48;
const DOMINANT_TOL: f64 = 1e-10;
const LEMMA3_ORDER: usize = 4096;
const LEMMA3_SLACK: f64 = 1e-6;
const RATIO_ORDER: usize = 32;
const EXTREMAL_REL_TOL: f64 = 1e-12;

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn spec(sigma: f64, n: usize) -> OperatorSpec {
    OperatorSpec::new(sigma, n).expect("valid spec")
}

/// Normalized series with `a_k` uniform in the closed unit disk.
fn random_sample() -> Vec<PowerSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    (0..SAMPLE_SIZE)
        .map(|_| {
            PowerSeries::from_fn(SAMPLE_ORDER, |k| match k {
                0 => Complex64::new(0.0, 0.0),
                1 => Complex64::new(1.0, 0.0),
                _ => {
                    let r = rng.random::<f64>().sqrt();
                    Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
                }
            })
        })
        .collect()
}

fn operator_round_trip() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for f in random_sample() {
        for (sigma, n) in SAMPLE_SPECS {
            let s = spec(sigma, n);
            let back = s.apply_inverse(&s.apply(&f).unwrap()).unwrap();
            worst = worst.max(back.max_abs_diff(&f));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= ROUND_TRIP_TOL && elapsed < ROUND_TRIP_BUDGET,
        format!(
            "max |l(L f) - f| = {worst:.2e}, runtime {:.3}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn recurrence_identities() -> Outcome {
    let (mut eq3, mut eq4, mut eq3_rel, mut eq4_rel) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for f in random_sample() {
        for (sigma, n) in SAMPLE_SPECS {
            let s = spec(sigma, n);
            let d = sigma - n as f64;
            let ln = s.apply(&f).unwrap();
            let ln1 = s.successor().apply(&f).unwrap();
            // (σ-n) L_{n+1} f - (σ-(n+1)) L_n f - z (L_n f)'
            let lhs3 = ln1.scale_real(d);
            let r3 = &(&lhs3 - &ln.scale_real(s.mu())) - &ln.z_derivative();
            // (σ-n)(L_{n+1} f)' - (σ-n)(L_n f)' - z (L_n f)''
            let lhs4 = ln1.derivative().scale_real(d);
            let r4 = &(&lhs4 - &ln.derivative().scale_real(d)) - &ln.derivative().z_derivative();
            eq3 = eq3.max(r3.max_abs());
            eq4 = eq4.max(r4.max_abs());
            eq3_rel = eq3_rel.max(r3.max_abs() / lhs3.max_abs());
            eq4_rel = eq4_rel.max(r4.max_abs() / lhs4.max_abs());
        }
    }
    outcome(
        eq3 <= RECURRENCE_TOL && eq4 <= RECURRENCE_TOL,
        format!(
            "max residual first-order {eq3:.2e}, derivative form {eq4:.2e} (absolute, limit {RECURRENCE_TOL:.0e}); \
             relative to coefficient scale {eq3_rel:.1e}, {eq4_rel:.1e}"
        ),
    )
}

fn chain_identity() -> Outcome {
    let mut worst = 0.0f64;
    for case in 0..CHAIN_SAMPLES {
        let (sigma, n) = SAMPLE_SPECS[case % SAMPLE_SPECS.len()];
        let s = spec(sigma, n);
        let p_true = caratheodory_series(&sample_caratheodory(SAMPLE_SEED, case), SAMPLE_ORDER);
        let f = from_caratheodory(&p_true, &s, SAMPLE_ORDER).unwrap();
        let ln = s.apply(&f).unwrap();
        let ln1 = s.successor().apply(&f).unwrap();
        let p = ln.z_derivative().quotient(&ln).unwrap();
        let lhs = ln1.z_derivative().quotient(&ln1).unwrap();
        let denom = p.add_constant(Complex64::new(s.mu(), 0.0));
        let rhs = &p + &p.z_derivative().quotient(&denom).unwrap();
        let through = SAMPLE_ORDER - 2;
        worst = worst.max(lhs.truncate(through).max_abs_diff(&rhs.truncate(through)));
    }
    outcome(
        worst <= CHAIN_TOL,
        format!(
            "{CHAIN_SAMPLES} members, max residual through order {} = {worst:.2e}",
            SAMPLE_ORDER - 2
        ),
    )
}

fn dominant_consistency() -> Outcome {
    let h = Generator::Halfplane.series(DOMINANT_ORDER);
    let (mut diff, mut residual) = (0.0f64, 0.0f64);
    for gap in [1.0, 2.0, 4.0, 10.5] {
        for n in 0..3usize {
            let s = spec(n as f64 + gap, n);
            let q = dominant_q_series(&s, DOMINANT_ORDER);
            let solved = solve_dominant(&h, 1.0, s.mu(), DOMINANT_ORDER).unwrap();
            diff = diff.max(q.max_abs_diff(&solved));
            residual = residual.max(
                ode_residual(&q, &h, 1.0, s.mu())
                    .unwrap()
                    .residual_norm
                    .unwrap(),
            );
        }
    }
    outcome(
        diff <= DOMINANT_TOL && residual <= DOMINANT_TOL,
        format!("max |closed form - solved| = {diff:.2e}, max ODE residual = {residual:.2e}"),
    )
}

fn lemma3_conditions() -> Outcome {
    let h = Generator::Halfplane.series(LEMMA3_ORDER);
    let grid = GridSpec::default();
    let mut passed = true;
    let mut parts = Vec::new();
    for mu in [0.5, 1.0, 4.0] {
        let report = check_lemma3_conditions(&h, 1.0, mu, &grid).unwrap();
        let mins: Vec<f64> = report
            .sub_reports
            .iter()
            .map(|r| r.min_real_part.unwrap())
            .collect();
        let positive = report.sub_reports.iter().all(|r| r.passed);
        let q_min = mins[1];
        let half_mu = q_min >= mu / 2.0 - LEMMA3_SLACK;
        passed &= positive && half_mu;
        parts.push(format!(
            "mu={mu}: Re G {:.4}, Re zQ'/Q {:.4} (need >= {:.4}), Re zR'/R {:.4}",
            mins[0],
            q_min,
            mu / 2.0,
            mins[2]
        ));
    }
    outcome(passed, parts.join("; "))
}

fn example_family() -> Outcome {
    let grid = GridSpec::default();
    let order = example_order(&grid, SAMPLE_ORDER);
    let class = spec(2.0, 1);
    let mut worst = 0.0f64;
    let mut verdicts = true;
    for name in ExampleName::UNIVALENCE_FAMILY {
        let small = build_example(name, RATIO_ORDER).unwrap();
        let ratio = univalence_ratio_series(&small.series).unwrap();
        worst = worst.max(ratio.max_abs_diff(small.expected_ratio.as_ref().unwrap()));
        let f = build_example(name, order).unwrap().series;
        verdicts &= check_starlike(&f, &grid).unwrap().passed;
        verdicts &= check_class_membership(&f, &class, &grid).unwrap().passed;
    }
    outcome(
        worst <= RATIO_TOLERANCE && verdicts,
        format!(
            "ratio coefficient error {worst:.2e} at N={RATIO_ORDER}; starlike and S_1^2 \
             on default grid at N={order}: {}",
            if verdicts { "all pass" } else { "failures" }
        ),
    )
}

fn inclusion_suite() -> Outcome {
    let report = run_inclusion(&SuiteConfig::default()).unwrap();
    outcome(
        report.passed && report.passes == report.cases,
        format!(
            "{}/{} members pass, worst margin {:.4}",
            report.passes, report.cases, report.worst_margin
        ),
    )
}

fn bernardi_closure() -> Outcome {
    let report = run_bernardi_closure(&SuiteConfig::default()).unwrap();
    outcome(
        report.passed && report.passes == report.cases,
        format!(
            "{}/{} members keep membership for every gamma, worst margin {:.4}",
            report.passes, report.cases, report.worst_margin
        ),
    )
}

fn sharp_bounds() -> Outcome {
    let mut worst_rel = 0.0f64;
    let mut attains = true;
    for sigma in [2u64, 3, 7] {
        // σ ≥ n+1 is required for the operator to exist
        for n in (0..3u64).filter(|&n| sigma > n) {
            let s = spec(sigma as f64, n as usize);
            let k_ext = extremal_k(&s, SAMPLE_ORDER);
            attains &= coefficient_bound_check(&k_ext, &s).unwrap().attains_bound == Some(true);
            for k in 1..=SAMPLE_ORDER as u64 {
                let exact = to_f64(&coefficient_bound(sigma, n, k));
                let rel = (k_ext.coeff(k as usize).norm() - exact).abs() / exact;
                worst_rel = worst_rel.max(rel);
            }
        }
    }
    let config = SuiteConfig::default();
    let mut excess = f64::NEG_INFINITY;
    for case in 0..config.cases {
        let (_, f) = sample_member(&config, case).unwrap();
        for s in [config.spec.successor(), config.spec] {
            excess = excess.max(coefficient_bound_check(&f, &s).unwrap().max_excess.unwrap());
        }
    }
    outcome(
        worst_rel <= EXTREMAL_REL_TOL && attains && excess <= BOUND_SLACK,
        format!(
            "extremal relative gap {worst_rel:.2e}; {} members, max excess over bound {excess:.2e}",
            config.cases
        ),
    )
}

fn suite_determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_starlike"))
            .args(["suite", "all", "--seed", &SAMPLE_SEED.to_string()])
            .env_remove("STARLIKE_CONFIG")
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    outcome(
        a.stdout == b.stdout && !a.stdout.is_empty() && a.status.code() == b.status.code(),
        format!(
            "{} bytes, exit codes {:?}/{:?}",
            a.stdout.len(),
            a.status.code(),
            b.status.code()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "operator round trip", operator_round_trip),
        (2, "recurrence identities", recurrence_identities),
        (3, "chain identity", chain_identity),
        (4, "dominant consistency", dominant_consistency),
        (5, "dominant univalence conditions", lemma3_conditions),
        (6, "example family", example_family),
        (7, "inclusion suite", inclusion_suite),
        (8, "Bernardi closure", bernardi_closure),
        (9, "sharp bounds", sharp_bounds),
        (10, "suite determinism", suite_determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let status = if result.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2} {status} {name}: {} [{:.1}s]",
            result.detail,
            start.elapsed().as_secs_f64()
        );
        if !result.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
