use std::fmt::Write as _;
use std::io::Write as _;

use starlike_core::checks::{
    check_class_membership, check_lemma3_conditions, check_starlike, check_univalence_condition,
    coefficient_bound_check, ode_residual, sample_ratio, univalence_parts,
};
use starlike_core::operators::bernardi;
use starlike_core::suites::{run_suite, SuiteConfig, SuiteName, DEFAULT_CASES};
use starlike_core::{io, BernardiSpec, CheckReport, OperatorSpec, PowerSeries};

use crate::config::{CliConfig, Format};
use crate::error::{CliError, CliResult, EXIT_FAIL, EXIT_PASS};
use crate::source::{self, Shape, SourceContext};
use crate::{ApplyOp, CheckArg, PlotExpr, SpecArgs, SuiteArg};

const DEFAULT_SUITE_SPEC: (f64, usize) = (3.0, 1);

fn spec_from(args: &SpecArgs, legacy: bool) -> CliResult<Option<OperatorSpec>> {
    let spec = match (args.sigma, args.n) {
        (None, None) => return Ok(None),
        (Some(sigma), Some(n)) if legacy => OperatorSpec::legacy(sigma, n)?,
        (Some(sigma), Some(n)) => OperatorSpec::new(sigma, n)?,
        _ => {
            return Err(CliError::Usage(
                "--sigma and --n must be given together".into(),
            ))
        }
    };
    Ok(Some(spec))
}

fn require_spec(spec: Option<OperatorSpec>, what: &str) -> CliResult<OperatorSpec> {
    spec.ok_or_else(|| CliError::Usage(format!("{what} needs --sigma and --n")))
}

/// Size of the last coefficient's contribution at the outer radius above
/// which grid verdicts are dominated by truncation.
const TAIL_WARNING: f64 = 1e-6;

/// Grid checks evaluate the truncated polynomial, so a slowly decaying
/// series needs a high `--order` near the boundary.
fn warn_truncation(config: &CliConfig, f: &PowerSeries) {
    let r = config.grid.radii().iter().copied().fold(0.0, f64::max);
    let n = f.order();
    let tail = f.coeff(n).norm() * r.powi(n as i32) / (1.0 - r);
    if tail > TAIL_WARNING {
        eprintln!(
            "warning: truncation tail |a_N| r^N/(1-r) = {tail:.1e} at N = {n}, r = {r}; \
             raise --order for a reliable verdict"
        );
    }
}

fn emit(config: &CliConfig, text: &str) -> CliResult<()> {
    match &config.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
            {
                // A closed downstream pipe is not our failure.
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError::Usage(format!("cannot write output: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn emit_series(config: &CliConfig, s: &PowerSeries) -> CliResult<i32> {
    let text = match config.format_or(Format::Csv) {
        Format::Csv => io::to_csv(s),
        Format::Json => io::to_json(s) + "\n",
    };
    emit(config, &text)?;
    Ok(EXIT_PASS)
}

pub fn expand(config: &CliConfig, source: &str, args: &SpecArgs) -> CliResult<i32> {
    let spec = spec_from(args, config.legacy)?;
    let ctx = SourceContext {
        order: config.order,
        spec: spec.as_ref(),
    };
    emit_series(config, &source::load(source, &ctx, Shape::Any)?)
}

pub fn apply(
    config: &CliConfig,
    op: ApplyOp,
    source: &str,
    args: &SpecArgs,
    gamma: Option<f64>,
) -> CliResult<i32> {
    let spec = spec_from(args, config.legacy)?;
    let ctx = SourceContext {
        order: config.order,
        spec: spec.as_ref(),
    };
    let out = match op {
        ApplyOp::Forward | ApplyOp::Inverse => {
            let spec = require_spec(spec, "apply L/l")?;
            let f = source::load(source, &ctx, Shape::Normalized)?;
            if op == ApplyOp::Forward {
                spec.apply(&f)?
            } else {
                spec.apply_inverse(&f)?
            }
        }
        ApplyOp::Bernardi => {
            let bspec = match gamma {
                Some(g) => BernardiSpec::new(g)?,
                None => BernardiSpec::libera(),
            };
            bernardi(&bspec, &source::load(source, &ctx, Shape::Normalized)?)?
        }
    };
    emit_series(config, &out)
}

pub struct CheckParams {
    pub source: Option<String>,
    pub spec: SpecArgs,
    pub eta: Option<f64>,
    pub mu: Option<f64>,
    pub h: Option<String>,
}

pub fn check(config: &CliConfig, kind: CheckArg, params: &CheckParams) -> CliResult<i32> {
    config.require_check_order()?;
    let spec = spec_from(&params.spec, config.legacy)?;
    let ctx = SourceContext {
        order: config.order,
        spec: spec.as_ref(),
    };
    let grid = &config.grid;
    let on_grid = !matches!(kind, CheckArg::Bounds | CheckArg::Ode);
    let subject = |default: Option<&str>, shape: Shape| -> CliResult<PowerSeries> {
        let name = params
            .source
            .as_deref()
            .or(default)
            .ok_or_else(|| CliError::Usage("missing source argument".into()))?;
        let f = source::load(name, &ctx, shape)?;
        if on_grid {
            warn_truncation(config, &f);
        }
        Ok(f)
    };
    let eta = params.eta.unwrap_or(1.0);
    let mu = || {
        params
            .mu
            .or_else(|| spec.map(|s| s.mu()))
            .ok_or_else(|| CliError::Usage("needs --mu, or --sigma and --n".into()))
    };
    let report = match kind {
        CheckArg::Starlike => check_starlike(&subject(None, Shape::Normalized)?, grid)?,
        CheckArg::Univalence => {
            check_univalence_condition(&subject(None, Shape::Normalized)?, grid)?
        }
        CheckArg::Class => {
            let spec = require_spec(spec, "check class")?;
            check_class_membership(&subject(None, Shape::Normalized)?, &spec, grid)?
        }
        CheckArg::Bounds => {
            let spec = require_spec(spec, "check bounds")?;
            coefficient_bound_check(&subject(None, Shape::Normalized)?, &spec)?
        }
        CheckArg::Lemma3 => {
            let h = subject(Some("halfplane"), Shape::Unit)?;
            check_lemma3_conditions(&h, eta, mu()?, grid)?
        }
        CheckArg::Ode => {
            let q = subject(Some("dominant"), Shape::Unit)?;
            let h_name = params.h.as_deref().unwrap_or("halfplane");
            let h = source::load(h_name, &ctx, Shape::Unit)?;
            ode_residual(&q, &h, eta, mu()?)?
        }
    };
    let text = match config.format_or(Format::Json) {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report_csv(&report),
    };
    emit(config, &text)?;
    if report.passed {
        Ok(EXIT_PASS)
    } else {
        eprintln!("{}", failure_line(&report));
        Ok(EXIT_FAIL)
    }
}

fn failure_line(report: &CheckReport) -> String {
    let mut line = format!(
        "check failed: {:?} verdict {:?}",
        report.kind, report.verdict
    );
    if let (Some(min), Some([re, im])) = (report.min_real_part, report.argmin_point) {
        let _ = write!(line, ", min Re = {min:?} at z = {re:?} + {im:?}i");
    }
    if let Some(v) = &report.violation {
        let _ = write!(
            line,
            ", |a_{}| = {:e} > {:e}",
            v.k, v.coefficient_abs, v.bound
        );
    }
    line
}

const REPORT_CSV_HEADER: &str =
    "report,kind,verdict,passed,threshold,min_real_part,argmin_re,argmin_im,residual_norm,max_excess";

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:?}")).unwrap_or_default()
}

fn report_csv(report: &CheckReport) -> String {
    fn rows(out: &mut String, label: &str, r: &CheckReport) {
        let (re, im) = match r.argmin_point {
            Some([re, im]) => (Some(re), Some(im)),
            None => (None, None),
        };
        let kind = serde_json::to_value(r.kind).expect("enum serializes");
        let verdict = serde_json::to_value(r.verdict).expect("enum serializes");
        let _ = writeln!(
            out,
            "{label},{},{},{},{},{},{},{},{},{}",
            kind.as_str().unwrap_or_default(),
            verdict.as_str().unwrap_or_default(),
            r.passed,
            opt(r.threshold),
            opt(r.min_real_part),
            opt(re),
            opt(im),
            opt(r.residual_norm),
            opt(r.max_excess),
        );
        for (i, sub) in r.sub_reports.iter().enumerate() {
            rows(out, &format!("{label}.{i}"), sub);
        }
    }
    let mut out = format!("{REPORT_CSV_HEADER}\n");
    rows(&mut out, "0", report);
    out
}

pub fn suite(
    config: &CliConfig,
    name: SuiteArg,
    cases: Option<usize>,
    args: &SpecArgs,
) -> CliResult<i32> {
    config.require_check_order()?;
    let spec = match spec_from(args, config.legacy)? {
        Some(spec) => spec,
        None => OperatorSpec::new(DEFAULT_SUITE_SPEC.0, DEFAULT_SUITE_SPEC.1)?,
    };
    let suite_name = match name {
        SuiteArg::Inclusion => SuiteName::Inclusion,
        SuiteArg::BernardiClosure => SuiteName::BernardiClosure,
        SuiteArg::Examples => SuiteName::Examples,
        SuiteArg::All => SuiteName::All,
    };
    let suite_config = SuiteConfig {
        spec,
        cases: cases.unwrap_or(DEFAULT_CASES),
        seed: config.seed,
        grid: config.grid.clone(),
        order: config.order,
    };
    let summary = run_suite(suite_name, &suite_config)?;
    let text = match config.format_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n",
        Format::Csv => {
            let mut out = String::from("suite,cases,passes,worst_margin,passed\n");
            for s in &summary.suites {
                let suite = serde_json::to_value(s.suite).expect("enum serializes");
                let _ = writeln!(
                    out,
                    "{},{},{},{:?},{}",
                    suite.as_str().unwrap_or_default(),
                    s.cases,
                    s.passes,
                    s.worst_margin,
                    s.passed
                );
            }
            out
        }
    };
    emit(config, &text)?;
    for s in &summary.suites {
        for f in &s.failures {
            eprintln!(
                "{:?} case {} failed (seed {}): {}",
                s.suite, f.case, f.seed, f.detail
            );
        }
    }
    if summary.passed {
        Ok(EXIT_PASS)
    } else {
        eprintln!(
            "reproduce with: starlike suite {} --seed {} --sigma {} --n {}",
            serde_json::to_value(suite_name)
                .expect("enum serializes")
                .as_str()
                .unwrap_or_default(),
            summary.seed,
            summary.sigma,
            summary.n
        );
        Ok(EXIT_FAIL)
    }
}

pub fn plot_data(
    config: &CliConfig,
    source_name: &str,
    expr: PlotExpr,
    args: &SpecArgs,
) -> CliResult<i32> {
    if config.format == Some(Format::Json) {
        return Err(CliError::Usage("plot-data only emits CSV".into()));
    }
    config.require_check_order()?;
    let spec = spec_from(args, config.legacy)?;
    let ctx = SourceContext {
        order: config.order,
        spec: spec.as_ref(),
    };
    let f = source::load(source_name, &ctx, Shape::Normalized)?;
    warn_truncation(config, &f);
    let (num, den) = match expr {
        PlotExpr::StarlikeRatio => (f.z_derivative(), f),
        PlotExpr::ClassRatio => {
            let spec = require_spec(spec, "class-ratio")?;
            (spec.successor().apply(&f)?, spec.apply(&f)?)
        }
        PlotExpr::UnivalenceRatio => univalence_parts(&f)?,
    };
    let samples = sample_ratio(&num, &den, &config.grid)?;
    let mut out = String::from("r,theta,re,im\n");
    for s in &samples {
        let _ = writeln!(
            out,
            "{:?},{:?},{:?},{:?}",
            s.point.radius, s.point.theta, s.value.re, s.value.im
        );
    }
    emit(config, &out)?;
    Ok(EXIT_PASS)
}
