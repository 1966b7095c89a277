//! Resolving a source argument to a series: a catalog name, a generator,
//! `extremal`/`dominant`, a coefficient file, or `-` for standard input.

use std::io::Read;
use std::path::Path;

use starlike_core::operators::{dominant_q_series, extremal_k};
use starlike_core::{build_example, io, ExampleName, Generator, OperatorSpec, PowerSeries};

use crate::error::{CliError, CliResult};

pub const STDIN: &str = "-";

/// What the consuming command requires of the series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Any,
    /// `c0 = 0, c1 = 1`
    Normalized,
    /// `c0 = 1`
    Unit,
}

pub struct SourceContext<'a> {
    pub order: usize,
    /// Operator parameters, required only by `extremal` and `dominant`.
    pub spec: Option<&'a OperatorSpec>,
}

enum Origin {
    Named,
    Data,
}

pub fn load(source: &str, ctx: &SourceContext<'_>, shape: Shape) -> CliResult<PowerSeries> {
    let (series, origin) = resolve(source, ctx)?;
    let ok = match shape {
        Shape::Any => true,
        Shape::Normalized => series.is_normalized(),
        Shape::Unit => series.coeff(0) == starlike_core::Complex64::new(1.0, 0.0),
    };
    if ok {
        return Ok(series);
    }
    let want = match shape {
        Shape::Normalized => "a normalized series (a0 = 0, a1 = 1)",
        _ => "a series with constant term 1",
    };
    match origin {
        Origin::Data => Err(CliError::Input(format!("`{source}` is not {want}"))),
        Origin::Named => Err(CliError::Usage(format!("`{source}` is not {want}"))),
    }
}

fn resolve(source: &str, ctx: &SourceContext<'_>) -> CliResult<(PowerSeries, Origin)> {
    if let Ok(name) = source.parse::<ExampleName>() {
        return Ok((build_example(name, ctx.order)?.series, Origin::Named));
    }
    if let Ok(generator) = source.parse::<Generator>() {
        return Ok((generator.series(ctx.order), Origin::Named));
    }
    match source {
        "extremal" => Ok((
            extremal_k(need_spec(source, ctx)?, ctx.order),
            Origin::Named,
        )),
        "dominant" => Ok((
            dominant_q_series(need_spec(source, ctx)?, ctx.order),
            Origin::Named,
        )),
        STDIN => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Input(format!("standard input: {e}")))?;
            Ok((parse(&text, None)?, Origin::Data))
        }
        path if Path::new(path).is_file() => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("{path}: {e}")))?;
            Ok((parse(&text, Path::new(path).extension())?, Origin::Data))
        }
        other => Err(CliError::Usage(format!(
            "unknown source `{other}` (expected an example name, a generator, \
             `extremal`, `dominant`, a coefficient file or `-`)"
        ))),
    }
}

fn need_spec<'a>(source: &str, ctx: &SourceContext<'a>) -> CliResult<&'a OperatorSpec> {
    ctx.spec
        .ok_or_else(|| CliError::Usage(format!("source `{source}` needs --sigma and --n")))
}

/// JSON when the extension says so or the text opens with `{`, CSV otherwise.
fn parse(text: &str, extension: Option<&std::ffi::OsStr>) -> CliResult<PowerSeries> {
    let json = match extension.and_then(|e| e.to_str()) {
        Some(ext) => ext.eq_ignore_ascii_case("json"),
        None => text.trim_start().starts_with('{'),
    };
    let parsed = if json {
        io::from_json(text)
    } else {
        io::from_csv(text.as_bytes())
    };
    parsed.map_err(|e| CliError::Input(e.to_string()))
}
