//! Series wire formats.
//!
//! JSON: `{"order": N, "coeffs": [[re, im], ...]}`.
//! CSV: a `k,re,im` header followed by one row per coefficient, `k` running
//! from 0 to N. Floats are written in Rust's shortest round-trip form, with
//! negative zero written as `0.0`.

use std::fmt::Write as _;
use std::io::Read;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::PowerSeries;

pub const CSV_HEADER: &str = "k,re,im";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesRepr {
    pub order: usize,
    pub coeffs: Vec<[f64; 2]>,
}

impl From<PowerSeries> for SeriesRepr {
    fn from(s: PowerSeries) -> Self {
        Self {
            order: s.order(),
            coeffs: s
                .coeffs()
                .iter()
                .map(|c| [unsigned_zero(c.re), unsigned_zero(c.im)])
                .collect(),
        }
    }
}

impl TryFrom<SeriesRepr> for PowerSeries {
    type Error = Error;

    fn try_from(repr: SeriesRepr) -> Result<Self> {
        if repr.coeffs.len() != repr.order + 1 {
            return Err(Error::Parse(format!(
                "order {} needs {} coefficients, found {}",
                repr.order,
                repr.order + 1,
                repr.coeffs.len()
            )));
        }
        Ok(PowerSeries::new(
            repr.coeffs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        ))
    }
}

fn unsigned_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

pub fn to_json(s: &PowerSeries) -> String {
    serde_json::to_string(s).expect("series serialization is infallible")
}

pub fn from_json(text: &str) -> Result<PowerSeries> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_csv(s: &PowerSeries) -> String {
    let mut out = String::with_capacity(24 * (s.order() + 2));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (k, c) in s.coeffs().iter().enumerate() {
        writeln!(
            out,
            "{k},{:?},{:?}",
            unsigned_zero(c.re),
            unsigned_zero(c.im)
        )
        .unwrap();
    }
    out
}

pub fn from_csv(reader: impl Read) -> Result<PowerSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?;
    if headers.iter().collect::<Vec<_>>() != ["k", "re", "im"] {
        return Err(Error::Parse(format!(
            "expected header `{CSV_HEADER}`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut coeffs = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.len() != 3 {
            return Err(Error::Parse(format!("row {row}: expected 3 fields")));
        }
        let k: usize = record[0]
            .parse()
            .map_err(|_| Error::Parse(format!("row {row}: bad index `{}`", &record[0])))?;
        if k != row {
            return Err(Error::Parse(format!(
                "row {row}: index {k} out of sequence"
            )));
        }
        let parse = |field: &str| -> Result<f64> {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Parse(format!("row {row}: bad number `{field}`")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parse(format!("row {row}: non-finite value")))
            }
        };
        coeffs.push(Complex64::new(parse(&record[1])?, parse(&record[2])?));
    }
    if coeffs.is_empty() {
        return Err(Error::Parse("no coefficient rows".into()));
    }
    Ok(PowerSeries::new(coeffs))
}
