use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("reduced denominator has vanishing constant term (|c0| = {magnitude:e})")]
    DivisionByZeroSeries { magnitude: f64 },

    #[error("numerator valuation {numerator} is below denominator valuation {denominator}")]
    ValuationMismatch {
        numerator: usize,
        denominator: usize,
    },

    #[error("series must have zero constant term, found {0}")]
    NonzeroConstantTerm(Complex64),

    #[error("series must have constant term 1, found {0}")]
    NonunitConstantTerm(Complex64),

    #[error("series is not normalized (need c0 = 0, c1 = 1; found c0 = {c0}, c1 = {c1})")]
    NotNormalized { c0: Complex64, c1: Complex64 },

    #[error("invalid operator parameters: {0}")]
    InvalidSpec(String),

    #[error("invalid dominant-equation input: {0}")]
    BadDominantInput(String),

    #[error("cannot take a real power: constant term {0} is not a positive real")]
    PowerBranchError(Complex64),

    #[error("denominator vanishes at z = {re} + {im}i (|den| = {magnitude:e})", re = point.re, im = point.im)]
    DenominatorVanishes { point: Complex64, magnitude: f64 },

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid Carathéodory masses: {0}")]
    InvalidMasses(String),

    #[error("malformed series data: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
