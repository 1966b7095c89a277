//! Convolution operators `L_n^σ`, `l_n^σ` on normalized analytic functions,
//! computed on truncated power series, together with a sampled harness for
//! the starlikeness and univalence conditions they induce.

pub mod catalog;
pub mod checks;
pub mod error;
pub mod grid;
pub mod io;
pub mod operators;
pub mod series;
pub mod suites;

pub use catalog::{build_example, verify_example, ExampleName, Generator, NamedExample};
pub use checks::{CaratheodoryFunction, CheckKind, CheckReport, Mass, Verdict};
pub use error::{Error, Result};
pub use grid::GridSpec;
pub use num_complex::Complex64;
pub use operators::{BernardiSpec, OperatorSpec};
pub use series::PowerSeries;
