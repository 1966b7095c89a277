//! Shared inputs for the benchmarks.

use starlike_core::{Complex64, PowerSeries};

/// Deterministic normalized series with slowly decaying, rotating coefficients.
pub fn sample_series(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |k| match k {
        0 => Complex64::new(0.0, 0.0),
        1 => Complex64::new(1.0, 0.0),
        _ => Complex64::from_polar(1.0 / k as f64, 0.7 * k as f64),
    })
}

/// `1 + z/2 + z²/4 + ...`, a unit series safe to divide by.
pub fn unit_series(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |k| Complex64::new(0.5f64.powi(k as i32), 0.0))
}
