use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_RADII: [f64; 3] = [0.5, 0.9, 0.99];
pub const DEFAULT_ANGLES: usize = 1024;
pub const DEFAULT_MARGIN: f64 = 1e-9;
pub const MIN_ANGLES: usize = 8;

/// Polar sampling grid inside the unit disk: `z = r·exp(2πi m/M)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    radii: Vec<f64>,
    angles: usize,
    margin: f64,
}

/// One grid node together with its indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub radius_index: usize,
    pub angle_index: usize,
    pub radius: f64,
    pub theta: f64,
    pub z: Complex64,
}

impl GridSpec {
    pub fn new(radii: Vec<f64>, angles: usize, margin: f64) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidGrid("no radii".into()));
        }
        if let Some(r) = radii.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
            return Err(Error::InvalidGrid(format!("radius {r} is outside (0, 1)")));
        }
        if angles < MIN_ANGLES {
            return Err(Error::InvalidGrid(format!(
                "{angles} angles, need at least {MIN_ANGLES}"
            )));
        }
        if !(margin >= 0.0 && margin.is_finite()) {
            return Err(Error::InvalidGrid(format!("margin {margin} must be >= 0")));
        }
        Ok(Self {
            radii,
            angles,
            margin,
        })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn theta(&self, angle_index: usize) -> f64 {
        TAU * angle_index as f64 / self.angles as f64
    }

    /// Nodes in radius-major order.
    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        self.radii.iter().enumerate().flat_map(move |(ri, &r)| {
            (0..self.angles).map(move |m| {
                let theta = self.theta(m);
                GridPoint {
                    radius_index: ri,
                    angle_index: m,
                    radius: r,
                    theta,
                    z: Complex64::from_polar(r, theta),
                }
            })
        })
    }

    /// Smallest order `N` at which a coefficient tail growing like `k^degree`
    /// contributes less than `tol` at the outermost radius.
    pub fn tail_order(&self, degree: i32, tol: f64) -> usize {
        let r = self.radii.iter().copied().fold(0.0, f64::max);
        let mut n = 16usize;
        while (n as f64).powi(degree + 1) * r.powi(n as i32) / (1.0 - r) > tol {
            n += 16;
        }
        n
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            radii: DEFAULT_RADII.to_vec(),
            angles: DEFAULT_ANGLES,
            margin: DEFAULT_MARGIN,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(GridSpec::new(vec![], 16, 1e-9).is_err());
        assert!(GridSpec::new(vec![1.0], 16, 1e-9).is_err());
        assert!(GridSpec::new(vec![0.0], 16, 1e-9).is_err());
        assert!(GridSpec::new(vec![0.5], 4, 1e-9).is_err());
        assert!(GridSpec::new(vec![0.5], 8, -1.0).is_err());
        assert!(GridSpec::new(vec![0.5, 0.99], 8, 0.0).is_ok());
    }

    #[test]
    fn nodes_are_equispaced_and_ordered() {
        let g = GridSpec::new(vec![0.25, 0.5], 8, 1e-9).unwrap();
        let pts: Vec<_> = g.points().collect();
        assert_eq!(pts.len(), 16);
        assert_eq!(pts[0].z, Complex64::new(0.25, 0.0));
        assert_eq!((pts[9].radius_index, pts[9].angle_index), (1, 1));
        assert!((pts[2].z - Complex64::new(0.0, 0.25)).norm() < 1e-16);
        for p in &pts {
            assert!((p.z.norm() - p.radius).abs() < 1e-15);
        }
    }

    #[test]
    fn tail_order_grows_toward_boundary() {
        let inner = GridSpec::new(vec![0.5], 8, 0.0).unwrap();
        let outer = GridSpec::default();
        assert!(inner.tail_order(1, 1e-15) < 100);
        assert!(outer.tail_order(1, 1e-15) > 3000);
    }
}
