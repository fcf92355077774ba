use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Polar product grid of interior sample points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarGrid {
    pub radii: Vec<f64>,
    pub angles: usize,
    /// Prepend `z = 0` to the point list.
    pub include_origin: bool,
}

impl Default for PolarGrid {
    fn default() -> Self {
        PolarGrid::chebyshev(24, 0.95, 128).expect("default grid parameters are valid")
    }
}

impl PolarGrid {
    /// `n_radii` Chebyshev–Lobatto radii in `(0, r_max]`, clustered at both ends.
    pub fn chebyshev(n_radii: usize, r_max: f64, angles: usize) -> Result<Self> {
        if n_radii == 0 || angles == 0 {
            return Err(Error::InvalidInput("grid needs at least one radius and angle".into()));
        }
        if !(r_max > 0.0 && r_max < 1.0) {
            return Err(Error::InvalidInput(format!("grid radius {r_max} not in (0, 1)")));
        }
        let radii = (1..=n_radii)
            .map(|j| 0.5 * r_max * (1.0 - (PI * j as f64 / n_radii as f64).cos()))
            .collect();
        Ok(PolarGrid {
            radii,
            angles,
            include_origin: true,
        })
    }

    pub fn points(&self) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(self.len());
        if self.include_origin {
            pts.push(Complex64::new(0.0, 0.0));
        }
        for &r in &self.radii {
            for k in 0..self.angles {
                pts.push(Complex64::from_polar(r, 2.0 * PI * k as f64 / self.angles as f64));
            }
        }
        pts
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles + usize::from(self.include_origin)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
