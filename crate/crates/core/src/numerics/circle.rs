use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform samples `radius * e^{i t_j}`, `t_j = 2 pi j / count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleSampling {
    radius: f64,
    count: usize,
}

impl CircleSampling {
    /// Default sample count for interior scans.
    pub const INTERIOR_COUNT: usize = 1024;
    /// Default sample count for boundary tracing.
    pub const BOUNDARY_COUNT: usize = 8192;

    pub fn new(radius: f64, count: usize) -> Result<Self> {
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(Error::InvalidInput(format!("radius {radius} not in (0, 1]")));
        }
        if count < 8 {
            return Err(Error::InvalidInput(format!("count {count} < 8")));
        }
        if !count.is_power_of_two() {
            return Err(Error::BadLength(count));
        }
        Ok(CircleSampling { radius, count })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn angle(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.count as f64
    }

    pub fn point(&self, j: usize) -> Complex64 {
        Complex64::from_polar(self.radius, self.angle(j))
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = Complex64> + '_ {
        (0..self.count).map(move |j| self.point(j))
    }
}

/// Trapezoidal mean of `f` over the sampled circle.
pub fn circle_mean<F>(f: F, sampling: &CircleSampling) -> f64
where
    F: Fn(Complex64) -> f64,
{
    let sum: f64 = sampling.points().map(f).sum();
    sum / sampling.count() as f64
}
