use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Value and first Wirtinger derivatives of a planar map at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapJet {
    pub value: Complex64,
    pub f_z: Complex64,
    pub f_zbar: Complex64,
    /// `|f_z|^2 - |f_zbar|^2`
    pub jacobian: f64,
    /// `|f_z|`
    pub dpartial: f64,
    /// `|f_zbar| / |f_z|`
    pub dilatation: f64,
    /// `|f_z|^2 + |f_zbar|^2`
    pub dnorm_sq: f64,
}

impl MapJet {
    pub fn new(value: Complex64, f_z: Complex64, f_zbar: Complex64) -> Self {
        let a = f_z.norm();
        let b = f_zbar.norm();
        MapJet {
            value,
            f_z,
            f_zbar,
            jacobian: (a - b) * (a + b),
            dpartial: a,
            dilatation: b / a,
            dnorm_sq: a * a + b * b,
        }
    }

    /// `|f_z| - |f_zbar|`, the minimal stretch.
    pub fn min_stretch(&self) -> f64 {
        self.f_z.norm() - self.f_zbar.norm()
    }

    /// `|f_z| + |f_zbar|`, the maximal stretch.
    pub fn max_stretch(&self) -> f64 {
        self.f_z.norm() + self.f_zbar.norm()
    }
}

/// A smooth map of the unit disk into the plane with known Wirtinger derivatives.
pub trait PlanarMap: Sync {
    fn eval(&self, z: Complex64) -> Result<Complex64>;

    /// `(f_z, f_zbar)` at `z`.
    fn derivatives(&self, z: Complex64) -> Result<(Complex64, Complex64)>;

    fn jet(&self, z: Complex64) -> Result<MapJet> {
        let (fz, fzb) = self.derivatives(z)?;
        Ok(MapJet::new(self.eval(z)?, fz, fzb))
    }

    /// Short label used in reports.
    fn source_id(&self) -> String;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let j = MapJet::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(0.75, 0.0),
            Complex64::new(0.0, 0.25),
        );
        assert!((j.jacobian - 0.5).abs() < 1e-15);
        assert!((j.dilatation - 1.0 / 3.0).abs() < 1e-15);
        assert!((j.dnorm_sq - 0.625).abs() < 1e-15);
        assert!((j.min_stretch() - 0.5).abs() < 1e-15);
        assert!((j.max_stretch() - 1.0).abs() < 1e-15);
        assert!((j.jacobian - (j.dpartial * j.dpartial - j.f_zbar.norm_sqr())).abs() < 1e-15);
    }
}
