//! The extremal harmonic maps
//!
//! ```text
//! F(z) = R ( ∫_0^z dt / (1 + t² mu(t))  +  conj ∫_0^z mu(t) dt / (1 + t² mu(t)) )
//! ```
//!
//! and their Möbius-shifted, rotated variants. Values come from segment quadrature;
//! derivatives come from the closed forms `F_z = R / (1 + z² mu)`,
//! `F_zbar = conj(R mu / (1 + z² mu))` and the chain rule.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diskmaps::{sup_norm_estimate, DiskSelfMap};
use crate::error::{Error, Result};
use crate::jet::{MapJet, PlanarMap};
use crate::numerics::{integrate_segment_multi, QuadratureConfig};

/// Largest modulus at which the maps are evaluated.
pub const EVAL_RADIUS_CAP: f64 = 1.0 - 1e-9;

/// Count used for sup-norm estimates of `mu` in the bi-Lipschitz report.
const SUP_COUNT: usize = 4096;

/// How the Möbius shift and the rotation are composed with the normalized map `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ShiftConvention {
    /// `g(z) = e^{i theta} F((z - a) / (1 - conj(a) z))`; equality at `z = a`.
    #[default]
    Forward,
    /// `F(z) = e^{-i theta} f((z + a) / (1 + conj(a) z))` solved for the displayed side:
    /// `p(z) = e^{-i theta} F((z + a) / (1 + conj(a) z))`; equality at `z = -a`.
    Pullback,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalSpec {
    mu: DiskSelfMap,
    perimeter_radius: f64,
    a: Complex64,
    theta: f64,
    convention: ShiftConvention,
    quadrature: QuadratureConfig,
}

impl ExtremalSpec {
    /// `perimeter_radius` is `R`: the image domain has perimeter `2 pi R`.
    pub fn new(mu: DiskSelfMap, perimeter_radius: f64, a: Complex64, theta: f64) -> Result<Self> {
        mu.check_params()?;
        if !(perimeter_radius > 0.0 && perimeter_radius.is_finite()) {
            return Err(Error::InvalidInput(format!("R = {perimeter_radius} must be > 0")));
        }
        if !(a.norm() < 1.0) {
            return Err(Error::InvalidInput(format!("shift point {a} must satisfy |a| < 1")));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidInput("theta must be finite".into()));
        }
        Ok(ExtremalSpec {
            mu,
            perimeter_radius,
            a,
            theta,
            convention: ShiftConvention::Forward,
            quadrature: QuadratureConfig::default(),
        })
    }

    pub fn normalized(mu: DiskSelfMap, perimeter_radius: f64) -> Result<Self> {
        Self::new(mu, perimeter_radius, Complex64::new(0.0, 0.0), 0.0)
    }

    pub fn with_convention(mut self, convention: ShiftConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn with_quadrature(mut self, cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        self.quadrature = cfg;
        Ok(self)
    }

    pub fn mu(&self) -> &DiskSelfMap {
        &self.mu
    }

    pub fn perimeter_radius(&self) -> f64 {
        self.perimeter_radius
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn convention(&self) -> ShiftConvention {
        self.convention
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.quadrature
    }

    pub fn is_normalized(&self) -> bool {
        self.a == Complex64::new(0.0, 0.0) && self.theta == 0.0
    }

    /// Point where the sharp bound is attained.
    pub fn equality_point(&self) -> Complex64 {
        self.mobius_center()
    }

    fn mobius_center(&self) -> Complex64 {
        match self.convention {
            ShiftConvention::Forward => self.a,
            ShiftConvention::Pullback => -self.a,
        }
    }

    fn rotation(&self) -> Complex64 {
        match self.convention {
            ShiftConvention::Forward => Complex64::from_polar(1.0, self.theta),
            ShiftConvention::Pullback => Complex64::from_polar(1.0, -self.theta),
        }
    }

    /// `(w, dw/dz)` for the disk automorphism `w = (z - b) / (1 - conj(b) z)`.
    fn mobius(&self, z: Complex64) -> (Complex64, Complex64) {
        let b = self.mobius_center();
        let den = 1.0 - b.conj() * z;
        ((z - b) / den, (1.0 - b.norm_sqr()) / (den * den))
    }

    fn check_domain(z: Complex64) -> Result<()> {
        if z.norm() > EVAL_RADIUS_CAP || !z.is_finite() {
            return Err(Error::OutOfDomain {
                z,
                limit: EVAL_RADIUS_CAP,
            });
        }
        Ok(())
    }

    /// Value of the normalized map `F` (ignores `a`, `theta`): `F(0) = 0`, `F_z(0) = R`.
    pub fn eval_normalized(&self, z: Complex64) -> Result<Complex64> {
        self.eval_normalized_along(&[z])
    }

    /// Normalized value integrated along the polyline `0 -> path[0] -> path[1] -> ...`.
    pub fn eval_normalized_along(&self, path: &[Complex64]) -> Result<Complex64> {
        let mut from = Complex64::new(0.0, 0.0);
        let mut g = Complex64::new(0.0, 0.0);
        let mut h = Complex64::new(0.0, 0.0);
        for &to in path {
            Self::check_domain(to)?;
            let r = integrate_segment_multi(
                |t| {
                    let m = self.mu.eval(t);
                    let d = 1.0 / (1.0 + t * t * m);
                    [d, m * d]
                },
                from,
                to,
                &self.quadrature,
            )?;
            g += r.value[0];
            h += r.value[1];
            from = to;
        }
        Ok(self.perimeter_radius * (g + h.conj()))
    }

    /// Value of the shifted map.
    pub fn eval_shifted(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return Err(Error::OutOfDomain { z, limit: 1.0 });
        }
        let (w, _) = self.mobius(z);
        Ok(self.rotation() * self.eval_normalized(w)?)
    }

    /// Closed-form `(F_z, F_zbar)` of the normalized map.
    pub fn normalized_derivatives(&self, z: Complex64) -> (Complex64, Complex64) {
        let m = self.mu.eval(z);
        let d = self.perimeter_radius / (1.0 + z * z * m);
        (d, (m * d).conj())
    }

    /// Closed-form `(g_z, g_zbar)` of the shifted map.
    pub fn shifted_derivatives(&self, z: Complex64) -> (Complex64, Complex64) {
        let (w, dw) = self.mobius(z);
        let (fz, fzb) = self.normalized_derivatives(w);
        let rot = self.rotation();
        (rot * fz * dw, rot * fzb * dw.conj())
    }

    /// Second Beltrami coefficient of the shifted map: `conj(g_zbar) = nu g_z`.
    ///
    /// Equals `mu` for normalized specs and `e^{-2i theta} mu(w(z))` in general.
    pub fn beltrami_coefficient(&self, z: Complex64) -> Complex64 {
        let (w, _) = self.mobius(z);
        let rot = self.rotation();
        rot.conj() * rot.conj() * self.mu.eval(w)
    }

    pub fn jet_at(&self, z: Complex64) -> Result<MapJet> {
        let (fz, fzb) = self.shifted_derivatives(z);
        Ok(MapJet::new(self.eval_shifted(z)?, fz, fzb))
    }

    /// `|conj(f_zbar) - nu f_z| / (|f_z| + |f_zbar|)` with closed-form derivatives.
    pub fn beltrami_residual(&self, z: Complex64) -> f64 {
        let (fz, fzb) = self.shifted_derivatives(z);
        beltrami_residual_of(fz, fzb, self.beltrami_coefficient(z))
    }

    /// `|f_z(z)| (1 - |z|^2) / R`; at most 1, equal to 1 at the equality point.
    pub fn schwarz_pick_margin(&self, z: Complex64) -> f64 {
        let (fz, _) = self.shifted_derivatives(z);
        fz.norm() * (1.0 - z.norm_sqr()) / self.perimeter_radius
    }

    /// Margin field over `grid`, computed in parallel.
    pub fn margin_field(&self, grid: &[Complex64]) -> Vec<f64> {
        grid.par_iter().map(|&z| self.schwarz_pick_margin(z)).collect()
    }

    /// Bi-Lipschitz bounds of the normalized map when `sup |mu| = k < 1`.
    pub fn bilipschitz_report(&self, grid: &[Complex64]) -> Result<BiLipschitzReport> {
        let k = sup_norm_estimate(&self.mu, SUP_COUNT);
        if k >= 1.0 {
            return Err(Error::HypothesisViolated(format!(
                "sup |mu| = {k} is not < 1"
            )));
        }
        if grid.is_empty() {
            return Err(Error::InvalidInput("empty grid".into()));
        }
        let stretches: Vec<(f64, f64)> = grid
            .par_iter()
            .map(|&z| {
                let (fz, fzb) = self.normalized_derivatives(z);
                (fz.norm() - fzb.norm(), fz.norm() + fzb.norm())
            })
            .collect();
        let (lo_idx, min_lower) = argmin(stretches.iter().map(|s| s.0));
        let (hi_idx, max_upper) = argmax(stretches.iter().map(|s| s.1));
        let big_k = (1.0 + k) / (1.0 - k);
        let r = self.perimeter_radius;
        let report = BiLipschitzReport {
            min_lower,
            max_upper,
            k,
            big_k,
        };
        if min_lower < r / big_k - 1e-12 {
            return Err(Error::InequalityViolated {
                what: "bi-Lipschitz lower bound |F_z| - |F_zbar| >= R(1-k)/(1+k)".into(),
                value: min_lower,
                bound: r / big_k,
                witness: Some(grid[lo_idx]),
            });
        }
        if max_upper > r * big_k + 1e-12 {
            return Err(Error::InequalityViolated {
                what: "bi-Lipschitz upper bound |F_z| + |F_zbar| <= R(1+k)/(1-k)".into(),
                value: max_upper,
                bound: r * big_k,
                witness: Some(grid[hi_idx]),
            });
        }
        Ok(report)
    }

    /// Minimum of `|DF|^2 = |F_z|^2 + |F_zbar|^2` over `grid` against the bound `R^2 / 2`.
    pub fn dnorm_report(&self, grid: &[Complex64]) -> Result<DnormReport> {
        if self.a != Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidInput(
                "|DF|^2 bound applies to the normalized map (a = 0)".into(),
            ));
        }
        if grid.is_empty() {
            return Err(Error::InvalidInput("empty grid".into()));
        }
        let values: Vec<f64> = grid
            .par_iter()
            .map(|&z| {
                let (fz, fzb) = self.normalized_derivatives(z);
                fz.norm_sqr() + fzb.norm_sqr()
            })
            .collect();
        let (idx, min_dnorm_sq) = argmin(values.into_iter());
        let bound = 0.5 * self.perimeter_radius * self.perimeter_radius;
        if min_dnorm_sq < bound - 1e-12 {
            return Err(Error::InequalityViolated {
                what: "|DF|^2 >= R^2/2".into(),
                value: min_dnorm_sq,
                bound,
                witness: Some(grid[idx]),
            });
        }
        Ok(DnormReport {
            min_dnorm_sq,
            argmin: grid[idx],
            bound,
        })
    }
}

impl PlanarMap for ExtremalSpec {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_shifted(z)
    }

    fn derivatives(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        Ok(self.shifted_derivatives(z))
    }

    fn source_id(&self) -> String {
        format!(
            "extremal mu={} R={} a={},{} theta={}",
            self.mu, self.perimeter_radius, self.a.re, self.a.im, self.theta
        )
    }
}

/// Residual of `conj(f_zbar) = nu f_z`, scaled by `|f_z| + |f_zbar|`.
pub fn beltrami_residual_of(f_z: Complex64, f_zbar: Complex64, nu: Complex64) -> f64 {
    (f_zbar.conj() - nu * f_z).norm() / (f_z.norm() + f_zbar.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiLipschitzReport {
    /// Grid minimum of `|F_z| - |F_zbar|`.
    pub min_lower: f64,
    /// Grid maximum of `|F_z| + |F_zbar|`.
    pub max_upper: f64,
    pub k: f64,
    /// `(1 + k) / (1 - k)`
    pub big_k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DnormReport {
    pub min_dnorm_sq: f64,
    pub argmin: Complex64,
    /// `R^2 / 2`
    pub bound: f64,
}

/// First index attaining the minimum.
pub(crate) fn argmin(values: impl Iterator<Item = f64>) -> (usize, f64) {
    values
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, v)| if v < best.1 { (i, v) } else { best })
}

/// First index attaining the maximum.
pub(crate) fn argmax(values: impl Iterator<Item = f64>) -> (usize, f64) {
    values
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best })
}
