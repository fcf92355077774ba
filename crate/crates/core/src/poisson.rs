//! Harmonic maps of the disk from boundary data via discrete Poisson extension.
//!
//! Boundary samples are expanded in a discrete Fourier series; the harmonic extension keeps
//! `z^k` for non-negative frequencies and `conj(z)^k` for negative ones.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diskmaps::horner;
use crate::error::{Error, Result};
use crate::extremal::argmax;
use crate::jet::{MapJet, PlanarMap};
use crate::numerics::{circle_mean, fourier_analyze, fourier_synthesize, CircleSampling, FourierCoefficients};

/// Largest modulus at which derivatives of a truncated series are evaluated.
pub const SERIES_DERIVATIVE_CAP: f64 = 0.99;

/// Default truncation for smooth closed-form boundary families.
pub const ANALYTIC_COUNT: usize = 256;
/// Default truncation for boundary data with corners.
pub const CORNER_COUNT: usize = 4096;

/// Closed-form boundary curves and sample files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BoundaryFamily {
    /// `e^{it}`
    Circle,
    /// `cos t + i b sin t`
    Ellipse { b: f64 },
    /// Regular `k`-gon inscribed in the unit circle, parametrized by arc length.
    Polygonal { k: u32 },
    /// `e^{i (t + eps sin t)}`
    Twist { eps: f64 },
    /// Two-column `re,im` CSV file of uniform samples.
    Samples { path: PathBuf },
}

impl BoundaryFamily {
    pub fn point(&self, t: f64) -> Option<Complex64> {
        Some(match self {
            BoundaryFamily::Circle => Complex64::from_polar(1.0, t),
            BoundaryFamily::Ellipse { b } => Complex64::new(t.cos(), b * t.sin()),
            BoundaryFamily::Polygonal { k } => {
                let k = *k as f64;
                let s = t.rem_euclid(2.0 * PI) * k / (2.0 * PI);
                let j = s.floor();
                let frac = s - j;
                let v0 = Complex64::from_polar(1.0, 2.0 * PI * j / k);
                let v1 = Complex64::from_polar(1.0, 2.0 * PI * (j + 1.0) / k);
                v0 + frac * (v1 - v0)
            }
            BoundaryFamily::Twist { eps } => Complex64::from_polar(1.0, t + eps * t.sin()),
            BoundaryFamily::Samples { .. } => return None,
        })
    }

    /// Default sample count for this family.
    pub fn default_count(&self) -> usize {
        match self {
            BoundaryFamily::Polygonal { .. } => CORNER_COUNT,
            _ => ANALYTIC_COUNT,
        }
    }

    fn check(&self) -> Result<()> {
        match self {
            BoundaryFamily::Ellipse { b } if !b.is_finite() || *b == 0.0 => {
                Err(Error::InvalidInput(format!("ellipse axis {b} must be finite and non-zero")))
            }
            BoundaryFamily::Polygonal { k } if *k < 3 => {
                Err(Error::InvalidInput(format!("polygon needs k >= 3, got {k}")))
            }
            BoundaryFamily::Twist { eps } if !eps.is_finite() => {
                Err(Error::InvalidInput("twist parameter must be finite".into()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for BoundaryFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryFamily::Circle => write!(f, "circle"),
            BoundaryFamily::Ellipse { b } => write!(f, "ellipse:{b}"),
            BoundaryFamily::Polygonal { k } => write!(f, "polygonal:{k}"),
            BoundaryFamily::Twist { eps } => write!(f, "twist:{eps}"),
            BoundaryFamily::Samples { path } => write!(f, "samples:{}", path.display()),
        }
    }
}

impl FromStr for BoundaryFamily {
    type Err = Error;

    /// `circle`, `ellipse:b`, `polygonal:k`, `twist:eps`, `samples:path.csv`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (s, None),
        };
        let num = |what: &str| -> Result<f64> {
            arg.ok_or_else(|| Error::Parse(format!("{head} needs {what}")))?
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad {what} in {s:?}")))
        };
        let family = match head {
            "circle" if arg.is_none() => BoundaryFamily::Circle,
            "ellipse" => BoundaryFamily::Ellipse { b: num("axis")? },
            "polygonal" => BoundaryFamily::Polygonal {
                k: arg
                    .and_then(|a| a.parse::<u32>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad vertex count in {s:?}")))?,
            },
            "twist" => BoundaryFamily::Twist { eps: num("twist")? },
            "samples" => match arg {
                Some(p) if !p.is_empty() => BoundaryFamily::Samples { path: PathBuf::from(p) },
                _ => return Err(Error::Parse("samples needs a file path".into())),
            },
            _ => return Err(Error::Parse(format!("unknown boundary {s:?}"))),
        };
        family.check()?;
        Ok(family)
    }
}

/// Uniform samples `gamma(t_j)`, `t_j = 2 pi j / N`, of a closed boundary curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFunction {
    samples: Vec<Complex64>,
    source: String,
}

impl BoundaryFunction {
    pub fn from_samples(samples: Vec<Complex64>, source: impl Into<String>) -> Result<Self> {
        if !samples.len().is_power_of_two() {
            return Err(Error::BadLength(samples.len()));
        }
        if samples.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidInput("non-finite boundary sample".into()));
        }
        Ok(BoundaryFunction {
            samples,
            source: source.into(),
        })
    }

    /// Samples a family at `count` uniform parameters (or reads the sample file).
    pub fn from_family(family: &BoundaryFamily, count: usize) -> Result<Self> {
        family.check()?;
        if let BoundaryFamily::Samples { path } = family {
            return Self::from_samples(read_samples(path)?, family.to_string());
        }
        if !count.is_power_of_two() {
            return Err(Error::BadLength(count));
        }
        let samples = (0..count)
            .map(|j| family.point(2.0 * PI * j as f64 / count as f64).expect("closed-form family"))
            .collect();
        Self::from_samples(samples, family.to_string())
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

/// Reads `re,im` rows; a non-numeric first row is treated as a header.
pub fn read_samples(path: &Path) -> Result<Vec<Complex64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let parsed = match (cols.next(), cols.next(), cols.next()) {
            (Some(re), Some(im), None) => re.parse::<f64>().ok().zip(im.parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some((re, im)) => out.push(Complex64::new(re, im)),
            None if out.is_empty() && lineno == 0 => continue,
            None => {
                return Err(Error::Parse(format!(
                    "{}:{}: expected two numeric columns",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok(out)
}

/// Truncated harmonic series `c_0 + sum_{k>=1} c_k z^k + sum_{k>=1} c_{-k} conj(z)^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSeries {
    coeffs: FourierCoefficients,
    /// Taylor coefficients of the analytic part `g`.
    g: Vec<Complex64>,
    /// Taylor coefficients of `h`, where `f = g + conj(h)`; `h(0) = 0`.
    h: Vec<Complex64>,
    source: String,
}

impl HarmonicSeries {
    pub fn from_coefficients(coeffs: FourierCoefficients, source: impl Into<String>) -> Self {
        let g: Vec<Complex64> = (0..=coeffs.max_index()).map(|k| coeffs.get(k)).collect();
        let h: Vec<Complex64> = std::iter::once(Complex64::new(0.0, 0.0))
            .chain((1..=-coeffs.min_index()).map(|k| coeffs.get(-k).conj()))
            .collect();
        HarmonicSeries {
            coeffs,
            g,
            h,
            source: source.into(),
        }
    }

    /// Text form of the boundary the series was built from.
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn coefficients(&self) -> &FourierCoefficients {
        &self.coeffs
    }

    pub fn g_coeffs(&self) -> &[Complex64] {
        &self.g
    }

    pub fn h_coeffs(&self) -> &[Complex64] {
        &self.h
    }

    pub fn g(&self, z: Complex64) -> Complex64 {
        horner(&self.g, z)
    }

    pub fn h(&self, z: Complex64) -> Complex64 {
        horner(&self.h, z)
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        self.g(z) + self.h(z).conj()
    }

    /// `(g'(z), h'(z))`.
    pub fn analytic_derivatives(&self, z: Complex64) -> (Complex64, Complex64) {
        (derivative_horner(&self.g, z), derivative_horner(&self.h, z))
    }

    /// Value and derivatives at `z`, `|z| <= 0.99`.
    pub fn series_jet(&self, z: Complex64) -> Result<MapJet> {
        let (gp, hp) = self.checked_derivatives(z)?;
        Ok(MapJet::new(self.value(z), gp, hp.conj()))
    }

    fn checked_derivatives(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        if z.norm() > SERIES_DERIVATIVE_CAP {
            return Err(Error::OutOfDomain {
                z,
                limit: SERIES_DERIVATIVE_CAP,
            });
        }
        Ok(self.analytic_derivatives(z))
    }

    /// Synthesized boundary values at the sample nodes.
    pub fn boundary_values(&self) -> Vec<Complex64> {
        fourier_synthesize(&self.coeffs)
    }
}

fn derivative_horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, (k, c)| acc * z + c * k as f64)
}

impl PlanarMap for HarmonicSeries {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() <= 1.0) {
            return Err(Error::OutOfDomain { z, limit: 1.0 });
        }
        Ok(self.value(z))
    }

    fn derivatives(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let (gp, hp) = self.checked_derivatives(z)?;
        Ok((gp, hp.conj()))
    }

    fn source_id(&self) -> String {
        format!("series {}", self.source)
    }
}

pub fn poisson_extend(boundary: &BoundaryFunction) -> Result<HarmonicSeries> {
    if boundary.len() < 16 {
        return Err(Error::InvalidInput(format!(
            "need at least 16 boundary samples, got {}",
            boundary.len()
        )));
    }
    let coeffs = fourier_analyze(boundary.samples())?;
    Ok(HarmonicSeries::from_coefficients(coeffs, boundary.source()))
}

/// Samples used by [`perimeter_of_family`] for closed-form curves.
pub const PERIMETER_COUNT: usize = 1 << 17;

/// Polygonal length of a closed-form family on [`PERIMETER_COUNT`] samples, or of the
/// file samples as given.
///
/// The chord sum underestimates a smooth curve by `O(N^-2)`, which would inflate margins
/// computed with `R = L / 2 pi` at the truncation length.
pub fn perimeter_of_family(family: &BoundaryFamily) -> Result<f64> {
    let count = match family {
        BoundaryFamily::Samples { .. } => 0,
        _ => PERIMETER_COUNT,
    };
    Ok(perimeter_of_boundary(&BoundaryFunction::from_family(family, count)?))
}

/// Cyclic polygonal length of the samples.
pub fn perimeter_of_boundary(boundary: &BoundaryFunction) -> f64 {
    cyclic_length(boundary.samples())
}

pub(crate) fn cyclic_length(points: &[Complex64]) -> f64 {
    let n = points.len();
    (0..n).map(|j| (points[(j + 1) % n] - points[j]).norm()).sum()
}

/// True when no two samples coincide and consecutive chords do not cross.
///
/// A sampled injectivity check: it catches curves that revisit points or self-intersect.
pub fn injectivity_sample(boundary: &BoundaryFunction) -> bool {
    let p = boundary.samples();
    let n = p.len();
    let scale = p.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    for i in 0..n {
        for j in (i + 1)..n {
            if (p[i] - p[j]).norm() <= 1e-12 * scale {
                return false;
            }
        }
    }
    for i in 0..n {
        let (a0, a1) = (p[i], p[(i + 1) % n]);
        for j in (i + 2)..n {
            if (j + 1) % n == i {
                continue;
            }
            let (b0, b1) = (p[j], p[(j + 1) % n]);
            if segments_cross(a0, a1, b0, b1) {
                return false;
            }
        }
    }
    true
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn segments_cross(a0: Complex64, a1: Complex64, b0: Complex64, b1: Complex64) -> bool {
    let d1 = cross(a1 - a0, b0 - a0);
    let d2 = cross(a1 - a0, b1 - a0);
    let d3 = cross(b1 - b0, a0 - b0);
    let d4 = cross(b1 - b0, a1 - b0);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Result of a Schwarz–Pick margin scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginScan {
    pub max_margin: f64,
    pub argmax: Complex64,
    pub argmax_index: usize,
    pub field: Vec<f64>,
}

impl MarginScan {
    pub fn within(&self, tol: f64) -> bool {
        self.max_margin <= 1.0 + tol
    }
}

/// `|f_z(z)| (1 - |z|^2) / R` over `grid`. A maximum above 1 is reported, not raised.
pub fn sp_scan<M: PlanarMap + ?Sized>(map: &M, perimeter_radius: f64, grid: &[Complex64]) -> Result<MarginScan> {
    if !(perimeter_radius > 0.0) {
        return Err(Error::InvalidInput(format!("R = {perimeter_radius} must be > 0")));
    }
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty grid".into()));
    }
    let field = grid
        .par_iter()
        .map(|&z| {
            let (fz, _) = map.derivatives(z)?;
            Ok(fz.norm() * (1.0 - z.norm_sqr()) / perimeter_radius)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (argmax_index, max_margin) = argmax(field.iter().copied());
    Ok(MarginScan {
        max_margin,
        argmax: grid[argmax_index],
        argmax_index,
        field,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientationWitness {
    pub index: usize,
    pub z: Complex64,
    pub jacobian: f64,
}

/// `Ok(None)` when the Jacobian is positive on the whole grid, otherwise the first failure.
pub fn orientation_check<M: PlanarMap + ?Sized>(map: &M, grid: &[Complex64]) -> Result<Option<OrientationWitness>> {
    let jac = grid
        .par_iter()
        .map(|&z| {
            let (fz, fzb) = map.derivatives(z)?;
            Ok(fz.norm_sqr() - fzb.norm_sqr())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(jac
        .iter()
        .position(|&j| !(j > 0.0))
        .map(|index| OrientationWitness {
            index,
            z: grid[index],
            jacobian: jac[index],
        }))
}

/// Samples per circle for the profile at radius `r`: dense enough to resolve features of
/// width `1 - r`.
pub fn profile_count(r: f64) -> usize {
    let want = (64.0 / (1.0 - r)).ceil() as usize;
    want.clamp(CircleSampling::INTERIOR_COUNT, 1 << 17).next_power_of_two()
}

/// Circle means of `u(z) = |f_z(z) - f_zbar(z) conj(z)^2|` at the given radii.
///
/// `u` is the modulus of the complex harmonic function `g' - conj(h' z^2)`, so the profile
/// is nondecreasing in `r`.
pub fn circle_average_profile<M: PlanarMap + ?Sized>(map: &M, radii: &[f64]) -> Result<Vec<f64>> {
    if radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
        return Err(Error::InvalidInput("profile radii must lie in (0, 1)".into()));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("profile radii must be strictly increasing".into()));
    }
    radii
        .par_iter()
        .map(|&r| {
            let sampling = CircleSampling::new(r, profile_count(r))?;
            // domain errors depend only on |z|; surface them before averaging
            map.derivatives(sampling.point(0))?;
            Ok(circle_mean(
                |z| match map.derivatives(z) {
                    Ok((fz, fzb)) => (fz - fzb * z.conj() * z.conj()).norm(),
                    Err(_) => f64::NAN,
                },
                &sampling,
            ))
        })
        .collect()
}
