//! Image curves `t -> F(r e^{it})`: tracing, length, area, convexity and distance to the origin.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diskmaps::horner;
use crate::error::{Error, Result};
use crate::extremal::EVAL_RADIUS_CAP;
use crate::jet::PlanarMap;
use crate::poisson::cyclic_length;

/// Closed curve of images of `count` uniform points on the circle `|z| = radius`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracedCurve {
    pub points: Vec<Complex64>,
    pub radius: f64,
    pub source: String,
}

impl TracedCurve {
    pub fn from_points(points: Vec<Complex64>, radius: f64, source: impl Into<String>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidInput("a closed curve needs at least 3 points".into()));
        }
        Ok(TracedCurve {
            points,
            radius,
            source: source.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Parameter `t_j` of point `j`.
    pub fn angle(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.points.len() as f64
    }

    fn scale(&self) -> f64 {
        self.points.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub perimeter: f64,
    pub area: f64,
    pub convex: bool,
    pub dist_origin: f64,
    pub turning_number: i64,
    pub r: f64,
    pub count: usize,
}

impl CurveReport {
    pub fn of(curve: &TracedCurve) -> Result<Self> {
        let conv = convexity(curve)?;
        Ok(CurveReport {
            perimeter: perimeter(curve),
            area: area(curve),
            convex: conv.convex,
            dist_origin: dist_origin(curve),
            turning_number: conv.turning_number,
            r: curve.radius,
            count: curve.len(),
        })
    }
}

pub fn trace<M: PlanarMap + ?Sized>(map: &M, r: f64, count: usize) -> Result<TracedCurve> {
    if !(r > 0.0 && r <= EVAL_RADIUS_CAP) {
        return Err(Error::InvalidInput(format!(
            "trace radius {r} not in (0, {EVAL_RADIUS_CAP}]"
        )));
    }
    if count < 64 || !count.is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "trace count {count} must be a power of two >= 64"
        )));
    }
    let points = (0..count)
        .into_par_iter()
        .map(|j| map.eval(Complex64::from_polar(r, 2.0 * PI * j as f64 / count as f64)))
        .collect::<Result<Vec<_>>>()?;
    TracedCurve::from_points(points, r, map.source_id())
}

/// Cyclic polygonal length.
pub fn perimeter(curve: &TracedCurve) -> f64 {
    cyclic_length(&curve.points)
}

/// Signed shoelace area `1/2 ∮ (x dy - y dx)`; positive for counter-clockwise curves.
pub fn area(curve: &TracedCurve) -> f64 {
    let p = &curve.points;
    let n = p.len();
    let twice: f64 = (0..n)
        .map(|j| {
            let (a, b) = (p[j], p[(j + 1) % n]);
            a.re * b.im - a.im * b.re
        })
        .sum();
    0.5 * twice
}

/// Distance from the origin to the polygon through the curve points.
pub fn dist_origin(curve: &TracedCurve) -> f64 {
    let p = &curve.points;
    let n = p.len();
    (0..n)
        .map(|j| point_segment_distance(Complex64::new(0.0, 0.0), p[j], p[(j + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

fn point_segment_distance(q: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (q - a).norm();
    }
    let s = (((q - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (q - (a + s * d)).norm()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Convexity {
    pub convex: bool,
    /// First vertex whose turn has the wrong sign.
    pub first_violation: Option<usize>,
    pub turning_number: i64,
}

/// Discrete convexity: every turn is counter-clockwise (up to `1e-12 * scale^2`) and the
/// tangent winds exactly once.
pub fn convexity(curve: &TracedCurve) -> Result<Convexity> {
    let p = &curve.points;
    let n = p.len();
    let scale = curve.scale();
    let edge_floor = 1e-15 * scale;
    let edges: Vec<Complex64> = (0..n).map(|j| p[(j + 1) % n] - p[j]).collect();
    if let Some(index) = edges.iter().position(|e| e.norm() <= edge_floor) {
        return Err(Error::DegenerateEdge { index });
    }
    let cross_tol = -1e-12 * scale * scale;
    let mut total_turn = 0.0;
    let mut first_violation = None;
    for j in 0..n {
        let (e0, e1) = (edges[(j + n - 1) % n], edges[j]);
        let cross = e0.re * e1.im - e0.im * e1.re;
        let dot = e0.re * e1.re + e0.im * e1.im;
        total_turn += cross.atan2(dot);
        if cross < cross_tol && first_violation.is_none() {
            first_violation = Some(j);
        }
    }
    let turning_number = (total_turn / (2.0 * PI)).round() as i64;
    Ok(Convexity {
        convex: first_violation.is_none() && turning_number == 1,
        first_violation,
        turning_number,
    })
}

/// `max_j |F(w z_j) - w F(z_j)|` with `w = e^{2 pi i / fold}` over the trace samples.
pub fn rotational_symmetry_defect<M: PlanarMap + ?Sized>(
    map: &M,
    r: f64,
    count: usize,
    fold: u32,
) -> Result<f64> {
    if fold == 0 {
        return Err(Error::InvalidInput("symmetry order must be >= 1".into()));
    }
    let w = Complex64::from_polar(1.0, 2.0 * PI / fold as f64);
    let defects = (0..count)
        .into_par_iter()
        .map(|j| {
            let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / count as f64);
            Ok((map.eval(w * z)? - w * map.eval(z)?).norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(defects.into_iter().fold(0.0, f64::max))
}

/// Extremal map written through `h`: `F = R (∫_0^z (1 - t^2 h'(t)) dt + conj(h(z)))`.
///
/// With polynomial `h` every term integrates in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialExtremal {
    hcoeffs: Vec<Complex64>,
    perimeter_radius: f64,
    /// Taylor coefficients of `g = z - ∫ t^2 h'`.
    gcoeffs: Vec<Complex64>,
}

impl PolynomialExtremal {
    pub fn new(hcoeffs: Vec<Complex64>, perimeter_radius: f64) -> Result<Self> {
        if !(perimeter_radius > 0.0) {
            return Err(Error::InvalidInput(format!("R = {perimeter_radius} must be > 0")));
        }
        let deg = hcoeffs.len();
        let mut gcoeffs = vec![Complex64::new(0.0, 0.0); deg + 3];
        gcoeffs[1] = Complex64::new(1.0, 0.0);
        for (k, a) in hcoeffs.iter().enumerate().skip(1) {
            gcoeffs[k + 2] -= a * (k as f64 / (k as f64 + 2.0));
        }
        Ok(PolynomialExtremal {
            hcoeffs,
            perimeter_radius,
            gcoeffs,
        })
    }

    pub fn h_prime(&self, z: Complex64) -> Complex64 {
        self.hcoeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, c)| acc * z + c * k as f64)
    }

    /// Largest sampled `|h'(z)| / |1 - z^2 h'(z)|` on the unit circle.
    pub fn dilatation_sup(&self, count: usize) -> (Complex64, f64) {
        (0..count)
            .map(|j| {
                let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / count as f64);
                let hp = self.h_prime(z);
                (z, hp.norm() / (1.0 - z * z * hp).norm())
            })
            .fold((Complex64::new(1.0, 0.0), f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            })
    }
}

impl PlanarMap for PolynomialExtremal {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.perimeter_radius * (horner(&self.gcoeffs, z) + horner(&self.hcoeffs, z).conj()))
    }

    fn derivatives(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let hp = self.h_prime(z);
        Ok((
            self.perimeter_radius * (1.0 - z * z * hp),
            self.perimeter_radius * hp.conj(),
        ))
    }

    fn source_id(&self) -> String {
        format!("h-polynomial degree {} R={}", self.hcoeffs.len().saturating_sub(1), self.perimeter_radius)
    }
}

/// The three area values compared for the image of a polynomial-`h` extremal map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaCheck {
    /// `pi R^2 (1 - sum_{k>=0} |a_k|^2 / ((k+1)(k+2)))`. Reported for comparison, not asserted.
    pub reference_formula: f64,
    /// Shoelace area of a dense trace.
    pub oracle: f64,
    /// `pi R^2 (1 - sum_{k>=1} 2k |a_k|^2 / (k+2))`, from integrating the Jacobian termwise.
    pub derived: f64,
}

/// Trace density for the area oracle.
pub const AREA_ORACLE_COUNT: usize = 1 << 16;
const DILATATION_COUNT: usize = 4096;

pub fn area_series_check(hcoeffs: &[Complex64], perimeter_radius: f64) -> Result<AreaCheck> {
    let map = PolynomialExtremal::new(hcoeffs.to_vec(), perimeter_radius)?;
    let (z, d) = map.dilatation_sup(DILATATION_COUNT);
    if !(d < 1.0) {
        return Err(Error::HypothesisViolated(format!(
            "|h'|/|1 - z^2 h'| = {d} >= 1 at z = {z}"
        )));
    }
    let r2pi = PI * perimeter_radius * perimeter_radius;
    let reference_sum: f64 = hcoeffs
        .iter()
        .enumerate()
        .map(|(k, a)| a.norm_sqr() / ((k as f64 + 1.0) * (k as f64 + 2.0)))
        .sum();
    let derived_sum: f64 = hcoeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| 2.0 * k as f64 * a.norm_sqr() / (k as f64 + 2.0))
        .sum();
    let curve = trace(&map, EVAL_RADIUS_CAP, AREA_ORACLE_COUNT)?;
    Ok(AreaCheck {
        reference_formula: r2pi * (1.0 - reference_sum),
        oracle: area(&curve),
        derived: r2pi * (1.0 - derived_sum),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn circle(radius: f64, n: usize) -> TracedCurve {
        let pts = (0..n)
            .map(|j| Complex64::from_polar(radius, 2.0 * PI * j as f64 / n as f64))
            .collect();
        TracedCurve::from_points(pts, radius, "circle").unwrap()
    }

    #[test]
    fn circle_metrics() {
        let cur = circle(0.5, 4096);
        assert!((perimeter(&cur) - PI).abs() / PI < 1e-6);
        let cur = circle(1.0, 4096);
        assert!((area(&cur) - PI).abs() < 1e-5);
        assert!((dist_origin(&cur) - 1.0).abs() < 1e-6);
        let conv = convexity(&cur).unwrap();
        assert!(conv.convex && conv.turning_number == 1);
    }

    #[test]
    fn square_metrics() {
        let s = 2.0;
        let sq = TracedCurve::from_points(
            vec![c(-1.0, -1.0), c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0)],
            1.0,
            "square",
        )
        .unwrap();
        assert_eq!(perimeter(&sq), 4.0 * s);
        assert_eq!(area(&sq), s * s);
        assert_eq!(dist_origin(&sq), 1.0);
        // reversed orientation: negative area, turning -1
        let mut rev = sq.clone();
        rev.points.reverse();
        assert_eq!(area(&rev), -s * s);
        let conv = convexity(&rev).unwrap();
        assert!(!conv.convex);
        assert_eq!(conv.turning_number, -1);
    }

    #[test]
    fn double_winding_not_convex() {
        let pts = (0..256)
            .map(|j| Complex64::from_polar(1.0, 4.0 * PI * j as f64 / 256.0))
            .collect();
        let cur = TracedCurve::from_points(pts, 1.0, "double").unwrap();
        let conv = convexity(&cur).unwrap();
        assert_eq!(conv.turning_number, 2);
        assert!(!conv.convex);
    }

    #[test]
    fn dent_is_found() {
        let cur = TracedCurve::from_points(
            vec![c(0.0, 0.0), c(2.0, 0.0), c(2.0, 2.0), c(1.0, 0.5), c(0.0, 2.0)],
            1.0,
            "dent",
        )
        .unwrap();
        let conv = convexity(&cur).unwrap();
        assert_eq!(conv.first_violation, Some(3));
        assert!(!conv.convex);
    }

    #[test]
    fn repeated_point_is_degenerate() {
        let cur = TracedCurve::from_points(
            vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)],
            1.0,
            "dup",
        )
        .unwrap();
        assert_eq!(convexity(&cur), Err(Error::DegenerateEdge { index: 1 }));
    }

    #[test]
    fn trace_argument_checks() {
        let m = PolynomialExtremal::new(vec![], 1.0).unwrap();
        assert!(trace(&m, 1.0, 64).is_err());
        assert!(trace(&m, 0.5, 100).is_err());
        assert!(trace(&m, 0.5, 32).is_err());
        let cur = trace(&m, 0.5, 64).unwrap();
        assert!(cur.points.iter().all(|p| (p.norm() - 0.5).abs() < 1e-15));
    }

    #[test]
    fn dilatation_condition_enforced() {
        // h' = 0.9 z^0... h = 0.9 z gives |0.9| / |1 - 0.9 z^2| = 9 at z = 1
        assert!(matches!(
            area_series_check(&[c(0.0, 0.0), c(0.9, 0.0)], 1.0),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn polynomial_extremal_jet_matches_closed_form() {
        let m = PolynomialExtremal::new(vec![c(0.0, 0.0), c(0.1, 0.05), c(0.0, 0.1)], 2.0).unwrap();
        let z = c(0.3, -0.2);
        let (fz, fzb) = m.derivatives(z).unwrap();
        let (nz, nzb) = crate::numerics::wirtinger_fd(|w| m.eval(w).unwrap(), z, 1e-5);
        assert!((fz - nz).norm() < 1e-9 && (fzb - nzb).norm() < 1e-9);
    }
}
