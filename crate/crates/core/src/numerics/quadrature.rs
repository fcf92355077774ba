//! Adaptive Gauss–Legendre quadrature along straight segments of the complex plane.
//!
//! Each panel is integrated twice, with an order-`p` and an order-`p/2` Gauss–Legendre rule;
//! the difference of the two is the local error estimate. Panels whose estimate exceeds their
//! share of the tolerance are bisected, up to `max_depth` levels.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::rc::Rc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and rule sizes for [`integrate_segment`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: usize,
    pub base_order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_depth: 24,
            base_order: 16,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidInput(format!("abs_tol must be > 0, got {}", self.abs_tol)));
        }
        if !(self.rel_tol >= 0.0) {
            return Err(Error::InvalidInput(format!("rel_tol must be >= 0, got {}", self.rel_tol)));
        }
        if self.max_depth < 1 {
            return Err(Error::InvalidInput("max_depth must be >= 1".into()));
        }
        if self.base_order < 2 {
            return Err(Error::InvalidInput(format!(
                "base_order must be >= 2, got {}",
                self.base_order
            )));
        }
        Ok(())
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1);
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Newton iteration on P_n starting from the Tricomi estimate.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussRule { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

thread_local! {
    static RULE_CACHE: RefCell<Vec<Rc<GaussRule>>> = const { RefCell::new(Vec::new()) };
}

fn cached_rule(order: usize) -> Rc<GaussRule> {
    RULE_CACHE.with(|cache| {
        let mut cache = cache.borrow_mut();
        if let Some(rule) = cache.iter().find(|r| r.order() == order) {
            return Rc::clone(rule);
        }
        let rule = Rc::new(GaussRule::new(order));
        cache.push(Rc::clone(&rule));
        rule
    })
}

/// Result of a segment integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentIntegral<T> {
    pub value: T,
    pub err_estimate: f64,
    pub panels: usize,
}

/// Integrates `integrand(t) dt` along the straight segment from `z0` to `z1`.
pub fn integrate_segment<F>(
    integrand: F,
    z0: Complex64,
    z1: Complex64,
    cfg: &QuadratureConfig,
) -> Result<SegmentIntegral<Complex64>>
where
    F: Fn(Complex64) -> Complex64,
{
    let r = integrate_segment_multi(|t| [integrand(t)], z0, z1, cfg)?;
    Ok(SegmentIntegral {
        value: r.value[0],
        err_estimate: r.err_estimate,
        panels: r.panels,
    })
}

/// Integrates several integrands sharing one set of evaluation points.
///
/// Panel acceptance uses the largest component error, so every component meets the tolerance.
pub fn integrate_segment_multi<F, const N: usize>(
    integrand: F,
    z0: Complex64,
    z1: Complex64,
    cfg: &QuadratureConfig,
) -> Result<SegmentIntegral<[Complex64; N]>>
where
    F: Fn(Complex64) -> [Complex64; N],
{
    cfg.validate()?;
    let hi = cached_rule(cfg.base_order);
    let lo = cached_rule((cfg.base_order / 2).max(1));
    let dz = z1 - z0;
    let zero = [Complex64::new(0.0, 0.0); N];
    if dz == Complex64::new(0.0, 0.0) {
        return Ok(SegmentIntegral {
            value: zero,
            err_estimate: 0.0,
            panels: 0,
        });
    }

    let panel = |a: f64, b: f64| -> Panel<N> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let scale = dz * half;
        let mut q_hi = zero;
        let mut q_lo = zero;
        let mut abs_sum = 0.0;
        for (x, w) in hi.nodes.iter().zip(&hi.weights) {
            let v = integrand(z0 + dz * (mid + half * x));
            for k in 0..N {
                q_hi[k] += v[k] * *w;
                abs_sum += v[k].norm() * *w;
            }
        }
        for (x, w) in lo.nodes.iter().zip(&lo.weights) {
            let v = integrand(z0 + dz * (mid + half * x));
            for k in 0..N {
                q_lo[k] += v[k] * *w;
            }
        }
        let mut err: f64 = 0.0;
        for k in 0..N {
            q_hi[k] *= scale;
            q_lo[k] *= scale;
            err = err.max((q_hi[k] - q_lo[k]).norm());
        }
        Panel {
            a,
            b,
            value: q_hi,
            err,
            roundoff: 64.0 * f64::EPSILON * abs_sum * scale.norm(),
        }
    };

    let whole = panel(0.0, 1.0);
    let magnitude = whole.value.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let tol = cfg.abs_tol.max(cfg.rel_tol * magnitude);

    // Global error control: split the panel with the largest estimate until the summed
    // estimate meets the tolerance. Panels at max depth or at the roundoff floor are frozen.
    let mut active: BinaryHeap<Ranked<N>> = BinaryHeap::new();
    let mut frozen: Vec<Panel<N>> = Vec::new();
    let mut err_total = whole.err;
    let mut seq = 0usize;
    let mut deepest = 0usize;
    active.push(Ranked { panel: whole, depth: 0, seq });
    while err_total > tol {
        let Some(Ranked { panel: p, depth, .. }) = active.pop() else {
            break;
        };
        if depth >= cfg.max_depth || p.err <= p.roundoff {
            frozen.push(p);
            continue;
        }
        let m = 0.5 * (p.a + p.b);
        let left = panel(p.a, m);
        let right = panel(m, p.b);
        err_total += left.err + right.err - p.err;
        deepest = deepest.max(depth + 1);
        for child in [left, right] {
            seq += 1;
            active.push(Ranked { panel: child, depth: depth + 1, seq });
        }
    }

    let mut all: Vec<Panel<N>> = frozen;
    all.extend(active.into_iter().map(|r| r.panel));
    all.sort_by(|x, y| x.a.total_cmp(&y.a));
    let err_estimate: f64 = all.iter().map(|p| p.err).sum();
    let mut value = zero;
    for p in &all {
        for (v, pv) in value.iter_mut().zip(&p.value) {
            *v += pv;
        }
    }
    let final_tol = tol.max(cfg.rel_tol * value.iter().map(|v| v.norm()).fold(0.0, f64::max));
    if err_estimate > final_tol {
        return Err(Error::NonConvergence {
            depth: deepest,
            err_estimate,
            tol: final_tol,
        });
    }
    Ok(SegmentIntegral {
        value,
        err_estimate,
        panels: all.len(),
    })
}

struct Ranked<const N: usize> {
    panel: Panel<N>,
    depth: usize,
    seq: usize,
}

impl<const N: usize> PartialEq for Ranked<N> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<const N: usize> Eq for Ranked<N> {}

impl<const N: usize> PartialOrd for Ranked<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const N: usize> Ord for Ranked<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        // largest error first; earlier panels win ties
        self.panel
            .err
            .total_cmp(&other.panel.err)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [Complex64; N],
    err: f64,
    roundoff: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gauss_rule_integrates_polynomials_exactly() {
        for n in [2usize, 3, 8, 16, 31] {
            let rule = GaussRule::new(n);
            let wsum: f64 = rule.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-14, "n={n} weights sum {wsum}");
            // degree 2n-1 is integrated exactly
            let deg = 2 * n - 2;
            let q: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(x, w)| w * x.powi(deg as i32))
                .sum();
            let exact = 2.0 / (deg as f64 + 1.0);
            assert!((q - exact).abs() < 1e-13, "n={n} got {q} want {exact}");
        }
    }

    #[test]
    fn constant_along_diagonal() {
        let r = integrate_segment(|_| c(1.0, 0.0), c(0.0, 0.0), c(1.0, 1.0), &Default::default())
            .unwrap();
        assert!((r.value - c(1.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn linear_on_unit_interval() {
        let r = integrate_segment(|t| t, c(0.0, 0.0), c(1.0, 0.0), &Default::default()).unwrap();
        assert!((r.value - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn empty_segment_is_zero() {
        let r = integrate_segment(|t| t, c(0.3, 0.1), c(0.3, 0.1), &Default::default()).unwrap();
        assert_eq!(r.value, c(0.0, 0.0));
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = QuadratureConfig {
            base_order: 1,
            ..Default::default()
        };
        assert!(matches!(
            integrate_segment(|t| t, c(0.0, 0.0), c(1.0, 0.0), &cfg),
            Err(Error::InvalidInput(_))
        ));
        let cfg = QuadratureConfig {
            abs_tol: 0.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = QuadratureConfig {
            max_depth: 0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn pole_on_segment_end_does_not_converge() {
        // 1/(1+t^2) has a pole at i; integrate straight into it.
        let cfg = QuadratureConfig {
            max_depth: 8,
            ..Default::default()
        };
        let r = integrate_segment(
            |t| 1.0 / (1.0 + t * t),
            c(0.0, 0.0),
            c(0.0, 1.0 - 1e-12),
            &cfg,
        );
        assert!(matches!(r, Err(Error::NonConvergence { .. })), "{r:?}");
    }

    #[test]
    fn arctan_reference() {
        // ∫_0^x dt/(1+t^2) = atan(x), including complex endpoints: atan(z).
        let z = c(0.6, 0.5);
        let r = integrate_segment(|t| 1.0 / (1.0 + t * t), c(0.0, 0.0), z, &Default::default())
            .unwrap();
        assert!((r.value - z.atan()).norm() < 1e-13, "{} vs {}", r.value, z.atan());
    }
}
