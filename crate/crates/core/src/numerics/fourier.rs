//! Discrete Fourier analysis of uniform samples on a circle.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Fourier coefficients `c_k`, `k = -N/2 .. N/2 - 1`, of `N` uniform samples
/// `s_j = sum_k c_k e^{i k t_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    /// Stored in index order, `coeffs[0]` is `c_{-N/2}`.
    coeffs: Vec<Complex64>,
}

impl FourierCoefficients {
    pub fn from_ordered(coeffs: Vec<Complex64>) -> Result<Self> {
        check_len(coeffs.len())?;
        Ok(FourierCoefficients { coeffs })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_index(&self) -> i64 {
        -(self.coeffs.len() as i64 / 2)
    }

    pub fn max_index(&self) -> i64 {
        self.coeffs.len() as i64 / 2 - 1
    }

    /// Coefficient `c_k`, zero outside the stored range.
    pub fn get(&self, k: i64) -> Complex64 {
        if k < self.min_index() || k > self.max_index() {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(k - self.min_index()) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let lo = self.min_index();
        self.coeffs.iter().enumerate().map(move |(j, c)| (lo + j as i64, *c))
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }
}

fn check_len(n: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::BadLength(n));
    }
    Ok(())
}

pub fn fourier_analyze(samples: &[Complex64]) -> Result<FourierCoefficients> {
    let n = samples.len();
    check_len(n)?;
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let half = n / 2;
    // FFT output index m holds frequency m (m < N/2) or m - N (m >= N/2).
    let coeffs = (0..n)
        .map(|j| buf[(j + half) % n] * scale)
        .collect();
    Ok(FourierCoefficients { coeffs })
}

/// Inverse of [`fourier_analyze`]: samples at `t_j = 2 pi j / N`.
pub fn fourier_synthesize(coeffs: &FourierCoefficients) -> Vec<Complex64> {
    let n = coeffs.len();
    let half = n / 2;
    let mut buf: Vec<Complex64> = (0..n).map(|m| coeffs.coeffs[(m + half) % n]).collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn nodes(n: usize) -> impl Iterator<Item = f64> {
        (0..n).map(move |j| 2.0 * PI * j as f64 / n as f64)
    }

    #[test]
    fn single_mode() {
        let s: Vec<_> = nodes(16).map(|t| Complex64::from_polar(1.0, t)).collect();
        let c = fourier_analyze(&s).unwrap();
        for (k, v) in c.iter() {
            let want = if k == 1 { 1.0 } else { 0.0 };
            assert!((v - want).norm() < 1e-14, "k={k} {v}");
        }
    }

    #[test]
    fn constant_samples() {
        let v = Complex64::new(0.3, -1.1);
        let c = fourier_analyze(&[v; 32]).unwrap();
        assert!((c.get(0) - v).norm() < 1e-15);
        assert!(c.iter().filter(|(k, _)| *k != 0).all(|(_, x)| x.norm() < 1e-15));
    }

    #[test]
    fn two_modes() {
        let s: Vec<_> = nodes(64)
            .map(|t| Complex64::from_polar(1.0, 2.0 * t) + 0.3 * Complex64::from_polar(1.0, -t))
            .collect();
        let c = fourier_analyze(&s).unwrap();
        assert!((c.get(2) - 1.0).norm() < 1e-14);
        assert!((c.get(-1) - 0.3).norm() < 1e-14);
        assert_eq!(c.min_index(), -32);
        assert_eq!(c.max_index(), 31);
        assert_eq!(c.get(40), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn bad_length() {
        assert_eq!(fourier_analyze(&[Complex64::new(1.0, 0.0); 12]), Err(Error::BadLength(12)));
        assert_eq!(fourier_analyze(&[]), Err(Error::BadLength(0)));
    }
}
