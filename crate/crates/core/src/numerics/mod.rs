//! Quadrature, circle averages, discrete Fourier analysis and a finite-difference
//! Wirtinger oracle.

mod circle;
mod fourier;
mod quadrature;
mod wirtinger;

pub use circle::{circle_mean, CircleSampling};
pub use fourier::{fourier_analyze, fourier_synthesize, FourierCoefficients};
pub use quadrature::{
    integrate_segment, integrate_segment_multi, GaussRule, QuadratureConfig, SegmentIntegral,
};
pub use wirtinger::wirtinger_fd;
