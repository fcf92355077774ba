//! Extremal harmonic diffeomorphisms of the unit disk.
//!
//! For a holomorphic self-map `mu` of the disk and `R > 0`, the harmonic map
//!
//! ```text
//! F(z) = R ( ∫_0^z dt / (1 + t² mu(t))  +  conj ∫_0^z mu(t) dt / (1 + t² mu(t)) )
//! ```
//!
//! is a diffeomorphism onto a convex domain of perimeter `2 pi R`, and attains equality in
//! `|∂f(z)| <= R / (1 - |z|^2)` at the origin. This crate evaluates these maps, builds general
//! harmonic maps from boundary data, and checks the associated identities and inequalities
//! numerically.

// `!(x <= tol)` style comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod diskmaps;
pub mod error;
pub mod extremal;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod jet;
pub mod numerics;
pub mod poisson;
pub mod verify;

pub use diskmaps::DiskSelfMap;
pub use error::{Error, Result};
pub use extremal::{ExtremalSpec, ShiftConvention};
pub use geometry::{CurveReport, TracedCurve};
pub use grid::PolarGrid;
pub use jet::{MapJet, PlanarMap};
pub use poisson::{BoundaryFamily, BoundaryFunction, HarmonicSeries};
