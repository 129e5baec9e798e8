//! Cheeger constants (first eigenvalue of the 1-Laplacian) of planar
//! domains, their Cheeger sets, and the first variation of the constant
//! under perturbations `x + tV(x)`.
//!
//! - [`geometry`]: polygons, segment/arc regions, erosion, Minkowski sums.
//! - [`fields`]: polynomial deformation fields with exact Jacobians.
//! - [`cheeger_exact`]: exact solver for convex polygons.
//! - [`cheeger_grid`]: total-variation solver on a raster for general polygons.
//! - [`shape_derivative`]: boundary quadratures of the derivative formulas.
//! - [`validation`]: finite-difference checks of those formulas.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cheeger_exact;
pub mod cheeger_grid;
mod error;
pub mod fields;
pub mod geometry;
pub mod quadrature;
pub mod shape_derivative;
pub mod validation;

pub use cheeger_exact::{
    cheeger_convex, is_calibrable, Calibrability, CheegerResult, Diagnostics, SolverTag,
};
pub use error::{Error, Result};
pub use fields::PolynomialVectorField;
pub use geometry::{ArcBoundaryRegion, BoundaryPiece, Point2, Polygon, Vector2};
