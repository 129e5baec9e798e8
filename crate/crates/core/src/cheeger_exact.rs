//! Exact Cheeger constant and Cheeger set of a convex polygon.
//!
//! For convex `P` the Cheeger set is `P_{-r} + B_r`, where `P_{-r}` is the
//! inner parallel set and `r` is the unique root of `|P_{-r}| = pi r^2`;
//! the constant is `1 / r`.

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{
    erode_prepared, eroded_area, inradius_prepared, minkowski_sum_disk, ArcBoundaryRegion, Polygon,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverTag {
    Exact,
    Grid,
}

impl SolverTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverTag::Exact => "exact",
            SolverTag::Grid => "grid",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// Bisection steps (exact) or Dinkelbach iterations (grid).
    pub iterations: usize,
    /// Total primal-dual iterations (grid only).
    pub inner_iterations: usize,
    /// `|f(r)| / |P|` for the exact solver, final relative duality gap for the grid solver.
    pub residual: f64,
    /// Two near-optimal level sets differ substantially (grid only).
    pub possible_non_uniqueness: bool,
}

/// First eigenvalue of the 1-Laplacian together with a set realizing it.
#[derive(Clone, Debug, PartialEq)]
pub struct CheegerResult {
    pub lambda: f64,
    /// `1 / lambda`.
    pub radius: f64,
    pub cheeger_set: ArcBoundaryRegion,
    pub set_area: f64,
    pub set_perimeter: f64,
    pub solver_tag: SolverTag,
    pub diagnostics: Diagnostics,
}

/// Exact solve for a convex polygon by bisection on `r -> |P_{-r}| - pi r^2`
/// over `[0, inradius]`.
pub fn cheeger_convex(polygon: &Polygon) -> Result<CheegerResult> {
    if !polygon.is_convex() {
        return Err(Error::NotConvex);
    }
    let base = polygon.simplified(1e-12)?;
    let excess = |r: f64| eroded_area(&base, r) - PI * r * r;

    let mut lo = 0.0;
    let mut hi = inradius_prepared(&base);
    if !(hi > 0.0) {
        return Err(Error::InvalidPolygon(
            "degenerate polygon with zero inradius",
        ));
    }
    let mut iterations = 0;
    while iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let f = excess(mid);
        if f > 0.0 {
            lo = mid;
        } else if f < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            break;
        }
    }
    let radius = lo;
    let kernel = erode_prepared(&base, radius).ok_or(Error::InvalidPolygon(
        "inner parallel set vanished at the Cheeger radius",
    ))?;
    let cheeger_set = minkowski_sum_disk(&kernel, radius)?;
    Ok(CheegerResult {
        lambda: 1.0 / radius,
        radius,
        set_area: cheeger_set.area(),
        set_perimeter: cheeger_set.perimeter(),
        cheeger_set,
        solver_tag: SolverTag::Exact,
        diagnostics: Diagnostics {
            iterations,
            inner_iterations: 0,
            residual: excess(radius).abs() / base.area(),
            possible_non_uniqueness: false,
        },
    })
}

/// Outcome of the calibrability test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Calibrability {
    pub calibrable: bool,
    pub max_curvature: f64,
    /// `perimeter / area`.
    pub ratio: f64,
    /// First joint with a tangent jump, if any.
    pub corner: Option<usize>,
}

/// Tangent jumps above this many radians count as corners.
pub const CORNER_TOL: f64 = 1e-9;

/// A convex segment/arc region is its own Cheeger set when its largest
/// curvature does not exceed `perimeter / area`; corners fail the test.
pub fn calibrability(region: &ArcBoundaryRegion) -> Calibrability {
    let ratio = region.perimeter() / region.area();
    let max_curvature = region.max_curvature();
    let corner = region.first_corner(CORNER_TOL).map(|(k, _)| k);
    Calibrability {
        calibrable: corner.is_none() && max_curvature <= ratio * (1.0 + 1e-10),
        max_curvature,
        ratio,
        corner,
    }
}

pub fn is_calibrable(region: &ArcBoundaryRegion) -> bool {
    calibrability(region).calibrable
}
