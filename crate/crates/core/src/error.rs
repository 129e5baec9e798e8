use alloc::string::String;
use core::fmt;

/// Errors produced by the geometry, solver, derivative and validation routines.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A polygon failed validation (too few vertices, self-intersection, ...).
    InvalidPolygon(&'static str),
    /// A boundary chain failed validation (open chain, bad piece, ...).
    InvalidRegion(&'static str),
    /// The operation requires a convex polygon.
    NotConvex,
    /// A scalar argument was out of range.
    InvalidArgument(&'static str),
    /// The grid solver failed to converge or produced an empty set.
    Solver {
        reason: &'static str,
        outer_iterations: usize,
        inner_iterations: usize,
        residual: f64,
    },
    /// The boundary has a tangent discontinuity where a smooth boundary is required.
    Corner { piece: usize, angle: f64 },
    /// The perturbation step is too large for `x + tV(x)` to stay a diffeomorphism.
    PerturbationTooLarge { t: f64, jacobian_bound: f64 },
    /// A perturbed solve failed during a finite-difference sweep.
    Perturbed { t: f64, source: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidPolygon(why) => write!(f, "invalid polygon: {why}"),
            Error::InvalidRegion(why) => write!(f, "invalid boundary region: {why}"),
            Error::NotConvex => write!(
                f,
                "polygon is not convex; the exact solver only handles convex domains (use the grid solver)"
            ),
            Error::InvalidArgument(why) => write!(f, "invalid argument: {why}"),
            Error::Solver {
                reason,
                outer_iterations,
                inner_iterations,
                residual,
            } => write!(
                f,
                "grid solver failed: {reason} (outer {outer_iterations}, inner {inner_iterations}, residual {residual:e})"
            ),
            Error::Corner { piece, angle } => write!(
                f,
                "boundary has a corner before piece {piece} (turn {angle:.3e} rad); the curvature form needs a C^1 boundary"
            ),
            Error::PerturbationTooLarge { t, jacobian_bound } => write!(
                f,
                "|t| * max|DV| = {:.3} exceeds 0.5 at t = {t:e}",
                libm::fabs(*t) * jacobian_bound
            ),
            Error::Perturbed { t, source } => write!(f, "solve failed at t = {t:e}: {source}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
