//! Finite-difference checks of the shape derivative.
//!
//! The domain itself is pushed through `x + tV(x)` and re-solved at
//! `t = +-t0 / 2^k`; central slopes are Richardson-extrapolated and compared
//! with the boundary formula evaluated on the unperturbed Cheeger set. No
//! code is shared with the quadrature path beyond the field evaluation.

use alloc::format;
use alloc::vec::Vec;

use crate::cheeger_exact::{cheeger_convex, CheegerResult};
use crate::cheeger_grid::{cheeger_grid_polygon, GridOptions};
use crate::error::{Error, Result};
use crate::fields::{Mat2, PolynomialVectorField};
use crate::geometry::{resample_boundary, Point2, Polygon, Vector2};
use crate::shape_derivative::derivative_general;

/// Which solver recomputes the constant on perturbed domains.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Backend {
    Exact,
    Grid(GridOptions),
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Grid(_) => "grid",
        }
    }

    /// Pass tolerance factor, multiplied by `max(1, |formula|)`.
    pub fn tolerance_factor(&self) -> f64 {
        match self {
            Backend::Exact => 1e-3,
            Backend::Grid(_) => 5e-2,
        }
    }

    pub fn solve(&self, polygon: &Polygon) -> Result<CheegerResult> {
        match self {
            Backend::Exact => cheeger_convex(polygon),
            Backend::Grid(opts) => cheeger_grid_polygon(polygon, opts).map(|g| g.result),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FDConfig {
    /// Largest step.
    pub t0: f64,
    /// Number of halvings of `t0`, each giving one central slope.
    pub levels: usize,
    /// Boundary points before mapping through a non-affine field.
    pub resample_n: usize,
    pub backend: Backend,
}

impl Default for FDConfig {
    fn default() -> Self {
        Self {
            t0: 1e-2,
            levels: 3,
            resample_n: 2048,
            backend: Backend::Exact,
        }
    }
}

impl FDConfig {
    pub fn check(&self) -> Result<()> {
        if !(self.t0 > 0.0 && self.t0.is_finite()) {
            return Err(Error::InvalidArgument("t0 must be positive"));
        }
        if self.levels == 0 {
            return Err(Error::InvalidArgument("levels must be at least 1"));
        }
        if self.resample_n < 64 {
            return Err(Error::InvalidArgument("resample_n must be at least 64"));
        }
        Ok(())
    }
}

/// Constant on one perturbed domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaSample {
    pub t: f64,
    pub lambda: f64,
}

/// Central difference at step `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CentralSlope {
    pub t: f64,
    pub slope: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub base_lambda: f64,
    pub formula_value: f64,
    /// Central slope at the smallest step.
    pub fd_slope: f64,
    pub richardson_slope: f64,
    /// One per level, largest step first.
    pub central_slopes: Vec<CentralSlope>,
    /// Sorted by `t`.
    pub samples: Vec<LambdaSample>,
    /// `max_t |lambda_t - lambda|`.
    pub continuity_gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Largest spectral norm of `DV` over the boundary points and a coarse grid
/// of interior points.
fn jacobian_bound(polygon: &Polygon, boundary: &[Point2], field: &PolynomialVectorField) -> f64 {
    let mut bound = boundary
        .iter()
        .map(|p| field.jacobian(*p).spectral_norm())
        .fold(0.0, f64::max);
    let (lo, hi) = polygon.bbox();
    const SAMPLES: usize = 16;
    for j in 0..SAMPLES {
        for i in 0..SAMPLES {
            let p = Point2::new(
                lo.x + (hi.x - lo.x) * (i as f64 + 0.5) / SAMPLES as f64,
                lo.y + (hi.y - lo.y) * (j as f64 + 0.5) / SAMPLES as f64,
            );
            if polygon.contains(p) {
                bound = bound.max(field.jacobian(p).spectral_norm());
            }
        }
    }
    bound
}

/// Image of `polygon` under `x + tV(x)`.
///
/// Non-affine fields bend edges, so the boundary is first resampled to
/// `resample_n` points; affine images are exact from the vertices alone.
/// With `require_convex` a non-convex image is an error.
pub fn perturb_domain(
    polygon: &Polygon,
    field: &PolynomialVectorField,
    t: f64,
    resample_n: usize,
    require_convex: bool,
) -> Result<Polygon> {
    let source = if field.is_affine() {
        polygon.clone()
    } else {
        resample_boundary(polygon, resample_n)
    };
    let bound = jacobian_bound(polygon, source.vertices(), field);
    if libm::fabs(t) * bound > 0.5 {
        return Err(Error::PerturbationTooLarge {
            t,
            jacobian_bound: bound,
        });
    }
    let image = source.map(|p| p + field.eval(p) * t)?;
    if require_convex && !image.is_convex() {
        return Err(Error::NotConvex);
    }
    Ok(image)
}

fn perturbed_lambda(
    polygon: &Polygon,
    field: &PolynomialVectorField,
    t: f64,
    cfg: &FDConfig,
) -> Result<f64> {
    let require_convex = matches!(cfg.backend, Backend::Exact);
    perturb_domain(polygon, field, t, cfg.resample_n, require_convex)
        .and_then(|image| cfg.backend.solve(&image))
        .map(|res| res.lambda)
        .map_err(|e| Error::Perturbed {
            t,
            source: format!("{e}"),
        })
}

/// Richardson extrapolation of central slopes at steps `t, t/2, t/4, ...`
/// (error expansion in even powers of `t`).
pub fn richardson(slopes: &[f64]) -> f64 {
    let mut table: Vec<f64> = slopes.to_vec();
    let mut factor = 4.0;
    for level in 1..slopes.len() {
        for k in (level..slopes.len()).rev() {
            table[k] = table[k] + (table[k] - table[k - 1]) / (factor - 1.0);
        }
        factor *= 4.0;
    }
    *table.last().unwrap_or(&f64::NAN)
}

/// Compares the boundary formula at `t = 0` with finite differences of
/// the constant over the perturbed family.
pub fn validate_derivative(
    polygon: &Polygon,
    field: &PolynomialVectorField,
    cfg: &FDConfig,
) -> Result<ValidationReport> {
    cfg.check()?;
    if matches!(cfg.backend, Backend::Exact) && !polygon.is_convex() {
        return Err(Error::NotConvex);
    }
    let base = cfg.backend.solve(polygon)?;
    let formula_value = derivative_general(&base.cheeger_set, base.lambda, field)?;

    let mut samples = Vec::with_capacity(2 * cfg.levels);
    let mut central_slopes = Vec::with_capacity(cfg.levels);
    for k in 0..cfg.levels {
        let t = cfg.t0 / libm::pow(2.0, k as f64);
        let plus = perturbed_lambda(polygon, field, t, cfg)?;
        let minus = perturbed_lambda(polygon, field, -t, cfg)?;
        samples.push(LambdaSample { t, lambda: plus });
        samples.push(LambdaSample {
            t: -t,
            lambda: minus,
        });
        central_slopes.push(CentralSlope {
            t,
            slope: (plus - minus) / (2.0 * t),
        });
    }
    samples.sort_by(|a, b| a.t.total_cmp(&b.t));
    let slopes: Vec<f64> = central_slopes.iter().map(|c| c.slope).collect();
    let richardson_slope = richardson(&slopes);
    let continuity_gap = samples
        .iter()
        .map(|s| (s.lambda - base.lambda).abs())
        .fold(0.0, f64::max);
    let tolerance = cfg.backend.tolerance_factor() * formula_value.abs().max(1.0);
    Ok(ValidationReport {
        base_lambda: base.lambda,
        formula_value,
        fd_slope: *slopes.last().unwrap_or(&f64::NAN),
        richardson_slope,
        central_slopes,
        samples,
        continuity_gap,
        tolerance,
        pass: (richardson_slope - formula_value).abs() <= tolerance,
    })
}

/// Residuals of the first-order expansions of `det(I + tDV)` and
/// `|(I + tDV)^{-1} nu|` at one step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionResidual {
    pub t: f64,
    /// `det(I + tDV) - (1 + t div V)`.
    pub det: f64,
    /// `|(I + tDV)^{-1} nu| - (1 - t (nu, DV nu))`.
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionCheck {
    pub residuals: Vec<ExpansionResidual>,
    /// Per consecutive pair: residual ratio rescaled to a halving of `t`
    /// (4 for exact second-order decay); `None` when both residuals vanish.
    pub det_ratios: Vec<Option<f64>>,
    pub norm_ratios: Vec<Option<f64>>,
}

/// Residuals at or below this are treated as exactly zero.
pub const EXACT_ZERO: f64 = 1e-15;
/// Accepted window for the halving ratio.
pub const RATIO_WINDOW: (f64, f64) = (3.5, 4.5);

impl ExpansionCheck {
    /// Every ratio lies in [`RATIO_WINDOW`] or the residual pair vanishes.
    pub fn is_second_order(&self) -> bool {
        let ok = |r: &Option<f64>| r.is_none_or(|r| r >= RATIO_WINDOW.0 && r <= RATIO_WINDOW.1);
        self.det_ratios.iter().all(ok) && self.norm_ratios.iter().all(ok)
    }
}

fn halving_ratio(big: f64, small: f64, t_big: f64, t_small: f64) -> Option<f64> {
    if big.abs() <= EXACT_ZERO && small.abs() <= EXACT_ZERO {
        return None;
    }
    let q = t_big / t_small;
    Some(big / small * 4.0 / (q * q))
}

/// Measures how fast the expansion residuals vanish at the point `p` for a
/// fixed unit vector `nu` and a strictly decreasing list of positive steps.
pub fn expansion_check(
    field: &PolynomialVectorField,
    p: Point2,
    nu: Vector2,
    t_list: &[f64],
) -> Result<ExpansionCheck> {
    if t_list.is_empty() || t_list.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::InvalidArgument("steps must be positive"));
    }
    if t_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("steps must be strictly decreasing"));
    }
    let nu = nu.normalized();
    let dv = field.jacobian(p);
    let div = dv.trace();
    let stretch = dv.bilinear(nu, nu);
    let residuals = t_list
        .iter()
        .map(|&t| {
            let m = Mat2::IDENTITY.plus(&dv.scaled(t));
            let inv = m.inverse().ok_or(Error::PerturbationTooLarge {
                t,
                jacobian_bound: dv.spectral_norm(),
            })?;
            Ok(ExpansionResidual {
                t,
                det: m.det() - (1.0 + t * div),
                norm: inv.apply(nu).norm() - (1.0 - t * stretch),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs = residuals.windows(2);
    let det_ratios = pairs
        .clone()
        .map(|w| halving_ratio(w[0].det, w[1].det, w[0].t, w[1].t))
        .collect();
    let norm_ratios = pairs
        .map(|w| halving_ratio(w[0].norm, w[1].norm, w[0].t, w[1].t))
        .collect();
    Ok(ExpansionCheck {
        residuals,
        det_ratios,
        norm_ratios,
    })
}
