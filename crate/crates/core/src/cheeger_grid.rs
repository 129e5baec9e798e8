//! Cheeger constant of a general polygon on a uniform raster.
//!
//! The domain is padded with cells outside the mask, so the discrete total
//! variation over the padded grid already contains the boundary term of a
//! function extended by zero. A Dinkelbach loop alternates a primal-dual
//! (Chambolle-Pock) solve of
//!
//! ```text
//! min_{0 <= u <= 1, supp u in mask}  TV(u) - lambda_k * h^2 * sum(u)
//! ```
//!
//! with the update `lambda_{k+1} = TV(u) / (h^2 sum u)`, the discrete
//! Rayleigh quotient of the relaxed minimizer. The quotient of a relaxed `u`
//! is used rather than the perimeter/area ratio of its binary level sets:
//! forward-difference TV of a binary indicator measures an anisotropic
//! perimeter (up to `sqrt 2` too long on diagonal staircases), an O(1) bias
//! that does not vanish under refinement, whereas relaxed minimizers smear
//! oblique edges over a few cells and their quotient converges to the
//! Euclidean value. The level sets of `u` are still thresholded at evenly
//! spaced levels; the one with the best binary ratio is returned as the
//! Cheeger-set estimate and traced into a polygon.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::cheeger_exact::{CheegerResult, Diagnostics, SolverTag};
use crate::error::{Error, Result};
use crate::geometry::{ArcBoundaryRegion, Point2, Polygon};

/// Cells of padding on every side of the raster.
pub const DEFAULT_MARGIN: usize = 2;

/// A polygon rasterized onto cell centers, padded with empty cells.
#[derive(Clone, Debug, PartialEq)]
pub struct GridDomain {
    h: f64,
    nx: usize,
    ny: usize,
    /// Lower-left corner of cell `(0, 0)`.
    origin: Point2,
    mask: Vec<bool>,
}

impl GridDomain {
    /// Wraps a mask of `nx * ny` cells stored row by row (`x` fastest).
    pub fn new(h: f64, nx: usize, ny: usize, origin: Point2, mask: Vec<bool>) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidArgument("grid spacing must be positive"));
        }
        if mask.len() != nx * ny {
            return Err(Error::InvalidArgument("mask size does not match nx * ny"));
        }
        if nx < 2 * DEFAULT_MARGIN + 1 || ny < 2 * DEFAULT_MARGIN + 1 {
            return Err(Error::InvalidArgument("grid too small for its margin"));
        }
        for j in 0..ny {
            for i in 0..nx {
                let near_edge = i < DEFAULT_MARGIN
                    || j < DEFAULT_MARGIN
                    || i >= nx - DEFAULT_MARGIN
                    || j >= ny - DEFAULT_MARGIN;
                if near_edge && mask[i + nx * j] {
                    return Err(Error::InvalidArgument("mask reaches into the zero margin"));
                }
            }
        }
        if !mask.iter().any(|m| *m) {
            return Err(Error::InvalidArgument("empty mask"));
        }
        Ok(Self {
            h,
            nx,
            ny,
            origin,
            mask,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn origin(&self) -> Point2 {
        self.origin
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn cell_center(&self, i: usize, j: usize) -> Point2 {
        self.origin + Point2::new((i as f64 + 0.5) * self.h, (j as f64 + 0.5) * self.h)
    }

    pub fn inside_count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    /// `h^2` times the number of masked cells.
    pub fn mask_area(&self) -> f64 {
        self.h * self.h * self.inside_count() as f64
    }

    /// Indicator of the mask as a field.
    pub fn indicator(&self) -> GridField {
        self.field_from_set(&self.mask)
    }

    fn field_from_set(&self, set: &[bool]) -> GridField {
        GridField {
            h: self.h,
            nx: self.nx,
            ny: self.ny,
            values: set.iter().map(|b| if *b { 1.0 } else { 0.0 }).collect(),
        }
    }
}

/// Real values on the cells of a [`GridDomain`].
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl GridField {
    pub fn zeros(h: f64, nx: usize, ny: usize) -> Self {
        Self {
            h,
            nx,
            ny,
            values: vec![0.0; nx * ny],
        }
    }
}

/// Rasterizes with the default two-cell margin.
pub fn rasterize(polygon: &Polygon, h: f64) -> Result<GridDomain> {
    rasterize_with_margin(polygon, h, DEFAULT_MARGIN)
}

/// Marks cells whose centers lie inside `polygon`; the grid starts at the
/// polygon's bounding-box corner minus `margin` cells.
pub fn rasterize_with_margin(polygon: &Polygon, h: f64, margin: usize) -> Result<GridDomain> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument("grid spacing must be positive"));
    }
    if h > polygon.diameter() / 8.0 {
        return Err(Error::InvalidArgument("grid spacing exceeds diameter / 8"));
    }
    if margin < DEFAULT_MARGIN {
        return Err(Error::InvalidArgument("margin must be at least two cells"));
    }
    let (lo, hi) = polygon.bbox();
    let cells_x = libm::ceil((hi.x - lo.x) / h - 1e-9).max(1.0) as usize;
    let cells_y = libm::ceil((hi.y - lo.y) / h - 1e-9).max(1.0) as usize;
    let nx = cells_x + 2 * margin;
    let ny = cells_y + 2 * margin;
    let origin = lo - Point2::new(margin as f64 * h, margin as f64 * h);
    let mut mask = vec![false; nx * ny];
    for j in margin..ny - margin {
        let y = origin.y + (j as f64 + 0.5) * h;
        // Scanline crossings, even-odd.
        let mut xs: Vec<f64> = polygon
            .edges()
            .filter(|(a, b)| (a.y > y) != (b.y > y))
            .map(|(a, b)| a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y))
            .collect();
        xs.sort_by(f64::total_cmp);
        for pair in xs.chunks_exact(2) {
            for i in margin..nx - margin {
                let x = origin.x + (i as f64 + 0.5) * h;
                if x > pair[0] && x < pair[1] {
                    mask[i + nx * j] = true;
                }
            }
        }
    }
    if !mask.iter().any(|m| *m) {
        return Err(Error::InvalidArgument("rasterized mask is empty"));
    }
    GridDomain::new(h, nx, ny, origin, mask)
}

/// Isotropic discrete total variation with forward differences over the
/// whole padded grid: `sum h * sqrt(dx^2 + dy^2)` with unscaled differences.
pub fn total_variation(u: &GridField) -> f64 {
    let (nx, ny) = (u.nx, u.ny);
    let v = &u.values;
    let mut acc = 0.0;
    for j in 0..ny {
        for i in 0..nx {
            let k = i + nx * j;
            let dx = if i + 1 < nx { v[k + 1] - v[k] } else { 0.0 };
            let dy = if j + 1 < ny { v[k + nx] - v[k] } else { 0.0 };
            if dx != 0.0 || dy != 0.0 {
                acc += libm::sqrt(dx * dx + dy * dy);
            }
        }
    }
    u.h * acc
}

/// Total variation of a set's indicator.
fn set_perimeter(set: &[bool], nx: usize, ny: usize, h: f64) -> f64 {
    let mut acc = 0.0;
    for j in 0..ny {
        for i in 0..nx {
            let k = i + nx * j;
            let here = set[k] as i32;
            let dx = if i + 1 < nx {
                set[k + 1] as i32 - here
            } else {
                0
            };
            let dy = if j + 1 < ny {
                set[k + nx] as i32 - here
            } else {
                0
            };
            acc += match dx * dx + dy * dy {
                0 => 0.0,
                1 => 1.0,
                _ => core::f64::consts::SQRT_2,
            };
        }
    }
    h * acc
}

/// Solver options.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridOptions {
    /// Grid spacing used when a polygon is rasterized.
    pub h: f64,
    /// Dinkelbach iterations.
    pub max_outer: usize,
    /// Primal-dual iterations per Dinkelbach step.
    pub max_inner: usize,
    /// Inner stopping tolerance on the duality gap, relative to the mask perimeter.
    pub tol: f64,
    /// Threshold levels per step.
    pub levels: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            h: 1.0 / 128.0,
            max_outer: 40,
            max_inner: 5000,
            tol: 1e-3,
            levels: 64,
        }
    }
}

/// Grid solve output: the common result plus raster data.
#[derive(Clone, Debug, PartialEq)]
pub struct GridCheegerResult {
    pub result: CheegerResult,
    /// Best binary level set on the padded raster (its traced contour is
    /// `result.cheeger_set`; `result.set_area` and `result.set_perimeter`
    /// are the contour's).
    pub level_set: Vec<bool>,
    /// `lambda_0, lambda_1, ...` of the Dinkelbach loop (non-increasing).
    pub lambda_history: Vec<f64>,
    /// The relaxed iterate realizing `result.lambda = TV(u) / (h^2 sum u)`.
    pub relaxed: GridField,
}

/// Relative ratio window and set-difference threshold for flagging non-uniqueness.
const TIE_RATIO: f64 = 1e-4;
const TIE_SYMDIFF: f64 = 0.05;

struct PrimalDual<'a> {
    domain: &'a GridDomain,
    inside: Vec<usize>,
    /// Cells whose forward differences can be non-zero.
    active: Vec<usize>,
    u: Vec<f64>,
    ubar: Vec<f64>,
    px: Vec<f64>,
    py: Vec<f64>,
    mask_perimeter: f64,
}

impl<'a> PrimalDual<'a> {
    fn new(domain: &'a GridDomain) -> Self {
        let n = domain.nx * domain.ny;
        let nx = domain.nx;
        let inside: Vec<usize> = (0..n).filter(|k| domain.mask[*k]).collect();
        let mut is_active = vec![false; n];
        for &k in &inside {
            is_active[k] = true;
            is_active[k - 1] = true;
            is_active[k - nx] = true;
        }
        let active = (0..n).filter(|k| is_active[*k]).collect();
        let u: Vec<f64> = domain
            .mask
            .iter()
            .map(|m| if *m { 0.5 } else { 0.0 })
            .collect();
        Self {
            domain,
            inside,
            active,
            ubar: u.clone(),
            u,
            px: vec![0.0; n],
            py: vec![0.0; n],
            mask_perimeter: set_perimeter(&domain.mask, domain.nx, domain.ny, domain.h),
        }
    }

    #[inline]
    fn grad(&self, v: &[f64], k: usize) -> (f64, f64) {
        // Active cells are never on the last row/column thanks to the margin.
        let inv_h = 1.0 / self.domain.h;
        (
            (v[k + 1] - v[k]) * inv_h,
            (v[k + self.domain.nx] - v[k]) * inv_h,
        )
    }

    #[inline]
    fn div(&self, k: usize) -> f64 {
        let nx = self.domain.nx;
        (self.px[k] - self.px[k - 1] + self.py[k] - self.py[k - nx]) / self.domain.h
    }

    /// `TV(u) / (h^2 sum u)`, the discrete Rayleigh quotient of the relaxed iterate.
    fn relaxed_ratio(&self) -> f64 {
        let mut tv = 0.0;
        for &k in &self.active {
            let (gx, gy) = self.grad(&self.u, k);
            tv += libm::sqrt(gx * gx + gy * gy);
        }
        let mass: f64 = self.inside.iter().map(|&k| self.u[k]).sum();
        if mass > 0.0 {
            tv / mass
        } else {
            f64::INFINITY
        }
    }

    /// Primal energy minus dual energy, scaled by `h^2` and divided by the mask perimeter.
    fn relative_gap(&self, lambda: f64) -> f64 {
        let mut primal = 0.0;
        for &k in &self.active {
            let (gx, gy) = self.grad(&self.u, k);
            primal += libm::sqrt(gx * gx + gy * gy);
        }
        let mut dual = 0.0;
        for &k in &self.inside {
            primal -= lambda * self.u[k];
            dual += (-self.div(k) - lambda).min(0.0);
        }
        let h2 = self.domain.h * self.domain.h;
        (primal - dual) * h2 / self.mask_perimeter
    }

    /// Runs until the relative gap drops below `tol`; returns (iterations, gap).
    fn solve(&mut self, lambda: f64, max_iter: usize, tol: f64) -> (usize, f64) {
        let step = self.domain.h / libm::sqrt(8.0);
        let (sigma, tau) = (step, step);
        let mut gap = f64::INFINITY;
        for it in 1..=max_iter {
            for idx in 0..self.active.len() {
                let k = self.active[idx];
                let (gx, gy) = self.grad(&self.ubar, k);
                let qx = self.px[k] + sigma * gx;
                let qy = self.py[k] + sigma * gy;
                let norm = libm::sqrt(qx * qx + qy * qy).max(1.0);
                self.px[k] = qx / norm;
                self.py[k] = qy / norm;
            }
            for idx in 0..self.inside.len() {
                let k = self.inside[idx];
                let old = self.u[k];
                let new = (old + tau * (self.div(k) + lambda)).clamp(0.0, 1.0);
                self.u[k] = new;
                self.ubar[k] = 2.0 * new - old;
            }
            if it % 20 == 0 || it == max_iter {
                gap = self.relative_gap(lambda);
                if gap <= tol {
                    return (it, gap);
                }
            }
        }
        (max_iter, gap)
    }
}

struct Level {
    set: Vec<bool>,
    count: usize,
    ratio: f64,
}

fn threshold_levels(pd: &PrimalDual<'_>, levels: usize) -> Vec<Level> {
    let d = pd.domain;
    let h2 = d.h * d.h;
    let mut out: Vec<Level> = Vec::with_capacity(levels);
    for m in 1..=levels {
        let s = m as f64 / (levels + 1) as f64;
        let mut set = vec![false; d.nx * d.ny];
        let mut count = 0;
        for &k in &pd.inside {
            if pd.u[k] > s {
                set[k] = true;
                count += 1;
            }
        }
        if count == 0 {
            break;
        }
        if out.last().is_some_and(|l| l.count == count) {
            continue;
        }
        let ratio = set_perimeter(&set, d.nx, d.ny, d.h) / (h2 * count as f64);
        out.push(Level { set, count, ratio });
    }
    out
}

fn symmetric_difference(a: &Level, b: &Level) -> f64 {
    let diff = a.set.iter().zip(&b.set).filter(|(x, y)| x != y).count();
    diff as f64 / a.count.max(b.count) as f64
}

/// Dinkelbach / primal-dual Cheeger solver on a rasterized domain.
pub fn cheeger_grid(domain: &GridDomain, opts: &GridOptions) -> Result<GridCheegerResult> {
    if opts.levels == 0 || opts.max_outer == 0 || opts.max_inner == 0 || !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("grid options must be positive"));
    }
    let (nx, ny, h) = (domain.nx, domain.ny, domain.h);
    let mut pd = PrimalDual::new(domain);
    let mut lambda = pd.mask_perimeter / domain.mask_area();
    let mut best_u: Vec<f64> = domain
        .mask
        .iter()
        .map(|m| if *m { 1.0 } else { 0.0 })
        .collect();
    let mut best_set = domain.mask.clone();
    let mut best_set_ratio = lambda;
    let mut history = vec![lambda];
    let mut inner_total = 0;
    let mut last_gap = 0.0;
    let mut non_unique = false;
    let mut outer = 0;

    while outer < opts.max_outer {
        outer += 1;
        let (iters, gap) = pd.solve(lambda, opts.max_inner, opts.tol);
        inner_total += iters;
        last_gap = gap;
        // Near the optimum the inner problem degenerates (every multiple of an
        // optimal u is optimal) and the gap closes slowly. A stalled solve after
        // the first one still yields a valid upper bound, so it ends the loop
        // instead of failing.
        let stalled = gap > opts.tol;
        if stalled && outer == 1 {
            return Err(Error::Solver {
                reason: "primal-dual gap above tolerance after max_inner iterations",
                outer_iterations: outer,
                inner_iterations: inner_total,
                residual: gap,
            });
        }
        let levels = threshold_levels(&pd, opts.levels);
        let Some(best) = levels.iter().min_by(|a, b| a.ratio.total_cmp(&b.ratio)) else {
            // u collapsed to zero: nothing beats the current quotient.
            history.push(lambda);
            break;
        };
        if best.ratio < best_set_ratio {
            best_set.clone_from(&best.set);
            best_set_ratio = best.ratio;
        }
        non_unique = levels.iter().any(|l| {
            (l.ratio - best.ratio).abs() <= TIE_RATIO * best.ratio
                && symmetric_difference(l, best) > TIE_SYMDIFF
        });
        let quotient = pd.relaxed_ratio();
        let next = if quotient < lambda {
            best_u.clone_from(&pd.u);
            quotient
        } else {
            lambda
        };
        history.push(next);
        let done = stalled || lambda - next < 1e-6 * lambda;
        lambda = next;
        if done {
            break;
        }
    }

    let contour = trace_contour(domain, &best_set)?;
    let relaxed = GridField {
        h,
        nx,
        ny,
        values: best_u,
    };
    Ok(GridCheegerResult {
        result: CheegerResult {
            lambda,
            radius: 1.0 / lambda,
            set_area: contour.area(),
            set_perimeter: contour.perimeter(),
            cheeger_set: ArcBoundaryRegion::from_polygon(&contour),
            solver_tag: SolverTag::Grid,
            diagnostics: Diagnostics {
                iterations: outer,
                inner_iterations: inner_total,
                residual: last_gap,
                possible_non_uniqueness: non_unique,
            },
        },
        level_set: best_set,
        lambda_history: history,
        relaxed,
    })
}

/// Rasterizes `polygon` at `opts.h` and solves.
pub fn cheeger_grid_polygon(polygon: &Polygon, opts: &GridOptions) -> Result<GridCheegerResult> {
    cheeger_grid(&rasterize(polygon, opts.h)?, opts)
}

/// Marching-squares contour (iso level 1/2 between cell centers) of the
/// largest component of `set`, oriented counter-clockwise. Diagonal
/// saddles are split, so components are 4-connected.
pub fn trace_contour(domain: &GridDomain, set: &[bool]) -> Result<Polygon> {
    let (nx, ny) = (domain.nx, domain.ny);
    let at = |i: usize, j: usize| set[i + nx * j];
    // Edge midpoint keys on the doubled lattice: (2i+1, 2j) between (i,j)-(i+1,j),
    // (2i, 2j+1) between (i,j)-(i,j+1).
    let mut next: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            // Square corners counter-clockwise: bl, br, tr, tl.
            let c = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            let e = [
                (2 * i + 1, 2 * j),     // bottom: bl -> br
                (2 * i + 2, 2 * j + 1), // right: br -> tr
                (2 * i + 1, 2 * j + 2), // top: tr -> tl
                (2 * i, 2 * j + 1),     // left: tl -> bl
            ];
            let exits: Vec<usize> = (0..4).filter(|&k| c[k] && !c[(k + 1) % 4]).collect();
            let entries: Vec<usize> = (0..4).filter(|&k| !c[k] && c[(k + 1) % 4]).collect();
            match exits.len() {
                0 => {}
                1 => {
                    next.insert(e[exits[0]], e[entries[0]]);
                }
                _ => {
                    // Saddle: each inside corner gets its own cut.
                    for &x in &exits {
                        let entry = (x + 3) % 4;
                        next.insert(e[x], e[entry]);
                    }
                }
            }
        }
    }
    let mut best: Option<(f64, Vec<Point2>)> = None;
    let to_point = |(a, b): (usize, usize)| {
        domain.origin
            + Point2::new(
                (a as f64 * 0.5 + 0.5) * domain.h,
                (b as f64 * 0.5 + 0.5) * domain.h,
            )
    };
    while let Some((&start, _)) = next.iter().next() {
        let mut loop_pts = Vec::new();
        let mut key = start;
        while let Some(to) = next.remove(&key) {
            loop_pts.push(to_point(key));
            key = to;
        }
        if loop_pts.len() < 3 {
            continue;
        }
        let area = crate::geometry::polygon_shoelace(&loop_pts);
        if best.as_ref().is_none_or(|(a, _)| area > *a) {
            best = Some((area, loop_pts));
        }
    }
    let (_, pts) = best.ok_or(Error::InvalidRegion("level set has no contour"))?;
    Polygon::new(pts)?.simplified(1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::SQRT_2;

    fn unit_square() -> Polygon {
        Polygon::rectangle(1.0, 1.0).unwrap()
    }

    #[test]
    fn rasterize_unit_square() {
        let d = rasterize(&unit_square(), 1.0 / 64.0).unwrap();
        assert_eq!(d.inside_count(), 64 * 64);
        assert_eq!((d.nx(), d.ny()), (68, 68));
        assert!(rasterize(&unit_square(), 10.0).is_err());
    }

    #[test]
    fn rasterize_l_shape() {
        let l_shape = Polygon::new(alloc::vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(2.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 2.0),
            Point2::new(0.0, 2.0),
        ])
        .unwrap();
        let h = 1.0 / 32.0;
        let d = rasterize(&l_shape, h).unwrap();
        assert!((d.mask_area() - 3.0).abs() <= 2.0 * h * l_shape.perimeter());
    }

    #[test]
    fn tv_of_block_indicator() {
        // k x k block: (k - 1) right-column and (k - 1) top-row cells with one
        // unit difference, the top-right corner with two, plus k cells left of
        // and k cells below the block: h (4k - 2 + sqrt 2).
        let (h, k) = (1.0 / 64.0, 32usize);
        let n = k + 4;
        let mut u = GridField::zeros(h, n, n);
        for j in 2..2 + k {
            for i in 2..2 + k {
                u.values[i + n * j] = 1.0;
            }
        }
        let tv = total_variation(&u);
        let expected = h * (4.0 * k as f64 - 2.0 + SQRT_2);
        assert!((tv - expected).abs() < 1e-14);
        assert!(tv <= 2.0 + 8.0 * h && tv >= 2.0 - 8.0 * h);

        let mut single = GridField::zeros(h, 5, 5);
        single.values[2 + 5 * 2] = 1.0;
        let tv1 = total_variation(&single);
        assert!((tv1 - h * (2.0 + SQRT_2)).abs() < 1e-15);
        assert!(tv1 >= 2.0 * h && tv1 <= 4.0 * h);

        assert_eq!(total_variation(&GridField::zeros(h, 9, 9)), 0.0);
    }

    #[test]
    fn set_perimeter_matches_field_tv() {
        let d = rasterize(&Polygon::regular(7, 1.0, Point2::ORIGIN).unwrap(), 0.05).unwrap();
        let tv = total_variation(&d.indicator());
        let per = set_perimeter(d.mask(), d.nx(), d.ny(), d.h());
        assert!((tv - per).abs() < 1e-12);
    }

    #[test]
    fn contour_of_square_mask() {
        let d = rasterize(&unit_square(), 1.0 / 16.0).unwrap();
        let poly = trace_contour(&d, d.mask()).unwrap();
        // Chamfered square through edge midpoints between cell centers.
        assert_eq!(poly.len(), 8);
        let h = 1.0 / 16.0;
        let expected = 1.0 - 4.0 * 0.5 * (h / 2.0) * (h / 2.0);
        assert!((poly.area() - expected).abs() < 1e-12);
    }

    #[test]
    fn solve_coarse_square() {
        let opts = GridOptions {
            h: 1.0 / 32.0,
            ..GridOptions::default()
        };
        let out = cheeger_grid_polygon(&unit_square(), &opts).unwrap();
        let exact = 2.0 + libm::sqrt(core::f64::consts::PI);
        let lambda = out.result.lambda;
        assert!((lambda - exact).abs() < 0.05 * exact, "{lambda}");
        assert!(out.lambda_history.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(*out.lambda_history.last().unwrap(), lambda);

        // lambda is exactly the quotient of the returned relaxed field.
        let mass: f64 = out.relaxed.values.iter().sum();
        let quotient = total_variation(&out.relaxed) / (opts.h * opts.h * mass);
        assert!((quotient - lambda).abs() <= 1e-12 * lambda);

        // The binary estimate is an upper bound of the relaxed quotient.
        let count = out.level_set.iter().filter(|b| **b).count();
        let binary =
            set_perimeter(&out.level_set, 36, 36, opts.h) / (opts.h * opts.h * count as f64);
        assert!(binary >= lambda);
        assert_eq!(out.result.solver_tag, SolverTag::Grid);
        assert!(out.result.set_area > 0.7 && out.result.set_area < 1.0);
    }

    #[test]
    fn solver_rejects_bad_options() {
        let d = rasterize(&unit_square(), 1.0 / 16.0).unwrap();
        let bad = GridOptions {
            levels: 0,
            ..GridOptions::default()
        };
        assert!(cheeger_grid(&d, &bad).is_err());
        let starved = GridOptions {
            max_inner: 1,
            tol: 1e-12,
            ..GridOptions::default()
        };
        assert!(matches!(
            cheeger_grid(&d, &starved),
            Err(Error::Solver { .. })
        ));
    }

    #[test]
    fn grid_domain_validation() {
        let mut mask = vec![false; 36];
        assert!(GridDomain::new(0.1, 6, 6, Point2::ORIGIN, mask.clone()).is_err());
        mask[0] = true;
        assert!(GridDomain::new(0.1, 6, 6, Point2::ORIGIN, mask.clone()).is_err());
        mask[0] = false;
        mask[2 + 6 * 2] = true;
        assert!(GridDomain::new(0.1, 6, 6, Point2::ORIGIN, mask).is_ok());
    }
}
