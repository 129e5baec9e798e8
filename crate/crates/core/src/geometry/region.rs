use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};

use super::point::{signed_angle, Point2, Vector2};
use super::polygon::Polygon;
use crate::error::{Error, Result};

/// One piece of a counter-clockwise boundary chain.
///
/// Arcs sweep counter-clockwise from `angle_start` to `angle_end`
/// (`0 < angle_end - angle_start < 2pi`), so they bound a locally convex region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryPiece {
    Segment {
        start: Point2,
        end: Point2,
    },
    Arc {
        center: Point2,
        radius: f64,
        angle_start: f64,
        angle_end: f64,
    },
}

impl BoundaryPiece {
    pub fn segment(start: Point2, end: Point2) -> Self {
        BoundaryPiece::Segment { start, end }
    }

    pub fn arc(center: Point2, radius: f64, angle_start: f64, angle_end: f64) -> Self {
        BoundaryPiece::Arc {
            center,
            radius,
            angle_start,
            angle_end,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            BoundaryPiece::Segment { start, end } => {
                if !start.is_finite() || !end.is_finite() || start == end {
                    return Err(Error::InvalidRegion(
                        "segment must have positive finite length",
                    ));
                }
            }
            BoundaryPiece::Arc {
                center,
                radius,
                angle_start,
                angle_end,
            } => {
                let sweep = angle_end - angle_start;
                if !center.is_finite() || !(radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidRegion(
                        "arc radius must be positive and finite",
                    ));
                }
                if !(sweep > 0.0 && sweep < TAU) {
                    return Err(Error::InvalidRegion("arc sweep must lie in (0, 2pi)"));
                }
            }
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        match *self {
            BoundaryPiece::Segment { start, end } => start.distance(end),
            BoundaryPiece::Arc {
                radius,
                angle_start,
                angle_end,
                ..
            } => radius * (angle_end - angle_start),
        }
    }

    /// Point at arc length `s` from the start of the piece.
    pub fn point_at(&self, s: f64) -> Point2 {
        match *self {
            BoundaryPiece::Segment { start, end } => start.lerp(end, s / start.distance(end)),
            BoundaryPiece::Arc {
                center,
                radius,
                angle_start,
                ..
            } => center + Point2::polar(angle_start + s / radius) * radius,
        }
    }

    /// Unit tangent in the traversal direction at arc length `s`.
    pub fn tangent_at(&self, s: f64) -> Vector2 {
        match *self {
            BoundaryPiece::Segment { start, end } => (end - start).normalized(),
            BoundaryPiece::Arc {
                radius,
                angle_start,
                ..
            } => Point2::polar(angle_start + s / radius).perp(),
        }
    }

    /// Inner unit normal at arc length `s`: the left normal of the tangent.
    /// On arcs this is `(center - p) / radius`.
    pub fn inner_normal_at(&self, s: f64) -> Vector2 {
        self.tangent_at(s).perp()
    }

    /// Curvature with the convention `H = -div_boundary(nu)`: zero on
    /// segments, `1 / radius` on (convex) arcs.
    pub fn curvature(&self) -> f64 {
        match *self {
            BoundaryPiece::Segment { .. } => 0.0,
            BoundaryPiece::Arc { radius, .. } => 1.0 / radius,
        }
    }

    pub fn start_point(&self) -> Point2 {
        self.point_at(0.0)
    }

    pub fn end_point(&self) -> Point2 {
        match *self {
            BoundaryPiece::Segment { end, .. } => end,
            BoundaryPiece::Arc {
                center,
                radius,
                angle_end,
                ..
            } => center + Point2::polar(angle_end) * radius,
        }
    }

    pub fn start_tangent(&self) -> Vector2 {
        self.tangent_at(0.0)
    }

    pub fn end_tangent(&self) -> Vector2 {
        match *self {
            BoundaryPiece::Segment { start, end } => (end - start).normalized(),
            BoundaryPiece::Arc { angle_end, .. } => Point2::polar(angle_end).perp(),
        }
    }

    pub fn midpoint(&self) -> Point2 {
        self.point_at(0.5 * self.length())
    }

    /// Contribution `1/2 * integral (x dy - y dx)` of this piece to the enclosed area.
    fn green_area(&self) -> f64 {
        match *self {
            BoundaryPiece::Segment { start, end } => 0.5 * start.cross(end),
            BoundaryPiece::Arc {
                center,
                radius,
                angle_start,
                angle_end,
            } => {
                let (s0, c0) = libm::sincos(angle_start);
                let (s1, c1) = libm::sincos(angle_end);
                0.5 * (radius * radius * (angle_end - angle_start)
                    + center.x * radius * (s1 - s0)
                    + center.y * radius * (c0 - c1))
            }
        }
    }

    /// Change in `arg(q - p)` as `q` runs along the piece. Arcs are split into
    /// quarter panels; a panel's chord angle is corrected by `2pi` when `p`
    /// sits in the circular segment between chord and arc.
    fn winding_angle(&self, p: Point2) -> f64 {
        match *self {
            BoundaryPiece::Segment { start, end } => signed_angle(start - p, end - p),
            BoundaryPiece::Arc {
                center,
                radius,
                angle_start,
                angle_end,
            } => {
                let panels = libm::ceil((angle_end - angle_start) / FRAC_PI_2).max(1.0) as usize;
                let step = (angle_end - angle_start) / panels as f64;
                let inside_circle = p.distance(center) < radius;
                (0..panels)
                    .map(|k| {
                        let a = center + Point2::polar(angle_start + step * k as f64) * radius;
                        let b =
                            center + Point2::polar(angle_start + step * (k + 1) as f64) * radius;
                        let mut w = signed_angle(a - p, b - p);
                        if inside_circle && (b - a).cross(p - a) < 0.0 {
                            w += TAU;
                        }
                        w
                    })
                    .sum()
            }
        }
    }
}

/// A closed, simple, counter-clockwise region bounded by segments and arcs.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcBoundaryRegion {
    pieces: Vec<BoundaryPiece>,
    area: f64,
    perimeter: f64,
}

/// Closure tolerance relative to the region extent.
pub const CLOSURE_TOL: f64 = 1e-12;

impl ArcBoundaryRegion {
    pub fn new(pieces: Vec<BoundaryPiece>) -> Result<Self> {
        let (area, perimeter) = chain_area_perimeter(&pieces)?;
        let region = Self {
            pieces,
            area,
            perimeter,
        };
        if (region.total_turning() - TAU).abs() > 1e-6 {
            return Err(Error::InvalidRegion(
                "boundary does not wind once counter-clockwise",
            ));
        }
        Ok(region)
    }

    /// The polygon's edges as a segment chain.
    pub fn from_polygon(polygon: &Polygon) -> Self {
        let pieces = polygon
            .edges()
            .map(|(a, b)| BoundaryPiece::segment(a, b))
            .collect();
        Self {
            pieces,
            area: polygon.area(),
            perimeter: polygon.perimeter(),
        }
    }

    /// Disk as four quarter arcs.
    pub fn disk(center: Point2, radius: f64) -> Result<Self> {
        Self::new(
            (0..4)
                .map(|k| {
                    BoundaryPiece::arc(
                        center,
                        radius,
                        FRAC_PI_2 * k as f64,
                        FRAC_PI_2 * (k + 1) as f64,
                    )
                })
                .collect(),
        )
    }

    pub fn pieces(&self) -> &[BoundaryPiece] {
        &self.pieces
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// Turning angle at the start of each piece, measured from the previous
    /// piece's end tangent.
    pub fn joint_turns(&self) -> Vec<f64> {
        let n = self.pieces.len();
        (0..n)
            .map(|k| {
                let prev = &self.pieces[(k + n - 1) % n];
                signed_angle(prev.end_tangent(), self.pieces[k].start_tangent())
            })
            .collect()
    }

    /// Total tangent turning: arc sweeps plus corner angles. `2pi` for a simple
    /// counter-clockwise loop.
    pub fn total_turning(&self) -> f64 {
        let sweeps: f64 = self
            .pieces
            .iter()
            .map(|p| match *p {
                BoundaryPiece::Arc {
                    angle_start,
                    angle_end,
                    ..
                } => angle_end - angle_start,
                BoundaryPiece::Segment { .. } => 0.0,
            })
            .sum();
        sweeps + self.joint_turns().iter().sum::<f64>()
    }

    /// First joint whose tangent jump exceeds `tol` radians.
    pub fn first_corner(&self, tol: f64) -> Option<(usize, f64)> {
        self.joint_turns()
            .into_iter()
            .enumerate()
            .find(|(_, turn)| turn.abs() > tol)
    }

    pub fn max_curvature(&self) -> f64 {
        self.pieces
            .iter()
            .map(BoundaryPiece::curvature)
            .fold(0.0, f64::max)
    }

    /// Winding-number point-in-region test.
    pub fn contains(&self, p: Point2) -> bool {
        let total: f64 = self.pieces.iter().map(|piece| piece.winding_angle(p)).sum();
        libm::round(total / TAU) != 0.0
    }

    /// Axis-aligned bounding box, exact for arcs.
    pub fn bbox(&self) -> (Point2, Point2) {
        piece_bbox(&self.pieces)
    }

    /// Boundary polyline; arcs are sampled with angular step at most `max_arc_step`.
    pub fn polyline(&self, max_arc_step: f64) -> Vec<Point2> {
        let mut out = Vec::new();
        for piece in &self.pieces {
            match *piece {
                BoundaryPiece::Segment { start, .. } => out.push(start),
                BoundaryPiece::Arc {
                    angle_start,
                    angle_end,
                    ..
                } => {
                    let steps =
                        libm::ceil((angle_end - angle_start) / max_arc_step).max(1.0) as usize;
                    let len = piece.length();
                    for k in 0..steps {
                        out.push(piece.point_at(len * k as f64 / steps as f64));
                    }
                }
            }
        }
        out
    }
}

/// Area (Green's theorem, exact per piece) and perimeter of a closed chain.
pub fn chain_area_perimeter(pieces: &[BoundaryPiece]) -> Result<(f64, f64)> {
    if pieces.is_empty() {
        return Err(Error::InvalidRegion("empty boundary chain"));
    }
    for piece in pieces {
        piece.validate()?;
    }
    let (lo, hi) = piece_bbox(pieces);
    let tol = CLOSURE_TOL * lo.distance(hi);
    let n = pieces.len();
    for k in 0..n {
        if pieces[k]
            .end_point()
            .distance(pieces[(k + 1) % n].start_point())
            > tol
        {
            return Err(Error::InvalidRegion(
                "open chain: piece endpoints do not meet",
            ));
        }
    }
    let area: f64 = pieces.iter().map(BoundaryPiece::green_area).sum();
    if area <= 0.0 {
        return Err(Error::InvalidRegion("chain does not enclose positive area"));
    }
    let perimeter = pieces.iter().map(BoundaryPiece::length).sum();
    Ok((area, perimeter))
}

/// Area and perimeter of a validated region.
pub fn region_area_perimeter(region: &ArcBoundaryRegion) -> (f64, f64) {
    (region.area(), region.perimeter())
}

fn piece_bbox(pieces: &[BoundaryPiece]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |p: Point2| {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    };
    for piece in pieces {
        grow(piece.start_point());
        grow(piece.end_point());
        if let BoundaryPiece::Arc {
            center,
            radius,
            angle_start,
            angle_end,
        } = *piece
        {
            // axis extremes crossed by the sweep
            let first = libm::ceil(angle_start / FRAC_PI_2) as i64;
            let mut k = first;
            while (k as f64) * FRAC_PI_2 <= angle_end {
                grow(center + Point2::polar(k as f64 * FRAC_PI_2) * radius);
                k += 1;
            }
        }
    }
    (lo, hi)
}
