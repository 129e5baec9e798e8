//! Erosion of convex polygons by half-plane intersection, and the rounded
//! Minkowski sum with a disk.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use super::point::{signed_angle, Point2, Vector2};
use super::polygon::{bbox_diagonal, Polygon};
use super::region::{ArcBoundaryRegion, BoundaryPiece};
use crate::error::{Error, Result};

/// Turn sines at or below this are treated as straight when preparing edges.
const STRAIGHT_SIN_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug)]
struct HalfPlane {
    /// A point on the boundary line.
    point: Point2,
    /// Unit direction; the feasible side is to the left.
    dir: Vector2,
}

impl HalfPlane {
    fn slack(&self, q: Point2) -> f64 {
        self.dir.cross(q - self.point)
    }

    fn meet(&self, other: &HalfPlane) -> Option<Point2> {
        let denom = self.dir.cross(other.dir);
        if denom.abs() <= 1e-15 {
            return None;
        }
        let s = (other.point - self.point).cross(other.dir) / denom;
        Some(self.point + self.dir * s)
    }
}

/// Intersection of half-planes that are already sorted by strictly
/// increasing direction angle. Returns the vertices of the (bounded)
/// intersection polygon, or `None` when it is empty or degenerate.
fn intersect_sorted(planes: &[HalfPlane], tol: f64) -> Option<Vec<Point2>> {
    let mut dq: VecDeque<HalfPlane> = VecDeque::with_capacity(planes.len());
    let cut = |hp: &HalfPlane, a: &HalfPlane, b: &HalfPlane| -> bool {
        match a.meet(b) {
            Some(q) => hp.slack(q) <= tol,
            None => true,
        }
    };
    for hp in planes {
        while dq.len() >= 2 && cut(hp, &dq[dq.len() - 2], &dq[dq.len() - 1]) {
            dq.pop_back();
        }
        while dq.len() >= 2 && cut(hp, &dq[0], &dq[1]) {
            dq.pop_front();
        }
        if let Some(back) = dq.back() {
            if back.dir.cross(hp.dir).abs() <= 1e-15 {
                if back.dir.dot(hp.dir) < 0.0 {
                    // Opposite parallel lines with nothing left between them.
                    return None;
                }
                if hp.slack(back.point) < 0.0 {
                    dq.pop_back();
                } else {
                    continue;
                }
            }
        }
        dq.push_back(*hp);
    }
    while dq.len() >= 3 && cut(&dq[0], &dq[dq.len() - 2], &dq[dq.len() - 1]) {
        dq.pop_back();
    }
    while dq.len() >= 3 && cut(&dq[dq.len() - 1], &dq[0], &dq[1]) {
        dq.pop_front();
    }
    if dq.len() < 3 {
        return None;
    }
    let n = dq.len();
    let mut vertices = Vec::with_capacity(n);
    for k in 0..n {
        vertices.push(dq[k].meet(&dq[(k + 1) % n])?);
    }
    Some(vertices)
}

/// Edge half-planes of a convex polygon, rotated so direction angles increase.
fn edge_planes(polygon: &Polygon) -> Vec<HalfPlane> {
    let mut planes: Vec<HalfPlane> = polygon
        .edges()
        .map(|(a, b)| HalfPlane {
            point: a,
            dir: (b - a).normalized(),
        })
        .collect();
    let first = planes
        .iter()
        .enumerate()
        .min_by(|(_, p), (_, q)| p.dir.angle().total_cmp(&q.dir.angle()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    planes.rotate_left(first);
    planes
}

fn eroded_vertices(polygon: &Polygon, r: f64) -> Option<Vec<Point2>> {
    let planes: Vec<HalfPlane> = edge_planes(polygon)
        .into_iter()
        .map(|hp| HalfPlane {
            point: hp.point + hp.dir.perp() * r,
            dir: hp.dir,
        })
        .collect();
    let scale = bbox_diagonal(polygon.vertices());
    let verts = intersect_sorted(&planes, 1e-14 * scale)?;
    // Collapse vertices where dropped edges left coincident corners.
    let dup = 1e-13 * scale;
    let mut out: Vec<Point2> = Vec::with_capacity(verts.len());
    for v in verts {
        if out.last().is_none_or(|q| q.distance(v) > dup) {
            out.push(v);
        }
    }
    while out.len() > 1 && out[0].distance(out[out.len() - 1]) <= dup {
        out.pop();
    }
    (out.len() >= 3).then_some(out)
}

fn require_convex(polygon: &Polygon) -> Result<Polygon> {
    if !polygon.is_convex() {
        return Err(Error::NotConvex);
    }
    polygon.simplified(STRAIGHT_SIN_TOL)
}

/// Inner parallel set: the points of `polygon` at distance at least `r`
/// from its boundary, as the intersection of inward-offset edge half-planes.
///
/// Returns `Ok(None)` when the offset is empty or degenerates to a point or
/// a segment (`r` at or beyond the inradius).
pub fn inner_parallel(polygon: &Polygon, r: f64) -> Result<Option<Polygon>> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(
            "erosion radius must be finite and >= 0",
        ));
    }
    let base = require_convex(polygon)?;
    Ok(erode_prepared(&base, r))
}

/// Erosion of a polygon already known to be convex and free of straight vertices.
pub(crate) fn erode_prepared(base: &Polygon, r: f64) -> Option<Polygon> {
    if r == 0.0 {
        return Some(base.clone());
    }
    let verts = eroded_vertices(base, r)?;
    Polygon::new(verts)
        .ok()
        .and_then(|p| p.simplified(STRAIGHT_SIN_TOL).ok())
}

/// Area of the inner parallel set, zero when it is empty.
pub(crate) fn eroded_area(base: &Polygon, r: f64) -> f64 {
    erode_prepared(base, r).map_or(0.0, |p| p.area())
}

/// Radius of the largest inscribed disk, by bisection on non-emptiness of
/// the inner parallel set. `2 |P| / Per(P)` bounds it from above.
pub fn inradius(polygon: &Polygon) -> Result<f64> {
    let base = require_convex(polygon)?;
    Ok(inradius_prepared(&base))
}

pub(crate) fn inradius_prepared(base: &Polygon) -> f64 {
    let mut lo = 0.0;
    let mut hi = 2.0 * base.area() / base.perimeter();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eroded_vertices(base, mid).is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Minkowski sum of a convex polygon with the closed disk of radius `r`:
/// edges pushed out by `r`, joined by arcs of radius `r` around the vertices.
pub fn minkowski_sum_disk(polygon: &Polygon, r: f64) -> Result<ArcBoundaryRegion> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(
            "disk radius must be positive and finite",
        ));
    }
    let base = require_convex(polygon)?;
    let v = base.vertices();
    let n = v.len();
    // Outer normal angle of edge i (from v[i] to v[i+1]).
    let normal_angle: Vec<f64> = (0..n)
        .map(|i| (-(v[(i + 1) % n] - v[i]).perp()).angle())
        .collect();
    let mut pieces = Vec::with_capacity(2 * n);
    for i in 0..n {
        let j = (i + 1) % n;
        let a0 = normal_angle[i];
        let start = v[i] + Point2::polar(a0) * r;
        let end = v[j] + Point2::polar(a0) * r;
        pieces.push(BoundaryPiece::segment(start, end));
        let turn = signed_angle(v[j] - v[i], v[(j + 1) % n] - v[j]);
        if turn > 0.0 {
            pieces.push(BoundaryPiece::arc(v[j], r, a0, a0 + turn));
        }
    }
    // Snap segment endpoints onto the arc endpoints so the chain closes exactly.
    let m = pieces.len();
    for k in 0..m {
        if let BoundaryPiece::Arc { .. } = pieces[k] {
            let (s, e) = (pieces[k].start_point(), pieces[k].end_point());
            if let BoundaryPiece::Segment { end, .. } = &mut pieces[(k + m - 1) % m] {
                *end = s;
            }
            if let BoundaryPiece::Segment { start, .. } = &mut pieces[(k + 1) % m] {
                *start = e;
            }
        }
    }
    ArcBoundaryRegion::new(pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn square_offsets() {
        let sq = Polygon::rectangle(1.0, 1.0).unwrap();
        let inner = inner_parallel(&sq, 0.1).unwrap().unwrap();
        assert!((inner.area() - 0.64).abs() < 1e-14);
        let (lo, hi) = inner.bbox();
        assert!(lo.distance(Point2::new(0.1, 0.1)) < 1e-15);
        assert!(hi.distance(Point2::new(0.9, 0.9)) < 1e-15);
        assert!(inner_parallel(&sq, 0.5).unwrap().is_none());
        assert!(inner_parallel(&sq, 0.7).unwrap().is_none());
        assert_eq!(inner_parallel(&sq, 0.0).unwrap().unwrap().area(), 1.0);
    }

    #[test]
    fn rectangle_offset() {
        let rect = Polygon::rectangle(2.0, 1.0).unwrap();
        let inner = inner_parallel(&rect, 0.25).unwrap().unwrap();
        assert!((inner.area() - 0.75).abs() < 1e-14);
        assert!((inner.perimeter() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn erosion_drops_vanished_edges() {
        // Tiny cut-off corner disappears once r exceeds its reach.
        let p = Polygon::new(alloc::vec![
            Point2::new(0.0, 0.0),
            Point2::new(4.0, 0.0),
            Point2::new(4.0, 1.95),
            Point2::new(3.95, 2.0),
            Point2::new(0.0, 2.0),
        ])
        .unwrap();
        let inner = inner_parallel(&p, 0.5).unwrap().unwrap();
        assert_eq!(inner.len(), 4);
        assert!((inner.area() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn non_convex_is_rejected() {
        let l_shape = Polygon::new(alloc::vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(2.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 2.0),
            Point2::new(0.0, 2.0),
        ])
        .unwrap();
        assert_eq!(inner_parallel(&l_shape, 0.1), Err(Error::NotConvex));
        assert!(minkowski_sum_disk(&l_shape, 0.1).is_err());
        assert!(inner_parallel(&Polygon::rectangle(1.0, 1.0).unwrap(), -1.0).is_err());
    }

    #[test]
    fn inradius_of_simple_shapes() {
        assert!((inradius(&Polygon::rectangle(1.0, 1.0).unwrap()).unwrap() - 0.5).abs() < 1e-12);
        assert!((inradius(&Polygon::rectangle(2.0, 1.0).unwrap()).unwrap() - 0.5).abs() < 1e-12);
        let hex = Polygon::regular(6, 1.0, Point2::ORIGIN).unwrap();
        let apothem = libm::cos(PI / 6.0);
        assert!((inradius(&hex).unwrap() - apothem).abs() < 1e-12);
    }

    #[test]
    fn minkowski_square_unit_radius() {
        let sq = Polygon::rectangle(1.0, 1.0).unwrap();
        let region = minkowski_sum_disk(&sq, 1.0).unwrap();
        assert!((region.area() - (5.0 + PI)).abs() < 1e-13);
        assert!((region.perimeter() - (4.0 + 2.0 * PI)).abs() < 1e-13);
        assert_eq!(region.pieces().len(), 8);
        assert!(region.first_corner(1e-12).is_none());
    }

    #[test]
    fn minkowski_square_cheeger_radius() {
        let sq = Polygon::rectangle(1.0, 1.0).unwrap();
        let r = 0.265079;
        let region = minkowski_sum_disk(&sq, r).unwrap();
        assert!((region.area() - (1.0 + 4.0 * r + PI * r * r)).abs() < 1e-13);
        assert!((region.area() - 2.281066).abs() < 1e-6);
        assert!((region.perimeter() - 5.665540).abs() < 1e-6);
        // Rounding the eroded square back out gives the Cheeger-set area.
        let eroded = inner_parallel(&sq, r).unwrap().unwrap();
        let set = minkowski_sum_disk(&eroded, r).unwrap();
        assert!((set.area() - 0.93968).abs() < 1e-5);
    }

    #[test]
    fn minkowski_half_radius_square() {
        let sq = Polygon::rectangle(1.0, 1.0).unwrap();
        let region = minkowski_sum_disk(&sq, 0.5).unwrap();
        assert!((region.area() - (3.0 + 0.25 * PI)).abs() < 1e-13);
        assert!((region.perimeter() - (4.0 + PI)).abs() < 1e-13);
    }
}
