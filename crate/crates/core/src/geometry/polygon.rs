use alloc::vec::Vec;
use core::f64::consts::PI;

use super::point::{signed_angle, Point2};
use crate::error::{Error, Result};

/// Turn sines above `-CONVEX_SIN_TOL` count as non-reflex when classifying convexity.
pub const CONVEX_SIN_TOL: f64 = 1e-10;

/// A simple, counter-clockwise polygon with positive area.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point2>,
    convex: bool,
    area: f64,
    perimeter: f64,
}

impl Polygon {
    /// Validates and wraps a vertex list.
    ///
    /// Requires at least three finite vertices, no two consecutive vertices
    /// equal, counter-clockwise orientation, positive area and no
    /// self-intersections.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon("fewer than 3 vertices"));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidPolygon("non-finite coordinate"));
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::InvalidPolygon("consecutive vertices coincide"));
            }
        }
        let area = shoelace(&vertices);
        let scale = bbox_diagonal(&vertices);
        if area.abs() <= 1e-14 * scale * scale {
            return Err(Error::InvalidPolygon("degenerate polygon with zero area"));
        }
        if area < 0.0 {
            return Err(Error::InvalidPolygon("clockwise orientation"));
        }
        let perimeter = (0..n)
            .map(|i| vertices[i].distance(vertices[(i + 1) % n]))
            .sum();

        let mut all_left = true;
        let mut turning = 0.0;
        for i in 0..n {
            let e0 = vertices[i] - vertices[(i + n - 1) % n];
            let e1 = vertices[(i + 1) % n] - vertices[i];
            let turn = signed_angle(e0, e1);
            if e0.cross(e1) < -CONVEX_SIN_TOL * e0.norm() * e1.norm() {
                all_left = false;
            }
            turning += turn;
        }
        let winds_once = (turning - 2.0 * PI).abs() < 1e-6;
        let convex = all_left && winds_once;
        if !convex && has_self_intersection(&vertices) {
            return Err(Error::InvalidPolygon("self-intersecting boundary"));
        }
        Ok(Self {
            vertices,
            convex,
            area,
            perimeter,
        })
    }

    /// Axis-aligned rectangle `[0, width] x [0, height]`.
    pub fn rectangle(width: f64, height: f64) -> Result<Self> {
        Self::new(alloc::vec![
            Point2::new(0.0, 0.0),
            Point2::new(width, 0.0),
            Point2::new(width, height),
            Point2::new(0.0, height),
        ])
    }

    /// Regular `n`-gon with the given circumradius; the first vertex sits at angle 0.
    pub fn regular(n: usize, circumradius: f64, center: Point2) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidPolygon("regular polygon needs n >= 3"));
        }
        let vertices = (0..n)
            .map(|k| center + Point2::polar(2.0 * PI * k as f64 / n as f64) * circumradius)
            .collect();
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// Directed edges `(v_i, v_{i+1})`, closing back to the first vertex.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        bbox(&self.vertices)
    }

    /// Largest vertex-to-vertex distance.
    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut best = 0.0f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                best = best.max(v[i].distance_sq(v[j]));
            }
        }
        libm::sqrt(best)
    }

    pub fn centroid(&self) -> Point2 {
        let o = self.vertices[0];
        let mut c = Point2::ORIGIN;
        for (a, b) in self.edges() {
            let (a, b) = (a - o, b - o);
            c += (a + b) * a.cross(b);
        }
        o + c / (6.0 * self.area)
    }

    /// Even-odd point-in-polygon test. Points exactly on the boundary may go either way.
    pub fn contains(&self, p: Point2) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Distance to the nearest edge line, positive inside. Exact for convex polygons.
    pub fn signed_distance_convex(&self, p: Point2) -> f64 {
        self.edges()
            .map(|(a, b)| (b - a).normalized().perp().dot(p - a))
            .fold(f64::INFINITY, f64::min)
    }

    /// Applies `f` to every vertex and re-validates.
    pub fn map<F: FnMut(Point2) -> Point2>(&self, f: F) -> Result<Self> {
        Self::new(self.vertices.iter().copied().map(f).collect())
    }

    /// Drops vertices where the boundary continues straight on (turn sine at
    /// most `sin_tol`) and vertices closer than `1e-14` of the extent to their
    /// predecessor.
    pub fn simplified(&self, sin_tol: f64) -> Result<Self> {
        let dup_tol = 1e-14 * bbox_diagonal(&self.vertices);
        let mut pts: Vec<Point2> = Vec::with_capacity(self.vertices.len());
        for &p in &self.vertices {
            if pts.last().is_none_or(|q| q.distance(p) > dup_tol) {
                pts.push(p);
            }
        }
        while pts.len() > 3 && pts[0].distance(pts[pts.len() - 1]) <= dup_tol {
            pts.pop();
        }
        loop {
            let n = pts.len();
            if n <= 3 {
                break;
            }
            let straight: Vec<bool> = (0..n)
                .map(|i| {
                    let e0 = pts[i] - pts[(i + n - 1) % n];
                    let e1 = pts[(i + 1) % n] - pts[i];
                    e0.dot(e1) > 0.0 && e0.cross(e1).abs() <= sin_tol * e0.norm() * e1.norm()
                })
                .collect();
            let kept = straight.iter().filter(|s| !**s).count();
            if kept == n || kept < 3 {
                break;
            }
            pts = pts
                .iter()
                .zip(&straight)
                .filter(|(_, s)| !**s)
                .map(|(p, _)| *p)
                .collect();
        }
        Self::new(pts)
    }
}

/// Area (shoelace, positive for counter-clockwise input) and perimeter.
pub fn polygon_area_perimeter(polygon: &Polygon) -> (f64, f64) {
    (polygon.area(), polygon.perimeter())
}

/// Inserts evenly spaced points along every edge so the result has at least
/// `n` vertices and no edge longer than `perimeter / n`. Original vertices are kept.
pub fn resample_boundary(polygon: &Polygon, n: usize) -> Polygon {
    if n <= polygon.len() {
        return polygon.clone();
    }
    let per = polygon.perimeter();
    let mut out = Vec::with_capacity(n + polygon.len());
    for (a, b) in polygon.edges() {
        let pieces = libm::ceil(a.distance(b) * n as f64 / per - 1e-9).max(1.0) as usize;
        out.push(a);
        for k in 1..pieces {
            out.push(a.lerp(b, k as f64 / pieces as f64));
        }
    }
    // Collinear insertions cannot break simplicity or orientation.
    let mut resampled = polygon.clone();
    resampled.vertices = out;
    resampled
}

pub(crate) fn shoelace(v: &[Point2]) -> f64 {
    let o = v[0];
    let n = v.len();
    let mut twice = 0.0;
    for i in 1..n - 1 {
        twice += (v[i] - o).cross(v[i + 1] - o);
    }
    0.5 * twice
}

pub(crate) fn bbox(v: &[Point2]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in v {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

pub(crate) fn bbox_diagonal(v: &[Point2]) -> f64 {
    let (lo, hi) = bbox(v);
    lo.distance(hi)
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test (touching counts).
fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

fn has_self_intersection(v: &[Point2]) -> bool {
    let n = v.len();
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        // Adjacent edges share a vertex; they only fail by folding back.
        let c = v[(i + 2) % n];
        if orient(a, b, c) == 0.0 && (b - a).dot(c - b) < 0.0 {
            return true;
        }
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_intersect(a, b, v[j], v[(j + 1) % n]) {
                return true;
            }
        }
    }
    false
}
