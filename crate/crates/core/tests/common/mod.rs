//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use cheeger_core::fields::PolynomialVectorField;
use cheeger_core::{Point2, Polygon};
use proptest::prelude::*;
use rand::Rng;

/// Convex polygon with vertices on an ellipse at well-separated angles.
pub fn ellipse_polygon(angles: &[f64], a: f64, b: f64, tilt: f64, center: Point2) -> Polygon {
    let (c, s) = (tilt.cos(), tilt.sin());
    let vertices = angles
        .iter()
        .map(|t| {
            let (x, y) = (a * t.cos(), b * t.sin());
            center + Point2::new(c * x - s * y, s * x + c * y)
        })
        .collect();
    Polygon::new(vertices).expect("points in convex position")
}

/// Sorted angles in [0, 2pi) with consecutive gaps at least `min_gap`.
fn separated_angles(mut raw: Vec<f64>, min_gap: f64) -> Option<Vec<f64>> {
    raw.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(raw.len());
    for t in raw {
        if out.last().is_none_or(|last| t - last >= min_gap) {
            out.push(t);
        }
    }
    let wrap = out.first()? + 2.0 * PI - out.last()?;
    (out.len() >= 3 && wrap >= min_gap).then_some(out)
}

pub fn random_convex_polygon<R: Rng>(rng: &mut R) -> Polygon {
    loop {
        let n = rng.gen_range(3..=10);
        let raw = (0..n).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        if let Some(angles) = separated_angles(raw, 0.3) {
            let a = rng.gen_range(0.5..2.0);
            let b = rng.gen_range(0.5..2.0);
            let center = Point2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            return ellipse_polygon(&angles, a, b, rng.gen_range(0.0..PI), center);
        }
    }
}

pub fn convex_polygon() -> impl Strategy<Value = Polygon> {
    (
        prop::collection::vec(0.0..2.0 * PI, 3..12),
        0.5f64..2.0,
        0.5f64..2.0,
        0.0..PI,
        -1.0f64..1.0,
        -1.0f64..1.0,
    )
        .prop_filter_map("angles too close", |(raw, a, b, tilt, cx, cy)| {
            separated_angles(raw, 0.2)
                .map(|angles| ellipse_polygon(&angles, a, b, tilt, Point2::new(cx, cy)))
        })
}

/// Polynomial field of total degree at most `degree` with coefficients in [-1, 1].
pub fn random_field<R: Rng>(rng: &mut R, degree: usize) -> PolynomialVectorField {
    let mut terms = |_: ()| {
        let mut t = Vec::new();
        for i in 0..=degree {
            for j in 0..=degree - i {
                t.push((i, j, rng.gen_range(-1.0..1.0)));
            }
        }
        t
    };
    let vx = terms(());
    let vy = terms(());
    PolynomialVectorField::from_terms(&vx, &vy).unwrap()
}

pub fn field_strategy(degree: usize) -> impl Strategy<Value = PolynomialVectorField> {
    let count = (degree + 1) * (degree + 2) / 2;
    (
        prop::collection::vec(-1.0f64..1.0, count),
        prop::collection::vec(-1.0f64..1.0, count),
    )
        .prop_map(move |(cx, cy)| {
            let mut vx = Vec::new();
            let mut vy = Vec::new();
            let mut k = 0;
            for i in 0..=degree {
                for j in 0..=degree - i {
                    vx.push((i, j, cx[k]));
                    vy.push((i, j, cy[k]));
                    k += 1;
                }
            }
            PolynomialVectorField::from_terms(&vx, &vy).unwrap()
        })
}

/// Root of `f` on `[lo, hi]` by plain bisection (sign change required).
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Cheeger radius of the unit square: `(1 - 2r)^2 = pi r^2`.
pub fn square_radius_oracle() -> f64 {
    bisect(|r| (1.0 - 2.0 * r).powi(2) - PI * r * r, 0.0, 0.5)
}

/// Cheeger radius of a `w x h` rectangle: smaller root of
/// `(4 - pi) r^2 - 2 (w + h) r + w h = 0`.
pub fn rectangle_radius_oracle(w: f64, h: f64) -> f64 {
    let a = 4.0 - PI;
    let b = -2.0 * (w + h);
    let c = w * h;
    (-b - (b * b - 4.0 * a * c).sqrt()) / (2.0 * a)
}

/// Cheeger radius of a regular `n`-gon with inradius `rho`: its inner
/// parallel sets are homothetic regular `n`-gons of area `n tan(pi/n) (rho - r)^2`.
pub fn regular_radius_oracle(n: usize, rho: f64) -> f64 {
    let k = (n as f64 * (PI / n as f64).tan()).sqrt();
    rho * k / (k + PI.sqrt())
}
