//! First variation of the Cheeger constant under `x + tV(x)`, evaluated as
//! boundary integrals over a Cheeger set `A` with inner normal `nu`:
//!
//! ```text
//! general: (1/|A|) * integral over dA of  div V - (nu, DV nu) + lambda (V, nu)
//! smooth:  (1/|A|) * integral over dA of  (lambda - H) (V, nu)
//! ```
//!
//! The two agree whenever the boundary is `C^1`; the curvature form is
//! refused at corners.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::cheeger_exact::CORNER_TOL;
use crate::error::{Error, Result};
use crate::fields::PolynomialVectorField;
use crate::geometry::{ArcBoundaryRegion, BoundaryPiece};
use crate::quadrature::GaussLegendre;

/// Per-piece quadrature settings.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    rule: GaussLegendre,
    max_arc_angle: f64,
}

impl QuadratureRule {
    pub fn new(nodes: usize, max_arc_angle: f64) -> Result<Self> {
        if nodes < 2 {
            return Err(Error::InvalidArgument("quadrature needs at least 2 nodes"));
        }
        if !(max_arc_angle > 0.0 && max_arc_angle <= 0.5 * PI) {
            return Err(Error::InvalidArgument(
                "arc subdivision angle must lie in (0, pi/2]",
            ));
        }
        Ok(Self {
            rule: GaussLegendre::new(nodes),
            max_arc_angle,
        })
    }

    pub fn nodes(&self) -> usize {
        self.rule.len()
    }

    pub fn max_arc_angle(&self) -> f64 {
        self.max_arc_angle
    }

    /// Integral of `f(piece, s)` over the arc length of `piece`.
    fn integrate<F: FnMut(f64) -> f64>(&self, piece: &BoundaryPiece, mut f: F) -> f64 {
        let len = piece.length();
        let panels = match *piece {
            BoundaryPiece::Segment { .. } => 1,
            BoundaryPiece::Arc {
                angle_start,
                angle_end,
                ..
            } => libm::ceil((angle_end - angle_start) / self.max_arc_angle).max(1.0) as usize,
        };
        let width = len / panels as f64;
        (0..panels)
            .map(|k| {
                let a = width * k as f64;
                self.rule.integrate(a, a + width, &mut f)
            })
            .sum()
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::new(8, PI / 16.0).expect("default rule is valid")
    }
}

/// Unnormalized boundary integrals of one piece.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PieceContribution {
    pub general: f64,
    /// `None` when the region has corners.
    pub smooth: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeReport {
    pub value_general: f64,
    /// `None` when the boundary has a corner.
    pub value_smooth: Option<f64>,
    pub per_piece: Vec<PieceContribution>,
    pub lambda: f64,
    pub area: f64,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("lambda must be positive and finite"))
    }
}

fn general_piece(
    piece: &BoundaryPiece,
    lambda: f64,
    field: &PolynomialVectorField,
    rule: &QuadratureRule,
) -> f64 {
    rule.integrate(piece, |s| {
        let p = piece.point_at(s);
        let nu = piece.inner_normal_at(s);
        let dv = field.jacobian(p);
        dv.trace() - dv.bilinear(nu, nu) + lambda * field.eval(p).dot(nu)
    })
}

fn smooth_piece(
    piece: &BoundaryPiece,
    lambda: f64,
    field: &PolynomialVectorField,
    rule: &QuadratureRule,
) -> f64 {
    let weight = lambda - piece.curvature();
    if weight.abs() <= 1e-12 * lambda {
        // Arcs of radius 1/lambda carry no contribution.
        return 0.0;
    }
    weight
        * rule.integrate(piece, |s| {
            field.eval(piece.point_at(s)).dot(piece.inner_normal_at(s))
        })
}

/// General boundary formula with the default rule.
pub fn derivative_general(
    region: &ArcBoundaryRegion,
    lambda: f64,
    field: &PolynomialVectorField,
) -> Result<f64> {
    derivative_general_with(region, lambda, field, &QuadratureRule::default())
}

pub fn derivative_general_with(
    region: &ArcBoundaryRegion,
    lambda: f64,
    field: &PolynomialVectorField,
    rule: &QuadratureRule,
) -> Result<f64> {
    check_lambda(lambda)?;
    let total: f64 = region
        .pieces()
        .iter()
        .map(|piece| general_piece(piece, lambda, field, rule))
        .sum();
    Ok(total / region.area())
}

/// Curvature formula with the default rule. Fails on regions with corners.
pub fn derivative_smooth(
    region: &ArcBoundaryRegion,
    lambda: f64,
    field: &PolynomialVectorField,
) -> Result<f64> {
    derivative_smooth_with(region, lambda, field, &QuadratureRule::default())
}

pub fn derivative_smooth_with(
    region: &ArcBoundaryRegion,
    lambda: f64,
    field: &PolynomialVectorField,
    rule: &QuadratureRule,
) -> Result<f64> {
    check_lambda(lambda)?;
    if let Some((piece, angle)) = region.first_corner(CORNER_TOL) {
        return Err(Error::Corner { piece, angle });
    }
    let total: f64 = region
        .pieces()
        .iter()
        .map(|piece| smooth_piece(piece, lambda, field, rule))
        .sum();
    Ok(total / region.area())
}

/// Both formulas with per-piece contributions.
pub fn derivative_report(
    region: &ArcBoundaryRegion,
    lambda: f64,
    field: &PolynomialVectorField,
    rule: &QuadratureRule,
) -> Result<DerivativeReport> {
    check_lambda(lambda)?;
    let smooth_ok = region.first_corner(CORNER_TOL).is_none();
    let per_piece: Vec<PieceContribution> = region
        .pieces()
        .iter()
        .map(|piece| PieceContribution {
            general: general_piece(piece, lambda, field, rule),
            smooth: smooth_ok.then(|| smooth_piece(piece, lambda, field, rule)),
        })
        .collect();
    let area = region.area();
    let value_general = per_piece.iter().map(|c| c.general).sum::<f64>() / area;
    let value_smooth =
        smooth_ok.then(|| per_piece.iter().filter_map(|c| c.smooth).sum::<f64>() / area);
    Ok(DerivativeReport {
        value_general,
        value_smooth,
        per_piece,
        lambda,
        area,
    })
}

/// A point on a region boundary: piece index and arc length from the piece start.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryLocation {
    pub piece: usize,
    pub arclength: f64,
}

/// Pointwise check of `div V - (nu, DV nu) = d/ds (V . tau) - H (V, nu)`.
///
/// The tangential derivative uses a five-point stencil of width `step` in arc
/// length; the stencil must stay inside the piece.
pub fn tangential_identity_check(
    region: &ArcBoundaryRegion,
    field: &PolynomialVectorField,
    at: BoundaryLocation,
    step: f64,
) -> Result<f64> {
    let piece = region
        .pieces()
        .get(at.piece)
        .ok_or(Error::InvalidArgument("piece index out of range"))?;
    if !(step > 0.0) {
        return Err(Error::InvalidArgument("step must be positive"));
    }
    let s = at.arclength;
    if s - 2.0 * step < 0.0 || s + 2.0 * step > piece.length() {
        return Err(Error::InvalidArgument(
            "location too close to a joint for the stencil",
        ));
    }
    let p = piece.point_at(s);
    let nu = piece.inner_normal_at(s);
    let dv = field.jacobian(p);
    let lhs = dv.trace() - dv.bilinear(nu, nu);

    let g = |s: f64| field.eval(piece.point_at(s)).dot(piece.tangent_at(s));
    let dg = (g(s - 2.0 * step) - 8.0 * g(s - step) + 8.0 * g(s + step) - g(s + 2.0 * step))
        / (12.0 * step);
    let rhs = dg - piece.curvature() * field.eval(p).dot(nu);
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cheeger_exact::cheeger_convex;
    use crate::fields::Mat2;
    use crate::geometry::{Point2, Polygon};

    fn unit_disk() -> ArcBoundaryRegion {
        ArcBoundaryRegion::disk(Point2::ORIGIN, 1.0).unwrap()
    }

    #[test]
    fn disk_dilation_is_minus_lambda() {
        let v = PolynomialVectorField::dilation();
        let g = derivative_general(&unit_disk(), 2.0, &v).unwrap();
        let s = derivative_smooth(&unit_disk(), 2.0, &v).unwrap();
        assert!((g + 2.0).abs() < 1e-13, "{g}");
        assert!((s + 2.0).abs() < 1e-13, "{s}");
        let big = ArcBoundaryRegion::disk(Point2::new(0.0, 0.0), 3.0).unwrap();
        assert!((derivative_smooth(&big, 2.0 / 3.0, &v).unwrap() + 2.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn disk_translation_and_rotation_vanish() {
        let d = unit_disk();
        for v in [
            PolynomialVectorField::translation_x(),
            PolynomialVectorField::rotation(),
        ] {
            assert!(derivative_general(&d, 2.0, &v).unwrap().abs() < 1e-14);
            assert!(derivative_smooth(&d, 2.0, &v).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn square_cheeger_set_dilation() {
        let res = cheeger_convex(&Polygon::rectangle(1.0, 1.0).unwrap()).unwrap();
        let v = PolynomialVectorField::dilation();
        let g = derivative_general(&res.cheeger_set, res.lambda, &v).unwrap();
        let s = derivative_smooth(&res.cheeger_set, res.lambda, &v).unwrap();
        assert!((g + res.lambda).abs() < 1e-10);
        assert!((s + res.lambda).abs() < 1e-10);
    }

    #[test]
    fn corners_refuse_smooth_formula() {
        let sq = ArcBoundaryRegion::from_polygon(&Polygon::rectangle(1.0, 1.0).unwrap());
        let v = PolynomialVectorField::dilation();
        assert!(matches!(
            derivative_smooth(&sq, 4.0, &v),
            Err(Error::Corner { piece: 0, .. })
        ));
        let report = derivative_report(&sq, 4.0, &v, &QuadratureRule::default()).unwrap();
        assert!(report.value_smooth.is_none());
        assert!((report.value_general - derivative_general(&sq, 4.0, &v).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_lambda_and_rules() {
        let v = PolynomialVectorField::dilation();
        assert!(derivative_general(&unit_disk(), 0.0, &v).is_err());
        assert!(derivative_smooth(&unit_disk(), f64::NAN, &v).is_err());
        assert!(QuadratureRule::new(1, 0.1).is_err());
        assert!(QuadratureRule::new(4, 2.0).is_err());
    }

    #[test]
    fn tangential_identity_examples() {
        let sq = ArcBoundaryRegion::from_polygon(&Polygon::rectangle(1.0, 1.0).unwrap());
        let dil = PolynomialVectorField::dilation();
        let at = BoundaryLocation {
            piece: 1,
            arclength: 0.4,
        };
        assert!(tangential_identity_check(&sq, &dil, at, 1e-3).unwrap() <= 1e-8);

        let r = 0.3;
        let c = Point2::new(0.2, -0.1);
        let arc_region = ArcBoundaryRegion::disk(c, r).unwrap();
        let centered = PolynomialVectorField::dilation_about(c);
        let at = BoundaryLocation {
            piece: 2,
            arclength: 0.2,
        };
        assert!(tangential_identity_check(&arc_region, &centered, at, 1e-4 * r).unwrap() <= 1e-6);

        let zero = PolynomialVectorField::zero();
        assert_eq!(
            tangential_identity_check(&arc_region, &zero, at, 1e-4).unwrap(),
            0.0
        );

        let joint = BoundaryLocation {
            piece: 0,
            arclength: 0.0,
        };
        assert!(tangential_identity_check(&sq, &dil, joint, 1e-3).is_err());
    }

    #[test]
    fn general_and_smooth_agree_on_linear_field() {
        let res =
            cheeger_convex(&Polygon::regular(5, 1.3, Point2::new(0.4, 0.1)).unwrap()).unwrap();
        let v = PolynomialVectorField::linear(Mat2([[0.3, -1.2], [0.7, 0.5]]));
        let rep = derivative_report(&res.cheeger_set, res.lambda, &v, &QuadratureRule::default())
            .unwrap();
        let s = rep.value_smooth.unwrap();
        assert!((rep.value_general - s).abs() <= 1e-8 * (1.0 + rep.value_general.abs()));
    }
}
