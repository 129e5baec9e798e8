//! Polynomial deformation fields `V: R^2 -> R^2` of total degree at most 4,
//! with exact Jacobians and divergences.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Vector2};

pub const MAX_DEGREE: usize = 4;
const N: usize = MAX_DEGREE + 1;

/// Bivariate polynomial `sum c[i][j] x^i y^j` with `i + j <= 4`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Poly2 {
    coeffs: [[f64; N]; N],
}

impl Poly2 {
    pub const ZERO: Poly2 = Poly2 {
        coeffs: [[0.0; N]; N],
    };

    /// Builds a polynomial from `(i, j, c)` triples; repeated monomials add up.
    pub fn from_terms(terms: &[(usize, usize, f64)]) -> Result<Self> {
        let mut p = Self::ZERO;
        for &(i, j, c) in terms {
            if i + j > MAX_DEGREE {
                return Err(Error::InvalidArgument("monomial degree exceeds 4"));
            }
            if !c.is_finite() {
                return Err(Error::InvalidArgument("non-finite coefficient"));
            }
            p.coeffs[i][j] += c;
        }
        Ok(p)
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Self::ZERO;
        p.coeffs[0][0] = c;
        p
    }

    /// Coefficient of `x^i y^j` (zero outside the table).
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > MAX_DEGREE {
            0.0
        } else {
            self.coeffs[i][j]
        }
    }

    /// Non-zero `(i, j, c)` terms in row-major order.
    pub fn terms(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..N {
            for j in 0..N - i {
                if self.coeffs[i][j] != 0.0 {
                    out.push((i, j, self.coeffs[i][j]));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| *c == 0.0)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms().iter().map(|(i, j, _)| i + j).max()
    }

    /// Horner in `x` over inner Horner polynomials in `y`.
    pub fn eval(&self, p: Point2) -> f64 {
        let mut acc = 0.0;
        for i in (0..N).rev() {
            let mut row = 0.0;
            for j in (0..N - i).rev() {
                row = row * p.y + self.coeffs[i][j];
            }
            acc = acc * p.x + row;
        }
        acc
    }

    pub fn d_dx(&self) -> Self {
        let mut d = Self::ZERO;
        for i in 1..N {
            for j in 0..N - i {
                d.coeffs[i - 1][j] = i as f64 * self.coeffs[i][j];
            }
        }
        d
    }

    pub fn d_dy(&self) -> Self {
        let mut d = Self::ZERO;
        for i in 0..N {
            for j in 1..N - i {
                d.coeffs[i][j - 1] = j as f64 * self.coeffs[i][j];
            }
        }
        d
    }

    fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut out = Self::ZERO;
        for i in 0..N {
            for j in 0..N - i {
                out.coeffs[i][j] = f(self.coeffs[i][j], other.coeffs[i][j]);
            }
        }
        out
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(self, o: Poly2) -> Poly2 {
        self.zip(&o, |a, b| a + b)
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(self, o: Poly2) -> Poly2 {
        self.zip(&o, |a, b| a - b)
    }
}

impl Mul<f64> for Poly2 {
    type Output = Poly2;
    fn mul(self, s: f64) -> Poly2 {
        self.zip(&Poly2::ZERO, |a, _| a * s)
    }
}

/// Row-major 2x2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn apply(&self, v: Vector2) -> Vector2 {
        Vector2::new(
            self.0[0][0] * v.x + self.0[0][1] * v.y,
            self.0[1][0] * v.x + self.0[1][1] * v.y,
        )
    }

    /// `(u, M v)`.
    pub fn bilinear(&self, u: Vector2, v: Vector2) -> f64 {
        u.dot(self.apply(v))
    }

    pub fn scaled(&self, s: f64) -> Mat2 {
        let m = self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn plus(&self, o: &Mat2) -> Mat2 {
        let (a, b) = (self.0, o.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let m = self.0;
        Some(Mat2([
            [m[1][1] / d, -m[0][1] / d],
            [-m[1][0] / d, m[0][0] / d],
        ]))
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        let [[a, b], [c, d]] = self.0;
        let s = a * a + b * b + c * c + d * d;
        let det = a * d - b * c;
        let disc = libm::sqrt((s * s - 4.0 * det * det).max(0.0));
        libm::sqrt(0.5 * (s + disc))
    }
}

/// A deformation field with exact derivative tables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolynomialVectorField {
    vx: Poly2,
    vy: Poly2,
    jac: [[Poly2; 2]; 2],
    div: Poly2,
}

impl PolynomialVectorField {
    pub fn new(vx: Poly2, vy: Poly2) -> Self {
        let jac = [[vx.d_dx(), vx.d_dy()], [vy.d_dx(), vy.d_dy()]];
        let div = jac[0][0] + jac[1][1];
        debug_assert_eq!(div, jac[0][0] + jac[1][1]);
        Self { vx, vy, jac, div }
    }

    /// Builds a field from `(i, j, c)` coefficient triples per component.
    pub fn from_terms(vx: &[(usize, usize, f64)], vy: &[(usize, usize, f64)]) -> Result<Self> {
        Ok(Self::new(Poly2::from_terms(vx)?, Poly2::from_terms(vy)?))
    }

    pub fn zero() -> Self {
        Self::new(Poly2::ZERO, Poly2::ZERO)
    }

    /// `V(x, y) = (x, y)`.
    pub fn dilation() -> Self {
        Self::linear(Mat2::IDENTITY)
    }

    /// `V(x, y) = (x - x0, y - y0)`.
    pub fn dilation_about(center: Point2) -> Self {
        Self::dilation() + Self::constant(-center)
    }

    pub fn translation_x() -> Self {
        Self::constant(Vector2::new(1.0, 0.0))
    }

    pub fn translation_y() -> Self {
        Self::constant(Vector2::new(0.0, 1.0))
    }

    /// `V(x, y) = (-y, x)`.
    pub fn rotation() -> Self {
        Self::linear(Mat2([[0.0, -1.0], [1.0, 0.0]]))
    }

    /// `V(x, y) = (y, 0)`.
    pub fn shear() -> Self {
        Self::linear(Mat2([[0.0, 1.0], [0.0, 0.0]]))
    }

    pub fn constant(v: Vector2) -> Self {
        Self::new(Poly2::constant(v.x), Poly2::constant(v.y))
    }

    /// `V(p) = M p`.
    pub fn linear(m: Mat2) -> Self {
        let [[a, b], [c, d]] = m.0;
        let mut vx = Poly2::ZERO;
        let mut vy = Poly2::ZERO;
        vx.coeffs[1][0] = a;
        vx.coeffs[0][1] = b;
        vy.coeffs[1][0] = c;
        vy.coeffs[0][1] = d;
        Self::new(vx, vy)
    }

    pub fn components(&self) -> (&Poly2, &Poly2) {
        (&self.vx, &self.vy)
    }

    /// Polynomial table of `div V`.
    pub fn divergence_poly(&self) -> &Poly2 {
        &self.div
    }

    pub fn eval(&self, p: Point2) -> Vector2 {
        Vector2::new(self.vx.eval(p), self.vy.eval(p))
    }

    /// `DV(p)`, rows are components, columns are `d/dx`, `d/dy`.
    pub fn jacobian(&self, p: Point2) -> Mat2 {
        Mat2([
            [self.jac[0][0].eval(p), self.jac[0][1].eval(p)],
            [self.jac[1][0].eval(p), self.jac[1][1].eval(p)],
        ])
    }

    /// Trace of the Jacobian at `p`.
    pub fn divergence(&self, p: Point2) -> f64 {
        self.jacobian(p).trace()
    }

    /// Exact test on the divergence coefficient table.
    pub fn is_divergence_free(&self) -> bool {
        self.div.is_zero()
    }

    pub fn degree(&self) -> usize {
        self.vx.degree().max(self.vy.degree()).unwrap_or(0)
    }

    /// Degree at most one: `x + tV(x)` maps segments to segments.
    pub fn is_affine(&self) -> bool {
        self.degree() <= 1
    }
}

impl Add for PolynomialVectorField {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.vx + o.vx, self.vy + o.vy)
    }
}

impl Mul<f64> for PolynomialVectorField {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.vx * s, self.vy * s)
    }
}

impl Neg for PolynomialVectorField {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

/// Built-in fields addressable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedField {
    Dilation,
    TranslationX,
    TranslationY,
    Rotation,
    Shear,
}

impl NamedField {
    pub const ALL: [NamedField; 5] = [
        NamedField::Dilation,
        NamedField::TranslationX,
        NamedField::TranslationY,
        NamedField::Rotation,
        NamedField::Shear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedField::Dilation => "dilation",
            NamedField::TranslationX => "translation_x",
            NamedField::TranslationY => "translation_y",
            NamedField::Rotation => "rotation",
            NamedField::Shear => "shear",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn field(self) -> PolynomialVectorField {
        match self {
            NamedField::Dilation => PolynomialVectorField::dilation(),
            NamedField::TranslationX => PolynomialVectorField::translation_x(),
            NamedField::TranslationY => PolynomialVectorField::translation_y(),
            NamedField::Rotation => PolynomialVectorField::rotation(),
            NamedField::Shear => PolynomialVectorField::shear(),
        }
    }
}

impl fmt::Display for NamedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
