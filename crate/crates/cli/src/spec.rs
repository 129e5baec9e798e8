//! JSON input formats for domains and vector fields.

use std::path::Path;

use cheeger_core::fields::NamedField;
use cheeger_core::{Point2, Polygon, PolynomialVectorField};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A polygonal domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    RegularNgon {
        n: usize,
        circumradius: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    Rectangle {
        width: f64,
        height: f64,
    },
}

impl DomainSpec {
    pub fn to_polygon(&self) -> Result<Polygon, CliError> {
        let polygon = match self {
            DomainSpec::Polygon { vertices } => {
                Polygon::new(vertices.iter().map(|v| Point2::from(*v)).collect())
            }
            DomainSpec::RegularNgon {
                n,
                circumradius,
                center,
            } => {
                if *n < 3 {
                    return Err(CliError::input("regular_ngon needs n >= 3"));
                }
                Polygon::regular(*n, *circumradius, Point2::from(*center))
            }
            DomainSpec::Rectangle { width, height } => Polygon::rectangle(*width, *height),
        };
        polygon.map_err(|e| CliError::input(format!("invalid domain: {e}")))
    }

    /// The explicit vertex-list form of `polygon`.
    pub fn from_polygon(polygon: &Polygon) -> Self {
        DomainSpec::Polygon {
            vertices: polygon.vertices().iter().map(|p| [p.x, p.y]).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::input(format!("domain JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("domain specs always serialize")
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::from_json(&read(path)?)
    }
}

/// A polynomial vector field of degree at most 4.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Named {
        name: String,
    },
    Polynomial {
        vx: Vec<(usize, usize, f64)>,
        vy: Vec<(usize, usize, f64)>,
    },
}

impl FieldSpec {
    pub fn to_field(&self) -> Result<PolynomialVectorField, CliError> {
        match self {
            FieldSpec::Named { name } => NamedField::from_name(name)
                .map(NamedField::field)
                .ok_or_else(|| {
                    let known: Vec<&str> = NamedField::ALL.iter().map(|f| f.name()).collect();
                    CliError::input(format!(
                        "unknown field name {name:?} (expected one of {})",
                        known.join(", ")
                    ))
                }),
            FieldSpec::Polynomial { vx, vy } => PolynomialVectorField::from_terms(vx, vy)
                .map_err(|e| CliError::input(format!("invalid field: {e}"))),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::input(format!("field JSON: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::from_json(&read(path)?)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}
