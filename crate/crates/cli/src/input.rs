//! Manifold definition files.
//!
//! ```json
//! {
//!   "coordinates": ["x", "y", "z"],
//!   "frame":  [["exp(z)", "0", "0"], ["0", "exp(z)", "0"], ["0", "0", "1"]],
//!   "metric": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "-1"]],
//!   "contact": {
//!     "phi": [["0", "-1", "0"], ["1", "0", "0"], ["0", "0", "0"]],
//!     "xi": ["0", "0", "1"]
//!   }
//! }
//! ```
//!
//! Row `i` of `frame` holds the coordinate components of `e_i`. Column `j`
//! of `phi` holds the frame components of `φ(e_j)`.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use sasaki_core::contact::{check_axioms, AxiomReport, ContactStructure, StructureError};
use sasaki_core::expr::{parse, symbols, Expr, ExprError, Symbol};
use sasaki_core::fixtures;
use sasaki_core::frame::{Connection, FrameManifold, FrameVectorField, GeometryError};
use sasaki_core::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldFile {
    pub coordinates: Vec<String>,
    pub frame: Vec<Vec<String>>,
    pub metric: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contact: Option<ContactFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContactFile {
    pub phi: Vec<Vec<String>>,
    pub xi: Vec<String>,
}

/// Problems with the input itself; mapped to exit code 2.
#[derive(Debug)]
pub enum InputError {
    Io(String, std::io::Error),
    Json(serde_json::Error),
    Expr { field: String, error: ExprError },
    Shape(String),
    Geometry(GeometryError),
    Structure(StructureError),
    Argument(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io(path, e) => write!(f, "{path}: {e}"),
            InputError::Json(e) => write!(f, "invalid JSON at line {} column {}: {e}", e.line(), e.column()),
            InputError::Expr { field, error } => write!(f, "{field}: {error}"),
            InputError::Shape(s) => write!(f, "{s}"),
            InputError::Geometry(e) => write!(f, "{e}"),
            InputError::Structure(e) => write!(f, "{e}"),
            InputError::Argument(s) => write!(f, "{s}"),
        }
    }
}

impl std::error::Error for InputError {}

fn strings<const N: usize>(rows: &[[&str; N]]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
}

impl ManifoldFile {
    pub fn example() -> Self {
        ManifoldFile {
            coordinates: fixtures::EXAMPLE_COORDS.iter().map(|s| s.to_string()).collect(),
            frame: strings(&fixtures::EXAMPLE_FRAME),
            metric: strings(&fixtures::EXAMPLE_METRIC),
            contact: Some(ContactFile {
                phi: strings(&fixtures::EXAMPLE_PHI),
                xi: fixtures::EXAMPLE_XI.iter().map(|s| s.to_string()).collect(),
            }),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(InputError::Json)
    }

    pub fn load(path: &Path) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path).map_err(|e| InputError::Io(path.display().to_string(), e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn build(&self) -> Result<Model, InputError> {
        let names: Vec<&str> = self.coordinates.iter().map(String::as_str).collect();
        let coords = symbols(&names).map_err(|error| InputError::Expr {
            field: "coordinates".into(),
            error,
        })?;
        let d = coords.len();
        let frame = parse_matrix("frame", &self.frame, d, &coords)?;
        let metric = parse_matrix("metric", &self.metric, d, &coords)?;
        let manifold = FrameManifold::new(coords.clone(), frame, metric).map_err(InputError::Geometry)?;
        let contact = match &self.contact {
            None => None,
            Some(c) => {
                let phi = parse_matrix("contact.phi", &c.phi, d, &coords)?;
                if c.xi.len() != d {
                    return Err(InputError::Shape(format!("contact.xi must have {d} entries")));
                }
                let xi = c
                    .xi
                    .iter()
                    .enumerate()
                    .map(|(i, s)| parse_at(&format!("contact.xi[{i}]"), s, &coords))
                    .collect::<Result<Vec<_>, _>>()?;
                Some((phi, FrameVectorField(xi)))
            }
        };
        let connection = manifold.levi_civita();
        Ok(Model {
            manifold,
            connection,
            contact,
        })
    }
}

fn parse_at(field: &str, text: &str, coords: &[Symbol]) -> Result<Expr, InputError> {
    parse(text, coords).map_err(|error| InputError::Expr {
        field: field.to_string(),
        error,
    })
}

fn parse_matrix(name: &str, rows: &[Vec<String>], d: usize, coords: &[Symbol]) -> Result<Matrix<Expr>, InputError> {
    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
        return Err(InputError::Shape(format!("{name} must be {d}x{d} to match the coordinates")));
    }
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, s)| parse_at(&format!("{name}[{i}][{j}]"), s, coords))
                .collect()
        })
        .collect()
}

/// Parsed manifold with its Levi-Civita connection and the raw contact
/// data, not yet validated against the axioms.
#[derive(Debug, Clone)]
pub struct Model {
    pub manifold: FrameManifold,
    pub connection: Connection,
    pub contact: Option<(Matrix<Expr>, FrameVectorField)>,
}

impl Model {
    pub fn axioms(&self) -> Option<Result<AxiomReport, InputError>> {
        self.contact
            .as_ref()
            .map(|(phi, xi)| check_axioms(&self.manifold, phi, xi).map_err(InputError::Structure))
    }

    /// The contact structure if all axioms hold.
    pub fn structure(&self) -> Option<ContactStructure> {
        let (phi, xi) = self.contact.as_ref()?;
        ContactStructure::attach(&self.connection, phi.clone(), xi.clone()).ok()
    }

    /// True when the parsed data equals the built-in example.
    pub fn is_builtin_example(&self) -> bool {
        let ex = fixtures::example_manifold();
        let m = &self.manifold;
        m.coords() == ex.coords()
            && m.frame() == ex.frame()
            && m.metric() == ex.metric()
            && self
                .contact
                .as_ref()
                .is_some_and(|(phi, xi)| *phi == fixtures::example_phi() && *xi == fixtures::example_xi())
    }
}
