//! Residual tables shared by the structure, curvature and soliton checks.

use serde::Serialize;

use crate::expr::Expr;
use crate::frame::FrameVectorField;

/// Nonzero left-minus-right residual at one index tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub indices: Vec<usize>,
    /// Frame components for vector identities, a single entry for scalars.
    pub value: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub id: String,
    pub domain: String,
    pub checked: usize,
    pub failures: Vec<Residual>,
}

impl IdentityCheck {
    pub fn new(id: impl Into<String>, domain: impl Into<String>) -> Self {
        IdentityCheck {
            id: id.into(),
            domain: domain.into(),
            checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn scalar(&mut self, indices: &[usize], residual: Expr) {
        self.checked += 1;
        if !residual.is_zero() {
            self.failures.push(Residual {
                indices: indices.to_vec(),
                value: vec![residual],
            });
        }
    }

    pub fn vector(&mut self, indices: &[usize], residual: FrameVectorField) {
        self.checked += 1;
        if !residual.is_zero() {
            self.failures.push(Residual {
                indices: indices.to_vec(),
                value: residual.0,
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> CheckSummary {
        CheckSummary {
            id: self.id.clone(),
            domain: self.domain.clone(),
            checked: self.checked,
            pass: self.passed(),
            first_failure: self.failures.first().map(|r| FailureText {
                indices: r.indices.clone(),
                residual: r.value.iter().map(ToString::to_string).collect(),
            }),
        }
    }
}

/// Serializable digest of an [`IdentityCheck`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub id: String,
    pub domain: String,
    pub checked: usize,
    pub pass: bool,
    pub first_failure: Option<FailureText>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureText {
    pub indices: Vec<usize>,
    pub residual: Vec<String>,
}
