//! Built-in manifolds used by the CLI, the examples and the test suites.

use num_rational::BigRational;

use crate::contact::ContactStructure;
use crate::expr::{parse, symbols, Expr, ExprError, Symbol};
use crate::frame::{FrameManifold, FrameVectorField, GeometryError};
use crate::linalg::Matrix;

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub const EXAMPLE_COORDS: [&str; 3] = ["x", "y", "z"];
pub const EXAMPLE_FRAME: [[&str; 3]; 3] = [["exp(z)", "0", "0"], ["0", "exp(z)", "0"], ["0", "0", "1"]];
pub const EXAMPLE_METRIC: [[&str; 3]; 3] = [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "-1"]];
/// Column `j` is `φ(e_j)`: `φe1 = e2`, `φe2 = −e1`, `φe3 = 0`.
pub const EXAMPLE_PHI: [[&str; 3]; 3] = [["0", "-1", "0"], ["1", "0", "0"], ["0", "0", "0"]];
pub const EXAMPLE_XI: [&str; 3] = ["0", "0", "1"];

/// Entries for randomized diagonal frames on `(x, y, z)`.
pub const DIAGONAL_POOL: [&str; 8] = [
    "1",
    "2",
    "exp(z)",
    "exp(-x)",
    "exp(x + y)",
    "exp(1/2*y - z)",
    "x",
    "3*exp(2*z)",
];

/// Diagonal metric entries for randomized manifolds.
pub const METRIC_POOL: [&str; 6] = ["1", "-1", "2", "-1/2", "3", "exp(x)"];

pub fn matrix(rows: &[Vec<&str>], coords: &[Symbol]) -> Result<Matrix<Expr>, ExprError> {
    rows.iter()
        .map(|r| r.iter().map(|s| parse(s, coords)).collect())
        .collect()
}

fn rows3<'a>(m: &[[&'a str; 3]; 3]) -> Vec<Vec<&'a str>> {
    m.iter().map(|r| r.to_vec()).collect()
}

pub fn example_manifold() -> FrameManifold {
    example_with_metric(EXAMPLE_METRIC).expect("built-in example is valid")
}

pub fn example_with_metric(metric: [[&str; 3]; 3]) -> Result<FrameManifold, FixtureError> {
    let c = symbols(&EXAMPLE_COORDS)?;
    let frame = matrix(&rows3(&EXAMPLE_FRAME), &c)?;
    let metric = matrix(&rows3(&metric), &c)?;
    Ok(FrameManifold::new(c, frame, metric)?)
}

pub fn example_phi() -> Matrix<Expr> {
    let c = symbols(&EXAMPLE_COORDS).expect("valid names");
    matrix(&rows3(&EXAMPLE_PHI), &c).expect("valid entries")
}

pub fn example_xi() -> FrameVectorField {
    FrameVectorField::from_ints(&[0, 0, 1])
}

pub fn example_structure() -> ContactStructure {
    let m = example_manifold();
    ContactStructure::attach(&m.levi_civita(), example_phi(), example_xi())
        .expect("built-in example satisfies the axioms")
}

/// Heisenberg frame `e1 = ∂x, e2 = ∂y + k·x ∂z, e3 = ∂z` with metric
/// `diag(1, 1, −1)`, `ξ = e3` and the example's `φ`; `[e1, e2] = k e3`.
pub fn heisenberg(k: i64) -> ContactStructure {
    let c = symbols(&EXAMPLE_COORDS).expect("valid names");
    let kx = format!("{k}*x");
    let frame = matrix(
        &[vec!["1", "0", "0"], vec!["0", "1", kx.as_str()], vec!["0", "0", "1"]],
        &c,
    )
    .expect("valid entries");
    let metric = matrix(&rows3(&EXAMPLE_METRIC), &c).expect("valid entries");
    let m = FrameManifold::new(c, frame, metric).expect("nonsingular");
    ContactStructure::attach(&m.levi_civita(), example_phi(), example_xi())
        .expect("Heisenberg structure satisfies the axioms")
}

/// Coordinate frame with the example's metric and structure.
pub fn flat_structure() -> ContactStructure {
    let c = symbols(&EXAMPLE_COORDS).expect("valid names");
    let id = matrix(&rows3(&[["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]), &c)
        .expect("valid entries");
    let metric = matrix(&rows3(&EXAMPLE_METRIC), &c).expect("valid entries");
    let m = FrameManifold::new(c, id, metric).expect("nonsingular");
    ContactStructure::attach(&m.levi_civita(), example_phi(), example_xi())
        .expect("flat structure satisfies the axioms")
}

/// Frame `e_i = f_i ∂/∂x^i` on `(x, y, z)` with a diagonal metric.
pub fn diagonal_manifold(entries: [&str; 3], metric_diag: [&str; 3]) -> Result<FrameManifold, FixtureError> {
    let c = symbols(&EXAMPLE_COORDS)?;
    let mut frame = vec![vec![Expr::zero(); 3]; 3];
    let mut metric = vec![vec![Expr::zero(); 3]; 3];
    for i in 0..3 {
        frame[i][i] = parse(entries[i], &c)?;
        metric[i][i] = parse(metric_diag[i], &c)?;
    }
    Ok(FrameManifold::new(c, frame, metric)?)
}

/// Homogeneous frame on coordinates `(x1, .., x_{d-1}, t)`:
/// `e_i = exp(a_i t) ∂/∂x_i` for `i < d` and `e_d = ∂/∂t`, so that
/// `[e_i, e_d] = −a_i e_i`. `metric` must be a constant symmetric matrix.
pub fn homogeneous_manifold(
    exponents: &[BigRational],
    metric: &Matrix<BigRational>,
) -> Result<FrameManifold, FixtureError> {
    let d = exponents.len() + 1;
    let mut names: Vec<String> = (1..d).map(|i| format!("x{i}")).collect();
    names.push("t".into());
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let c = symbols(&name_refs)?;
    let t = c[d - 1].clone();
    let mut frame = vec![vec![Expr::zero(); d]; d];
    for (i, a) in exponents.iter().enumerate() {
        frame[i][i] = Expr::exp_linear(&[(t.clone(), a.clone())]);
    }
    frame[d - 1][d - 1] = Expr::one();
    let metric = metric
        .iter()
        .map(|r| r.iter().cloned().map(Expr::rational).collect())
        .collect();
    Ok(FrameManifold::new(c, frame, metric)?)
}
