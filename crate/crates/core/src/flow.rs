//! Hyperbolic geometric flow `g'' = −2 Ric(g)` and its conformal variant
//! `g'' = −2 Ric(g) − (p + 2/d) g` on left-invariant data: constant
//! structure constants and a spatially constant frame metric. Integrated
//! with fixed-step classical RK4.

use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::frame::FrameManifold;

/// `c[i][j][k]`: the `e_k` component of `[e_i, e_j]`.
pub type StructureConstants = Vec<Vec<Vec<f64>>>;

pub const DEGENERATE_DET: f64 = 1e-12;
const VALIDATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("metric is singular")]
    SingularMetric,
    #[error("initial metric is degenerate: |det g0| = {0:e}")]
    Degenerate(f64),
    #[error("{0} is not symmetric")]
    NotSymmetric(&'static str),
    #[error("matrix sizes do not match dimension {0}")]
    Dimension(usize),
    #[error("structure constants not antisymmetric at ({0}, {1}, {2})")]
    NotAntisymmetric(usize, usize, usize),
    #[error("Jacobi identity fails with residual {0:e}")]
    Jacobi(f64),
    #[error("structure functions are not constant")]
    NonConstantStructure,
    #[error("step size must be nonzero and finite")]
    StepSize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FlowKind {
    Hyperbolic,
    Conformal { p: f64 },
}

impl FlowKind {
    /// Coefficient of `g` in the forcing: `p + 2/d` or zero.
    pub fn offset(&self, d: usize) -> f64 {
        match *self {
            FlowKind::Hyperbolic => 0.0,
            FlowKind::Conformal { p } => p + 2.0 / d as f64,
        }
    }
}

/// Constant structure constants of a frame manifold, if its brackets are
/// constant.
pub fn structure_constants(m: &FrameManifold) -> Result<StructureConstants, FlowError> {
    m.structure()
        .iter()
        .map(|a| {
            a.iter()
                .map(|b| {
                    b.iter()
                        .map(|e| {
                            e.as_rational()
                                .and_then(|q| q.to_f64())
                                .ok_or(FlowError::NonConstantStructure)
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

pub fn structure_from_rationals(c: &[Vec<Vec<BigRational>>]) -> StructureConstants {
    c.iter()
        .map(|a| a.iter().map(|b| b.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect()).collect())
        .collect()
}

/// Ricci tensor of the left-invariant metric `g` with structure constants
/// `c`, same trace convention as the symbolic curvature module.
pub fn ricci_numeric(g: &DMatrix<f64>, c: &StructureConstants) -> Result<DMatrix<f64>, FlowError> {
    let d = g.nrows();
    let ginv = g.clone().try_inverse().ok_or(FlowError::SingularMetric)?;
    // b[a][b][k] = g([e_a, e_b], e_k)
    let mut b = vec![vec![vec![0.0; d]; d]; d];
    for (x, row) in b.iter_mut().enumerate() {
        for (y, v) in row.iter_mut().enumerate() {
            for (k, out) in v.iter_mut().enumerate() {
                *out = (0..d).map(|m| c[x][y][m] * g[(m, k)]).sum();
            }
        }
    }
    let mut gamma = vec![vec![vec![0.0; d]; d]; d];
    for i in 0..d {
        for j in 0..d {
            for m in 0..d {
                gamma[i][j][m] = 0.5
                    * (0..d)
                        .map(|k| (b[i][j][k] - b[j][k][i] - b[i][k][j]) * ginv[(k, m)])
                        .sum::<f64>();
            }
        }
    }
    let mut ric = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                // e_i component of R(e_i, e_j) e_k
                let mut r = 0.0;
                for a in 0..d {
                    r += gamma[j][k][a] * gamma[i][a][i] - gamma[i][k][a] * gamma[j][a][i];
                    r -= c[i][j][a] * gamma[a][k][i];
                }
                ric[(j, k)] += r;
            }
        }
    }
    Ok(ric)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub g: DMatrix<f64>,
    pub k: DMatrix<f64>,
}

fn symmetrize(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

fn asymmetry(a: &DMatrix<f64>) -> f64 {
    (a - a.transpose()).amax()
}

fn forcing(g: &DMatrix<f64>, c: &StructureConstants, kind: FlowKind) -> Result<DMatrix<f64>, FlowError> {
    let d = g.nrows();
    Ok(ricci_numeric(g, c)? * -2.0 - g * kind.offset(d))
}

fn rk4_raw(s: &FlowState, h: f64, c: &StructureConstants, kind: FlowKind) -> Result<FlowState, FlowError> {
    let f = |g: &DMatrix<f64>| forcing(g, c, kind);
    let (g, k) = (&s.g, &s.k);
    let a1 = f(g)?;
    let (g2, k2) = (g + k * (h / 2.0), k + &a1 * (h / 2.0));
    let a2 = f(&g2)?;
    let (g3, k3) = (g + &k2 * (h / 2.0), k + &a2 * (h / 2.0));
    let a3 = f(&g3)?;
    let (g4, k4) = (g + &k3 * h, k + &a3 * h);
    let a4 = f(&g4)?;
    Ok(FlowState {
        g: g + (k + &k2 * 2.0 + &k3 * 2.0 + &k4) * (h / 6.0),
        k: k + (a1 + a2 * 2.0 + a3 * 2.0 + a4) * (h / 6.0),
    })
}

/// One classical RK4 step of `g' = k, k' = forcing(g)`, symmetrized.
/// Negative `h` steps backwards.
pub fn step_rk4(s: &FlowState, h: f64, c: &StructureConstants, kind: FlowKind) -> Result<FlowState, FlowError> {
    let next = rk4_raw(s, h, c, kind)?;
    Ok(FlowState {
        g: symmetrize(&next.g),
        k: symmetrize(&next.k),
    })
}

#[derive(Debug, Clone)]
pub struct FlowProblem {
    pub structure: StructureConstants,
    pub g0: DMatrix<f64>,
    pub k0: DMatrix<f64>,
    pub kind: FlowKind,
    pub h: f64,
    pub steps: usize,
}

impl FlowProblem {
    pub fn new(
        structure: StructureConstants,
        g0: DMatrix<f64>,
        k0: DMatrix<f64>,
        kind: FlowKind,
        h: f64,
        steps: usize,
    ) -> Result<Self, FlowError> {
        let d = g0.nrows();
        if g0.ncols() != d
            || k0.shape() != (d, d)
            || structure.len() != d
            || structure.iter().any(|a| a.len() != d || a.iter().any(|b| b.len() != d))
        {
            return Err(FlowError::Dimension(d));
        }
        if !(h.is_finite() && h != 0.0) {
            return Err(FlowError::StepSize);
        }
        if asymmetry(&g0) > VALIDATION_TOL {
            return Err(FlowError::NotSymmetric("g0"));
        }
        if asymmetry(&k0) > VALIDATION_TOL {
            return Err(FlowError::NotSymmetric("k0"));
        }
        let det = g0.determinant();
        if det.abs() < DEGENERATE_DET {
            return Err(FlowError::Degenerate(det));
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if (structure[i][j][k] + structure[j][i][k]).abs() > VALIDATION_TOL {
                        return Err(FlowError::NotAntisymmetric(i, j, k));
                    }
                }
            }
        }
        let jac = jacobi_residual(&structure);
        if jac > VALIDATION_TOL {
            return Err(FlowError::Jacobi(jac));
        }
        Ok(FlowProblem {
            structure,
            g0,
            k0,
            kind,
            h,
            steps,
        })
    }
}

/// Largest component of the cyclic sum `[[e_i,e_j],e_k] + …`.
pub fn jacobi_residual(c: &StructureConstants) -> f64 {
    let d = c.len();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let s: f64 = (0..d)
                        .map(|m| c[i][j][m] * c[m][k][l] + c[j][k][m] * c[m][i][l] + c[k][i][m] * c[m][j][l])
                        .sum();
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

pub fn signature(g: &DMatrix<f64>) -> Signature {
    let ev = SymmetricEigen::new(g.clone()).eigenvalues;
    Signature {
        positive: ev.iter().filter(|&&x| x > 0.0).count(),
        negative: ev.iter().filter(|&&x| x < 0.0).count(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Largest `|A − Aᵀ|` over `g` and `k` before symmetrization.
    pub symmetry_drift: f64,
    pub det: f64,
    pub signature: Signature,
    pub scalar: f64,
    /// Frobenius norm of `Ric − (r/d) g`.
    pub einstein_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub g: DMatrix<f64>,
    pub k: DMatrix<f64>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HaltReason {
    Degenerate,
    SignatureChange,
    StageSingular,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Halt {
    /// Time of the last accepted sample.
    pub t: f64,
    pub reason: HaltReason,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrajectory {
    pub kind: FlowKind,
    pub h: f64,
    pub samples: Vec<Sample>,
    pub halted: Option<Halt>,
}

fn diagnostics(g: &DMatrix<f64>, drift: f64, c: &StructureConstants) -> Result<Diagnostics, FlowError> {
    let d = g.nrows();
    let ric = ricci_numeric(g, c)?;
    let ginv = g.clone().try_inverse().ok_or(FlowError::SingularMetric)?;
    let scalar = (&ginv * &ric).trace();
    Ok(Diagnostics {
        symmetry_drift: drift,
        det: g.determinant(),
        signature: signature(g),
        scalar,
        einstein_residual: (&ric - g * (scalar / d as f64)).norm(),
    })
}

/// Runs `problem.steps` steps, halting early when the metric degenerates
/// (`|det g| < 1e−12`) or its signature changes.
pub fn integrate(problem: &FlowProblem) -> Result<FlowTrajectory, FlowError> {
    let c = &problem.structure;
    let sig0 = signature(&problem.g0);
    let mut state = FlowState {
        g: problem.g0.clone(),
        k: problem.k0.clone(),
    };
    let mut samples = vec![Sample {
        t: 0.0,
        g: state.g.clone(),
        k: state.k.clone(),
        diagnostics: diagnostics(&state.g, 0.0, c)?,
    }];
    let mut halted = None;
    for n in 1..=problem.steps {
        let t_prev = (n - 1) as f64 * problem.h;
        let raw = match rk4_raw(&state, problem.h, c, problem.kind) {
            Ok(s) => s,
            Err(_) => {
                halted = Some(Halt {
                    t: t_prev,
                    reason: HaltReason::StageSingular,
                });
                break;
            }
        };
        let drift = asymmetry(&raw.g).max(asymmetry(&raw.k));
        state = FlowState {
            g: symmetrize(&raw.g),
            k: symmetrize(&raw.k),
        };
        if state.g.determinant().abs() < DEGENERATE_DET {
            halted = Some(Halt {
                t: t_prev,
                reason: HaltReason::Degenerate,
            });
            break;
        }
        if signature(&state.g) != sig0 {
            halted = Some(Halt {
                t: t_prev,
                reason: HaltReason::SignatureChange,
            });
            break;
        }
        let diagnostics = match diagnostics(&state.g, drift, c) {
            Ok(d) => d,
            Err(_) => {
                halted = Some(Halt {
                    t: t_prev,
                    reason: HaltReason::Degenerate,
                });
                break;
            }
        };
        samples.push(Sample {
            t: n as f64 * problem.h,
            g: state.g.clone(),
            k: state.k.clone(),
            diagnostics,
        });
    }
    Ok(FlowTrajectory {
        kind: problem.kind,
        h: problem.h,
        samples,
        halted,
    })
}

/// Largest `‖g(t) − σ(t) g0‖ / ‖g0‖` over the samples, Frobenius norms,
/// with `σ(t) = 1 + λt − μt²`.
pub fn self_similar_check(traj: &FlowTrajectory, g0: &DMatrix<f64>, lambda: f64, mu: f64) -> f64 {
    let n0 = g0.norm();
    traj.samples
        .iter()
        .map(|s| {
            let sigma = 1.0 + lambda * s.t - mu * s.t * s.t;
            (&s.g - g0 * sigma).norm() / n0
        })
        .fold(0.0, f64::max)
}

fn upper(m: &DMatrix<f64>) -> Vec<f64> {
    let d = m.nrows();
    (0..d).flat_map(|i| (i..d).map(move |j| m[(i, j)])).collect()
}

/// CSV header: `t`, upper-triangle `g_ij` row-major, the same for `k_ij`,
/// then `det`, `r`, `einstein_residual`. Indices are 1-based.
pub fn csv_header(d: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for name in ["g", "k"] {
        for i in 0..d {
            for j in i..d {
                h.push(format!("{name}{}{}", i + 1, j + 1));
            }
        }
    }
    h.extend(["det", "r", "einstein_residual"].map(String::from));
    h
}

impl Sample {
    pub fn csv_row(&self) -> Vec<f64> {
        let mut r = vec![self.t];
        r.extend(upper(&self.g));
        r.extend(upper(&self.k));
        r.extend([self.diagnostics.det, self.diagnostics.scalar, self.diagnostics.einstein_residual]);
        r
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleDocument {
    pub t: f64,
    pub g: Vec<Vec<f64>>,
    pub k: Vec<Vec<f64>>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryDocument {
    pub kind: FlowKind,
    pub h: f64,
    pub halted: Option<Halt>,
    pub samples: Vec<SampleDocument>,
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl FlowTrajectory {
    pub fn document(&self) -> TrajectoryDocument {
        TrajectoryDocument {
            kind: self.kind,
            h: self.h,
            halted: self.halted,
            samples: self
                .samples
                .iter()
                .map(|s| SampleDocument {
                    t: s.t,
                    g: rows(&s.g),
                    k: rows(&s.k),
                    diagnostics: s.diagnostics.clone(),
                })
                .collect(),
        }
    }
}
