//! Lie derivatives of the metric and exact solving of the hyperbolic
//! (conformal) Ricci soliton equation
//! `L_V(L_V g) + 2λ L_V g + 2S = 2μ g` (conformal: `2(μ − ½(p + 2/d)) g`).

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::curvature::CurvatureData;
use crate::expr::Expr;
use crate::frame::{Connection, FrameVectorField};
use crate::linalg::{self, LinearSolution, Matrix};
use crate::residual::IdentityCheck;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolitonError {
    #[error("vector field has {got} components, manifold dimension is {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("β = 0: the closed-form λ needs β ≠ 0")]
    BetaZero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolitonKind {
    Hyperbolic,
    Conformal { p: BigRational },
}

impl SolitonKind {
    /// `p + 2/d` for the conformal kind, zero otherwise.
    pub fn offset(&self, d: usize) -> BigRational {
        match self {
            SolitonKind::Hyperbolic => BigRational::zero(),
            SolitonKind::Conformal { p } => p + BigRational::new(2.into(), (d as i64).into()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SolitonKind::Hyperbolic => "hyperbolic",
            SolitonKind::Conformal { .. } => "conformal",
        }
    }
}

/// `(L_V g)(e_i, e_j) = g(∇_{e_i}V, e_j) + g(e_i, ∇_{e_j}V)`.
pub fn lie_derivative_metric(conn: &Connection, v: &FrameVectorField) -> Matrix<Expr> {
    let m = conn.manifold();
    let d = m.dim();
    let grads: Vec<FrameVectorField> = (0..d).map(|i| conn.covariant_derivative(i, v)).collect();
    let mut h = vec![vec![Expr::zero(); d]; d];
    for i in 0..d {
        for j in i..d {
            let e = m.inner(&grads[i], &m.basis(j)) + m.inner(&m.basis(i), &grads[j]);
            h[j][i] = e.clone();
            h[i][j] = e;
        }
    }
    h
}

fn bilinear(h: &Matrix<Expr>, u: &FrameVectorField, w: &FrameVectorField) -> Expr {
    let mut s = Expr::zero();
    for a in u.support() {
        for b in w.support() {
            s = s + &(&u.0[a] * &w.0[b]) * &h[a][b];
        }
    }
    s
}

/// `(L_V h)(e_i, e_j) = V(h_ij) − h([V,e_i], e_j) − h(e_i, [V,e_j])` with
/// `h = L_V g`.
pub fn second_lie_derivative_metric(conn: &Connection, v: &FrameVectorField) -> Matrix<Expr> {
    let m = conn.manifold();
    let d = m.dim();
    let h = lie_derivative_metric(conn, v);
    let br: Vec<FrameVectorField> = (0..d).map(|i| m.bracket_fields(v, &m.basis(i))).collect();
    let mut out = vec![vec![Expr::zero(); d]; d];
    for i in 0..d {
        for j in i..d {
            let e = m.apply(v, &h[i][j]) - bilinear(&h, &br[i], &m.basis(j)) - bilinear(&h, &m.basis(i), &br[j]);
            out[j][i] = e.clone();
            out[i][j] = e;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Expanding,
    Steady,
    Shrinking,
}

impl Regime {
    pub fn from_sign(x: &BigRational) -> Self {
        if x.is_positive() {
            Regime::Expanding
        } else if x.is_zero() {
            Regime::Steady
        } else {
            Regime::Shrinking
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Unique,
    Underdetermined,
    Inconsistent,
    NonConstantCoefficients,
}

/// `Ric ≈ a·g + b·η⊗η` by exact normal equations over all frame pairs.
#[derive(Debug, Clone)]
pub struct EtaEinsteinFit {
    pub a: Expr,
    pub b: Expr,
    pub residual: IdentityCheck,
}

impl EtaEinsteinFit {
    pub fn exact(&self) -> bool {
        self.residual.passed()
    }
}

pub fn eta_einstein_fit(ric: &Matrix<Expr>, g: &Matrix<Expr>, eta: &[Expr]) -> EtaEinsteinFit {
    let d = g.len();
    let rows: Vec<(usize, usize)> = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).collect();
    let col = |i: usize, j: usize| [g[i][j].clone(), &eta[i] * &eta[j]];
    let mut ata = vec![vec![Expr::zero(); 2]; 2];
    let mut atb = vec![Expr::zero(); 2];
    for &(i, j) in &rows {
        let c = col(i, j);
        for r in 0..2 {
            for s in 0..2 {
                ata[r][s] = &ata[r][s] + &(&c[r] * &c[s]);
            }
            atb[r] = &atb[r] + &(&c[r] * &ric[i][j]);
        }
    }
    let (a, b) = match linalg::solve(&ata, &atb) {
        LinearSolution::Unique(x) => (x[0].clone(), x[1].clone()),
        LinearSolution::Underdetermined { particular, .. } => (particular[0].clone(), particular[1].clone()),
        LinearSolution::Inconsistent => (Expr::zero(), Expr::zero()),
    };
    let mut residual = IdentityCheck::new("eta_einstein_fit", "frame pairs (i, j)");
    for &(i, j) in &rows {
        let c = col(i, j);
        residual.scalar(&[i, j], &ric[i][j] - &(&a * &c[0]) - &b * &c[1]);
    }
    EtaEinsteinFit { a, b, residual }
}

#[derive(Debug, Clone)]
pub struct SolitonProblem<'a> {
    pub curvature: &'a CurvatureData,
    pub field: FrameVectorField,
    pub kind: SolitonKind,
    /// η for the η-Einstein fit, when a contact structure is attached.
    pub eta: Option<Vec<Expr>>,
}

impl<'a> SolitonProblem<'a> {
    pub fn new(curvature: &'a CurvatureData, field: FrameVectorField, kind: SolitonKind) -> Result<Self, SolitonError> {
        let d = curvature.manifold().dim();
        if field.dim() != d {
            return Err(SolitonError::Dimension {
                expected: d,
                got: field.dim(),
            });
        }
        Ok(SolitonProblem {
            curvature,
            field,
            kind,
            eta: None,
        })
    }

    pub fn with_eta(mut self, eta: &[Expr]) -> Self {
        self.eta = Some(eta.to_vec());
        self
    }

    pub fn dim(&self) -> usize {
        self.curvature.manifold().dim()
    }

    /// Full soliton residual `L_V L_V g + 2λ L_V g + 2S − 2μ g + (p + 2/d) g`
    /// at given `(λ, μ)`.
    pub fn residual(&self, lie: &Matrix<Expr>, lie2: &Matrix<Expr>, lambda: &Expr, mu: &Expr) -> IdentityCheck {
        let d = self.dim();
        let g = self.curvature.manifold().metric();
        let q = Expr::rational(self.kind.offset(d));
        let two = Expr::from_int(2);
        let mut check = IdentityCheck::new("soliton_equation", "frame pairs (i, j)");
        for i in 0..d {
            for j in 0..d {
                let r = &lie2[i][j] + &(&(&two * lambda) * &lie[i][j]) + &two * &self.curvature.ric[i][j]
                    - &(&(&two * mu) * &g[i][j])
                    + &q * &g[i][j];
                check.scalar(&[i, j], r);
            }
        }
        check
    }
}

#[derive(Debug, Clone)]
pub struct SolitonSolution {
    pub status: SolveStatus,
    pub lambda: Option<BigRational>,
    pub mu: Option<BigRational>,
    /// Basis of `(λ, μ)` directions left free, when underdetermined.
    pub null_space: Vec<[BigRational; 2]>,
    pub lie: Matrix<Expr>,
    pub second_lie: Matrix<Expr>,
    /// Residual at the returned `(λ, μ)`, free parameters set to zero.
    pub residual: Option<IdentityCheck>,
    pub classification: Option<Regime>,
    pub eta_einstein: Option<EtaEinsteinFit>,
}

pub fn solve(problem: &SolitonProblem) -> SolitonSolution {
    let conn = problem.curvature.connection();
    let m = conn.manifold();
    let d = m.dim();
    let g = m.metric();
    let lie = lie_derivative_metric(conn, &problem.field);
    let second_lie = second_lie_derivative_metric(conn, &problem.field);
    let q = Expr::rational(problem.kind.offset(d));
    let two = Expr::from_int(2);

    let eta_einstein = problem
        .eta
        .as_ref()
        .map(|eta| eta_einstein_fit(&problem.curvature.ric, g, eta));

    let mut a: Matrix<BigRational> = Vec::new();
    let mut b: Vec<BigRational> = Vec::new();
    let mut constant = true;
    for i in 0..d {
        for j in i..d {
            let cl = &two * &lie[i][j];
            let cm = -(&two * &g[i][j]);
            let c0 = &second_lie[i][j] + &(&two * &problem.curvature.ric[i][j]) + &q * &g[i][j];
            match (cl.as_rational(), cm.as_rational(), c0.as_rational()) {
                (Some(cl), Some(cm), Some(c0)) => {
                    a.push(vec![cl, cm]);
                    b.push(-c0);
                }
                _ => constant = false,
            }
        }
    }
    let mut sol = SolitonSolution {
        status: SolveStatus::NonConstantCoefficients,
        lambda: None,
        mu: None,
        null_space: Vec::new(),
        lie,
        second_lie,
        residual: None,
        classification: None,
        eta_einstein,
    };
    if !constant {
        return sol;
    }
    let (lambda, mu) = match linalg::solve(&a, &b) {
        LinearSolution::Unique(x) => {
            sol.status = SolveStatus::Unique;
            sol.classification = Some(Regime::from_sign(&x[0]));
            (Some(x[0].clone()), Some(x[1].clone()))
        }
        LinearSolution::Underdetermined {
            particular,
            determined,
            null_space,
        } => {
            sol.status = SolveStatus::Underdetermined;
            sol.null_space = null_space.into_iter().map(|v| [v[0].clone(), v[1].clone()]).collect();
            let pick = |k: usize| determined[k].then(|| particular[k].clone());
            (pick(0), pick(1))
        }
        LinearSolution::Inconsistent => {
            sol.status = SolveStatus::Inconsistent;
            (None, None)
        }
    };
    if sol.status != SolveStatus::Inconsistent {
        let at = |x: &Option<BigRational>| Expr::rational(x.clone().unwrap_or_else(BigRational::zero));
        sol.residual = Some(problem.residual(&sol.lie, &sol.second_lie, &at(&lambda), &at(&mu)));
    }
    sol.lambda = lambda;
    sol.mu = mu;
    sol
}

/// Closed-form λ and μ-threshold regime for a `(2n+1)`-dimensional space
/// form with soliton field `ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub lambda: BigRational,
    /// μ value separating the regimes.
    pub threshold: BigRational,
    /// Regime read off from `μ` against `threshold`.
    pub regime_by_threshold: Regime,
    /// Regime read off from the sign of `lambda`.
    pub regime_by_sign: Regime,
}

impl ThresholdReport {
    pub fn consistent(&self) -> bool {
        self.regime_by_threshold == self.regime_by_sign
    }
}

/// `λ = (2(n−1)(α²−β²) + μ')/(4β) − β` with `μ' = μ − ½(p + 2/(2n+1))`
/// for the conformal kind, and threshold
/// `2{(n+1)β² − (n−1)α²} (+ ½(p + 2/(2n+1)))`.
pub fn theorem_thresholds(
    alpha: &BigRational,
    beta: &BigRational,
    n: &BigRational,
    mu: &BigRational,
    kind: &SolitonKind,
) -> Result<ThresholdReport, SolitonError> {
    if beta.is_zero() {
        return Err(SolitonError::BetaZero);
    }
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let half_offset = match kind {
        SolitonKind::Hyperbolic => BigRational::zero(),
        SolitonKind::Conformal { p } => (p + &two / (&two * n + &one)) / &two,
    };
    let ab2 = alpha * alpha - beta * beta;
    let mu_eff = mu - &half_offset;
    let lambda = (&two * (n - &one) * &ab2 + &mu_eff) / (BigRational::from_integer(4.into()) * beta) - beta;
    let threshold = &two * ((n + &one) * beta * beta - (n - &one) * alpha * alpha) + &half_offset;
    Ok(ThresholdReport {
        regime_by_threshold: Regime::from_sign(&(mu - &threshold)),
        regime_by_sign: Regime::from_sign(&lambda),
        lambda,
        threshold,
    })
}
