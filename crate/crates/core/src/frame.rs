//! Manifolds presented by a frame of vector fields on one coordinate chart.
//!
//! Index convention used throughout the crate: `structure[i][j][k]` is the
//! `e_k` component of `[e_i, e_j]`, and `Connection::gamma[i][j][k]` is the
//! `e_k` component of `∇_{e_i} e_j` (derivative direction first).

use thiserror::Error;

use crate::expr::{Expr, Symbol};
use crate::linalg::{self, Matrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("metric is not symmetric at ({0}, {1})")]
    AsymmetricMetric(usize, usize),
    #[error("frame matrix is singular (no pivot in column {0})")]
    SingularFrame(usize),
    #[error("metric is singular (no pivot in column {0})")]
    SingularMetric(usize),
    #[error("internal invariant failed: {0}")]
    Invariant(String),
}

/// Vector field `Σ v[i] e_i` stored by frame components.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrameVectorField(pub Vec<Expr>);

impl FrameVectorField {
    pub fn zero(d: usize) -> Self {
        FrameVectorField(vec![Expr::zero(); d])
    }

    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = Self::zero(d);
        v.0[i] = Expr::one();
        v
    }

    pub fn from_ints(c: &[i64]) -> Self {
        FrameVectorField(c.iter().map(|&n| Expr::from_int(n)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Expr] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Expr::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        FrameVectorField(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        FrameVectorField(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, f: &Expr) -> Self {
        FrameVectorField(self.0.iter().map(|a| a * f).collect())
    }

    pub fn neg(&self) -> Self {
        FrameVectorField(self.0.iter().map(|a| -a).collect())
    }

    /// Indices of nonzero components.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| !self.0[i].is_zero()).collect()
    }
}

/// Sum of `coef * field` over the given pairs.
pub fn combine(d: usize, parts: &[(Expr, &FrameVectorField)]) -> FrameVectorField {
    parts
        .iter()
        .fold(FrameVectorField::zero(d), |acc, (c, v)| acc.add(&v.scale(c)))
}

#[derive(Debug, Clone)]
pub struct FrameManifold {
    coords: Vec<Symbol>,
    frame: Matrix<Expr>,
    metric: Matrix<Expr>,
    frame_inv: Matrix<Expr>,
    metric_inv: Matrix<Expr>,
    structure: Vec<Vec<Vec<Expr>>>,
}

impl FrameManifold {
    /// `frame[i][mu]` is the `∂/∂x^mu` coefficient of `e_i`; `metric[i][j]`
    /// is `g(e_i, e_j)`.
    pub fn new(
        coords: Vec<Symbol>,
        frame: Matrix<Expr>,
        metric: Matrix<Expr>,
    ) -> Result<Self, GeometryError> {
        let d = coords.len();
        if d == 0 {
            return Err(GeometryError::Dimension("no coordinates".into()));
        }
        if frame.len() != d || frame.iter().any(|r| r.len() != d) {
            return Err(GeometryError::Dimension(format!(
                "frame must be {d}x{d}"
            )));
        }
        if metric.len() != d || metric.iter().any(|r| r.len() != d) {
            return Err(GeometryError::Dimension(format!(
                "metric must be {d}x{d}"
            )));
        }
        for i in 0..d {
            for j in i + 1..d {
                if !metric[i][j].equivalent(&metric[j][i]) {
                    return Err(GeometryError::AsymmetricMetric(i, j));
                }
            }
        }
        let frame_inv = linalg::inverse(&frame).map_err(GeometryError::SingularFrame)?;
        let metric_inv = linalg::inverse(&metric).map_err(GeometryError::SingularMetric)?;

        let mut m = FrameManifold {
            coords,
            frame,
            metric,
            frame_inv,
            metric_inv,
            structure: Vec::new(),
        };
        m.structure = m.compute_structure();
        m.verify()?;
        Ok(m)
    }

    fn compute_structure(&self) -> Vec<Vec<Vec<Expr>>> {
        let d = self.dim();
        let mut c = vec![vec![vec![Expr::zero(); d]; d]; d];
        for i in 0..d {
            for j in i + 1..d {
                // coordinate components of [e_i, e_j]
                let b: Vec<Expr> = (0..d)
                    .map(|mu| {
                        self.directional_derivative(&self.frame[j][mu], i)
                            - self.directional_derivative(&self.frame[i][mu], j)
                    })
                    .collect();
                for k in 0..d {
                    let ck: Expr = (0..d).map(|mu| &b[mu] * &self.frame_inv[mu][k]).sum();
                    c[j][i][k] = -&ck;
                    c[i][j][k] = ck;
                }
            }
        }
        c
    }

    fn verify(&self) -> Result<(), GeometryError> {
        let d = self.dim();
        let prod = linalg::mat_mul(&self.metric, &self.metric_inv);
        if prod != linalg::identity::<Expr>(d) {
            return Err(GeometryError::Invariant("g * g^-1 != I".into()));
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if !(&self.structure[i][j][k] + &self.structure[j][i][k]).is_zero() {
                        return Err(GeometryError::Invariant(format!(
                            "bracket not antisymmetric at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Symbol] {
        &self.coords
    }

    pub fn frame(&self) -> &Matrix<Expr> {
        &self.frame
    }

    pub fn metric(&self) -> &Matrix<Expr> {
        &self.metric
    }

    pub fn metric_inverse(&self) -> &Matrix<Expr> {
        &self.metric_inv
    }

    /// `structure()[i][j][k]`: `e_k` component of `[e_i, e_j]`.
    pub fn structure(&self) -> &Vec<Vec<Vec<Expr>>> {
        &self.structure
    }

    /// `e_i(f) = Σ_mu A[i][mu] ∂f/∂x^mu`.
    pub fn directional_derivative(&self, f: &Expr, i: usize) -> Expr {
        self.coords
            .iter()
            .zip(&self.frame[i])
            .filter(|(_, a)| !a.is_zero())
            .map(|(x, a)| a * &f.differentiate(x))
            .sum()
    }

    /// `V(f)` for a frame-component vector field.
    pub fn apply(&self, v: &FrameVectorField, f: &Expr) -> Expr {
        v.support()
            .into_iter()
            .map(|i| &v.0[i] * &self.directional_derivative(f, i))
            .sum()
    }

    pub fn bracket_fields(&self, v: &FrameVectorField, w: &FrameVectorField) -> FrameVectorField {
        let d = self.dim();
        let mut out: Vec<Expr> = (0..d)
            .map(|k| self.apply(v, &w.0[k]) - self.apply(w, &v.0[k]))
            .collect();
        for i in v.support() {
            for j in w.support() {
                let vw = &v.0[i] * &w.0[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = &self.structure[i][j][k];
                    if !c.is_zero() {
                        *o = &*o + &(&vw * c);
                    }
                }
            }
        }
        FrameVectorField(out)
    }

    /// `g(V, W)`.
    pub fn inner(&self, v: &FrameVectorField, w: &FrameVectorField) -> Expr {
        let mut acc = Expr::zero();
        for i in v.support() {
            for j in w.support() {
                let g = &self.metric[i][j];
                if !g.is_zero() {
                    acc = acc + &v.0[i] * &(g * &w.0[j]);
                }
            }
        }
        acc
    }

    pub fn basis(&self, i: usize) -> FrameVectorField {
        FrameVectorField::basis(self.dim(), i)
    }

    /// Components of `Σ_cyclic [e_i, [e_j, e_k]]` that fail to vanish.
    pub fn jacobi_violations(&self) -> Vec<(usize, usize, usize)> {
        let d = self.dim();
        let mut bad = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let (ei, ej, ek) = (self.basis(i), self.basis(j), self.basis(k));
                    let s = self
                        .bracket_fields(&ei, &self.bracket_fields(&ej, &ek))
                        .add(&self.bracket_fields(&ej, &self.bracket_fields(&ek, &ei)))
                        .add(&self.bracket_fields(&ek, &self.bracket_fields(&ei, &ej)));
                    if !s.is_zero() {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }

    /// True when every structure function and metric entry is a constant.
    pub fn is_homogeneous(&self) -> bool {
        let brackets_constant = self.structure.iter().flatten().flatten().all(|c| {
            self.coords.iter().all(|x| c.differentiate(x).is_zero())
        });
        brackets_constant && self.metric.iter().flatten().all(Expr::is_constant)
    }

    pub fn levi_civita(&self) -> Connection {
        Connection::levi_civita(self)
    }
}

#[derive(Debug, Clone)]
pub struct Connection {
    manifold: FrameManifold,
    gamma: Vec<Vec<Vec<Expr>>>,
}

impl Connection {
    /// Koszul formula on frame triples:
    /// `2g(∇_i e_j, e_k) = e_i g_jk + e_j g_ik − e_k g_ij − g(e_i,[e_j,e_k]) − g(e_j,[e_i,e_k]) + g(e_k,[e_i,e_j])`.
    pub fn levi_civita(m: &FrameManifold) -> Self {
        let d = m.dim();
        let g = m.metric();
        let c = m.structure();
        let lower = |a: usize, b: usize, x: usize| -> Expr {
            (0..d).map(|l| &c[b][x][l] * &g[a][l]).sum()
        };
        let half = Expr::from_ratio(1, 2);
        let mut gamma = vec![vec![vec![Expr::zero(); d]; d]; d];
        for i in 0..d {
            for j in 0..d {
                let koszul: Vec<Expr> = (0..d)
                    .map(|k| {
                        m.directional_derivative(&g[j][k], i)
                            + m.directional_derivative(&g[i][k], j)
                            - m.directional_derivative(&g[i][j], k)
                            - lower(i, j, k)
                            - lower(j, i, k)
                            + lower(k, i, j)
                    })
                    .collect();
                for (mm, out) in gamma[i][j].iter_mut().enumerate() {
                    let s: Expr = (0..d).map(|k| &koszul[k] * &m.metric_inverse()[k][mm]).sum();
                    *out = &s * &half;
                }
            }
        }
        Connection {
            manifold: m.clone(),
            gamma,
        }
    }

    pub fn manifold(&self) -> &FrameManifold {
        &self.manifold
    }

    /// `gamma()[i][j][k]`: `e_k` component of `∇_{e_i} e_j`.
    pub fn gamma(&self) -> &Vec<Vec<Vec<Expr>>> {
        &self.gamma
    }

    /// `∇_{e_i} V`.
    pub fn covariant_derivative(&self, i: usize, v: &FrameVectorField) -> FrameVectorField {
        let m = &self.manifold;
        let d = m.dim();
        let support = v.support();
        FrameVectorField(
            (0..d)
                .map(|k| {
                    let lin: Expr = support
                        .iter()
                        .map(|&j| &v.0[j] * &self.gamma[i][j][k])
                        .sum();
                    m.directional_derivative(&v.0[k], i) + lin
                })
                .collect(),
        )
    }

    /// `∇_U V`, tensorial in `U`.
    pub fn covariant_along(&self, u: &FrameVectorField, v: &FrameVectorField) -> FrameVectorField {
        let d = self.manifold.dim();
        u.support().into_iter().fold(FrameVectorField::zero(d), |acc, i| {
            acc.add(&self.covariant_derivative(i, v).scale(&u.0[i]))
        })
    }

    /// Indices where `Γ[i][j][k] − Γ[j][i][k] − c[i][j][k]` is nonzero.
    pub fn torsion_violations(&self) -> Vec<(usize, usize, usize)> {
        let d = self.manifold.dim();
        let c = self.manifold.structure();
        let mut bad = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let r = &self.gamma[i][j][k] - &self.gamma[j][i][k] - &c[i][j][k];
                    if !r.is_zero() {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }

    /// Indices where `e_i(g_jk) − Σ_l (Γ[i][j][l] g_lk + Γ[i][k][l] g_jl)` is nonzero.
    pub fn metric_compatibility_violations(&self) -> Vec<(usize, usize, usize)> {
        let m = &self.manifold;
        let d = m.dim();
        let g = m.metric();
        let mut bad = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let s: Expr = (0..d)
                        .map(|l| &self.gamma[i][j][l] * &g[l][k] + &self.gamma[i][k][l] * &g[j][l])
                        .sum();
                    if !(m.directional_derivative(&g[j][k], i) - s).is_zero() {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }
}
