//! Lorentzian almost-contact structures `(φ, ξ, η, g)` on a frame manifold.
//!
//! `phi[i][j]` is the `e_i` component of `φ(e_j)`, i.e. column `j` holds the
//! image of `e_j`. The 1-form is never supplied: it is derived from the metric
//! as `η(X) = −g(X, ξ)`, which is the same statement as `g(X, ξ) = −η(X)`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::expr::Expr;
use crate::frame::{Connection, FrameManifold, FrameVectorField};
use crate::linalg::Matrix;
use crate::residual::IdentityCheck;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    TimelikeXi,
    EtaOfXi,
    PhiSquared,
    PhiOfXi,
    EtaAfterPhi,
    Compatibility,
    PhiSkew,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [
        Axiom::TimelikeXi,
        Axiom::EtaOfXi,
        Axiom::PhiSquared,
        Axiom::PhiOfXi,
        Axiom::EtaAfterPhi,
        Axiom::Compatibility,
        Axiom::PhiSkew,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Axiom::TimelikeXi => "g(ξ,ξ) = −1",
            Axiom::EtaOfXi => "η(ξ) = 1",
            Axiom::PhiSquared => "φ² = −I + η⊗ξ",
            Axiom::PhiOfXi => "φ(ξ) = 0",
            Axiom::EtaAfterPhi => "η∘φ = 0",
            Axiom::Compatibility => "g(φX,φY) = g(X,Y) + η(X)η(Y)",
            Axiom::PhiSkew => "g(X,φY) = −g(φX,Y)",
        }
    }

    fn domain(self) -> &'static str {
        match self {
            Axiom::TimelikeXi | Axiom::EtaOfXi | Axiom::PhiOfXi => "ξ",
            Axiom::EtaAfterPhi => "frame vectors e_j",
            Axiom::PhiSquared | Axiom::Compatibility | Axiom::PhiSkew => "frame pairs (e_i, e_j)",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("axiom `{axiom}` violated at {indices:?}: residual {residual}")]
    Axiom {
        axiom: Axiom,
        indices: Vec<usize>,
        residual: String,
    },
    #[error("no frame vector e_i with η(e_i) = 0, g(e_i,e_i) ≠ 0 and g(φe_i,φe_i) ≠ 0")]
    NoProbe,
    #[error("frame vector {0} is not a valid probe")]
    InvalidProbe(usize),
    #[error("trans-Sasakian identity `{identity}` fails at {indices:?}")]
    NotTransSasakian { identity: String, indices: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub eta: Vec<Expr>,
    pub checks: Vec<(Axiom, IdentityCheck)>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, c)| c.passed())
    }

    pub fn first_violation(&self) -> Option<StructureError> {
        self.checks.iter().find_map(|(axiom, c)| {
            c.failures.first().map(|r| StructureError::Axiom {
                axiom: *axiom,
                indices: r.indices.clone(),
                residual: r.value.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
            })
        })
    }
}

/// `η(e_i) = −Σ_j g[i][j] ξ[j]`.
pub fn derive_eta(m: &FrameManifold, xi: &FrameVectorField) -> Vec<Expr> {
    (0..m.dim())
        .map(|i| -m.inner(&m.basis(i), xi))
        .collect()
}

fn apply_matrix(p: &Matrix<Expr>, v: &FrameVectorField) -> FrameVectorField {
    let support = v.support();
    FrameVectorField(
        p.iter()
            .map(|row| support.iter().map(|&j| &row[j] * &v.0[j]).sum())
            .collect(),
    )
}

fn dot(eta: &[Expr], v: &FrameVectorField) -> Expr {
    v.support().into_iter().map(|i| &eta[i] * &v.0[i]).sum()
}

/// Evaluates every almost-contact metric axiom without failing early.
pub fn check_axioms(
    m: &FrameManifold,
    phi: &Matrix<Expr>,
    xi: &FrameVectorField,
) -> Result<AxiomReport, StructureError> {
    let d = m.dim();
    if phi.len() != d || phi.iter().any(|r| r.len() != d) {
        return Err(StructureError::Dimension(format!("phi must be {d}x{d}")));
    }
    if xi.dim() != d {
        return Err(StructureError::Dimension(format!("xi must have {d} components")));
    }
    let eta = derive_eta(m, xi);
    let g = m.metric();
    let phi_e: Vec<FrameVectorField> = (0..d).map(|j| apply_matrix(phi, &m.basis(j))).collect();
    let mut checks: Vec<(Axiom, IdentityCheck)> = Axiom::ALL
        .iter()
        .map(|&a| (a, IdentityCheck::new(a.label(), a.domain())))
        .collect();
    fn at(checks: &mut [(Axiom, IdentityCheck)], a: Axiom) -> &mut IdentityCheck {
        &mut checks[a as usize].1
    }

    at(&mut checks, Axiom::TimelikeXi).scalar(&[], m.inner(xi, xi) + Expr::one());
    at(&mut checks, Axiom::EtaOfXi).scalar(&[], dot(&eta, xi) - Expr::one());
    for i in 0..d {
        for j in 0..d {
            let sq: Expr = (0..d).map(|k| &phi[i][k] * &phi[k][j]).sum();
            let delta = if i == j { Expr::one() } else { Expr::zero() };
            at(&mut checks, Axiom::PhiSquared).scalar(&[i, j], sq + delta - &xi.0[i] * &eta[j]);
        }
    }
    at(&mut checks, Axiom::PhiOfXi).vector(&[], apply_matrix(phi, xi));
    for j in 0..d {
        at(&mut checks, Axiom::EtaAfterPhi).scalar(&[j], dot(&eta, &phi_e[j]));
    }
    for i in 0..d {
        for j in 0..d {
            let lhs = m.inner(&phi_e[i], &phi_e[j]);
            at(&mut checks, Axiom::Compatibility).scalar(&[i, j], lhs - &g[i][j] - &eta[i] * &eta[j]);
            let skew = m.inner(&m.basis(i), &phi_e[j]) + m.inner(&phi_e[i], &m.basis(j));
            at(&mut checks, Axiom::PhiSkew).scalar(&[i, j], skew);
        }
    }
    Ok(AxiomReport { eta, checks })
}

#[derive(Debug, Clone)]
pub struct ContactStructure {
    connection: Connection,
    phi: Matrix<Expr>,
    xi: FrameVectorField,
    eta: Vec<Expr>,
}

impl ContactStructure {
    /// Attaches `(φ, ξ)` and fails on the first violated axiom.
    pub fn attach(
        conn: &Connection,
        phi: Matrix<Expr>,
        xi: FrameVectorField,
    ) -> Result<Self, StructureError> {
        let report = check_axioms(conn.manifold(), &phi, &xi)?;
        if let Some(err) = report.first_violation() {
            return Err(err);
        }
        Ok(ContactStructure {
            connection: conn.clone(),
            phi,
            xi,
            eta: report.eta,
        })
    }

    pub fn manifold(&self) -> &FrameManifold {
        self.connection.manifold()
    }

    pub fn connection(&self) -> &Connection {
        &self.connection
    }

    pub fn phi(&self) -> &Matrix<Expr> {
        &self.phi
    }

    pub fn xi(&self) -> &FrameVectorField {
        &self.xi
    }

    pub fn eta(&self) -> &[Expr] {
        &self.eta
    }

    pub fn dim(&self) -> usize {
        self.manifold().dim()
    }

    pub fn phi_of(&self, v: &FrameVectorField) -> FrameVectorField {
        apply_matrix(&self.phi, v)
    }

    pub fn eta_of(&self, v: &FrameVectorField) -> Expr {
        dot(&self.eta, v)
    }

    /// `(∇_{e_i} φ) Y = ∇_{e_i}(φY) − φ(∇_{e_i} Y)`.
    pub fn nabla_phi(&self, i: usize, y: &FrameVectorField) -> FrameVectorField {
        let c = &self.connection;
        c.covariant_derivative(i, &self.phi_of(y))
            .sub(&self.phi_of(&c.covariant_derivative(i, y)))
    }

    /// `(∇_{e_i} η) Y = e_i(η(Y)) − η(∇_{e_i} Y)`.
    pub fn nabla_eta(&self, i: usize, y: &FrameVectorField) -> Expr {
        let m = self.manifold();
        m.directional_derivative(&self.eta_of(y), i)
            - self.eta_of(&self.connection.covariant_derivative(i, y))
    }

    /// `(L_V η)(X) = V(η(X)) − η([V, X])`.
    pub fn lie_eta(&self, v: &FrameVectorField, x: &FrameVectorField) -> Expr {
        let m = self.manifold();
        m.apply(v, &self.eta_of(x)) - self.eta_of(&m.bracket_fields(v, x))
    }

    /// `Φ(X, Y) = g(X, φY)`.
    pub fn fundamental_form(&self, x: &FrameVectorField, y: &FrameVectorField) -> Expr {
        self.manifold().inner(x, &self.phi_of(y))
    }

    /// Frame vectors that can serve as extraction probes.
    pub fn probes(&self) -> Vec<usize> {
        let m = self.manifold();
        (0..self.dim())
            .filter(|&i| {
                let e = m.basis(i);
                let pe = self.phi_of(&e);
                self.eta[i].is_zero()
                    && !m.metric()[i][i].is_zero()
                    && !pe.is_zero()
                    && !m.inner(&pe, &pe).is_zero()
            })
            .collect()
    }

    pub fn extract_trans_sasakian(&self) -> Result<TransSasakianReport, StructureError> {
        let probe = *self.probes().first().ok_or(StructureError::NoProbe)?;
        self.extract_with_probe(probe)
    }

    /// Reads `α, β` off `∇_{e_p} ξ = α φe_p + β e_p` and then verifies the
    /// three trans-Sasakian identities on every frame pair.
    pub fn extract_with_probe(&self, probe: usize) -> Result<TransSasakianReport, StructureError> {
        if !self.probes().contains(&probe) {
            return Err(StructureError::InvalidProbe(probe));
        }
        let m = self.manifold();
        let d = self.dim();
        let e = m.basis(probe);
        let pe = self.phi_of(&e);
        let grad = self.connection.covariant_derivative(probe, &self.xi);
        let alpha = m
            .inner(&grad, &pe)
            .checked_div(&m.inner(&pe, &pe))
            .expect("probe has g(φe,φe) ≠ 0");
        let beta = m
            .inner(&grad, &e)
            .checked_div(&m.metric()[probe][probe])
            .expect("probe has g(e,e) ≠ 0");

        let mut nabla_phi = IdentityCheck::new(
            "(∇_Xφ)Y = α[η(Y)X + g(X,Y)ξ] − β[η(Y)φX + g(φX,Y)ξ]",
            "frame pairs (e_i, e_j)",
        );
        let mut nabla_xi = IdentityCheck::new("∇_Xξ = αφX + β(X − η(X)ξ)", "frame vectors e_i");
        let mut nabla_eta = IdentityCheck::new(
            "(∇_Xη)Y = αg(X,φY) − βg(φX,φY)",
            "frame pairs (e_i, e_j)",
        );
        for i in 0..d {
            let x = m.basis(i);
            let px = self.phi_of(&x);
            let eta_x = &self.eta[i];
            let rhs = px
                .scale(&alpha)
                .add(&x.sub(&self.xi.scale(eta_x)).scale(&beta));
            nabla_xi.vector(&[i], self.connection.covariant_derivative(i, &self.xi).sub(&rhs));
            for j in 0..d {
                let y = m.basis(j);
                let py = self.phi_of(&y);
                let eta_y = &self.eta[j];
                let a_part = x.scale(eta_y).add(&self.xi.scale(&m.metric()[i][j]));
                let b_part = px.scale(eta_y).add(&self.xi.scale(&m.inner(&px, &y)));
                let rhs = a_part.scale(&alpha).sub(&b_part.scale(&beta));
                nabla_phi.vector(&[i, j], self.nabla_phi(i, &y).sub(&rhs));

                let rhs = &alpha * &m.inner(&x, &py) - &beta * &m.inner(&px, &py);
                nabla_eta.scalar(&[i, j], self.nabla_eta(i, &y) - rhs);
            }
        }
        let coords = m.coords();
        let constant = |f: &Expr| coords.iter().all(|x| f.differentiate(x).is_zero());
        Ok(TransSasakianReport {
            alpha_constant: constant(&alpha),
            beta_constant: constant(&beta),
            alpha,
            beta,
            probe,
            identities: vec![nabla_phi, nabla_xi, nabla_eta],
        })
    }

    /// `N⁽¹⁾..N⁽⁴⁾` on all frame arguments. `dη` inside `N⁽¹⁾` uses the
    /// alternation convention `dη(X,Y) = ½(Xη(Y) − Yη(X) − η([X,Y]))`.
    pub fn normality_tensors(&self) -> NormalityReport {
        let m = self.manifold();
        let d = self.dim();
        let half = Expr::from_ratio(1, 2);
        let mut n1 = IdentityCheck::new("N1 = [φ,φ] + 2dη⊗ξ", "frame pairs (e_i, e_j)");
        let mut n2 = IdentityCheck::new("N2 = (L_{φX}η)Y − (L_{φY}η)X", "frame pairs (e_i, e_j)");
        let mut n3 = IdentityCheck::new("N3 = (L_ξφ)X", "frame vectors e_i");
        let mut n4 = IdentityCheck::new("N4 = (L_ξη)X", "frame vectors e_i");
        for i in 0..d {
            let x = m.basis(i);
            let px = self.phi_of(&x);
            let bx = m.bracket_fields(&self.xi, &x);
            n3.vector(
                &[i],
                m.bracket_fields(&self.xi, &px).sub(&self.phi_of(&bx)),
            );
            n4.scalar(&[i], self.lie_eta(&self.xi, &x));
            for j in 0..d {
                let y = m.basis(j);
                let py = self.phi_of(&y);
                let xy = m.bracket_fields(&x, &y);
                let nijenhuis = self
                    .phi_of(&self.phi_of(&xy))
                    .add(&m.bracket_fields(&px, &py))
                    .sub(&self.phi_of(&m.bracket_fields(&px, &y)))
                    .sub(&self.phi_of(&m.bracket_fields(&x, &py)));
                let d_eta = &half
                    * &(m.directional_derivative(&self.eta[j], i)
                        - m.directional_derivative(&self.eta[i], j)
                        - self.eta_of(&xy));
                let two_d_eta = &d_eta + &d_eta;
                n1.vector(&[i, j], nijenhuis.add(&self.xi.scale(&two_d_eta)));
                n2.scalar(&[i, j], self.lie_eta(&px, &y) - self.lie_eta(&py, &x));
            }
        }
        NormalityReport {
            tensors: [n1, n2, n3, n4],
        }
    }

    /// Residuals of `dη = αΦ` and `dΦ = 2β η∧Φ` under the chosen
    /// exterior-derivative normalization.
    pub fn oubina_check(&self, alpha: &Expr, beta: &Expr, convention: DConvention) -> OubinaReport {
        let m = self.manifold();
        let d = self.dim();
        let e: Vec<FrameVectorField> = (0..d).map(|i| m.basis(i)).collect();
        let phi_form = |a: &FrameVectorField, b: &FrameVectorField| self.fundamental_form(a, b);
        let (one_form_factor, two_form_factor) = match convention {
            DConvention::Full => (Expr::one(), Expr::one()),
            DConvention::Half => (Expr::from_ratio(1, 2), Expr::from_ratio(1, 3)),
        };

        let mut d_eta = IdentityCheck::new("dη = αΦ", "frame pairs i < j");
        for i in 0..d {
            for j in i + 1..d {
                let full = m.directional_derivative(&self.eta[j], i)
                    - m.directional_derivative(&self.eta[i], j)
                    - self.eta_of(&m.bracket_fields(&e[i], &e[j]));
                d_eta.scalar(&[i, j], &one_form_factor * &full - alpha * &phi_form(&e[i], &e[j]));
            }
        }

        let mut d_phi = IdentityCheck::new("dΦ = 2βη∧Φ", "frame triples i < j < k");
        let two = Expr::from_int(2);
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let (x, y, z) = (&e[i], &e[j], &e[k]);
                    let full = m.apply(x, &phi_form(y, z)) - m.apply(y, &phi_form(x, z))
                        + m.apply(z, &phi_form(x, y))
                        - phi_form(&m.bracket_fields(x, y), z)
                        + phi_form(&m.bracket_fields(x, z), y)
                        - phi_form(&m.bracket_fields(y, z), x);
                    let wedge = &self.eta[i] * &phi_form(y, z)
                        + &self.eta[j] * &phi_form(z, x)
                        + &self.eta[k] * &phi_form(x, y);
                    d_phi.scalar(
                        &[i, j, k],
                        &two_form_factor * &full - &(&two * beta) * &wedge,
                    );
                }
            }
        }
        OubinaReport {
            convention,
            d_eta,
            d_phi,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TransSasakianReport {
    pub alpha: Expr,
    pub beta: Expr,
    pub probe: usize,
    pub alpha_constant: bool,
    pub beta_constant: bool,
    /// `∇φ`, `∇ξ` and `∇η` identities, in that order.
    pub identities: Vec<IdentityCheck>,
}

impl TransSasakianReport {
    pub fn verdict(&self) -> bool {
        self.identities.iter().all(IdentityCheck::passed)
    }

    pub fn constants(&self) -> bool {
        self.alpha_constant && self.beta_constant
    }

    pub fn verified(self) -> Result<Self, StructureError> {
        let failure = self
            .identities
            .iter()
            .find_map(|c| c.failures.first().map(|r| (c.id.clone(), r.indices.clone())));
        match failure {
            Some((identity, indices)) => Err(StructureError::NotTransSasakian { identity, indices }),
            None => Ok(self),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NormalityReport {
    pub tensors: [IdentityCheck; 4],
}

impl NormalityReport {
    pub fn normal(&self) -> bool {
        self.tensors.iter().all(IdentityCheck::passed)
    }
}

/// Normalization of the exterior derivative of a k-form: `Full` has no
/// prefactor, `Half` divides by `k + 1` (one half on 1-forms, one third on
/// 2-forms).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DConvention {
    Half,
    Full,
}

#[derive(Debug, Clone)]
pub struct OubinaReport {
    pub convention: DConvention,
    pub d_eta: IdentityCheck,
    pub d_phi: IdentityCheck,
}

impl OubinaReport {
    pub fn passed(&self) -> bool {
        self.d_eta.passed() && self.d_phi.passed()
    }
}
