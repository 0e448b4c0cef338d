//! Riemann, Ricci and scalar curvature in frame components, the
//! φ-sectional curvature, the space-form curvature model, and the identity
//! suite that compares all of them.
//!
//! `riem[i][j][k][l]` is the `e_l` component of
//! `R(e_i,e_j)e_k = ∇_i∇_j e_k − ∇_j∇_i e_k − ∇_{[e_i,e_j]} e_k`, and
//! `R(X,Y,Z,W) = g(R(X,Y)Z, W)`.

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::contact::ContactStructure;
use crate::expr::Expr;
use crate::frame::{Connection, FrameManifold, FrameVectorField};
use crate::linalg::Matrix;
use crate::residual::IdentityCheck;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurvatureError {
    #[error("probe vector must satisfy η(X) = 0, g(X,X) ≠ 0 and φX ≠ 0")]
    DegenerateProbe,
    #[error("{0} must be a constant")]
    NonConstant(&'static str),
}

/// Trace convention for the Ricci tensor. `FirstSlot` is
/// `S(Y,Z) = tr(X ↦ R(X,Y)Z)`; `Negated` flips its sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RicciConvention {
    #[default]
    FirstSlot,
    Negated,
}

impl RicciConvention {
    fn apply(self, e: Expr) -> Expr {
        match self {
            RicciConvention::FirstSlot => e,
            RicciConvention::Negated => -e,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CurvatureData {
    connection: Connection,
    pub riem: Vec<Vec<Vec<Vec<Expr>>>>,
    pub r4: Vec<Vec<Vec<Vec<Expr>>>>,
    pub ric: Matrix<Expr>,
    pub scalar: Expr,
    pub convention: RicciConvention,
}

pub fn riemann(conn: &Connection) -> Vec<Vec<Vec<Vec<Expr>>>> {
    let m = conn.manifold();
    let d = m.dim();
    let gamma = conn.gamma();
    let c = m.structure();
    let mut riem = vec![vec![vec![vec![Expr::zero(); d]; d]; d]; d];
    for i in 0..d {
        for j in i + 1..d {
            for k in 0..d {
                let nj = FrameVectorField(gamma[j][k].clone());
                let ni = FrameVectorField(gamma[i][k].clone());
                let mut r = conn
                    .covariant_derivative(i, &nj)
                    .sub(&conn.covariant_derivative(j, &ni));
                for mm in 0..d {
                    if !c[i][j][mm].is_zero() {
                        let t = FrameVectorField(gamma[mm][k].clone()).scale(&c[i][j][mm]);
                        r = r.sub(&t);
                    }
                }
                for l in 0..d {
                    riem[j][i][k][l] = -&r.0[l];
                }
                riem[i][j][k] = r.0;
            }
        }
    }
    riem
}

impl CurvatureData {
    pub fn new(conn: &Connection, convention: RicciConvention) -> Self {
        let m = conn.manifold();
        let d = m.dim();
        let g = m.metric();
        let riem = riemann(conn);
        let r4: Vec<Vec<Vec<Vec<Expr>>>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        (0..d)
                            .map(|k| {
                                (0..d)
                                    .map(|l| (0..d).map(|mm| &riem[i][j][k][mm] * &g[mm][l]).sum())
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let ric: Matrix<Expr> = (0..d)
            .map(|j| {
                (0..d)
                    .map(|k| convention.apply((0..d).map(|i| riem[i][j][k][i].clone()).sum()))
                    .collect()
            })
            .collect();
        let scalar = scalar_curvature(m, &ric);
        CurvatureData {
            connection: conn.clone(),
            riem,
            r4,
            ric,
            scalar,
            convention,
        }
    }

    pub fn connection(&self) -> &Connection {
        &self.connection
    }

    pub fn manifold(&self) -> &FrameManifold {
        self.connection.manifold()
    }

    /// `R(U,V)W` for arbitrary frame-component fields.
    pub fn apply(&self, u: &FrameVectorField, v: &FrameVectorField, w: &FrameVectorField) -> FrameVectorField {
        let d = self.manifold().dim();
        let mut out = FrameVectorField::zero(d);
        for i in u.support() {
            for j in v.support() {
                let uv = &u.0[i] * &v.0[j];
                for k in w.support() {
                    let f = &uv * &w.0[k];
                    out = out.add(&FrameVectorField(self.riem[i][j][k].clone()).scale(&f));
                }
            }
        }
        out
    }

    /// `R(U,V,W,X) = g(R(U,V)W, X)`.
    pub fn r4_of(
        &self,
        u: &FrameVectorField,
        v: &FrameVectorField,
        w: &FrameVectorField,
        x: &FrameVectorField,
    ) -> Expr {
        self.manifold().inner(&self.apply(u, v, w), x)
    }

    /// Ricci via the inverse metric, `Σ g^{il} R(e_i,e_j,e_k,e_l)`, with
    /// the same sign convention. Agrees with `ric` by construction of the
    /// trace; kept as an independent route for tests and reports.
    pub fn ricci_by_metric_trace(&self) -> Matrix<Expr> {
        let m = self.manifold();
        let d = m.dim();
        let ginv = m.metric_inverse();
        (0..d)
            .map(|j| {
                (0..d)
                    .map(|k| {
                        let mut s = Expr::zero();
                        for i in 0..d {
                            for l in 0..d {
                                if !ginv[i][l].is_zero() {
                                    s = s + &ginv[i][l] * &self.r4[i][j][k][l];
                                }
                            }
                        }
                        self.convention.apply(s)
                    })
                    .collect()
            })
            .collect()
    }

    /// `(∇_{e_i} R)(e_j, e_k) e_l`.
    pub fn nabla_riemann(&self, i: usize, j: usize, k: usize, l: usize) -> FrameVectorField {
        let m = self.manifold();
        let conn = &self.connection;
        let (ej, ek, el) = (m.basis(j), m.basis(k), m.basis(l));
        conn.covariant_derivative(i, &FrameVectorField(self.riem[j][k][l].clone()))
            .sub(&self.apply(&conn.covariant_derivative(i, &ej), &ek, &el))
            .sub(&self.apply(&ej, &conn.covariant_derivative(i, &ek), &el))
            .sub(&self.apply(&ej, &ek, &conn.covariant_derivative(i, &el)))
    }

    /// Torsion, metric compatibility, curvature symmetries and both Bianchi
    /// identities, evaluated exactly on every frame tuple.
    pub fn structural_checks(&self) -> Vec<IdentityCheck> {
        let m = self.manifold();
        let d = m.dim();
        let conn = &self.connection;

        let mut torsion = IdentityCheck::new("torsion_free", "frame triples (i, j, k)");
        torsion.checked = d * d * d;
        for t in conn.torsion_violations() {
            torsion.failures.push(crate::residual::Residual {
                indices: vec![t.0, t.1, t.2],
                value: vec![],
            });
        }
        let mut compat = IdentityCheck::new("metric_compatible", "frame triples (i, j, k)");
        compat.checked = d * d * d;
        for t in conn.metric_compatibility_violations() {
            compat.failures.push(crate::residual::Residual {
                indices: vec![t.0, t.1, t.2],
                value: vec![],
            });
        }

        let mut anti = IdentityCheck::new("riemann_antisymmetry", "frame triples (i, j, k)");
        let mut bianchi1 = IdentityCheck::new("bianchi_first", "frame triples (i, j, k)");
        let mut pair = IdentityCheck::new("r4_pair_symmetry", "frame quadruples (i, j, k, l)");
        let mut ricci_sym = IdentityCheck::new("ricci_symmetry", "frame pairs (j, k)");
        let mut bianchi2 = IdentityCheck::new("bianchi_second", "frame quadruples (i, j, k; l)");
        let field = |v: &Vec<Expr>| FrameVectorField(v.clone());
        for i in 0..d {
            for j in 0..d {
                ricci_sym.scalar(&[i, j], &self.ric[i][j] - &self.ric[j][i]);
                for k in 0..d {
                    anti.vector(&[i, j, k], field(&self.riem[i][j][k]).add(&field(&self.riem[j][i][k])));
                    let cyc = field(&self.riem[i][j][k])
                        .add(&field(&self.riem[j][k][i]))
                        .add(&field(&self.riem[k][i][j]));
                    bianchi1.vector(&[i, j, k], cyc);
                    for l in 0..d {
                        pair.scalar(&[i, j, k, l], &self.r4[i][j][k][l] - &self.r4[k][l][i][j]);
                    }
                }
            }
        }
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    for l in 0..d {
                        let s = self
                            .nabla_riemann(i, j, k, l)
                            .add(&self.nabla_riemann(j, k, i, l))
                            .add(&self.nabla_riemann(k, i, j, l));
                        bianchi2.vector(&[i, j, k, l], s);
                    }
                }
            }
        }
        vec![torsion, compat, anti, bianchi1, pair, ricci_sym, bianchi2]
    }
}

/// `r = Σ g^{ij} S_ij`.
pub fn scalar_curvature(m: &FrameManifold, ric: &Matrix<Expr>) -> Expr {
    let ginv = m.metric_inverse();
    let d = m.dim();
    let mut r = Expr::zero();
    for i in 0..d {
        for j in 0..d {
            if !ginv[i][j].is_zero() {
                r = r + &ginv[i][j] * &ric[i][j];
            }
        }
    }
    r
}

/// `c(X) = −R(X,φX,X,φX) / g(X,X)²` for `X ⊥ ξ`.
pub fn phi_sectional(
    cd: &CurvatureData,
    cs: &ContactStructure,
    x: &FrameVectorField,
) -> Result<Expr, CurvatureError> {
    let m = cs.manifold();
    let px = cs.phi_of(x);
    let gxx = m.inner(x, x);
    if !cs.eta_of(x).is_zero() || gxx.is_zero() || px.is_zero() {
        return Err(CurvatureError::DegenerateProbe);
    }
    let r = cd.r4_of(x, &px, x, &px);
    (-r).checked_div(&(&gxx * &gxx))
        .map_err(|_| CurvatureError::DegenerateProbe)
}

/// Frame vectors annihilated by `η`, followed by their pairwise sums.
pub fn horizontal_probes(cs: &ContactStructure) -> Vec<FrameVectorField> {
    let m = cs.manifold();
    let base: Vec<FrameVectorField> = (0..cs.dim())
        .filter(|&i| cs.eta()[i].is_zero())
        .map(|i| m.basis(i))
        .collect();
    let mut out = base.clone();
    for a in 0..base.len() {
        for b in a + 1..base.len() {
            out.push(base[a].add(&base[b]));
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct PhiSectional {
    /// Value on the first admissible probe.
    pub value: Expr,
    pub constant_on_probes: bool,
    pub probes_used: usize,
}

/// φ-sectional curvature over the horizontal probe set.
pub fn phi_sectional_on_probes(cd: &CurvatureData, cs: &ContactStructure) -> Option<PhiSectional> {
    let values: Vec<Expr> = horizontal_probes(cs)
        .iter()
        .filter_map(|x| phi_sectional(cd, cs, x).ok())
        .collect();
    let first = values.first()?.clone();
    Some(PhiSectional {
        constant_on_probes: values.iter().all(|v| v.equivalent(&first))
            && cs.manifold().coords().iter().all(|x| first.differentiate(x).is_zero()),
        probes_used: values.len(),
        value: first,
    })
}

/// Curvature of a space form with constant `(c, α, β)`:
///
/// ```text
/// 4R(X,Y)Z = A[g(X,Z)Y − g(Y,Z)X]
///          + B[η(Z){η(Y)X − η(X)Y} + {η(Y)g(X,Z) − η(X)g(Y,Z)}ξ
///              + g(X,φZ)φY − g(Y,φZ)φX + 2g(X,φY)φZ]
///          + 8αβ[{η(X)g(Y,φZ) − η(Y)g(X,φZ)}ξ + η(Z){η(X)φY − η(Y)φX}]
/// ```
/// with `A = 3(α²−β²) − c` and `B = α² − β² + c`.
#[derive(Debug, Clone)]
pub struct SpaceFormModel<'a> {
    cs: &'a ContactStructure,
    a: Expr,
    b: Expr,
    ab8: Expr,
}

impl<'a> SpaceFormModel<'a> {
    pub fn new(cs: &'a ContactStructure, c: &Expr, alpha: &Expr, beta: &Expr) -> Result<Self, CurvatureError> {
        for (name, e) in [("c", c), ("α", alpha), ("β", beta)] {
            if !e.is_constant() {
                return Err(CurvatureError::NonConstant(name));
            }
        }
        let ab2 = alpha * alpha - beta * beta;
        Ok(SpaceFormModel {
            cs,
            a: &ab2 * &Expr::from_int(3) - c,
            b: &ab2 + c,
            ab8: &Expr::from_int(8) * &(alpha * beta),
        })
    }

    pub fn apply(&self, x: &FrameVectorField, y: &FrameVectorField, z: &FrameVectorField) -> FrameVectorField {
        let cs = self.cs;
        let m = cs.manifold();
        let g = |u: &FrameVectorField, v: &FrameVectorField| m.inner(u, v);
        let (ex, ey, ez) = (cs.eta_of(x), cs.eta_of(y), cs.eta_of(z));
        let (px, py, pz) = (cs.phi_of(x), cs.phi_of(y), cs.phi_of(z));
        let xi = cs.xi();

        let first = y.scale(&g(x, z)).sub(&x.scale(&g(y, z)));
        let second = x
            .scale(&ey)
            .sub(&y.scale(&ex))
            .scale(&ez)
            .add(&xi.scale(&(&ey * &g(x, z) - &ex * &g(y, z))))
            .add(&py.scale(&g(x, &pz)))
            .sub(&px.scale(&g(y, &pz)))
            .add(&pz.scale(&(&Expr::from_int(2) * &g(x, &py))));
        let third = xi
            .scale(&(&ex * &g(y, &pz) - &ey * &g(x, &pz)))
            .add(&py.scale(&ex).sub(&px.scale(&ey)).scale(&ez));
        first
            .scale(&self.a)
            .add(&second.scale(&self.b))
            .add(&third.scale(&self.ab8))
            .scale(&Expr::from_ratio(1, 4))
    }

    /// Trace of `X ↦ model(X,Y)Z` on frame pairs.
    pub fn contracted_ricci(&self, convention: RicciConvention) -> Matrix<Expr> {
        let m = self.cs.manifold();
        let d = m.dim();
        (0..d)
            .map(|j| {
                (0..d)
                    .map(|k| {
                        let t: Expr = (0..d)
                            .map(|i| self.apply(&m.basis(i), &m.basis(j), &m.basis(k)).0[i].clone())
                            .sum();
                        convention.apply(t)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Ricci tensor with the closed-form space-form coefficients
/// `S = ½(nc − (3n−4)(α²−β²)) g + ½n(α²−β²+c) η⊗η + 2αβ g(·,φ·)`,
/// `n = (d − 1)/2`.
pub fn printed_space_form_ricci(cs: &ContactStructure, c: &Expr, alpha: &Expr, beta: &Expr) -> Matrix<Expr> {
    let m = cs.manifold();
    let d = m.dim();
    let n = Expr::rational(BigRational::new((d as i64 - 1).into(), 2.into()));
    let ab2 = alpha * alpha - beta * beta;
    let half = Expr::from_ratio(1, 2);
    let cg = &half * &(&n * c - &(&n * &Expr::from_int(3) - Expr::from_int(4)) * &ab2);
    let ce = &half * &(&n * &(&ab2 + c));
    let cphi = &Expr::from_int(2) * &(alpha * beta);
    (0..d)
        .map(|j| {
            (0..d)
                .map(|k| {
                    let ej = m.basis(j);
                    let ek = m.basis(k);
                    &cg * &m.metric()[j][k]
                        + &ce * &(&cs.eta()[j] * &cs.eta()[k])
                        + &cphi * &m.inner(&ej, &cs.phi_of(&ek))
                })
                .collect()
        })
        .collect()
}

/// Inputs for [`identity_suite`]: constant structure functions and the
/// φ-sectional constant.
#[derive(Debug, Clone)]
pub struct SpaceFormConstants {
    pub alpha: Expr,
    pub beta: Expr,
    pub c: Expr,
}

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn get(&self, id: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.id == id)
    }
}

/// Runs every curvature identity for a trans-Sasakian space form with
/// constants `k`, plus the structural checks of [`CurvatureData`].
pub fn identity_suite(
    cd: &CurvatureData,
    cs: &ContactStructure,
    k: &SpaceFormConstants,
) -> Result<IdentityReport, CurvatureError> {
    let m = cs.manifold();
    let d = m.dim();
    let model = SpaceFormModel::new(cs, &k.c, &k.alpha, &k.beta)?;
    let (alpha, beta) = (&k.alpha, &k.beta);
    let ab2 = alpha * alpha - beta * beta;
    let ab_2 = &Expr::from_int(2) * &(alpha * beta);
    let a2 = alpha * alpha;
    let b2 = beta * beta;
    let g = |u: &FrameVectorField, v: &FrameVectorField| m.inner(u, v);
    let xi = cs.xi();
    let e: Vec<FrameVectorField> = (0..d).map(|i| m.basis(i)).collect();

    let mut r_xi = IdentityCheck::new("r_xy_xi", "frame pairs (X, Y)");
    let mut r_xi_first = IdentityCheck::new("r_xi_x_y", "frame pairs (X, Y)");
    for i in 0..d {
        for j in 0..d {
            let (x, y) = (&e[i], &e[j]);
            let (ex, ey) = (cs.eta_of(x), cs.eta_of(y));
            let (px, py) = (cs.phi_of(x), cs.phi_of(y));
            let rhs = x
                .scale(&ey)
                .sub(&y.scale(&ex))
                .scale(&ab2)
                .add(&py.scale(&ex).sub(&px.scale(&ey)).scale(&ab_2));
            r_xi.vector(&[i, j], cd.apply(x, y, xi).sub(&rhs));

            let rhs = x
                .scale(&ey)
                .add(&xi.scale(&g(x, y)))
                .scale(&ab2)
                .add(&px.scale(&ey).sub(&xi.scale(&g(x, &py))).scale(&ab_2))
                .neg();
            r_xi_first.vector(&[i, j], cd.apply(xi, x, y).sub(&rhs));
        }
    }

    let probes = horizontal_probes(cs);
    let domain = "η-annihilated frame vectors and pairwise sums";
    let mut commutator = IdentityCheck::new("r_phi_commutator", domain);
    let mut pair_shift = IdentityCheck::new("r_phi_pair", domain);
    let mut shift = IdentityCheck::new("r4_phi_shift", domain);
    let mut cross = IdentityCheck::new("r4_phi_cross", domain);
    let mut mixed_x = IdentityCheck::new("r4_phi_mixed_x", domain);
    let mut mixed_y = IdentityCheck::new("r4_phi_mixed_y", domain);
    for (a, x) in probes.iter().enumerate() {
        let px = cs.phi_of(x);
        for (b, y) in probes.iter().enumerate() {
            let py = cs.phi_of(y);
            for (c, z) in probes.iter().enumerate() {
                let pz = cs.phi_of(z);
                let lhs = cd.apply(x, y, &pz).sub(&cs.phi_of(&cd.apply(x, y, z)));
                let t_a = px
                    .scale(&g(y, z))
                    .sub(&py.scale(&g(x, z)))
                    .add(&y.scale(&g(x, &pz)))
                    .sub(&x.scale(&g(y, &pz)));
                let t_ab = x
                    .scale(&g(y, z))
                    .sub(&y.scale(&g(x, z)))
                    .add(&px.scale(&g(y, &pz)))
                    .sub(&py.scale(&g(x, &pz)));
                let t_b = x
                    .scale(&g(y, &pz))
                    .sub(&y.scale(&g(x, &pz)))
                    .add(&py.scale(&g(x, z)))
                    .sub(&px.scale(&g(y, z)));
                let rhs = t_a.scale(&a2).add(&t_ab.scale(&ab_2)).add(&t_b.scale(&b2));
                commutator.vector(&[a, b, c], lhs.sub(&rhs));

                let lhs = cd.apply(&px, &py, z).sub(&cd.apply(x, y, z));
                let t_a = x
                    .scale(&g(y, z))
                    .sub(&y.scale(&g(x, z)))
                    .add(&py.scale(&g(z, &px)))
                    .sub(&px.scale(&g(z, &py)));
                let t_ab = px
                    .scale(&g(y, z))
                    .sub(&py.scale(&g(x, z)))
                    .add(&x.scale(&g(z, &py)))
                    .sub(&y.scale(&g(z, &px)));
                let t_b = y
                    .scale(&g(x, z))
                    .sub(&x.scale(&g(z, y)))
                    .add(&px.scale(&g(z, &py)))
                    .sub(&py.scale(&g(z, &px)));
                let rhs = t_a.scale(&a2).add(&t_ab.scale(&ab_2)).add(&t_b.scale(&b2));
                pair_shift.vector(&[a, b, c], lhs.sub(&rhs));
            }

            let gxy = g(x, y);
            let gxpy = g(x, &py);
            let q = &gxy * &gxy - &g(x, x) * &g(y, y) + &gxpy * &gxpy;
            let abq = &ab2 * &q;
            let r = |p: &FrameVectorField, q: &FrameVectorField, s: &FrameVectorField, t: &FrameVectorField| {
                cd.r4_of(p, q, s, t)
            };
            let rxyxy = r(x, y, x, y);
            let rx_py_y_px = r(x, &py, y, &px);
            shift.scalar(&[a, b], r(x, y, &px, &py) - &rxyxy - &abq);
            cross.scalar(&[a, b], r(x, &px, y, &py) - &rx_py_y_px - &rxyxy - &abq);
            mixed_x.scalar(&[a, b], r(x, &py, x, &py) - &rx_py_y_px + &abq);
            mixed_y.scalar(&[a, b], r(y, &px, y, &px) - &rx_py_y_px + &abq);
        }
    }

    let mut space_form = IdentityCheck::new("space_form_model", "frame triples (X, Y, Z)");
    for i in 0..d {
        for j in 0..d {
            for l in 0..d {
                let computed = FrameVectorField(cd.riem[i][j][l].clone());
                space_form.vector(&[i, j, l], computed.sub(&model.apply(&e[i], &e[j], &e[l])));
            }
        }
    }

    let printed = printed_space_form_ricci(cs, &k.c, alpha, beta);
    let contracted = model.contracted_ricci(cd.convention);
    let mut ricci_printed = IdentityCheck::new("ricci_space_form_printed", "frame pairs (Y, Z)");
    let mut ricci_contracted = IdentityCheck::new("ricci_space_form_contracted", "frame pairs (Y, Z)");
    for j in 0..d {
        for l in 0..d {
            ricci_printed.scalar(&[j, l], &cd.ric[j][l] - &printed[j][l]);
            ricci_contracted.scalar(&[j, l], &cd.ric[j][l] - &contracted[j][l]);
        }
    }

    let mut checks = vec![
        r_xi,
        r_xi_first,
        commutator,
        pair_shift,
        shift,
        cross,
        mixed_x,
        mixed_y,
        space_form,
        ricci_printed,
        ricci_contracted,
    ];
    checks.extend(cd.structural_checks());
    Ok(IdentityReport { checks })
}
