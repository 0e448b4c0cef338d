//! Published component tables for the built-in example, compared against
//! the computed values whenever the input is that example.

use serde::Serialize;

use sasaki_core::contact::ContactStructure;
use sasaki_core::curvature::CurvatureData;
use sasaki_core::expr::Expr;
use sasaki_core::frame::FrameVectorField;
use sasaki_core::soliton::{lie_derivative_metric, second_lie_derivative_metric};

use crate::report::vector_text;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceEntry {
    pub id: String,
    pub quantity: String,
    pub reference: String,
    pub computed: String,
    pub matches: bool,
}

fn vector_entry(id: String, quantity: String, reference: &[i64], computed: &FrameVectorField) -> ReferenceEntry {
    let r = FrameVectorField::from_ints(reference);
    ReferenceEntry {
        id,
        quantity,
        reference: vector_text(&r),
        computed: vector_text(computed),
        matches: &r == computed,
    }
}

fn scalar_entry(id: &str, quantity: &str, reference: i64, computed: &Expr) -> ReferenceEntry {
    let r = Expr::from_int(reference);
    ReferenceEntry {
        id: id.to_string(),
        quantity: quantity.to_string(),
        reference: r.to_string(),
        computed: computed.to_string(),
        matches: r == *computed,
    }
}

/// `(i, j, [e_i, e_j])`, 1-based.
const BRACKETS: [(usize, usize, [i64; 3]); 3] = [(1, 2, [0, 0, 0]), (2, 3, [0, -1, 0]), (1, 3, [-1, 0, 0])];

/// `(i, j, ∇_{e_i} e_j)`, 1-based.
const CONNECTION: [(usize, usize, [i64; 3]); 9] = [
    (1, 1, [0, 0, -1]),
    (1, 2, [0, 0, 0]),
    (1, 3, [-1, 0, 0]),
    (2, 1, [0, 0, 0]),
    (2, 2, [0, 0, -1]),
    (2, 3, [0, -1, 0]),
    (3, 1, [0, 0, 0]),
    (3, 2, [0, 0, 0]),
    (3, 3, [0, 0, 0]),
];

/// `(i, j, k, R(e_i, e_j) e_k)`, 1-based.
const CURVATURE: [(usize, usize, usize, [i64; 3]); 9] = [
    (1, 2, 3, [0, 0, 0]),
    (2, 3, 1, [0, 0, 0]),
    (1, 3, 1, [0, 0, -1]),
    (1, 2, 2, [1, 0, 0]),
    (2, 3, 2, [0, 0, -1]),
    (1, 3, 3, [-1, 0, 0]),
    (1, 2, 1, [0, -1, 0]),
    (2, 3, 3, [0, -1, 0]),
    (1, 3, 2, [0, 0, 0]),
];

const RICCI: [i64; 3] = [0, 2, -2];
const LIE_XI: [i64; 3] = [-2, -2, 0];
const SECOND_LIE_XI: [i64; 3] = [4, 4, 0];

pub fn example_reference(cs: &ContactStructure, cd: &CurvatureData, c: Option<&Expr>) -> Vec<ReferenceEntry> {
    let m = cs.manifold();
    let conn = cs.connection();
    let mut out = Vec::new();
    for (i, j, v) in BRACKETS {
        let computed = m.bracket_fields(&m.basis(i - 1), &m.basis(j - 1));
        out.push(vector_entry(format!("bracket_{i}{j}"), format!("[e{i},e{j}]"), &v, &computed));
    }
    for (i, j, v) in CONNECTION {
        let computed = conn.covariant_derivative(i - 1, &m.basis(j - 1));
        out.push(vector_entry(format!("connection_{i}{j}"), format!("∇_{{e{i}}}e{j}"), &v, &computed));
    }
    for (i, j, k, v) in CURVATURE {
        let computed = FrameVectorField(cd.riem[i - 1][j - 1][k - 1].clone());
        out.push(vector_entry(
            format!("curvature_{i}{j}{k}"),
            format!("R(e{i},e{j})e{k}"),
            &v,
            &computed,
        ));
    }
    for (i, r) in RICCI.iter().enumerate() {
        let n = i + 1;
        out.push(scalar_entry(&format!("ricci_{n}{n}"), &format!("S(e{n},e{n})"), *r, &cd.ric[i][i]));
    }
    if let Some(c) = c {
        out.push(scalar_entry("phi_sectional", "c", 1, c));
    }
    if let Ok(ts) = cs.extract_trans_sasakian() {
        out.push(scalar_entry("type_alpha", "α", 0, &ts.alpha));
        out.push(scalar_entry("type_beta", "β", -1, &ts.beta));
    }
    let h = lie_derivative_metric(conn, cs.xi());
    let h2 = second_lie_derivative_metric(conn, cs.xi());
    for i in 0..3 {
        let n = i + 1;
        out.push(scalar_entry(&format!("lie_xi_{n}{n}"), &format!("(L_ξg)(e{n},e{n})"), LIE_XI[i], &h[i][i]));
    }
    for i in 0..3 {
        let n = i + 1;
        out.push(scalar_entry(
            &format!("second_lie_xi_{n}{n}"),
            &format!("(L_ξL_ξg)(e{n},e{n})"),
            SECOND_LIE_XI[i],
            &h2[i][i],
        ));
    }
    out
}
