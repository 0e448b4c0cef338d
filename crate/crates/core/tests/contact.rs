use nalgebra::DMatrix;
use sasaki_core::contact::{check_axioms, Axiom, ContactStructure, DConvention, StructureError};
use sasaki_core::expr::Expr;
use sasaki_core::fixtures::{self, example_phi, example_xi};
use sasaki_core::frame::FrameVectorField;

fn int(e: &Expr) -> i64 {
    let q = e.as_rational().expect("constant");
    assert!(q.is_integer(), "{e}");
    i64::try_from(q.to_integer()).unwrap()
}

#[test]
fn example_structure_is_valid() {
    let cs = fixtures::example_structure();
    assert_eq!(cs.eta().iter().map(int).collect::<Vec<_>>(), [0, 0, 1]);
    // η(e3) = −g(e3, e3)
    assert_eq!(int(&-&cs.manifold().metric()[2][2]), 1);
    assert_eq!(cs.phi_of(&cs.manifold().basis(0)), FrameVectorField::from_ints(&[0, 1, 0]));
    assert_eq!(cs.phi_of(&cs.manifold().basis(1)), FrameVectorField::from_ints(&[-1, 0, 0]));
}

#[test]
fn riemannian_signature_breaks_timelike_axiom() {
    let m = fixtures::example_with_metric([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]).unwrap();
    let err = ContactStructure::attach(&m.levi_civita(), example_phi(), example_xi()).unwrap_err();
    match err {
        StructureError::Axiom { axiom, .. } => assert_eq!(axiom, Axiom::TimelikeXi),
        other => panic!("{other:?}"),
    }
}

#[test]
fn perturbed_phi_breaks_square_axiom_at_origin_pair() {
    let m = fixtures::example_manifold();
    let mut phi = example_phi();
    phi[0][1] = Expr::from_int(-2);
    let report = check_axioms(&m, &phi, &example_xi()).unwrap();
    assert!(!report.passed());
    match report.first_violation().unwrap() {
        StructureError::Axiom { axiom, indices, .. } => {
            assert_eq!(axiom, Axiom::PhiSquared);
            assert_eq!(indices, vec![0, 0]);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn dimension_mismatch_is_reported() {
    let m = fixtures::example_manifold();
    let err = check_axioms(&m, &example_phi(), &FrameVectorField::from_ints(&[0, 1])).unwrap_err();
    assert!(matches!(err, StructureError::Dimension(_)));
}

#[test]
fn example_is_trans_sasakian_zero_minus_one() {
    let cs = fixtures::example_structure();
    let report = cs.extract_trans_sasakian().unwrap();
    assert_eq!(int(&report.alpha), 0);
    assert_eq!(int(&report.beta), -1);
    assert!(report.constants());
    assert!(report.verdict(), "{:?}", report.identities);
    // ∇_{e1} ξ = −e1 = 0·φe1 + (−1)(e1 − 0·ξ)
    let grad = cs.connection().covariant_derivative(0, cs.xi());
    assert_eq!(grad, FrameVectorField::from_ints(&[-1, 0, 0]));
}

#[test]
fn extraction_is_probe_independent() {
    for cs in [fixtures::example_structure(), fixtures::heisenberg(2), fixtures::heisenberg(-3)] {
        let probes = cs.probes();
        assert!(probes.len() >= 2);
        let first = cs.extract_with_probe(probes[0]).unwrap();
        for &p in &probes[1..] {
            let other = cs.extract_with_probe(p).unwrap();
            assert!(first.alpha.equivalent(&other.alpha));
            assert!(first.beta.equivalent(&other.beta));
        }
    }
    let cs = fixtures::example_structure();
    assert_eq!(cs.extract_with_probe(2).unwrap_err(), StructureError::InvalidProbe(2));
}

#[test]
fn heisenberg_is_alpha_sasakian() {
    let cs = fixtures::heisenberg(2);
    let report = cs.extract_trans_sasakian().unwrap();
    assert_eq!(int(&report.alpha), 1);
    assert_eq!(int(&report.beta), 0);
    assert!(report.verdict(), "{:?}", report.identities);
}

#[test]
fn parallel_xi_gives_degenerate_constants() {
    let cs = fixtures::flat_structure();
    let report = cs.extract_trans_sasakian().unwrap();
    assert!(report.alpha.is_zero());
    assert!(report.beta.is_zero());
    assert!(report.verdict());
}

#[test]
fn trans_sasakian_corpus_is_normal() {
    for cs in [
        fixtures::example_structure(),
        fixtures::heisenberg(1),
        fixtures::heisenberg(4),
        fixtures::flat_structure(),
    ] {
        let ts = cs.extract_trans_sasakian().unwrap();
        assert!(ts.verdict());
        let n = cs.normality_tensors();
        assert!(n.normal(), "{:?}", n.tensors.iter().map(|t| t.summary()).collect::<Vec<_>>());
    }
}

#[test]
fn zero_phi_leaves_only_d_eta_in_n1() {
    let cs = fixtures::heisenberg(2);
    // build an (invalid) structure by hand: φ = 0 skips attach, so call the
    // normality code through a structure whose φ is zero via check_axioms data.
    let m = cs.manifold();
    let zero = vec![vec![Expr::zero(); 3]; 3];
    assert!(!check_axioms(m, &zero, &example_xi()).unwrap().passed());
    // [φ,φ] of the zero map vanishes; N1(e1,e2) = 2dη(e1,e2)ξ = −η([e1,e2])ξ = 2ξ
    let xy = m.bracket_fields(&m.basis(0), &m.basis(1));
    assert_eq!(xy, FrameVectorField::from_ints(&[0, 0, 2]));
    assert_eq!(int(&-cs.eta_of(&xy)), -2);
}

#[test]
fn oubina_conventions_on_example() {
    let cs = fixtures::example_structure();
    let ts = cs.extract_trans_sasakian().unwrap();
    let full = cs.oubina_check(&ts.alpha, &ts.beta, DConvention::Full);
    let half = cs.oubina_check(&ts.alpha, &ts.beta, DConvention::Half);
    assert!(full.d_eta.passed() && half.d_eta.passed());
    assert!(full.d_phi.passed());
    assert!(!half.d_phi.passed());
    assert_eq!(full.d_phi.checked, 1);

    let heis = fixtures::heisenberg(2);
    let ts = heis.extract_trans_sasakian().unwrap();
    assert!(heis.oubina_check(&ts.alpha, &ts.beta, DConvention::Half).passed());
    assert!(!heis.oubina_check(&ts.alpha, &ts.beta, DConvention::Full).d_eta.passed());

    let flat = fixtures::flat_structure();
    let zero = Expr::zero();
    for conv in [DConvention::Full, DConvention::Half] {
        assert!(flat.oubina_check(&zero, &zero, conv).passed());
    }
}

#[test]
fn phi_has_zero_trace_and_corank_one() {
    for cs in [fixtures::example_structure(), fixtures::heisenberg(3)] {
        let pt = [("x", 0.37), ("y", -1.21), ("z", 0.58)];
        let vals: Vec<f64> = cs
            .phi()
            .iter()
            .flatten()
            .map(|e| e.evaluate_named(&pt).unwrap())
            .collect();
        let p = DMatrix::from_row_slice(3, 3, &vals);
        assert!(p.trace().abs() < 1e-9);
        assert_eq!(p.rank(1e-9), 2);
    }
}
