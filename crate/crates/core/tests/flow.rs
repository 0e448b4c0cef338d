use nalgebra::DMatrix;
use num_rational::BigRational;
use proptest::prelude::*;
use sasaki_core::curvature::{CurvatureData, RicciConvention};
use sasaki_core::fixtures;
use sasaki_core::flow::{
    csv_header, integrate, jacobi_residual, ricci_numeric, self_similar_check, step_rk4, structure_constants,
    FlowError, FlowKind, FlowProblem, FlowState, HaltReason, StructureConstants,
};
use sasaki_core::linalg::rational;

fn example_c() -> StructureConstants {
    structure_constants(&fixtures::example_manifold()).unwrap()
}

fn g0() -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0, -1.0]))
}

fn flat_c(d: usize) -> StructureConstants {
    vec![vec![vec![0.0; d]; d]; d]
}

fn max_abs(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

#[test]
fn example_ricci_numeric() {
    let c = example_c();
    assert_eq!(c[0][2][0], -1.0);
    assert_eq!(c[1][2][1], -1.0);
    let ric = ricci_numeric(&g0(), &c).unwrap();
    let expect = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 2.0, -2.0]));
    assert!(max_abs(&ric, &expect) < 1e-14);
    assert!(max_abs(&ricci_numeric(&(g0() * 3.0), &c).unwrap(), &expect) < 1e-14);
    assert_eq!(ricci_numeric(&g0(), &flat_c(3)).unwrap(), DMatrix::zeros(3, 3));
    assert_eq!(
        ricci_numeric(&DMatrix::zeros(3, 3), &c).unwrap_err(),
        FlowError::SingularMetric
    );
}

#[test]
fn einstein_flow_matches_closed_form() {
    let p = FlowProblem::new(example_c(), g0(), g0(), FlowKind::Hyperbolic, 1e-3, 500).unwrap();
    let traj = integrate(&p).unwrap();
    assert_eq!(traj.samples.len(), 501);
    assert!(traj.halted.is_none());
    assert!(self_similar_check(&traj, &g0(), 1.0, 2.0) <= 1e-8);
    assert!(self_similar_check(&traj, &g0(), 1.0, 1.0) > 1e-2);
    for s in &traj.samples {
        assert!(s.diagnostics.symmetry_drift <= 1e-10);
        assert!(s.diagnostics.einstein_residual < 1e-10);
    }
}

#[test]
fn one_step_from_rest() {
    let h = 1e-2;
    let s = FlowState { g: g0(), k: DMatrix::zeros(3, 3) };
    let next = step_rk4(&s, h, &example_c(), FlowKind::Hyperbolic).unwrap();
    assert!(max_abs(&next.g, &(g0() * (1.0 - 2.0 * h * h))) < 1e-14);
}

#[test]
fn flat_flow_is_linear() {
    let traj = integrate(&FlowProblem::new(flat_c(3), g0(), g0() * 0.5, FlowKind::Hyperbolic, 0.01, 100).unwrap()).unwrap();
    for s in &traj.samples {
        assert!(max_abs(&s.g, &(g0() * (1.0 + 0.5 * s.t))) < 1e-13);
    }
    let rest = integrate(&FlowProblem::new(flat_c(3), g0(), DMatrix::zeros(3, 3), FlowKind::Hyperbolic, 0.01, 50).unwrap()).unwrap();
    assert_eq!(self_similar_check(&rest, &g0(), 0.0, 0.0), 0.0);
}

#[test]
fn cancelling_conformal_forcing_is_stationary() {
    // 2κ + p + 2/d = 0 with κ = 2, d = 3
    let p = -4.0 - 2.0 / 3.0;
    let traj = integrate(&FlowProblem::new(example_c(), g0(), DMatrix::zeros(3, 3), FlowKind::Conformal { p }, 1e-2, 100).unwrap()).unwrap();
    for s in &traj.samples {
        assert!(max_abs(&s.g, &g0()) < 1e-12);
    }
}

#[test]
fn flow_halts_near_collapse() {
    let traj = integrate(&FlowProblem::new(example_c(), g0(), g0(), FlowKind::Hyperbolic, 1e-3, 2000).unwrap()).unwrap();
    let halt = traj.halted.expect("degenerates before t = 2");
    assert!(matches!(halt.reason, HaltReason::SignatureChange | HaltReason::Degenerate));
    assert!((halt.t - 1.0).abs() < 2e-3, "{}", halt.t);
}

#[test]
fn invalid_problems() {
    let c = example_c();
    assert!(matches!(
        FlowProblem::new(c.clone(), DMatrix::zeros(3, 3), g0(), FlowKind::Hyperbolic, 1e-3, 1),
        Err(FlowError::Degenerate(_))
    ));
    let mut asym = g0();
    asym[(0, 1)] = 0.5;
    assert_eq!(
        FlowProblem::new(c.clone(), asym, g0(), FlowKind::Hyperbolic, 1e-3, 1).unwrap_err(),
        FlowError::NotSymmetric("g0")
    );
    let mut bad = c.clone();
    bad[0][1][2] = 1.0;
    assert_eq!(
        FlowProblem::new(bad.clone(), g0(), g0(), FlowKind::Hyperbolic, 1e-3, 1).unwrap_err(),
        FlowError::NotAntisymmetric(0, 1, 2)
    );
    bad[1][0][2] = -1.0;
    assert!(jacobi_residual(&bad) > 0.5);
    assert!(matches!(
        FlowProblem::new(bad, g0(), g0(), FlowKind::Hyperbolic, 1e-3, 1),
        Err(FlowError::Jacobi(_))
    ));
    let m = fixtures::diagonal_manifold(["1", "x", "1"], ["1", "1", "1"]).unwrap();
    assert_eq!(structure_constants(&m).unwrap_err(), FlowError::NonConstantStructure);
    assert_eq!(csv_header(2), ["t", "g11", "g12", "g22", "k11", "k12", "k22", "det", "r", "einstein_residual"]);
}

/// Conformal closed form for Einstein data `Ric = κ g0`, `q = p + 2/d < 0`:
/// `σ = 2κ/ω² + (1 − 2κ/ω²) cosh ωt + (a/ω) sinh ωt`, `ω² = −q`.
fn conformal_sigma(kappa: f64, q: f64, a: f64, t: f64) -> f64 {
    let w = (-q).sqrt();
    let s0 = 2.0 * kappa / (w * w);
    s0 + (1.0 - s0) * (w * t).cosh() + a / w * (w * t).sinh()
}

#[test]
fn conformal_flow_is_fourth_order() {
    let p = -36.0 - 2.0 / 3.0;
    let q = p + 2.0 / 3.0;
    let err = |h: f64| {
        let steps = (0.5 / h).round() as usize;
        let traj = integrate(&FlowProblem::new(example_c(), g0(), g0(), FlowKind::Conformal { p }, h, steps).unwrap()).unwrap();
        traj.samples
            .iter()
            .map(|s| (&s.g - g0() * conformal_sigma(2.0, q, 1.0, s.t)).norm() / g0().norm())
            .fold(0.0, f64::max)
    };
    let (e4, e2, e1) = (err(4e-3), err(2e-3), err(1e-3));
    for ratio in [e4 / e2, e2 / e1] {
        assert!((12.0..=20.0).contains(&ratio), "{e4:e} {e2:e} {e1:e}");
        assert!((3.7..=4.3).contains(&ratio.log2()));
    }
}

#[test]
fn numeric_ricci_matches_exact_at_rational_metrics() {
    let cases: Vec<(Vec<BigRational>, Vec<Vec<BigRational>>)> = vec![
        (
            vec![rational(1, 1), rational(1, 1)],
            vec![
                vec![rational(1, 1), rational(0, 1), rational(0, 1)],
                vec![rational(0, 1), rational(1, 1), rational(0, 1)],
                vec![rational(0, 1), rational(0, 1), rational(-1, 1)],
            ],
        ),
        (
            vec![rational(2, 1), rational(-1, 3)],
            vec![
                vec![rational(2, 1), rational(1, 2), rational(0, 1)],
                vec![rational(1, 2), rational(3, 1), rational(1, 5)],
                vec![rational(0, 1), rational(1, 5), rational(-7, 4)],
            ],
        ),
    ];
    for (a, g) in cases {
        let m = fixtures::homogeneous_manifold(&a, &g).unwrap();
        let cd = CurvatureData::new(&m.levi_civita(), RicciConvention::FirstSlot);
        let c = structure_constants(&m).unwrap();
        let gm = DMatrix::from_fn(3, 3, |i, j| num_traits::ToPrimitive::to_f64(&g[i][j]).unwrap());
        let ric = ricci_numeric(&gm, &c).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let exact = num_traits::ToPrimitive::to_f64(&cd.ric[i][j].as_rational().unwrap()).unwrap();
                assert!((ric[(i, j)] - exact).abs() <= 1e-12, "{i}{j}: {} vs {exact}", ric[(i, j)]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn time_reversal_returns_to_start(
        diag in proptest::array::uniform3(0.5f64..2.0),
        off in -0.2f64..0.2,
        kscale in -0.5f64..0.5,
        steps in 10usize..60,
    ) {
        let mut g = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![diag[0], diag[1], -diag[2]]));
        g[(0, 1)] = off;
        g[(1, 0)] = off;
        let k = &g * kscale;
        let c = example_c();
        let h = 1e-3;
        let mut s = FlowState { g: g.clone(), k: k.clone() };
        for _ in 0..steps {
            s = step_rk4(&s, h, &c, FlowKind::Hyperbolic).unwrap();
        }
        for _ in 0..steps {
            s = step_rk4(&s, -h, &c, FlowKind::Hyperbolic).unwrap();
        }
        prop_assert!((&s.g - &g).norm() / g.norm() < 1e-8);
        prop_assert!((&s.k - &k).norm() <= 1e-8 * (1.0 + k.norm()));
    }
}
