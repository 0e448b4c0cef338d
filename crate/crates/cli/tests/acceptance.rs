//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints one line regardless of output capture.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use sasaki_cli::{build_report, ManifoldFile, Scope, Settings, SolitonOptions};
use sasaki_core::contact::ContactStructure;
use sasaki_core::curvature::{identity_suite, phi_sectional_on_probes, CurvatureData, RicciConvention, SpaceFormConstants};
use sasaki_core::expr::Expr;
use sasaki_core::fixtures::{self, DIAGONAL_POOL, METRIC_POOL};
use sasaki_core::flow::{self, FlowKind, FlowProblem};
use sasaki_core::frame::FrameVectorField;
use sasaki_core::linalg::{rational, Matrix};
use sasaki_core::soliton::{solve, theorem_thresholds, Regime, SolitonKind, SolitonProblem, SolveStatus};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn example() -> (ContactStructure, CurvatureData) {
    let cs = fixtures::example_structure();
    let cd = CurvatureData::new(cs.connection(), RicciConvention::FirstSlot);
    (cs, cd)
}

fn q(n: i64, d: i64) -> BigRational {
    rational(n, d)
}

// Printed tables for the example, 1-based indices.
const BRACKETS: [(usize, usize, [i64; 3]); 3] = [(1, 2, [0, 0, 0]), (2, 3, [0, -1, 0]), (1, 3, [-1, 0, 0])];
const CONNECTION: [[[i64; 3]; 3]; 3] = [
    [[0, 0, -1], [0, 0, 0], [-1, 0, 0]],
    [[0, 0, 0], [0, 0, -1], [0, -1, 0]],
    [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
];
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

/// Full `R(e_i, e_j) e_k` table built from the printed entries by antisymmetry.
fn printed_curvature() -> [[[[i64; 3]; 3]; 3]; 3] {
    let mut r = [[[[0i64; 3]; 3]; 3]; 3];
    for (i, j, k, v) in CURVATURE {
        r[i - 1][j - 1][k - 1] = v;
        r[j - 1][i - 1][k - 1] = v.map(|x| -x);
    }
    r
}

fn criterion1() -> Outcome {
    let (_, cd) = example();
    let m = fixtures::example_manifold();
    let mut compared = 0;
    for (i, j, v) in BRACKETS {
        let got = m.bracket_fields(&m.basis(i - 1), &m.basis(j - 1));
        ensure(got == FrameVectorField::from_ints(&v), || format!("[e{i},e{j}] = {got:?}"))?;
        compared += 3;
    }
    let conn = m.levi_civita();
    for (i, row) in CONNECTION.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let got = conn.covariant_derivative(i, &m.basis(j));
            ensure(got == FrameVectorField::from_ints(v), || format!("∇_e{} e{}", i + 1, j + 1))?;
            compared += 3;
        }
    }
    let table = printed_curvature();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let got = FrameVectorField(cd.riem[i][j][k].clone());
                ensure(got == FrameVectorField::from_ints(&table[i][j][k]), || {
                    format!("R(e{},e{})e{}", i + 1, j + 1, k + 1)
                })?;
                compared += 3;
            }
        }
    }
    ensure(cd.ric[2][2] == Expr::from_int(-2), || format!("S(e3,e3) = {}", cd.ric[2][2]))?;
    Ok(format!("{compared} components equal, S(e3,e3) = -2"))
}

fn criterion2() -> Outcome {
    // hand trace of the printed curvature table
    let table = printed_curvature();
    let eps = [1i64, 1, -1];
    let oracle_s = |j: usize| (0..3).map(|i| table[i][j][j][i]).sum::<i64>();
    let oracle_ric = [oracle_s(0), oracle_s(1), oracle_s(2)];
    ensure(oracle_ric == [2, 2, -2], || format!("oracle Ricci {oracle_ric:?}"))?;
    // L_ξg(e_i,e_i) = 2 g(∇_{e_i} ξ, e_i) with ξ = e3
    let oracle_lie: Vec<i64> = (0..3).map(|i| 2 * eps[i] * CONNECTION[i][2][i]).collect();
    ensure(oracle_lie == [-2, -2, 0], || format!("oracle L_ξg {oracle_lie:?}"))?;
    // (L_ξL_ξg)(e1,e1) = −2 (L_ξg)([ξ,e1], e1), with [ξ,e1] = −[e1,e3] = e1
    let second_lie_11 = -2 * oracle_lie[0] * -BRACKETS[2].2[0];
    // e3 row: 2S = 2μ g gives μ; e1 row: L_ξL_ξg + 2λ L_ξg + 2S = 2μ g gives λ
    let mu = q(oracle_ric[2], eps[2]);
    let lambda = (q(2 * eps[0], 1) * &mu - q(second_lie_11 + 2 * oracle_ric[0], 1)) / q(2 * oracle_lie[0], 1);
    let beta = q(-1, 1);
    let theorem = &mu / (q(4, 1) * &beta) - &beta;
    let relation = q(1, 1) + &mu / q(4, 1);
    ensure(
        (lambda.clone(), mu.clone(), theorem.clone(), relation.clone()) == (q(1, 1), q(2, 1), q(1, 2), q(3, 2)),
        || format!("oracle λ {lambda} μ {mu} theorem {theorem} relation {relation}"),
    )?;

    let model = ManifoldFile::example().build().map_err(|e| e.to_string())?;
    let doc = build_report(&model, Scope::Full, Settings::default(), &SolitonOptions::default())
        .map_err(|e| e.to_string())?;
    let curv = doc.curvature.as_ref().ok_or("no curvature section")?;
    for (i, want) in oracle_ric.iter().enumerate() {
        ensure(curv.ricci[i][i] == want.to_string(), || format!("S(e{0},e{0}) = {1}", i + 1, curv.ricci[i][i]))?;
    }
    let find = |id: &str| doc.discrepancies.iter().find(|d| d.id == id);
    let s11 = find("reference_ricci_11").ok_or("printed S(e1,e1) = 0 not flagged")?;
    ensure(s11.reference == "0" && s11.computed == "2", || format!("{s11:?}"))?;
    let lie = find("lie_derivative_xi_formula").ok_or("η⊗η sign not flagged")?;
    ensure(lie.computed == "diagonal (-2, -2, 0)", || format!("{lie:?}"))?;
    let sol = doc.soliton.as_ref().ok_or("no soliton section")?;
    ensure(
        sol.lambda.as_deref() == Some(&*lambda.to_string()) && sol.mu.as_deref() == Some(&*mu.to_string()),
        || format!("solve gave λ {:?} μ {:?}", sol.lambda, sol.mu),
    )?;
    let th = find("soliton_lambda_formula").ok_or("theorem λ not flagged")?;
    ensure(th.reference == theorem.to_string(), || format!("{th:?}"))?;
    let rel = find("reference_soliton_relation").ok_or("printed relation not flagged")?;
    ensure(rel.reference == format!("λ = {relation}"), || format!("{rel:?}"))?;
    Ok(format!(
        "S(e1,e1) = 2 flagged, L_ξg = (-2,-2,0) flagged, λ = {lambda}, μ = {mu}, alternatives {theorem} and {relation} flagged"
    ))
}

fn structural_pass(cd: &CurvatureData) -> Result<usize, String> {
    let checks = cd.structural_checks();
    for c in &checks {
        ensure(c.passed(), || format!("{} fails: {:?}", c.id, c.summary().first_failure))?;
    }
    Ok(checks.len())
}

fn criterion3() -> Outcome {
    let (cs, cd) = example();
    let ts = cs.extract_trans_sasakian().map_err(|e| e.to_string())?;
    ensure(ts.verdict(), || "trans-Sasakian identities fail".into())?;
    ensure(ts.alpha == Expr::zero() && ts.beta == Expr::from_int(-1), || {
        format!("α = {}, β = {}", ts.alpha, ts.beta)
    })?;
    let c = phi_sectional_on_probes(&cd, &cs).ok_or("no φ-sectional probe")?;
    ensure(c.constant_on_probes && c.value == Expr::one(), || format!("c = {}", c.value))?;
    let k = SpaceFormConstants {
        alpha: Expr::zero(),
        beta: Expr::from_int(-1),
        c: Expr::one(),
    };
    let suite = identity_suite(&cd, &cs, &k).map_err(|e| e.to_string())?;
    let mut n = 0;
    for check in suite.checks.iter().filter(|c| c.id != "ricci_space_form_printed") {
        ensure(check.passed(), || format!("{} fails: {:?}", check.id, check.summary().first_failure))?;
        n += 1;
    }
    structural_pass(&cd)?;

    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..20 {
        let f = [0; 3].map(|_| DIAGONAL_POOL[rng.gen_range(0..DIAGONAL_POOL.len())]);
        let g = [0; 3].map(|_| METRIC_POOL[rng.gen_range(0..METRIC_POOL.len())]);
        let m = fixtures::diagonal_manifold(f, g).map_err(|e| e.to_string())?;
        let cd = CurvatureData::new(&m.levi_civita(), RicciConvention::FirstSlot);
        structural_pass(&cd).map_err(|e| format!("frame {f:?} metric {g:?}: {e}"))?;
    }
    Ok(format!("{n} suite checks on the example, structural checks on 20 random diagonal frames"))
}

fn criterion4() -> Outcome {
    let (cs, cd) = example();
    let k = SpaceFormConstants {
        alpha: Expr::zero(),
        beta: Expr::from_int(-1),
        c: Expr::one(),
    };
    let suite = identity_suite(&cd, &cs, &k).map_err(|e| e.to_string())?;
    let contracted = suite.get("ricci_space_form_contracted").ok_or("missing contracted check")?;
    ensure(contracted.passed(), || "contracted model differs from Ricci".into())?;
    let printed = suite.get("ricci_space_form_printed").ok_or("missing printed check")?;
    ensure(!printed.passed(), || "printed coefficients not detected as mismatching".into())?;
    let model = ManifoldFile::example().build().map_err(|e| e.to_string())?;
    let doc = build_report(&model, Scope::Full, Settings::default(), &SolitonOptions::default())
        .map_err(|e| e.to_string())?;
    ensure(
        doc.discrepancies.iter().any(|d| d.id == "ricci_space_form_coefficients"),
        || "report lacks the coefficient discrepancy".into(),
    )?;
    Ok(format!("contraction matches, printed variant mismatches at {} entries", printed.failures.len()))
}

/// `L L g + 2λ L g + 2S − (2μ − p − 2/d) g`, evaluated independently of the
/// solver's own residual.
fn substituted_residual(cd: &CurvatureData, sol: &sasaki_core::soliton::SolitonSolution, kind: &SolitonKind) -> bool {
    let g = cd.manifold().metric();
    let d = g.len();
    let lambda = Expr::rational(sol.lambda.clone().unwrap());
    let mu = Expr::rational(sol.mu.clone().unwrap());
    let shift = match kind {
        SolitonKind::Hyperbolic => Expr::zero(),
        SolitonKind::Conformal { p } => Expr::rational(p + q(2, d as i64)),
    };
    let two = Expr::from_int(2);
    (0..d).all(|i| {
        (0..d).all(|j| {
            let lhs = &sol.second_lie[i][j] + &(&(&two * &lambda) * &sol.lie[i][j]) + &two * &cd.ric[i][j];
            let rhs = &(&(&two * &mu) - &shift) * &g[i][j];
            (lhs - rhs).is_zero()
        })
    })
}

fn criterion5() -> Outcome {
    let (cs, cd) = example();
    let mut unique = 0;
    let mut solves = 0;
    for kind in [SolitonKind::Hyperbolic, SolitonKind::Conformal { p: q(1, 1) }] {
        let sol = solve(&SolitonProblem::new(&cd, cs.xi().clone(), kind.clone()).map_err(|e| e.to_string())?);
        solves += 1;
        ensure(sol.status == SolveStatus::Unique, || "example solve not unique".into())?;
        ensure(substituted_residual(&cd, &sol, &kind), || "example residual nonzero".into())?;
        unique += 1;
    }
    let mut rng = StdRng::seed_from_u64(5);
    let metric_pool = [q(1, 1), q(-1, 1), q(2, 1), q(1, 2), q(-3, 1)];
    let exp_pool = [q(0, 1), q(1, 1), q(-1, 1), q(2, 1), q(1, 2), q(-3, 2)];
    for trial in 0..10 {
        let d = rng.gen_range(3..=4);
        let a: Vec<BigRational> = if trial % 2 == 0 {
            vec![exp_pool[rng.gen_range(1..exp_pool.len())].clone(); d - 1]
        } else {
            (0..d - 1).map(|_| exp_pool[rng.gen_range(0..exp_pool.len())].clone()).collect()
        };
        let mut g: Matrix<BigRational> = vec![vec![BigRational::zero(); d]; d];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = metric_pool[rng.gen_range(0..metric_pool.len())].clone();
        }
        if trial % 2 == 1 && rng.gen_bool(0.5) {
            g[0][1] = q(1, 3);
            g[1][0] = q(1, 3);
        }
        let m = fixtures::homogeneous_manifold(&a, &g).map_err(|e| format!("trial {trial}: {e}"))?;
        let cd = CurvatureData::new(&m.levi_civita(), RicciConvention::FirstSlot);
        let mut fields: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        fields.extend((0..3).map(|_| (0..d).map(|_| rng.gen_range(-2..=2)).collect()));
        for v in &fields {
            for kind in [SolitonKind::Hyperbolic, SolitonKind::Conformal { p: q(rng.gen_range(-3..=3), 2) }] {
                let problem = SolitonProblem::new(&cd, FrameVectorField::from_ints(v), kind.clone())
                    .map_err(|e| e.to_string())?;
                let sol = solve(&problem);
                solves += 1;
                if sol.status == SolveStatus::Unique {
                    unique += 1;
                    ensure(substituted_residual(&cd, &sol, &kind), || {
                        format!("trial {trial}: field {v:?} residual nonzero at λ {:?} μ {:?}", sol.lambda, sol.mu)
                    })?;
                }
            }
        }
    }
    ensure(unique > 2, || format!("only {unique} unique solves"))?;
    Ok(format!("{unique} unique solves of {solves} substitute to zero"))
}

fn example_flow(kind: FlowKind, h: f64, t: f64) -> Result<flow::FlowTrajectory, String> {
    let c = flow::structure_constants(&fixtures::example_manifold()).map_err(|e| e.to_string())?;
    let g0 = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0, -1.0]));
    let steps = (t / h).round() as usize;
    let p = FlowProblem::new(c, g0.clone(), g0, kind, h, steps).map_err(|e| e.to_string())?;
    flow::integrate(&p).map_err(|e| e.to_string())
}

/// Closed form for `Ric = κ g0`, `k0 = a g0`, `p + 2/d = −ω²`.
fn conformal_sigma(kappa: f64, omega: f64, a: f64, t: f64) -> f64 {
    let s0 = 2.0 * kappa / (omega * omega);
    s0 + (1.0 - s0) * (omega * t).cosh() + a / omega * (omega * t).sinh()
}

fn criterion6() -> Outcome {
    let g0 = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0, -1.0]));
    let traj = example_flow(FlowKind::Hyperbolic, 1e-3, 0.5)?;
    ensure(traj.halted.is_none(), || format!("halted: {:?}", traj.halted))?;
    let dev = flow::self_similar_check(&traj, &g0, 1.0, 2.0);
    ensure(dev <= 1e-8, || format!("deviation {dev:e}"))?;

    // σ is quadratic here, so RK4 reproduces it to rounding and the step
    // ratio carries no order information; the order is measured on the
    // conformal flow of the same data, whose σ is transcendental.
    let p = -36.0 - 2.0 / 3.0;
    let omega = 6.0;
    let err = |h: f64| -> Result<f64, String> {
        let traj = example_flow(FlowKind::Conformal { p }, h, 0.5)?;
        Ok(traj
            .samples
            .iter()
            .map(|s| (&s.g - &g0 * conformal_sigma(2.0, omega, 1.0, s.t)).norm() / g0.norm())
            .fold(0.0, f64::max))
    };
    let (e4, e2, e1) = (err(4e-3)?, err(2e-3)?, err(1e-3)?);
    let orders = [(e4 / e2).log2(), (e2 / e1).log2()];
    for o in orders {
        ensure((3.7..=4.3).contains(&o), || format!("order {o:.3} (errors {e4:e} {e2:e} {e1:e})"))?;
    }

    let mut worst: f64 = 0.0;
    let cases: [(Vec<BigRational>, Matrix<BigRational>); 3] = [
        (vec![q(1, 1), q(1, 1)], vec![vec![q(1, 1), q(0, 1), q(0, 1)], vec![q(0, 1), q(1, 1), q(0, 1)], vec![q(0, 1), q(0, 1), q(-1, 1)]]),
        (vec![q(2, 1), q(-1, 3)], vec![vec![q(2, 1), q(1, 2), q(0, 1)], vec![q(1, 2), q(3, 1), q(1, 5)], vec![q(0, 1), q(1, 5), q(-7, 4)]]),
        (vec![q(1, 2), q(0, 1)], vec![vec![q(1, 1), q(0, 1), q(1, 3)], vec![q(0, 1), q(-2, 1), q(0, 1)], vec![q(1, 3), q(0, 1), q(5, 2)]]),
    ];
    for (a, g) in &cases {
        let m = fixtures::homogeneous_manifold(a, g).map_err(|e| e.to_string())?;
        let cd = CurvatureData::new(&m.levi_civita(), RicciConvention::FirstSlot);
        let c = flow::structure_constants(&m).map_err(|e| e.to_string())?;
        let gm = DMatrix::from_fn(3, 3, |i, j| g[i][j].to_f64().unwrap());
        let ric = flow::ricci_numeric(&gm, &c).map_err(|e| e.to_string())?;
        for i in 0..3 {
            for j in 0..3 {
                let exact = cd.ric[i][j].as_rational().ok_or("non-constant Ricci")?.to_f64().unwrap();
                worst = worst.max((ric[(i, j)] - exact).abs());
            }
        }
    }
    ensure(worst <= 1e-12, || format!("numeric Ricci off by {worst:e}"))?;
    Ok(format!(
        "deviation {dev:.1e}, conformal orders {:.3} {:.3}, Ricci agreement {worst:.1e}",
        orders[0], orders[1]
    ))
}

fn regime(sign: i32) -> Regime {
    match sign {
        1 => Regime::Expanding,
        0 => Regime::Steady,
        _ => Regime::Shrinking,
    }
}

fn sign(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn criterion7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut r = |lo: i64, hi: i64| q(rng.gen_range(lo..=hi), rng.gen_range(1..=4));
    let mut inconsistent = 0;
    for trial in 0..50 {
        let alpha = r(-6, 6);
        let beta = loop {
            let b = r(-6, 6);
            if !b.is_zero() {
                break b;
            }
        };
        let n = q(r(1, 4).to_integer().to_i64().unwrap().max(1), 1);
        let mu = r(-20, 20);
        let kind = if trial % 2 == 0 {
            SolitonKind::Hyperbolic
        } else {
            SolitonKind::Conformal { p: r(-8, 8) }
        };
        let report = theorem_thresholds(&alpha, &beta, &n, &mu, &kind).map_err(|e| e.to_string())?;

        // direct formula
        let one = BigRational::one();
        let two = q(2, 1);
        let shift = match &kind {
            SolitonKind::Hyperbolic => BigRational::zero(),
            SolitonKind::Conformal { p } => (p + &two / (&two * &n + &one)) / &two,
        };
        let (a2, b2) = (&alpha * &alpha, &beta * &beta);
        let lambda = (&two * (&n - &one) * (&a2 - &b2) + (&mu - &shift)) / (q(4, 1) * &beta) - &beta;
        ensure(report.lambda == lambda, || format!("trial {trial}: λ {} vs {lambda}", report.lambda))?;
        let threshold = &two * ((&n + &one) * &b2 - (&n - &one) * &a2) + &shift;
        ensure(report.threshold == threshold, || format!("trial {trial}: threshold {} vs {threshold}", report.threshold))?;

        // re-derived direction: 4βλ = μ − threshold
        let side = sign(&(&mu - &threshold));
        ensure(side * sign(&beta) == sign(&lambda), || format!("trial {trial}: direction"))?;
        ensure(report.regime_by_sign == regime(sign(&lambda)), || format!("trial {trial}: regime by sign"))?;
        ensure(report.regime_by_threshold == regime(side), || format!("trial {trial}: regime by threshold"))?;
        ensure(report.consistent() == (beta.is_positive() || side == 0), || format!("trial {trial}: consistency"))?;
        if !report.consistent() {
            inconsistent += 1;
        }
    }
    Ok(format!("50 tuples agree; threshold reading reverses for β < 0 in {inconsistent} of them"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("fixture regression", Duration::from_secs(1), criterion1),
        ("discrepancy audit", Duration::from_secs(1), criterion2),
        ("identity suite", Duration::from_secs(30), criterion3),
        ("contraction consistency", Duration::from_secs(60), criterion4),
        ("soliton soundness", Duration::from_secs(60), criterion5),
        ("flow accuracy", Duration::from_secs(10), criterion6),
        ("threshold formulas", Duration::from_secs(60), criterion7),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > limit => Err(format!("{msg}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("criterion {}: PASS {name} ({elapsed:.2?}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({elapsed:.2?}): {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
