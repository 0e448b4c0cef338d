//! The `flow` command: input loading, integration and trajectory output.
//!
//! Input is either a manifold file with constant brackets and metric, or a
//! constants file:
//!
//! ```json
//! { "structure_constants": [[[0, 0, 0], ...], ...], "metric": [[1, 0, 0], ...] }
//! ```
//!
//! where `structure_constants[i][j][k]` is the `e_k` component of `[e_i, e_j]`.

use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use sasaki_core::flow::{self, FlowError, FlowKind, FlowProblem, FlowTrajectory, Halt, StructureConstants};

use crate::input::{InputError, ManifoldFile};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsFile {
    pub structure_constants: Vec<Vec<Vec<f64>>>,
    pub metric: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct FlowOptions {
    pub t_max: f64,
    pub dt: f64,
    pub kind: FlowKind,
    pub k0_scale: f64,
    pub check_sigma: Option<(f64, f64)>,
    pub sigma_tol: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            t_max: 0.5,
            dt: 1e-3,
            kind: FlowKind::Hyperbolic,
            k0_scale: 1.0,
            check_sigma: None,
            sigma_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SigmaCheck {
    pub lambda: f64,
    pub mu: f64,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowSummary {
    pub command: &'static str,
    pub kind: FlowKind,
    pub dimension: usize,
    pub dt: f64,
    pub t_max: f64,
    pub steps_requested: usize,
    pub samples: usize,
    pub t_final: f64,
    pub halted: Option<Halt>,
    pub final_det: f64,
    pub max_einstein_residual: f64,
    pub self_similar: Option<SigmaCheck>,
    pub pass: bool,
}

/// Constant data for the flow, in the frame basis.
pub fn load_constants(path: &Path) -> Result<(StructureConstants, DMatrix<f64>), InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Io(path.display().to_string(), e))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(InputError::Json)?;
    if value.get("structure_constants").is_some() {
        let file: ConstantsFile = serde_json::from_value(value).map_err(InputError::Json)?;
        let d = file.metric.len();
        if file.metric.iter().any(|r| r.len() != d) {
            return Err(InputError::Shape(format!("metric must be {d}x{d}")));
        }
        let g = DMatrix::from_fn(d, d, |i, j| file.metric[i][j]);
        return Ok((file.structure_constants, g));
    }
    let model = ManifoldFile::from_json(&text)?.build()?;
    let c = flow::structure_constants(&model.manifold).map_err(|e| {
        InputError::Argument(format!("{e}; the flow needs a homogeneous frame with constant brackets"))
    })?;
    let m = model.manifold.metric();
    let d = m.len();
    let mut g = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            g[(i, j)] = m[i][j]
                .as_rational()
                .and_then(|q| q.to_f64())
                .ok_or_else(|| InputError::Argument(format!("metric[{i}][{j}] is not constant")))?;
        }
    }
    Ok((c, g))
}

fn flow_error(e: FlowError) -> InputError {
    InputError::Argument(e.to_string())
}

pub fn run(
    structure: StructureConstants,
    g0: DMatrix<f64>,
    opts: &FlowOptions,
) -> Result<(FlowTrajectory, FlowSummary), InputError> {
    if !(opts.t_max.is_finite() && opts.t_max > 0.0) {
        return Err(InputError::Argument("--t-max must be positive".into()));
    }
    if !(opts.dt.is_finite() && opts.dt > 0.0) {
        return Err(InputError::Argument("--dt must be positive".into()));
    }
    let steps = (opts.t_max / opts.dt).round().max(1.0) as usize;
    let k0 = &g0 * opts.k0_scale;
    let problem = FlowProblem::new(structure, g0.clone(), k0, opts.kind, opts.dt, steps).map_err(flow_error)?;
    let traj = flow::integrate(&problem).map_err(flow_error)?;
    let last = traj.samples.last().expect("trajectory starts with the initial sample");
    let self_similar = opts.check_sigma.map(|(lambda, mu)| {
        let dev = flow::self_similar_check(&traj, &g0, lambda, mu);
        SigmaCheck {
            lambda,
            mu,
            max_deviation: dev,
            tolerance: opts.sigma_tol,
            pass: dev <= opts.sigma_tol,
        }
    });
    let summary = FlowSummary {
        command: "flow",
        kind: opts.kind,
        dimension: g0.nrows(),
        dt: opts.dt,
        t_max: opts.t_max,
        steps_requested: steps,
        samples: traj.samples.len(),
        t_final: last.t,
        halted: traj.halted,
        final_det: last.diagnostics.det,
        max_einstein_residual: traj
            .samples
            .iter()
            .map(|s| s.diagnostics.einstein_residual)
            .fold(0.0, f64::max),
        pass: traj.halted.is_none() && self_similar.as_ref().is_none_or(|s| s.pass),
        self_similar,
    };
    Ok((traj, summary))
}

pub fn write_trajectory(traj: &FlowTrajectory, format: Format, out: &mut dyn Write) -> anyhow::Result<()> {
    match format {
        Format::Csv => {
            let d = traj.samples.first().map_or(0, |s| s.g.nrows());
            let mut w = csv::Writer::from_writer(out);
            w.write_record(flow::csv_header(d))?;
            for s in &traj.samples {
                w.write_record(s.csv_row().iter().map(|x| format!("{x:e}")))?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &traj.document())?;
            writeln!(out)?;
        }
    }
    Ok(())
}
