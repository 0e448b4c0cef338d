use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::ToPrimitive;

use sasaki_cli::flow_cmd::{self, FlowOptions, Format};
use sasaki_cli::{cmd_check, cmd_example, cmd_report, cmd_soliton, exit, FieldSpec, InputError, ReportDocument};
use sasaki_cli::{Settings, SolitonOptions};
use sasaki_core::contact::DConvention;
use sasaki_core::curvature::RicciConvention;
use sasaki_core::flow::FlowKind;
use sasaki_core::soliton::SolitonKind;

#[derive(Parser)]
#[command(name = "sasaki", version, about = "Checks Lorentzian trans-Sasakian structures and hyperbolic Ricci solitons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RicciArg {
    FirstSlot,
    Negated,
}

#[derive(Clone, Copy, ValueEnum)]
enum DArg {
    Full,
    Half,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Hyperbolic,
    Conformal,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct Conventions {
    /// Trace convention for the Ricci tensor.
    #[arg(long, value_enum, default_value = "first-slot")]
    ricci_convention: RicciArg,
    /// Normalization of the exterior derivative in the dη, dΦ check.
    #[arg(long, value_enum, default_value = "full")]
    d_convention: DArg,
}

impl Conventions {
    fn settings(&self) -> Settings {
        Settings {
            ricci_convention: match self.ricci_convention {
                RicciArg::FirstSlot => RicciConvention::FirstSlot,
                RicciArg::Negated => RicciConvention::Negated,
            },
            d_convention: match self.d_convention {
                DArg::Full => DConvention::Full,
                DArg::Half => DConvention::Half,
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the built-in example manifold file.
    Example,
    /// Check the almost-contact metric axioms.
    Check { file: PathBuf },
    /// Full curvature, identity and soliton report.
    Report {
        file: PathBuf,
        #[command(flatten)]
        conventions: Conventions,
    },
    /// Solve the soliton equation for a vector field.
    Soliton {
        file: PathBuf,
        /// `xi` or comma-separated frame components.
        #[arg(long, default_value = "xi")]
        field: String,
        #[arg(long, value_enum, default_value = "hyperbolic")]
        kind: KindArg,
        /// Rational parameter of the conformal kind.
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[command(flatten)]
        conventions: Conventions,
    },
    /// Integrate the hyperbolic Ricci flow on constant structure data.
    Flow {
        file: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        t_max: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, value_enum, default_value = "hyperbolic")]
        kind: KindArg,
        /// Parameter of the conformal kind, rational or decimal.
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        /// Initial velocity is this multiple of the initial metric.
        #[arg(long, default_value_t = 1.0)]
        k0_scale: f64,
        /// Trajectory output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// Compare with g0 (1 + λt − μt²), given as `λ,μ`.
        #[arg(long, allow_hyphen_values = true)]
        check_sigma: Option<String>,
        #[arg(long, default_value_t = 1e-8)]
        sigma_tol: f64,
    },
}

fn parse_field(s: &str) -> FieldSpec {
    if s.trim() == "xi" {
        FieldSpec::Xi
    } else {
        FieldSpec::Components(s.split(',').map(|p| p.trim().to_string()).collect())
    }
}

fn soliton_kind(kind: KindArg, p: Option<&str>) -> Result<SolitonKind, InputError> {
    match (kind, p) {
        (KindArg::Hyperbolic, None) => Ok(SolitonKind::Hyperbolic),
        (KindArg::Hyperbolic, Some(_)) => Err(InputError::Argument("--p is only valid with --kind conformal".into())),
        (KindArg::Conformal, None) => Err(InputError::Argument("--kind conformal needs --p".into())),
        (KindArg::Conformal, Some(p)) => BigRational::from_str(p.trim())
            .map(|p| SolitonKind::Conformal { p })
            .map_err(|_| InputError::Argument(format!("--p: `{p}` is not a rational number"))),
    }
}

fn flow_kind(kind: KindArg, p: Option<&str>) -> Result<FlowKind, InputError> {
    match soliton_kind(kind, p) {
        Ok(SolitonKind::Hyperbolic) => Ok(FlowKind::Hyperbolic),
        Ok(SolitonKind::Conformal { p }) => Ok(FlowKind::Conformal {
            p: p.to_f64().unwrap_or(f64::NAN),
        }),
        Err(_) if kind == KindArg::Conformal && p.is_some() => {
            let text = p.unwrap_or_default();
            text.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(|p| FlowKind::Conformal { p })
                .ok_or_else(|| InputError::Argument(format!("--p: `{text}` is not a number")))
        }
        Err(e) => Err(e),
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64), InputError> {
    let err = || InputError::Argument(format!("--check-sigma: expected `λ,μ`, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(err)?;
    Ok((a.trim().parse().map_err(|_| err())?, b.trim().parse().map_err(|_| err())?))
}

fn emit(doc: &ReportDocument) -> i32 {
    print!("{}", doc.to_json());
    if let Some(v) = doc.structure.as_ref().and_then(|s| s.first_violation.as_ref()) {
        eprintln!("violation: {} at {:?}", v.axiom, v.indices);
    }
    if doc.passed() {
        exit::PASS
    } else {
        eprintln!(
            "{} failed checks, {} discrepancies",
            doc.summary.failed_checks.len(),
            doc.summary.discrepancies
        );
        exit::FAIL
    }
}

fn run(cli: Cli) -> Result<i32, InputError> {
    match cli.command {
        Command::Example => {
            print!("{}", cmd_example());
            Ok(exit::PASS)
        }
        Command::Check { file } => Ok(emit(&cmd_check(&file)?)),
        Command::Report { file, conventions } => Ok(emit(&cmd_report(&file, conventions.settings())?)),
        Command::Soliton {
            file,
            field,
            kind,
            p,
            conventions,
        } => {
            let opts = SolitonOptions {
                field: parse_field(&field),
                kind: soliton_kind(kind, p.as_deref())?,
            };
            Ok(emit(&cmd_soliton(&file, conventions.settings(), &opts)?))
        }
        Command::Flow {
            file,
            t_max,
            dt,
            kind,
            p,
            k0_scale,
            out,
            format,
            check_sigma,
            sigma_tol,
        } => {
            let opts = FlowOptions {
                t_max,
                dt,
                kind: flow_kind(kind, p.as_deref())?,
                k0_scale,
                check_sigma: check_sigma.as_deref().map(parse_pair).transpose()?,
                sigma_tol,
            };
            let format = match format {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            };
            let (c, g0) = flow_cmd::load_constants(&file)?;
            let (traj, summary) = flow_cmd::run(c, g0, &opts)?;
            let summary_text = serde_json::to_string_pretty(&summary).expect("summary serializes");
            let written = match &out {
                Some(path) => {
                    let f = File::create(path).map_err(|e| InputError::Io(path.display().to_string(), e))?;
                    let mut w = BufWriter::new(f);
                    let r = flow_cmd::write_trajectory(&traj, format, &mut w).and_then(|_| Ok(w.flush()?));
                    println!("{summary_text}");
                    r
                }
                None => {
                    let stdout = io::stdout();
                    let mut lock = stdout.lock();
                    let r = flow_cmd::write_trajectory(&traj, format, &mut lock);
                    eprintln!("{summary_text}");
                    r
                }
            };
            if let Err(e) = written {
                eprintln!("error writing trajectory: {e}");
                return Ok(exit::INPUT);
            }
            if let Some(h) = summary.halted {
                eprintln!("flow degenerated after t = {} ({:?})", h.t, h.reason);
            }
            Ok(if summary.pass { exit::PASS } else { exit::FAIL })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::INPUT } else { exit::PASS };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::INPUT as u8)
        }
    }
}
