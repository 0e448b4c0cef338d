//! Command implementations behind the `sasaki` binary.

pub mod flow_cmd;
pub mod input;
pub mod reference;
pub mod report;

use std::path::Path;

pub use input::{InputError, ManifoldFile, Model};
pub use report::{build_report, FieldSpec, ReportDocument, Scope, Settings, SolitonOptions};

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const INPUT: i32 = 2;
}

pub fn load_model(path: &Path) -> Result<Model, InputError> {
    ManifoldFile::load(path)?.build()
}

pub fn cmd_example() -> String {
    let mut s = ManifoldFile::example().to_json();
    s.push('\n');
    s
}

/// Structure axioms only. Files without a contact block are an input error.
pub fn cmd_check(path: &Path) -> Result<ReportDocument, InputError> {
    let model = load_model(path)?;
    if model.contact.is_none() {
        return Err(InputError::Argument("check needs a \"contact\" block".into()));
    }
    build_report(&model, Scope::Structure, Settings::default(), &SolitonOptions::default())
}

pub fn cmd_report(path: &Path, settings: Settings) -> Result<ReportDocument, InputError> {
    let model = load_model(path)?;
    build_report(&model, Scope::Full, settings, &SolitonOptions::default())
}

pub fn cmd_soliton(path: &Path, settings: Settings, opts: &SolitonOptions) -> Result<ReportDocument, InputError> {
    let model = load_model(path)?;
    build_report(&model, Scope::Soliton, settings, opts)
}
