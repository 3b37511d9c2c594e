//! Declarative experiments: TOML scenario files in, CSV residual reports and
//! SVG orbit plots out.
//!
//! A scenario names a table (boundary conic plus line field) and one
//! experiment kind. Every kind reduces to residual rows, and a scenario
//! passes when every row is below its tolerance. Identical files and seeds
//! give byte-identical outputs.

mod report;
mod runner;
mod scenario;
mod svg;

use std::path::PathBuf;

use thiserror::Error;

pub use report::{Report, Row, CSV_HEADER};
pub use runner::{evaluate, exit_code, run_file, run_files, run_scenario, Outcome, RunResult};
pub use scenario::{
    CausticTarget, Experiment, ExperimentKind, FormSpec, IntegralSpec, InvariantTarget, OutputPaths, Overrides,
    Scenario, TableSpec,
};
pub use svg::{orbit_svg, render_orbit_svg};

/// Environment variable naming the default output root.
pub const OUT_DIR_ENV: &str = "CAUSTICA_OUT_DIR";

#[derive(Debug, Error)]
pub enum ExpError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed scenario: {0}")]
    Parse(String),
    #[error("missing key `{0}`")]
    MissingKey(String),
    #[error("invalid value for `{key}`: {reason}")]
    InvalidValue { key: String, reason: String },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot plot an empty orbit")]
    EmptyOrbit,
    #[error(transparent)]
    Geometry(#[from] crate::error::Error),
}
