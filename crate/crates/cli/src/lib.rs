//! Experiment runner behind the `horolab` binary.
//!
//! Every suite writes into the output directory:
//! `<suite>.jsonl` (a header line, then one JSON record per line),
//! `<suite>.config` (the rendered config) and any CSV tables, each CSV
//! prefixed with a `# generated ...` line. Seeds of independent parts of a
//! suite are `seed + (k << 32)`, see [`suites::sub_seed`].
//!
//! Exit codes: 0 pass, 1 a failed check or module error, 2 a usage or config error.

pub mod config;
pub mod suites;

pub use config::{ConfigError, ExperimentConfig};
pub use suites::{run_suite, Context, SuiteReport, SUITES};

use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Lie(#[from] horolab_lie::LieError),
    #[error(transparent)]
    Lattice(#[from] horolab_lattice::LatticeError),
    #[error(transparent)]
    Margulis(#[from] horolab_margulis::MargulisError),
    #[error(transparent)]
    Projection(#[from] horolab_projection::ProjectionError),
    #[error(transparent)]
    Equidist(#[from] horolab_equidist::EquidistError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::UnknownSuite(_) => 2,
            _ => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn generated() -> String {
    let secs = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("unix:{secs}")
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    let mut f = std::fs::File::create(path).map_err(io_err(path))?;
    f.write_all(body.as_bytes()).map_err(io_err(path))
}

/// Writes the artifacts of `report` under `dir` and returns their paths.
pub fn write_artifacts(report: &SuiteReport, cfg: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let stamp = generated();
    let header = serde_json::json!({ "generated": stamp, "suite": report.suite, "seed": cfg.seed });
    let mut jsonl = format!("{header}\n");
    for r in &report.records {
        jsonl.push_str(&r.to_string());
        jsonl.push('\n');
    }
    let mut paths = Vec::new();
    let mut put = |name: String, body: &str| -> Result<(), CliError> {
        let p = dir.join(name);
        write_file(&p, body)?;
        paths.push(p);
        Ok(())
    };
    put(format!("{}.jsonl", report.suite), &jsonl)?;
    put(format!("{}.config", report.suite), &cfg.render())?;
    for (name, body) in &report.tables {
        put(name.clone(), &format!("# generated {stamp} seed {}\n{body}", cfg.seed))?;
    }
    Ok(paths)
}

/// Runs one suite with `cfg.threads` workers and writes its artifacts.
pub fn run(name: &str, cfg: &ExperimentConfig) -> Result<SuiteReport, CliError> {
    cfg.validate()?;
    if !SUITES.contains(&name) {
        return Err(CliError::UnknownSuite(name.to_string()));
    }
    let ctx = Context::new(cfg.clone());
    let report = horolab_mc::with_threads(cfg.threads, || suites::dispatch(name, &ctx))?;
    write_artifacts(&report, cfg, &cfg.out_dir())?;
    Ok(report)
}
