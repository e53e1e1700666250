use clap::{Parser, Subcommand};
use horolab_cli::{run, ExperimentConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "horolab", version, about = "Numerical experiments on horospherical orbits")]
struct Cli {
    /// `key = value` config file; defaults are used for missing keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Use the small smoke-test sizes as the base config.
    #[arg(long, global = true)]
    quick: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Lie algebra identities and BCH bounds.
    Kernel,
    /// Contraction of the averaging operator.
    Contraction,
    /// Dyadic regularization of reference sets.
    Regularize,
    /// The projection theorem on a Cantor product.
    ProjectionVerify,
    /// From a set in r to a regular measure on the line.
    Pipeline,
    /// The Margulis inequality on a sheet set.
    Inequality,
    /// Bootstrap traces from a generic and a periodic point.
    Bootstrap,
    /// Recurrence to the cusp along expanded horocycles.
    Recurrence,
    /// Discrepancy of sparse horospherical averages.
    Equidist,
    /// Covering radius of P-ball orbits.
    Density,
    /// The height function on a periodic orbit.
    PeriodicF,
}

impl Cmd {
    fn suite(self) -> &'static str {
        match self {
            Cmd::Kernel => "kernel",
            Cmd::Contraction => "contraction",
            Cmd::Regularize => "regularize",
            Cmd::ProjectionVerify => "projection-verify",
            Cmd::Pipeline => "pipeline",
            Cmd::Inequality => "inequality",
            Cmd::Bootstrap => "bootstrap",
            Cmd::Recurrence => "recurrence",
            Cmd::Equidist => "equidist",
            Cmd::Density => "density",
            Cmd::PeriodicF => "periodic-f",
        }
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors
    let cli = Cli::parse();
    let base = match &cli.config {
        Some(p) => ExperimentConfig::load(p),
        None if cli.quick => Ok(ExperimentConfig::quick()),
        None => Ok(ExperimentConfig::default()),
    };
    let mut cfg = match base {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = cli.out {
        cfg.out = o;
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    match run(cli.cmd.suite(), &cfg) {
        Ok(r) => {
            println!("{} {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.suite, r.summary);
            ExitCode::from(if r.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
