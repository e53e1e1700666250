//! Acceptance run: criteria 1 to 9 at full size, criterion 10 on the quick
//! config. Prints one PASS/FAIL line per criterion.
//!
//! Exit status is nonzero when a criterion fails that is not listed in
//! [`KNOWN_FAILURES`]; those still print FAIL.

use horolab_cli::suites::{self, Context, SuiteReport};
use horolab_cli::{run, ExperimentConfig, SUITES};
use std::path::Path;
use std::time::Instant;

/// Criteria that fail at desk scale, with the measured reason.
const KNOWN_FAILURES: &[(u32, &str)] = &[(
    9,
    "the Dirac control decays over the window as well; discrepancy against the Haar oracle falls for any start point",
)];

/// Every value the criteria depend on, set here rather than taken from defaults.
fn pinned(out: &Path) -> ExperimentConfig {
    ExperimentConfig {
        seed: 1,
        out: out.display().to_string(),
        cache_dir: out.join("cache").display().to_string(),
        kernel_checks: 10_000,
        kernel_tol: 1e-12,
        bch_pairs: 10_000,
        bch_beta: 1e-3,
        bch_residual: 1e-10,
        contraction_alphas: vec![0.5, 0.75, 0.9],
        contraction_samples: 1000,
        alpha: 0.6,
        eps: 0.02,
        cantor_levels: 4,
        regularize_fixtures: vec![1.149, 1.149, 1.0],
        kappa: 0.05,
        projection_fixture: 1.0,
        sheets: 16,
        margulis_alpha: 0.5,
        walk_depth: 3,
        inequality_samples: 100_000,
        recurrence_t: 12.0,
        recurrence_eps: vec![0.02, 0.05, 0.1, 0.2],
        density_t: vec![1e2, 1e3, 1e4],
        density_samples: 32_000,
        ..ExperimentConfig::default()
    }
}

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn timed_suite(
    id: u32,
    name: &'static str,
    limit_secs: f64,
    ctx: &Context,
    f: fn(&Context) -> Result<SuiteReport, horolab_cli::CliError>,
) -> Outcome {
    let t0 = Instant::now();
    let res = f(ctx);
    let secs = t0.elapsed().as_secs_f64();
    match res {
        Ok(r) => Outcome {
            id,
            name,
            pass: r.pass && secs < limit_secs,
            detail: format!("{} [{secs:.1} s, limit {limit_secs} s]", r.summary),
        },
        Err(e) => Outcome { id, name, pass: false, detail: format!("error: {e}") },
    }
}

/// Artifact text with the header line of `.jsonl` and `.csv` files removed.
/// With `ignore_threads`, the `threads` line of `.config` files is dropped too.
fn stripped(dir: &Path, ignore_threads: bool) -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().is_file())
        .map(|e| {
            let name = e.file_name().to_string_lossy().into_owned();
            let text = std::fs::read_to_string(e.path()).unwrap();
            let body = if name.ends_with(".jsonl") || name.ends_with(".csv") {
                text.split_once('\n').map(|p| p.1.to_string()).unwrap_or_default()
            } else if ignore_threads {
                text.lines().filter(|l| !l.starts_with("threads =")).collect::<Vec<_>>().join("\n")
            } else {
                text
            };
            (name, body)
        })
        .collect();
    files.sort();
    files
}

/// Every suite on the quick config, twice with default threads and once
/// with one thread, all into the same output directory.
fn determinism(root: &Path) -> Outcome {
    let out = root.join("out");
    let mut bad = Vec::new();
    let mut snapshots = Vec::new();
    for threads in [0, 0, 1] {
        let cfg = ExperimentConfig {
            out: out.display().to_string(),
            cache_dir: root.join("cache").display().to_string(),
            threads,
            ..ExperimentConfig::quick()
        };
        for s in SUITES {
            if let Err(e) = run(s, &cfg) {
                bad.push(format!("{s}: {e}"));
            }
        }
        snapshots.push((stripped(&out, false), stripped(&out, true)));
        std::fs::remove_dir_all(&out).unwrap();
    }
    let mut count = 0;
    for (i, other) in snapshots.iter().enumerate().skip(1) {
        let (base, cur) = if i == 2 { (&snapshots[0].1, &other.1) } else { (&snapshots[0].0, &other.0) };
        if cur.len() != base.len() {
            bad.push(format!("run {i}: {} files vs {}", cur.len(), base.len()));
        }
        for ((n0, b0), (n1, b1)) in base.iter().zip(cur) {
            count += 1;
            if n0 != n1 || b0 != b1 {
                bad.push(format!("run {i}: {n1} differs"));
            }
        }
    }
    Outcome {
        id: 10,
        name: "determinism",
        pass: bad.is_empty() && count > 0,
        detail: if bad.is_empty() {
            format!("{} suites, {count} artifact comparisons, threads 0 and 1", SUITES.len())
        } else {
            bad.join("; ")
        },
    }
}

fn main() {
    let dir = tempfile::tempdir().expect("tempdir");
    let ctx = Context::new(pinned(&dir.path().join("full")));
    if let Err(e) = ctx.cache() {
        eprintln!("lattice cache: {e}");
        std::process::exit(1);
    }
    let threads = ctx.cfg.threads;
    let mut outcomes = horolab_mc::with_threads(threads, || {
        vec![
            timed_suite(1, "algebraic kernel", 5.0, &ctx, suites::kernel),
            timed_suite(2, "bch bounds", 30.0, &ctx, suites::bch_bounds),
            timed_suite(3, "contraction m_alpha", 300.0, &ctx, suites::contraction),
            timed_suite(4, "dyadic regularization", 120.0, &ctx, suites::regularize),
            timed_suite(5, "projection theorem", 600.0, &ctx, suites::projection_verify),
            timed_suite(6, "margulis inequality", 300.0, &ctx, suites::inequality),
            timed_suite(7, "recurrence", 300.0, &ctx, suites::recurrence),
            timed_suite(8, "density dichotomy", 900.0, &ctx, suites::density),
            timed_suite(9, "sparse equidistribution", 600.0, &ctx, suites::equidist),
        ]
    });
    outcomes.push(determinism(&dir.path().join("quick")));

    let mut unexpected = 0;
    for o in &outcomes {
        let known = KNOWN_FAILURES.iter().find(|k| k.0 == o.id);
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {:>2} ({}): {}", o.id, o.name, o.detail);
        match (o.pass, known) {
            (false, Some((_, why))) => println!("     known failure: {why}"),
            (false, None) => unexpected += 1,
            (true, Some(_)) => println!("     listed as a known failure but passed"),
            (true, None) => {}
        }
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("acceptance: {passed}/{} criteria pass, {unexpected} unexpected failures", outcomes.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
