use horolab_cli::{ConfigError, ExperimentConfig};
use proptest::prelude::*;
use std::path::Path;
use std::process::Command;

fn horolab(out: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_horolab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("HOROLAB_CACHE_DIR")
        .output()
        .expect("spawn horolab")
}

fn body(path: &Path) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    text.split_once('\n').map(|p| p.1.to_string()).unwrap_or_default()
}

#[test]
fn default_and_quick_round_trip() {
    for cfg in [ExperimentConfig::default(), ExperimentConfig::quick()] {
        assert_eq!(ExperimentConfig::parse(&cfg.render()).unwrap(), cfg);
    }
}

#[test]
fn render_lists_every_key() {
    let text = ExperimentConfig::default().render();
    for key in ExperimentConfig::KEYS {
        assert!(text.lines().any(|l| l.starts_with(&format!("{key} ="))), "{key}");
    }
}

#[test]
fn parse_accepts_comments_and_case() {
    let cfg = ExperimentConfig::parse("# header\nseed = 9  # trailing\n\nlattice = sl2z_x_sl2z\nrecurrence_eps = 0.1, 0.2\n")
        .unwrap();
    assert_eq!(cfg.seed, 9);
    assert_eq!(cfg.lattice.id(), "SL2Z_x_SL2Z");
    assert_eq!(cfg.recurrence_eps, vec![0.1, 0.2]);
}

#[test]
fn parse_errors() {
    assert_eq!(ExperimentConfig::parse("seed 3"), Err(ConfigError::Syntax { line: 1 }));
    assert_eq!(
        ExperimentConfig::parse("\nbogus = 1"),
        Err(ConfigError::UnknownKey { line: 2, key: "bogus".into() })
    );
    assert!(matches!(ExperimentConfig::parse("seed = -1"), Err(ConfigError::BadValue { .. })));
    assert!(matches!(ExperimentConfig::parse("alpha = nan"), Err(ConfigError::BadValue { .. })));
    assert!(matches!(ExperimentConfig::parse("lattice = SL3"), Err(ConfigError::BadValue { .. })));
    assert!(matches!(ExperimentConfig::parse("base_point = 1,2"), Err(ConfigError::Invalid { .. })));
    assert!(matches!(ExperimentConfig::parse("pipeline_set = sphere"), Err(ConfigError::Invalid { .. })));
}

proptest! {
    #[test]
    fn random_configs_round_trip(
        seed in any::<u64>(),
        alpha in 0.01f64..2.9,
        eps in proptest::collection::vec(1e-4f64..1.0, 1..6),
        out in "[a-z0-9_/.]{1,12}",
        threads in 0usize..8,
    ) {
        let cfg = ExperimentConfig { seed, alpha, recurrence_eps: eps, out, threads, ..ExperimentConfig::default() };
        prop_assert_eq!(ExperimentConfig::parse(&cfg.render()).unwrap(), cfg);
    }

    #[test]
    fn parse_never_panics(text in "[ -~\n]{0,200}") {
        let _ = ExperimentConfig::parse(&text);
    }
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(horolab(dir.path(), &["no-such-suite"]).status.code(), Some(2));
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "nonsense = 1\n").unwrap();
    assert_eq!(horolab(dir.path(), &["--config", cfg.to_str().unwrap(), "kernel"]).status.code(), Some(2));
}

#[test]
fn artifacts_have_header_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = horolab(dir.path(), &["--quick", "kernel"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("kernel.jsonl")).unwrap();
    let header: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(header["suite"], "kernel");
    assert!(header["generated"].as_str().unwrap().starts_with("unix:"));
    assert!(text.lines().count() >= 5);
    let cfg = ExperimentConfig::load(&dir.path().join("kernel.config")).unwrap();
    assert_eq!(cfg.kernel_checks, ExperimentConfig::quick().kernel_checks);
}

#[test]
fn cache_is_built_once_then_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache").join(format!("SL2_GaussianIntegers_d{}.cache", ExperimentConfig::quick().cache_depth));
    assert!(!cache.exists());
    assert!(horolab(dir.path(), &["--quick", "recurrence"]).status.success());
    let bytes = std::fs::read(&cache).expect("cache written");
    let mtime = std::fs::metadata(&cache).unwrap().modified().unwrap();
    assert!(horolab(dir.path(), &["--quick", "recurrence"]).status.success());
    assert_eq!(std::fs::read(&cache).unwrap(), bytes);
    assert_eq!(std::fs::metadata(&cache).unwrap().modified().unwrap(), mtime);
}

#[test]
fn quick_runs_are_thread_independent() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, threads) in [(&a, "1"), (&b, "0")] {
        assert!(horolab(dir.path(), &["--quick", "--threads", threads, "bootstrap"]).status.success());
    }
    assert_eq!(body(&a.path().join("bootstrap.jsonl")), body(&b.path().join("bootstrap.jsonl")));
}
