//! Flat `key = value` experiment configuration.
//!
//! One entry per line; `#` starts a comment; lists are comma separated.
//! Unknown keys and malformed values are errors. [`ExperimentConfig::render`]
//! writes every key, and parsing its output gives back the same config.

use horolab_lattice::LatticeKind;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("key `{key}`: cannot parse `{value}`")]
    BadValue { key: String, value: String },
    #[error("key `{key}`: {reason}")]
    Invalid { key: String, reason: String },
}

trait KvValue: Sized {
    fn parse_kv(s: &str) -> Option<Self>;
    fn render_kv(&self) -> String;
}

impl KvValue for f64 {
    fn parse_kv(s: &str) -> Option<Self> {
        s.parse().ok().filter(|v: &f64| v.is_finite())
    }
    fn render_kv(&self) -> String {
        format!("{self:?}")
    }
}

impl KvValue for u64 {
    fn parse_kv(s: &str) -> Option<Self> {
        s.parse().ok()
    }
    fn render_kv(&self) -> String {
        self.to_string()
    }
}

impl KvValue for usize {
    fn parse_kv(s: &str) -> Option<Self> {
        s.parse().ok()
    }
    fn render_kv(&self) -> String {
        self.to_string()
    }
}

impl KvValue for String {
    fn parse_kv(s: &str) -> Option<Self> {
        Some(s.to_string())
    }
    fn render_kv(&self) -> String {
        self.clone()
    }
}

impl KvValue for Vec<f64> {
    fn parse_kv(s: &str) -> Option<Self> {
        s.split(',').map(|p| f64::parse_kv(p.trim())).collect()
    }
    fn render_kv(&self) -> String {
        self.iter().map(f64::render_kv).collect::<Vec<_>>().join(",")
    }
}

impl KvValue for LatticeKind {
    fn parse_kv(s: &str) -> Option<Self> {
        LatticeKind::ALL.into_iter().find(|k| k.id().eq_ignore_ascii_case(s))
    }
    fn render_kv(&self) -> String {
        self.id().to_string()
    }
}

macro_rules! config {
    ($($(#[doc = $doc:literal])* $name:ident : $ty:ty = $default:expr;)*) => {
        #[derive(Clone, Debug, PartialEq)]
        pub struct ExperimentConfig {
            $($(#[doc = $doc])* pub $name: $ty,)*
        }

        impl Default for ExperimentConfig {
            fn default() -> Self {
                ExperimentConfig { $($name: $default,)* }
            }
        }

        impl ExperimentConfig {
            pub const KEYS: &'static [&'static str] = &[$(stringify!($name),)*];

            /// Sets one key from its text form.
            pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
                match key {
                    $(stringify!($name) => {
                        self.$name = <$ty as KvValue>::parse_kv(value).ok_or_else(|| ConfigError::BadValue {
                            key: key.to_string(),
                            value: value.to_string(),
                        })?;
                    })*
                    _ => return Err(ConfigError::UnknownKey { line: 0, key: key.to_string() }),
                }
                Ok(())
            }

            pub fn render(&self) -> String {
                let mut s = String::new();
                $(s.push_str(&format!("{} = {}\n", stringify!($name), self.$name.render_kv()));)*
                s
            }
        }
    };
}

config! {
    lattice: LatticeKind = LatticeKind::GaussianIntegers;
    seed: u64 = 1;
    /// Word length of the lattice cache.
    cache_depth: usize = 6;
    /// Empty means `<out>/cache`; `HOROLAB_CACHE_DIR` overrides both.
    cache_dir: String = String::new();
    out: String = "results".into();
    /// Zero keeps the default thread pool.
    threads: usize = 0;
    /// Lie coordinates of the generic fixture point `exp(w) eGamma`.
    base_point: Vec<f64> = vec![0.13, -0.21, 0.17, 0.11, 0.07, -0.19];

    kernel_checks: usize = 10_000;
    kernel_tol: f64 = 1e-12;
    bch_pairs: usize = 10_000;
    bch_beta: f64 = 1e-3;
    bch_residual: f64 = 1e-10;

    contraction_alphas: Vec<f64> = vec![0.5, 0.75, 0.9];
    /// Calibration vectors used to solve for `m_alpha`.
    calibration_samples: usize = 256;
    /// Fresh unit vectors checked at `m_alpha`.
    contraction_samples: usize = 1000;

    alpha: f64 = 0.6;
    eps: f64 = 0.02;
    grid_side: usize = 16;
    segment_points: usize = 4096;
    cantor_levels: usize = 4;
    cantor_ratio: f64 = 0.25;
    /// First-run certificates for grid, segment and Cantor.
    regularize_fixtures: Vec<f64> = vec![1.149, 1.149, 1.0];

    kappa: f64 = 0.05;
    projection_levels: usize = 4;
    projection_ratio: f64 = 1.0 / 27.0;
    projection_b0: f64 = 1.0 / 4096.0;
    projection_directions: usize = 256;
    projection_fixture: f64 = 1.0;

    /// `cantor` (4 levels, ratio 1/4) or `halton`.
    pipeline_set: String = "cantor".into();
    pipeline_points: usize = 4096;
    pipeline_scale: f64 = 0.0625;
    pipeline_alpha: f64 = 0.6;
    pipeline_eps: f64 = 0.02;
    pipeline_beta0: f64 = 0.1;
    membership_fixture: f64 = 2.7648;

    sheets: usize = 16;
    sheet_beta: f64 = 1e-7;
    sheet_eta: f64 = 0.005;
    margulis_alpha: f64 = 0.5;
    walk_m: f64 = 8.0;
    walk_depth: usize = 3;
    inequality_samples: usize = 100_000;

    bootstrap_t: f64 = 2.0;
    bootstrap_eps: f64 = 0.1;

    recurrence_t: f64 = 12.0;
    recurrence_eps: Vec<f64> = vec![0.02, 0.05, 0.1, 0.2];
    recurrence_samples: usize = 8192;

    density_t: Vec<f64> = vec![1e2, 1e3, 1e4];
    density_samples: usize = 32_000;
    density_tests: usize = 16;
    test_eta: f64 = 0.005;
    /// Largest relative drop of the covering radius still counted as stagnation.
    stagnation_drop: f64 = 0.05;

    equidist_points: usize = 4096;
    equidist_alpha: f64 = 0.9;
    equidist_eps: f64 = 0.02;
    bump_radius: f64 = 20.0;
    bumps: usize = 8;
    /// `eps` of the single-scale regularity of `rho`.
    rho_eps: f64 = 0.1;
    rho_cap: f64 = 4.0;
    window_points: usize = 5;
    rho_samples: usize = 256;
    dirac_samples: usize = 8000;
    haar_samples: usize = 20_000;

    periodic_alpha: f64 = 0.5;
    periodic_samples: usize = 2000;
    periodic_delta0: f64 = 1.0;
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ExperimentConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            cfg.set(k.trim(), v.trim()).map_err(|e| match e {
                ConfigError::UnknownKey { key, .. } => ConfigError::UnknownKey { line: i + 1, key },
                other => other,
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Invalid {
            key: "config".into(),
            reason: format!("{}: {e}", path.display()),
        })?;
        ExperimentConfig::parse(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |key: &str, reason: &str| Err(ConfigError::Invalid { key: key.into(), reason: reason.into() });
        if self.cache_depth == 0 {
            return bad("cache_depth", "must be positive");
        }
        if self.base_point.len() != 6 {
            return bad("base_point", "needs six coordinates");
        }
        if !matches!(self.pipeline_set.as_str(), "cantor" | "halton") {
            return bad("pipeline_set", "expected cantor or halton");
        }
        for (key, v) in [("contraction_alphas", &self.contraction_alphas), ("recurrence_eps", &self.recurrence_eps), ("density_t", &self.density_t)] {
            if v.is_empty() {
                return bad(key, "empty list");
            }
        }
        if self.regularize_fixtures.len() != 3 {
            return bad("regularize_fixtures", "needs three values");
        }
        if self.window_points < 2 || self.bumps == 0 {
            return bad("window_points", "need at least two window points and one bump");
        }
        Ok(())
    }

    pub fn out_dir(&self) -> PathBuf {
        PathBuf::from(&self.out)
    }

    /// `HOROLAB_CACHE_DIR`, else `cache_dir`, else `<out>/cache`.
    pub fn cache_dir(&self) -> PathBuf {
        let default = if self.cache_dir.is_empty() { self.out_dir().join("cache") } else { PathBuf::from(&self.cache_dir) };
        horolab_lattice::cache_dir(&default)
    }

    /// Small sizes for smoke runs and determinism checks.
    pub fn quick() -> Self {
        ExperimentConfig {
            cache_depth: 4,
            kernel_checks: 200,
            bch_pairs: 200,
            calibration_samples: 16,
            contraction_samples: 20,
            grid_side: 6,
            segment_points: 512,
            cantor_levels: 3,
            projection_levels: 3,
            projection_b0: 1.0 / 512.0,
            projection_directions: 32,
            pipeline_points: 512,
            pipeline_set: "halton".into(),
            pipeline_alpha: 0.9,
            membership_fixture: 1e6,
            inequality_samples: 400,
            sheets: 4,
            recurrence_samples: 256,
            density_t: vec![10.0, 100.0],
            density_samples: 200,
            density_tests: 3,
            equidist_points: 512,
            bumps: 2,
            window_points: 2,
            rho_samples: 4,
            dirac_samples: 64,
            haar_samples: 256,
            periodic_samples: 50,
            ..ExperimentConfig::default()
        }
    }
}
