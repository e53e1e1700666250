#![no_main]
use horolab_cli::ExperimentConfig;
use libfuzzer_sys::fuzz_target;

fn parse(s: &str) -> Result<ExperimentConfig, horolab_cli::ConfigError> {
    ExperimentConfig::parse(s)
}

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse(s);
    }
});
