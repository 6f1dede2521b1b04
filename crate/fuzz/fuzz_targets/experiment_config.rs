#![no_main]

use libfuzzer_sys::fuzz_target;
use ncft_cli::{ExperimentConfig, EXPERIMENTS};

// First byte picks the experiment, the rest is config-file text.
fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let experiment = EXPERIMENTS[usize::from(pick) % EXPERIMENTS.len()];
    if let Ok(cfg) = ExperimentConfig::parse(experiment, text) {
        let _ = cfg.header();
    }
});
