#![no_main]

use libfuzzer_sys::fuzz_target;
use spinal_core::config::RunConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cfg) = RunConfig::from_json(text) else { return };
    // Every accessor must either validate or return an error, never panic.
    let _ = cfg.code_params();
    let _ = cfg.channels();
    let _ = cfg.grid();
    let _ = cfg.stop_rule();
    let _ = cfg.precision();
    if cfg.quadrature_n.iter().all(|&n| n <= 4096) {
        let _ = cfg.schemes();
    }
    // A loaded config serializes back to an equivalent config.
    let echoed = serde_json::to_string(&cfg).expect("config serializes");
    let again = RunConfig::from_json(&echoed).expect("echoed config parses");
    assert_eq!(serde_json::to_string(&again).unwrap(), echoed);
});
