#![no_main]

use libfuzzer_sys::fuzz_target;
use spinal_core::config::{parse_gamma_grid, MAX_GRID_POINTS};
use spinal_core::montecarlo::validate_grid;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(grid) = parse_gamma_grid(text) {
        assert!(!grid.is_empty() && grid.len() <= MAX_GRID_POINTS);
        assert!(grid.iter().all(|g| !g.is_nan()));
        let _ = validate_grid(&grid);
    }
});
