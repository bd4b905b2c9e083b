#![no_main]

use libfuzzer_sys::fuzz_target;
use spinal_core::report::{read_sweep_csv, write_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(rows) = read_sweep_csv(data) else { return };
    // Whatever parses must write back and parse to the same rows.
    let mut out = Vec::new();
    write_csv(&rows, &mut out).expect("rows serialize");
    let again = read_sweep_csv(out.as_slice()).expect("written CSV parses");
    assert_eq!(rows.len(), again.len());
    for (a, b) in rows.iter().zip(&again) {
        assert_eq!(a.trials, b.trials);
        assert_eq!(a.errors, b.errors);
        assert!(a.bler.to_bits() == b.bler.to_bits() || (a.bler.is_nan() && b.bler.is_nan()));
    }
});
