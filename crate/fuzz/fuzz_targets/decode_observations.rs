#![no_main]

//! Arbitrary observation grids (including NaN, infinities and huge values)
//! fed to the exhaustive decoder for a small code.

use libfuzzer_sys::fuzz_target;
use num_complex::Complex64;
use spinal_core::codec::{CodeParams, Grid, HashId, MlDecoder, Observation};

fuzz_target!(|data: &[u8]| {
    let Some((&header, body)) = data.split_first() else {
        return;
    };
    let k = 1 + u32::from(header & 0x3);
    let segments = 1 + usize::from((header >> 2) & 0x3);
    let passes = 1 + usize::from((header >> 4) & 0x1);
    let hash = if header & 0x20 == 0 {
        HashId::SplitMix64
    } else {
        HashId::OneAtATime
    };
    let v = if hash == HashId::OneAtATime { 32 } else { 64 };
    let Ok(params) = CodeParams::with_all(segments * k as usize, k, v, 4, passes, 2.0, hash) else {
        return;
    };
    let Ok(decoder) = MlDecoder::new(params) else { return };

    let values: Vec<f64> = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let cells = segments * passes;
    let obs: Vec<Observation> = (0..cells)
        .map(|i| {
            let at = |j: usize| values.get(4 * i + j).copied().unwrap_or(0.0);
            Observation {
                y: Complex64::new(at(0), at(1)),
                h: Complex64::new(at(2), at(3)),
            }
        })
        .collect();
    let rows: Vec<Vec<Observation>> = obs.chunks(passes).map(<[_]>::to_vec).collect();
    let Ok(grid) = Grid::from_rows(rows) else { return };
    if let Ok(decoded) = decoder.decode(&grid) {
        assert_eq!(decoded.message.len(), params.n());
        assert_eq!(decoded.segment_costs.len(), segments);
        assert!(decoded.cost >= 0.0);
    }
});
