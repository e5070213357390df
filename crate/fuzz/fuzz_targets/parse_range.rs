#![no_main]

use libfuzzer_sys::fuzz_target;

use lattice_casimir_cli::range::{parse_range, MAX_POINTS};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(values) = parse_range(text) {
            assert!(!values.is_empty() && values.len() <= MAX_POINTS.max(text.len()));
            assert!(values.iter().all(|v| v.is_finite()));
        }
    }
});
