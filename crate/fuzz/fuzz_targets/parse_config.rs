#![no_main]

use libfuzzer_sys::fuzz_target;

use lattice_casimir_cli::config::parse_config;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(map) = parse_config(text) {
            let again: String = map.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
            assert_eq!(parse_config(&again).unwrap(), map);
        }
    }
});
